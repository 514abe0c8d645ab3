#pragma once

#include "rrshift/semiclassical.hpp"
#include "rrshift/shift.hpp"

#include <json.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rrshift {

/// Everything needed to run one configuration. Units: c = 1, all numbers in
/// the user's mass unit; nothing is rescaled on input.
struct Scenario {
  std::string name = "scenario";
  PotentialProfile profile;
  double mass = 1.0;
  double charge = 0.0;
  Vec3 p_final = Vec3::Zero();
  double tol = 1e-12;
  ShiftOptions shift;  // shift.threshold is the residual threshold
  SpectralSpec spectral;
  WindowPolicy window;
  std::vector<double> hbar{0.1, 0.05, 0.025};
  std::uint64_t seed = 1;
  std::string report_path, trajectory_csv, force_csv, spectrum_csv;

  double alpha_c() const;
  nlohmann::ordered_json to_json() const;
};

/// Schema violations; `problems` names every offending key.
struct ScenarioError : std::runtime_error {
  explicit ScenarioError(std::vector<std::string> problems);
  std::vector<std::string> problems;
};

Scenario parse_scenario(const nlohmann::json& j);
Scenario load_scenario(const std::string& path);

/// Builds the reference trajectory and enforces the |v| <= 0.95 cap.
Trajectory build_trajectory(const Scenario& s);

/// Report JSON: scenario echo, one 3-vector (or null) per route, residual
/// matrix (null for missing entries), pass flag, and wall times if asked.
nlohmann::ordered_json report_to_json(const Scenario& s, const ShiftReport& r, bool timings);

/// 17-significant-digit CSV field.
std::string csv_number(double x);

}  // namespace rrshift
