#include "rrshift/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

namespace rrshift {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (const auto& s : v) out += (out.empty() ? "" : "; ") + s;
  return out;
}

// Reads typed values while collecting every problem instead of stopping at the first.
class Reader {
 public:
  explicit Reader(std::vector<std::string>& problems) : problems_(problems) {}

  const json* find(const json& obj, const std::string& key, const std::string& path, bool required) {
    if (!obj.is_object() || !obj.contains(key)) {
      if (required) problems_.push_back("missing required key '" + path + key + "'");
      return nullptr;
    }
    return &obj.at(key);
  }

  template <class T>
  void number(const json& obj, const std::string& key, const std::string& path, bool required, T& out) {
    const json* v = find(obj, key, path, required);
    if (!v) return;
    if (!v->is_number()) {
      problems_.push_back("key '" + path + key + "' must be a number");
      return;
    }
    out = v->get<T>();
  }

  template <int N>
  void vector(const json& obj, const std::string& key, const std::string& path, bool required,
              Eigen::Matrix<double, N, 1>& out) {
    const json* v = find(obj, key, path, required);
    if (!v) return;
    if (!v->is_array() || v->size() != N) {
      problems_.push_back("key '" + path + key + "' must be an array of " + std::to_string(N) + " numbers");
      return;
    }
    for (int i = 0; i < N; ++i) {
      if (!(*v)[i].is_number()) {
        problems_.push_back("key '" + path + key + "' must be an array of " + std::to_string(N) + " numbers");
        return;
      }
      out[i] = (*v)[i].get<double>();
    }
  }

  void string(const json& obj, const std::string& key, const std::string& path, bool required, std::string& out) {
    const json* v = find(obj, key, path, required);
    if (!v) return;
    if (!v->is_string()) {
      problems_.push_back("key '" + path + key + "' must be a string");
      return;
    }
    out = v->get<std::string>();
  }

  void fail(std::string msg) { problems_.push_back(std::move(msg)); }

  void known(const json& obj, std::initializer_list<const char*> keys, const std::string& path) {
    if (!obj.is_object()) {
      problems_.push_back("key '" + (path.empty() ? std::string("<root>") : path.substr(0, path.size() - 1)) +
                          "' must be an object");
      return;
    }
    for (const auto& [k, v] : obj.items()) {
      if (std::find(keys.begin(), keys.end(), k) == keys.end()) problems_.push_back("unknown key '" + path + k + "'");
    }
  }

 private:
  std::vector<std::string>& problems_;
};

ordered_json vec_json(const Vec3& v) { return ordered_json::array({v[0], v[1], v[2]}); }

ordered_json num_or_null(double x) { return std::isfinite(x) ? ordered_json(x) : ordered_json(nullptr); }

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> p)
    : std::runtime_error("invalid scenario: " + join(p)), problems(std::move(p)) {}

double Scenario::alpha_c() const { return charge * charge / (4.0 * std::numbers::pi); }

ordered_json Scenario::to_json() const {
  ordered_json j;
  j["name"] = name;
  j["units"] = "c=1";
  j["mass"] = mass;
  j["charge"] = charge;
  j["p_final"] = vec_json(p_final);
  j["tol"] = tol;
  j["profile"] = {{"axis", to_string(profile.axis)},
                  {"v_past", {profile.v_past[0], profile.v_past[1], profile.v_past[2], profile.v_past[3]}},
                  {"x1", profile.x1},
                  {"x2", profile.x2},
                  {"shape", to_string(profile.shape)}};
  j["residual_threshold"] = shift.threshold;
  j["quadrature"] = {{"angular", {shift.angular_polar, shift.angular_azimuth}},
                     {"time_rel_tol", shift.time_rel_tol},
                     {"green_mode", shift.green_mode == GreenMode::swap ? "swap" : "fresh"},
                     {"fresh", {shift.fresh_order, shift.fresh_panels}}};
  j["spectral"] = {{"n_polar", spectral.n_polar}, {"n_azimuth", spectral.n_azimuth}, {"tail_tol", spectral.tail_tol}};
  j["window"] = {{"taper_fraction", window.taper_fraction}, {"pad_fraction", window.pad_fraction}};
  j["hbar"] = hbar;
  j["seed"] = seed;
  return j;
}

Scenario parse_scenario(const json& j) {
  std::vector<std::string> problems;
  Reader rd(problems);
  Scenario s;
  if (!j.is_object()) throw ScenarioError({"scenario must be a JSON object"});

  rd.known(j,
           {"name", "units", "mass", "charge", "p_final", "tol", "profile", "residual_threshold", "quadrature",
            "spectral", "window", "hbar", "seed", "outputs"},
           "");
  rd.string(j, "name", "", false, s.name);
  rd.number(j, "mass", "", true, s.mass);
  rd.number(j, "charge", "", true, s.charge);
  rd.vector<3>(j, "p_final", "", true, s.p_final);
  rd.number(j, "tol", "", true, s.tol);

  if (const json* prof = rd.find(j, "profile", "", true)) {
    rd.known(*prof, {"axis", "v_past", "x1", "x2", "shape"}, "profile.");
    std::string axis, shape = "smoothstep7";
    rd.string(*prof, "axis", "profile.", true, axis);
    rd.vector<4>(*prof, "v_past", "profile.", true, s.profile.v_past);
    rd.number(*prof, "x1", "profile.", true, s.profile.x1);
    rd.number(*prof, "x2", "profile.", true, s.profile.x2);
    rd.string(*prof, "shape", "profile.", false, shape);
    if (!axis.empty()) {
      if (auto a = parse_axis(axis)) {
        s.profile.axis = *a;
      } else {
        rd.fail("key 'profile.axis' must be one of time, x, y, z");
      }
    }
    if (auto sh = parse_shape(shape)) {
      s.profile.shape = *sh;
    } else {
      rd.fail("key 'profile.shape' must be one of smoothstep7, raised_cosine, smoothstep3");
    }
  }

  rd.number(j, "residual_threshold", "", false, s.shift.threshold);
  if (const json* q = rd.find(j, "quadrature", "", false)) {
    rd.known(*q, {"angular", "time_rel_tol", "green_mode", "fresh"}, "quadrature.");
    Eigen::Vector2d ang(s.shift.angular_polar, s.shift.angular_azimuth);
    rd.vector<2>(*q, "angular", "quadrature.", false, ang);
    s.shift.angular_polar = static_cast<int>(ang[0]);
    s.shift.angular_azimuth = static_cast<int>(ang[1]);
    rd.number(*q, "time_rel_tol", "quadrature.", false, s.shift.time_rel_tol);
    std::string mode;
    rd.string(*q, "green_mode", "quadrature.", false, mode);
    if (mode == "fresh") {
      s.shift.green_mode = GreenMode::fresh;
    } else if (!mode.empty() && mode != "swap") {
      rd.fail("key 'quadrature.green_mode' must be swap or fresh");
    }
    Eigen::Vector2d fresh(s.shift.fresh_order, s.shift.fresh_panels);
    rd.vector<2>(*q, "fresh", "quadrature.", false, fresh);
    s.shift.fresh_order = static_cast<int>(fresh[0]);
    s.shift.fresh_panels = static_cast<int>(fresh[1]);
  }
  if (const json* sp = rd.find(j, "spectral", "", false)) {
    rd.known(*sp, {"n_polar", "n_azimuth", "tail_tol"}, "spectral.");
    rd.number(*sp, "n_polar", "spectral.", false, s.spectral.n_polar);
    rd.number(*sp, "n_azimuth", "spectral.", false, s.spectral.n_azimuth);
    rd.number(*sp, "tail_tol", "spectral.", false, s.spectral.tail_tol);
  }
  if (const json* w = rd.find(j, "window", "", false)) {
    rd.known(*w, {"taper_fraction", "pad_fraction"}, "window.");
    rd.number(*w, "taper_fraction", "window.", false, s.window.taper_fraction);
    rd.number(*w, "pad_fraction", "window.", false, s.window.pad_fraction);
  }
  if (const json* h = rd.find(j, "hbar", "", false)) {
    if (!h->is_array()) {
      rd.fail("key 'hbar' must be an array of numbers");
    } else {
      s.hbar.clear();
      for (const auto& x : *h) {
        if (!x.is_number()) {
          rd.fail("key 'hbar' must be an array of numbers");
          break;
        }
        s.hbar.push_back(x.get<double>());
      }
    }
  }
  rd.number(j, "seed", "", false, s.seed);
  if (const json* o = rd.find(j, "outputs", "", false)) {
    rd.known(*o, {"report", "trajectory_csv", "force_csv", "spectrum_csv"}, "outputs.");
    rd.string(*o, "report", "outputs.", false, s.report_path);
    rd.string(*o, "trajectory_csv", "outputs.", false, s.trajectory_csv);
    rd.string(*o, "force_csv", "outputs.", false, s.force_csv);
    rd.string(*o, "spectrum_csv", "outputs.", false, s.spectrum_csv);
  }

  if (problems.empty()) {
    if (!(s.mass > 0.0)) rd.fail("key 'mass' must be positive");
    if (!(s.tol > 0.0)) rd.fail("key 'tol' must be positive");
    if (!(s.shift.threshold >= 10.0 * s.tol)) rd.fail("key 'residual_threshold' must be at least 10 x tol");
    const ValidationReport vr = validate_profile(s.profile);
    for (const auto& m : vr.messages) rd.fail("profile: " + m);
  }
  if (!problems.empty()) throw ScenarioError(problems);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError({"cannot read scenario file '" + path + "'"});
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ScenarioError({std::string("malformed JSON: ") + e.what()});
  }
  return parse_scenario(j);
}

Trajectory build_trajectory(const Scenario& s) {
  Trajectory traj = integrate_trajectory(s.profile, s.p_final, s.mass, s.tol);
  for (int i = 0; i <= 400; ++i) {
    const double t = traj.t_min() * (1.0 - i / 400.0);
    if (traj.kinematics(t).v.norm() > 0.95) throw DomainError("speed exceeds 0.95 along the trajectory");
  }
  return traj;
}

ordered_json report_to_json(const Scenario& s, const ShiftReport& r, bool timings) {
  ordered_json j;
  j["scenario"] = s.to_json();
  j["alpha_c"] = s.alpha_c();
  ordered_json shifts = ordered_json::object();
  for (Route route : all_routes) {
    auto it = r.shift.find(route);
    shifts[to_string(route)] = it == r.shift.end() ? ordered_json(nullptr) : vec_json(it->second);
  }
  j["shifts"] = shifts;
  ordered_json errs = ordered_json::object();
  for (const auto& [route, msg] : r.errors) errs[to_string(route)] = msg;
  j["errors"] = errs;
  ordered_json order = ordered_json::array();
  for (Route route : all_routes) order.push_back(to_string(route));
  ordered_json mat = ordered_json::array();
  for (const auto& row : r.residual) {
    ordered_json jr = ordered_json::array();
    for (double x : row) jr.push_back(num_or_null(x));
    mat.push_back(jr);
  }
  j["residuals"] = {{"order", order}, {"matrix", mat}, {"length_scale", r.length_scale}};
  j["max_residual"] = num_or_null(r.max_residual);
  j["threshold"] = r.threshold;
  j["pass"] = r.pass;
  if (timings) {
    ordered_json t = ordered_json::object();
    for (const auto& [route, sec] : r.seconds) t[to_string(route)] = sec;
    j["timings"] = t;
  }
  return j;
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace rrshift
