#pragma once

#include "rrshift/scenario.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rrshift {

enum class Suite { fast, full };

std::optional<Suite> parse_suite(const std::string& name);

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  bool skipped = false;
  double value = 0.0;      // worst measured figure of merit
  double tolerance = 0.0;  // pinned bound it is compared against
  std::string detail;
  double seconds = 0.0;
};

/// One line: "PASS|FAIL|SKIP  <id>  <title>  <detail>  (<seconds> s)".
std::string format_result(const CriterionResult& r);

/// Reference scenarios a-d (collinear, 60 degree, z-axis oblique, weak field).
std::vector<Scenario> reference_scenarios();

/// Runs every criterion of the suite in order. `on_result` sees each result
/// as soon as it is available.
std::vector<CriterionResult> run_acceptance(Suite suite,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace rrshift
