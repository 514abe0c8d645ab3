#include "rrshift/scenario.hpp"

#include <doctest.h>

using namespace rrshift;
using nlohmann::json;

namespace {

json valid() {
  return json::parse(R"({
    "mass": 1.0, "charge": 0.3, "p_final": [0, 0, 0.5], "tol": 1e-12,
    "profile": {"axis": "time", "v_past": [0, 0, 0, -0.8], "x1": 2, "x2": 1}
  })");
}

std::vector<std::string> problems_of(const json& j) {
  try {
    parse_scenario(j);
  } catch (const ScenarioError& e) {
    return e.problems;
  }
  return {};
}

bool mentions(const std::vector<std::string>& ps, const std::string& key) {
  for (const auto& p : ps) {
    if (p.find(key) != std::string::npos) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("valid scenario with defaults") {
  const Scenario s = parse_scenario(valid());
  CHECK(s.mass == 1.0);
  CHECK(s.profile.shape == ShapeKind::smoothstep7);
  CHECK(s.shift.threshold == 1e-4);
  CHECK(s.alpha_c() == doctest::Approx(0.09 / (4 * 3.141592653589793)));
}

TEST_CASE("every offending key is listed") {
  json j = valid();
  j.erase("mass");
  j.erase("tol");
  j["profile"].erase("x2");
  j["charge"] = "big";
  j["spare"] = 1;
  const auto ps = problems_of(j);
  CHECK(ps.size() == 5);
  CHECK(mentions(ps, "'mass'"));
  CHECK(mentions(ps, "'tol'"));
  CHECK(mentions(ps, "'profile.x2'"));
  CHECK(mentions(ps, "'charge'"));
  CHECK(mentions(ps, "'spare'"));
}

TEST_CASE("semantic invariants") {
  json j = valid();
  j["residual_threshold"] = 5e-12;
  CHECK(mentions(problems_of(j), "residual_threshold"));
  j = valid();
  j["profile"]["shape"] = "smoothstep3";
  CHECK(mentions(problems_of(j), "C3"));
  j = valid();
  j["profile"]["axis"] = "w";
  CHECK(mentions(problems_of(j), "profile.axis"));
}

TEST_CASE("speed cap is enforced after the trajectory is built") {
  json j = valid();
  j["profile"]["v_past"] = {0, 0, 0, -3.0};
  CHECK_THROWS_AS(build_trajectory(parse_scenario(j)), DomainError);
  CHECK_NOTHROW(build_trajectory(parse_scenario(valid())));
}

TEST_CASE("report keeps every route key") {
  const Scenario s = parse_scenario(valid());
  const Trajectory tr = build_trajectory(s);
  const ShiftReport r = compare_routes(tr, s.alpha_c(), s.shift, {Route::direct, Route::green});
  const auto j = report_to_json(s, r, false);
  CHECK(j["shifts"]["quantum"].is_null());
  CHECK(j["shifts"]["direct"].size() == 3);
  CHECK(j["residuals"]["matrix"][0][2].is_null());
  CHECK_FALSE(j.contains("timings"));
  CHECK(report_to_json(s, r, true).contains("timings"));
  CHECK(j["pass"] == true);
}

TEST_CASE("csv numbers round trip") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(csv_number(x)) == x);
}
