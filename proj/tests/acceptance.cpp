#include "rrshift/acceptance.hpp"

#include <iostream>

int main() {
  const auto results = rrshift::run_acceptance(
      rrshift::Suite::full, [](const rrshift::CriterionResult& r) { std::cout << rrshift::format_result(r) << std::endl; });
  const bool ok = rrshift::all_passed(results);
  std::cout << (ok ? "ALL PASS" : "SOME CRITERIA FAILED") << std::endl;
  return ok ? 0 : 1;
}
