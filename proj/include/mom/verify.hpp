#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "mom/mom_core.hpp"

namespace mom::verify {

struct Options {
  std::uint64_t seed = 20240611;
  // Multiplies every suite's default case count (1.0 = the full protocol).
  double scale = 1.0;
  // Negative control: the oddness suite runs with even K and a lower-middle
  // "median", which is not an odd function.
  bool inject_even_k_fault = false;
};

struct SuiteResult {
  std::string name;
  bool passed = true;
  long cases = 0;
  long failures = 0;
  double worst = 0.0;  // largest violation seen (suite-specific units)
  std::string counterexample;
};

struct Suite {
  std::string name;
  std::string description;
  long default_cases;
  std::function<SuiteResult(long cases, const Options&)> run;
};

const std::vector<Suite>& suites();

/// Runs the selected suites (all of them when `selector` is empty).
std::vector<SuiteResult> run(const std::vector<std::string>& selector, const Options& opts);

std::string format(const std::vector<SuiteResult>& results);

}  // namespace mom::verify
