#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace stablepk::validation {

enum class Suite { quick, full };

Suite parse_suite(const std::string& s);

struct SuiteConfig {
  Suite suite = Suite::full;
  std::uint64_t seed = 20240611;
  std::size_t mc_samples = 1000000;
  std::size_t ks_samples = 100000;
  std::size_t sampler_draws = 100000;
};

// Sample counts of the named suite; full uses the counts the criteria state.
SuiteConfig suite_config(Suite suite, std::uint64_t seed);

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  // Largest deviation / tolerance over the checks of this criterion.
  double worst_ratio = 0.0;
  std::string worst_case;
  int checks = 0;
  double seconds = 0.0;
  std::string note;
};

// Criteria 1-11 run in process. Criterion 12 here checks in-process byte
// identity of serialized tables; the acceptance binary adds the CLI run.
CriterionResult run_criterion(int id, const SuiteConfig& cfg);
std::vector<CriterionResult> run_acceptance(const SuiteConfig& cfg,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

std::string format_line(const CriterionResult& r);

}  // namespace stablepk::validation
