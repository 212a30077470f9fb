#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coinsim/document.hpp"

namespace coinsim {

struct MonteCarloConfig {
  double p = 0.5;
  std::uint64_t n = 1'000'000;
  std::uint64_t seed = 42;
  std::uint64_t step_cap = 0;  // 0: the default of the machine kind
  std::optional<double> target;
};

/// Trial i draws its input from the counter-based stream (seed, i), so the
/// report depends on the configuration only. Trials that hit the step cap
/// (pushdown machines) count as did_not_halt and are left out of n_trials.
struct MonteCarloReport {
  std::string kind;
  double p = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t step_cap = 0;
  std::uint64_t attempted = 0;
  std::uint64_t n_trials = 0;  // trials that produced an output
  std::uint64_t did_not_halt = 0;
  std::uint64_t successes = 0;  // outputs equal to 1
  std::vector<std::uint64_t> label_counts;
  std::uint64_t total_bits = 0;
  double estimate = 0.0;        // successes / n_trials
  double standard_error = 0.0;  // sqrt(estimate (1 - estimate) / n_trials)
  double mean_bits_consumed = 0.0;
  std::optional<double> target;
  std::optional<double> z_score;  // (estimate - target) / sqrt(target (1 - target) / n_trials)
};

/// Trials are spread over OpenMP threads; counts are reduced exactly, so
/// the result equals simulate_serial bit for bit.
MonteCarloReport simulate(const MachineDocument& doc, const MonteCarloConfig& config);
/// Single-threaded reference.
MonteCarloReport simulate_serial(const MachineDocument& doc, const MonteCarloConfig& config);

/// Sorted-key JSON with a trailing newline.
std::string report_json(const MonteCarloReport& report);
std::string report_text(const MonteCarloReport& report);

}  // namespace coinsim
