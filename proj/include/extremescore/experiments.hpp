#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "extremescore/distribution.hpp"

namespace extremescore {

struct KRule {
  bool use_schedule = true; // (n/ln n)^{1/4}/damping schedule vs fixed k
  int64_t fixed_k = 2;
  double damping = 1.0;

  int64_t resolve(int64_t n) const;
};

enum class ThresholdMode { None, Solved, Explicit };

struct ExperimentConfig {
  ScoreDistribution dist;
  std::vector<int64_t> n_grid;
  KRule k_rule;
  double delta = 0.1;
  int64_t replications = 1;
  uint64_t base_seed = 0;
  ThresholdMode threshold_mode = ThresholdMode::None;
  double explicit_threshold = 0.0; // unscaled, used when mode == Explicit
  int workers = 1;

  void validate() const; // throws ConfigError
};

// Integer aggregates over a block of replications. All counters are exact,
// so merging across any worker split reproduces the single-worker result
// bit for bit.
struct ReplicationTotals {
  int64_t successes_top_k = 0;
  int64_t successes_gate = 0; // Z >= k and no ties above t
  int64_t count_z_lt_k = 0;
  int64_t count_w_gt_0 = 0;
  int64_t z_sum = 0;
  int64_t z2_sum = 0;
  int64_t w_sum = 0;
  unsigned __int128 w2_sum = 0;

  void merge(const ReplicationTotals& other);
};

// Replication r uses RandomStream(seed, r); the worker split is invisible in
// the results.
ReplicationTotals run_replications(const ScoreDistribution& d, int64_t n, int64_t k,
                                   bool has_threshold, int64_t t_scaled, int64_t replications,
                                   uint64_t seed, int workers);

struct EstimateResult {
  int64_t n = 0;
  int64_t k = 0;
  double delta = 0.0;
  bool has_threshold = false;
  int64_t t_scaled = 0;
  int64_t replications = 0;
  int64_t successes = 0; // top-k distinct
  double phat = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  int64_t successes_gate = 0;
  double z_mean = 0.0, z_var = 0.0;
  double w_mean = 0.0, w_var = 0.0;
  double p_z_lt_k = 0.0;
  double p_w_gt_0 = 0.0;
  uint64_t seed = 0;
  double elapsed_ms = 0.0;
};

// JSON mirror of ExperimentConfig:
//   {"dist": "m1" | "draw:<p>" | "<file>", "n_grid": [...],
//    "k": <int> | "schedule", "damping": 1.0, "delta": 0.1,
//    "replications": 10000, "seed": 0,
//    "threshold": "none" | "solved" | <number>, "workers": 1}
// Only "dist" and "n_grid" are required.
ExperimentConfig load_experiment_config(const std::string& path);

// Wilson score interval; exact 0/1 endpoints at the degenerate counts.
std::pair<double, double> wilson_interval(int64_t successes, int64_t total, double level = 0.95);

EstimateResult estimate_top_k_distinct(const ExperimentConfig& cfg, int64_t n, int64_t k);

// Moment-focused variant; threshold is the argument when given, otherwise
// solved from (n, k_rule, delta).
EstimateResult estimate_moments(const ExperimentConfig& cfg, int64_t n,
                                std::optional<double> threshold = std::nullopt);

// One EstimateResult per n in the grid, in grid order.
std::vector<EstimateResult> convergence_sweep(const ExperimentConfig& cfg);

// CSV with a single '#' metadata line; elapsed_ms is written as 0 unless
// with_timing, keeping equal-seed runs byte-identical.
void write_sweep_csv(std::ostream& os, const std::vector<EstimateResult>& rows,
                     const std::string& repro_line, bool with_timing = false);

} // namespace extremescore
