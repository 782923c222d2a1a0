#include "extremescore/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "extremescore/asymptotics.hpp"
#include "extremescore/common.hpp"
#include "extremescore/engine.hpp"
#include "extremescore/statistics.hpp"

namespace extremescore {

int64_t KRule::resolve(int64_t n) const {
  if (use_schedule) return std::min(k_schedule(n, damping), n);
  return fixed_k; // deliberately unclamped; a fixed k beyond n is an error
}

void ExperimentConfig::validate() const {
  if (dist.support().size() < 2) {
    throw Error(ErrorCode::ConfigError, "config has no distribution assigned");
  }
  if (replications < 1) throw Error(ErrorCode::ConfigError, "replications must be >= 1");
  if (n_grid.empty()) throw Error(ErrorCode::ConfigError, "n grid is empty");
  for (size_t i = 0; i < n_grid.size(); ++i) {
    if (n_grid[i] < 2) throw Error(ErrorCode::ConfigError, "all n must be >= 2");
    if (i > 0 && n_grid[i] <= n_grid[i - 1]) {
      throw Error(ErrorCode::ConfigError, "n grid must be strictly increasing");
    }
  }
  if (!k_rule.use_schedule && k_rule.fixed_k < 1) {
    throw Error(ErrorCode::ConfigError, "fixed k must be >= 1");
  }
  if (workers < 1) throw Error(ErrorCode::ConfigError, "workers must be >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw Error(ErrorCode::ConfigError, "delta must be in (0,1)");
}

void ReplicationTotals::merge(const ReplicationTotals& other) {
  successes_top_k += other.successes_top_k;
  successes_gate += other.successes_gate;
  count_z_lt_k += other.count_z_lt_k;
  count_w_gt_0 += other.count_w_gt_0;
  z_sum += other.z_sum;
  z2_sum += other.z2_sum;
  w_sum += other.w_sum;
  w2_sum += other.w2_sum;
}

namespace {

ReplicationTotals run_block(const ScoreDistribution& d, int64_t n, int64_t k, bool has_threshold,
                            int64_t t_scaled, int64_t first, int64_t last, uint64_t seed) {
  ReplicationTotals totals;
  ScoreVector v;
  std::vector<int64_t> scratch;
  for (int64_t rep = first; rep < last; ++rep) {
    RandomStream stream(seed, static_cast<uint64_t>(rep));
    simulate_scores(d, n, stream, v);
    if (top_k_distinct(v, k, scratch)) ++totals.successes_top_k;
    if (has_threshold) {
      const int64_t z = count_exceed(v, t_scaled);
      const int64_t w = count_tied_pairs_above(v, t_scaled);
      totals.z_sum += z;
      totals.z2_sum += z * z;
      totals.w_sum += w;
      totals.w2_sum += static_cast<unsigned __int128>(w) * static_cast<unsigned __int128>(w);
      if (z < k) ++totals.count_z_lt_k;
      if (w > 0) ++totals.count_w_gt_0;
      if (z >= k && w == 0) ++totals.successes_gate;
    }
  }
  return totals;
}

double sample_variance(double sum, double sum_sq, int64_t count) {
  if (count < 2) return 0.0;
  const double c = static_cast<double>(count);
  return std::max(0.0, (sum_sq - sum * sum / c) / (c - 1.0));
}

EstimateResult run_point(const ExperimentConfig& cfg, int64_t n, int64_t k,
                         std::optional<double> explicit_threshold) {
  const auto start = std::chrono::steady_clock::now();

  bool has_threshold = false;
  int64_t t_scaled = 0;
  if (explicit_threshold) {
    has_threshold = true;
    t_scaled = scale_threshold(*explicit_threshold, cfg.dist.denominator());
  } else if (cfg.threshold_mode == ThresholdMode::Solved) {
    has_threshold = true;
    t_scaled = thresholds(n, k, cfg.delta, cfg.dist).t_scaled;
  } else if (cfg.threshold_mode == ThresholdMode::Explicit) {
    has_threshold = true;
    t_scaled = scale_threshold(cfg.explicit_threshold, cfg.dist.denominator());
  }

  const ReplicationTotals totals = run_replications(cfg.dist, n, k, has_threshold, t_scaled,
                                                    cfg.replications, cfg.base_seed, cfg.workers);

  EstimateResult r;
  r.n = n;
  r.k = k;
  r.delta = cfg.delta;
  r.has_threshold = has_threshold;
  r.t_scaled = t_scaled;
  r.replications = cfg.replications;
  r.successes = totals.successes_top_k;
  const double R = static_cast<double>(cfg.replications);
  r.phat = static_cast<double>(r.successes) / R;
  std::tie(r.ci_low, r.ci_high) = wilson_interval(r.successes, cfg.replications);
  r.successes_gate = totals.successes_gate;
  if (has_threshold) {
    r.z_mean = static_cast<double>(totals.z_sum) / R;
    r.z_var = sample_variance(static_cast<double>(totals.z_sum),
                              static_cast<double>(totals.z2_sum), cfg.replications);
    r.w_mean = static_cast<double>(totals.w_sum) / R;
    r.w_var = sample_variance(static_cast<double>(totals.w_sum),
                              static_cast<double>(totals.w2_sum), cfg.replications);
    r.p_z_lt_k = static_cast<double>(totals.count_z_lt_k) / R;
    r.p_w_gt_0 = static_cast<double>(totals.count_w_gt_0) / R;
  }
  r.seed = cfg.base_seed;
  r.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return r;
}

} // namespace

ReplicationTotals run_replications(const ScoreDistribution& d, int64_t n, int64_t k,
                                   bool has_threshold, int64_t t_scaled, int64_t replications,
                                   uint64_t seed, int workers) {
  if (replications < 1) throw Error(ErrorCode::EmptyExperiment, "need at least one replication");
  const int w = static_cast<int>(std::min<int64_t>(std::max(workers, 1), replications));
  if (w == 1) {
    return run_block(d, n, k, has_threshold, t_scaled, 0, replications, seed);
  }

  std::vector<ReplicationTotals> partial(static_cast<size_t>(w));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<size_t>(w));
  const int64_t chunk = (replications + w - 1) / w;
  for (int i = 0; i < w; ++i) {
    const int64_t first = std::min<int64_t>(static_cast<int64_t>(i) * chunk, replications);
    const int64_t last = std::min<int64_t>(first + chunk, replications);
    threads.emplace_back([&, i, first, last] {
      partial[static_cast<size_t>(i)] =
          run_block(d, n, k, has_threshold, t_scaled, first, last, seed);
    });
  }
  for (auto& t : threads) t.join();

  ReplicationTotals totals;
  for (const auto& p : partial) totals.merge(p);
  return totals;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, "bad JSON in " + path + ": " + e.what());
  }
  if (!j.contains("dist") || !j.contains("n_grid")) {
    throw Error(ErrorCode::ConfigError, "config needs 'dist' and 'n_grid'");
  }

  ExperimentConfig cfg;
  cfg.dist = parse_distribution_spec(j["dist"].get<std::string>());
  cfg.n_grid = j["n_grid"].get<std::vector<int64_t>>();
  if (j.contains("k")) {
    if (j["k"].is_string()) {
      if (j["k"] != "schedule") throw Error(ErrorCode::ConfigError, "k must be int or 'schedule'");
      cfg.k_rule.use_schedule = true;
    } else {
      cfg.k_rule = KRule{false, j["k"].get<int64_t>(), 1.0};
    }
  }
  if (j.contains("damping")) cfg.k_rule.damping = j["damping"].get<double>();
  if (j.contains("delta")) cfg.delta = j["delta"].get<double>();
  if (j.contains("replications")) cfg.replications = j["replications"].get<int64_t>();
  if (j.contains("seed")) cfg.base_seed = j["seed"].get<uint64_t>();
  if (j.contains("workers")) cfg.workers = j["workers"].get<int>();
  if (j.contains("threshold")) {
    if (j["threshold"].is_number()) {
      cfg.threshold_mode = ThresholdMode::Explicit;
      cfg.explicit_threshold = j["threshold"].get<double>();
    } else if (j["threshold"] == "solved") {
      cfg.threshold_mode = ThresholdMode::Solved;
    } else if (j["threshold"] != "none") {
      throw Error(ErrorCode::ConfigError, "threshold must be 'none', 'solved', or a number");
    }
  }
  cfg.validate();
  return cfg;
}

std::pair<double, double> wilson_interval(int64_t successes, int64_t total, double level) {
  if (total < 1 || successes < 0 || successes > total) {
    throw Error(ErrorCode::InvalidCounts,
                "wilson_interval: successes=" + std::to_string(successes) +
                    " total=" + std::to_string(total));
  }
  if (!(level > 0.0 && level < 1.0)) {
    throw Error(ErrorCode::InvalidCounts, "confidence level must be in (0,1)");
  }
  const double z = normal_quantile(0.5 * (1.0 + level));
  const double nn = static_cast<double>(total);
  const double phat = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double center = (phat + z2 / (2.0 * nn)) / denom;
  const double half =
      z / denom * std::sqrt(phat * (1.0 - phat) / nn + z2 / (4.0 * nn * nn));
  double low = std::max(0.0, center - half);
  double high = std::min(1.0, center + half);
  if (successes == 0) low = 0.0;
  if (successes == total) high = 1.0;
  return {low, high};
}

EstimateResult estimate_top_k_distinct(const ExperimentConfig& cfg, int64_t n, int64_t k) {
  cfg.validate();
  if (k < 1 || k > n) {
    throw Error(ErrorCode::KOutOfRange, "k=" + std::to_string(k) + " outside [1, n]");
  }
  return run_point(cfg, n, k, std::nullopt);
}

EstimateResult estimate_moments(const ExperimentConfig& cfg, int64_t n,
                                std::optional<double> threshold) {
  cfg.validate();
  const int64_t k = cfg.k_rule.resolve(n);
  if (threshold) return run_point(cfg, n, k, threshold);
  ExperimentConfig solved = cfg;
  solved.threshold_mode = ThresholdMode::Solved;
  return run_point(solved, n, k, std::nullopt);
}

std::vector<EstimateResult> convergence_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<EstimateResult> rows;
  rows.reserve(cfg.n_grid.size());
  for (int64_t n : cfg.n_grid) {
    const int64_t k = cfg.k_rule.resolve(n);
    rows.push_back(run_point(cfg, n, k, std::nullopt));
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<EstimateResult>& rows,
                     const std::string& repro_line, bool with_timing) {
  os << "# " << repro_line << "\n";
  os << "n,k,delta,t_scaled,R,successes,phat,ci_low,ci_high,z_mean,z_var,w_mean,"
        "p_z_lt_k,p_w_gt_0,seed,elapsed_ms\n";
  auto fmt = [](double v) {
    std::ostringstream ss;
    ss.precision(17);
    ss << v;
    return ss.str();
  };
  for (const auto& r : rows) {
    os << r.n << ',' << r.k << ',' << fmt(r.delta) << ',';
    if (r.has_threshold) os << r.t_scaled;
    os << ',' << r.replications << ',' << r.successes << ',' << fmt(r.phat) << ','
       << fmt(r.ci_low) << ',' << fmt(r.ci_high) << ',';
    if (r.has_threshold) {
      os << fmt(r.z_mean) << ',' << fmt(r.z_var) << ',' << fmt(r.w_mean) << ','
         << fmt(r.p_z_lt_k) << ',' << fmt(r.p_w_gt_0);
    } else {
      os << ",,,,";
    }
    os << ',' << r.seed << ',' << (with_timing ? fmt(r.elapsed_ms) : "0") << "\n";
  }
}

} // namespace extremescore
