#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "extremescore/asymptotics.hpp"
#include "extremescore/common.hpp"
#include "extremescore/distribution.hpp"
#include "extremescore/engine.hpp"
#include "extremescore/experiments.hpp"
#include "extremescore/oracle.hpp"
#include "extremescore/statistics.hpp"
#include "extremescore/tilting.hpp"

using json = nlohmann::ordered_json;

namespace es = extremescore;

namespace {

int default_workers() {
  if (const char* env = std::getenv("EXTREMESCORE_WORKERS")) {
    const int w = std::atoi(env);
    if (w >= 1) return w;
  }
  return 1;
}

std::string join_argv(int argc, char** argv) {
  std::ostringstream ss;
  for (int i = 0; i < argc; ++i) {
    if (i) ss << ' ';
    ss << argv[i];
  }
  return ss.str();
}

// Every artifact carries enough metadata to reproduce itself.
json make_meta(const std::string& command, uint64_t seed) {
  json meta;
  meta["version"] = es::kVersion;
  meta["command"] = command;
  meta["seed"] = seed;
  return meta;
}

class Output {
public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw es::Error(es::ErrorCode::ConfigError, "cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
  std::ofstream file_;
};

std::string fmt_double(double v) {
  std::ostringstream ss;
  ss.precision(17);
  ss << v;
  return ss.str();
}

json rationals_by_k(const std::vector<es::Rational>& values) {
  json out;
  for (size_t i = 0; i < values.size(); ++i) {
    out[std::to_string(i + 1)] = es::fraction_string(values[i]);
  }
  return out;
}

int exit_code_for(const es::Error& e) {
  switch (e.code()) {
    case es::ErrorCode::StateSpaceTooLarge:
    case es::ErrorCode::SupportTooLarge:
      return 3;
    case es::ErrorCode::Overflow:
    case es::ErrorCode::NumericFailure:
      return 1;
    default:
      return 2;
  }
}

} // namespace

int run_app(int argc, char** argv) {
  const std::string command_line = join_argv(argc, argv);

  CLI::App app{"Round-robin tournament score simulator and verifier"};
  app.require_subcommand(1);

  std::string dist_spec = "m1";
  std::string out_path;
  uint64_t seed = 0;
  int workers = default_workers();
  bool timing = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--dist", dist_spec, "distribution: m1, draw:<p>, or a JSON file path")
        ->capture_default_str();
    cmd->add_option("--out", out_path, "output file (default: stdout)");
  };

  // --- dist ---------------------------------------------------------------
  auto* dist_cmd = app.add_subcommand("dist", "validate a distribution and print a summary");
  add_common(dist_cmd);

  // --- threshold ----------------------------------------------------------
  auto* thr_cmd = app.add_subcommand("threshold", "solve the exceedance threshold for (n, k)");
  int64_t thr_n = 1000, thr_k = 1;
  double delta = 0.1;
  add_common(thr_cmd);
  thr_cmd->add_option("--n", thr_n, "player count")->required();
  thr_cmd->add_option("--k", thr_k, "target top set size")->required();
  thr_cmd->add_option("--delta", delta, "saddle-equation margin in (0,1)")->capture_default_str();

  // --- pmf ----------------------------------------------------------------
  auto* pmf_cmd = app.add_subcommand("pmf", "exact pmf of the m-fold score sum as CSV");
  int64_t pmf_m = 1;
  std::optional<double> pmf_theta;
  add_common(pmf_cmd);
  pmf_cmd->add_option("--m", pmf_m, "number of summands")->required();
  pmf_cmd->add_option("--theta", pmf_theta, "emit the exponentially tilted pmf instead");

  // --- bound --------------------------------------------------------------
  auto* bound_cmd = app.add_subcommand("bound", "pair-collision expectation bound table as CSV");
  std::vector<int64_t> bound_n;
  int64_t fixed_k = 0;
  bool use_schedule = false;
  double damping = 1.0;
  add_common(bound_cmd);
  bound_cmd->add_option("--n", bound_n, "player counts (repeatable)")->required();
  bound_cmd->add_option("--k", fixed_k, "fixed k");
  bound_cmd->add_flag("--k-schedule", use_schedule, "k from the (n/ln n)^(1/4) schedule");
  bound_cmd->add_option("--damping", damping, "schedule damping >= 1")->capture_default_str();
  bound_cmd->add_option("--delta", delta, "saddle-equation margin")->capture_default_str();

  // --- exact --------------------------------------------------------------
  auto* exact_cmd = app.add_subcommand("exact", "exact enumeration report as JSON");
  int64_t exact_n = 3;
  add_common(exact_cmd);
  exact_cmd->add_option("--n", exact_n, "player count")->required();

  // --- estimate -----------------------------------------------------------
  auto* est_cmd = app.add_subcommand("estimate", "Monte Carlo estimate at one (n, k)");
  int64_t est_n = 100, est_k = 0, reps = 10000;
  std::optional<double> explicit_t;
  bool solve_t = false;
  add_common(est_cmd);
  est_cmd->add_option("--n", est_n, "player count")->required();
  est_cmd->add_option("--k", est_k, "fixed k (default: schedule)");
  est_cmd->add_option("--damping", damping, "schedule damping >= 1")->capture_default_str();
  est_cmd->add_option("--reps", reps, "replications")->capture_default_str();
  est_cmd->add_option("--delta", delta, "saddle-equation margin")->capture_default_str();
  est_cmd->add_option("--t", explicit_t, "explicit threshold (unscaled score units)");
  est_cmd->add_flag("--solve-t", solve_t, "solve the threshold from (n, k, delta)");
  est_cmd->add_option("--seed", seed, "base seed")->capture_default_str();
  est_cmd->add_option("--workers", workers, "worker threads")->capture_default_str();
  est_cmd->add_flag("--timing", timing, "include elapsed_ms in the output");

  // --- sweep --------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "convergence sweep over an n grid as CSV");
  std::vector<int64_t> sweep_n;
  std::string config_path;
  add_common(sweep_cmd);
  sweep_cmd->add_option("--config", config_path, "JSON experiment config (see README)");
  sweep_cmd->add_option("--n", sweep_n, "player counts, strictly increasing (repeatable)");
  sweep_cmd->add_option("--k", fixed_k, "fixed k (default: schedule)");
  sweep_cmd->add_option("--damping", damping, "schedule damping >= 1")->capture_default_str();
  sweep_cmd->add_option("--reps", reps, "replications per n")->capture_default_str();
  sweep_cmd->add_option("--delta", delta, "saddle-equation margin")->capture_default_str();
  sweep_cmd->add_option("--t", explicit_t, "explicit threshold (unscaled)");
  sweep_cmd->add_flag("--solve-t", solve_t, "solve thresholds from (n, k, delta)");
  sweep_cmd->add_option("--seed", seed, "base seed")->capture_default_str();
  sweep_cmd->add_option("--workers", workers, "worker threads")->capture_default_str();
  sweep_cmd->add_flag("--timing", timing, "write real elapsed_ms (breaks byte determinism)");

  // --- simulate -----------------------------------------------------------
  auto* sim_cmd = app.add_subcommand("simulate", "dump one simulated score vector");
  int64_t sim_n = 10;
  uint64_t stream_id = 0;
  add_common(sim_cmd);
  sim_cmd->add_option("--n", sim_n, "player count")->required();
  sim_cmd->add_option("--seed", seed, "seed")->capture_default_str();
  sim_cmd->add_option("--stream", stream_id, "stream id")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2; // usage error
  }

  Output output(out_path);
  std::ostream& os = output.stream();

  if (*dist_cmd) {
    const es::ScoreDistribution d = es::parse_distribution_spec(dist_spec);
    json j;
    j["meta"] = make_meta(command_line, seed);
    j["name"] = d.name();
    j["denominator"] = d.denominator();
    j["support"] = d.support();
    if (d.exact()) {
      std::vector<std::string> probs;
      for (const auto& p : d.exact_probs()) probs.push_back(es::fraction_string(p));
      j["probs"] = probs;
    } else {
      j["probs"] = d.probs();
    }
    j["exact"] = d.exact();
    const es::MeanVar mv = es::mean_variance(d);
    j["mean"] = mv.mean;
    j["variance"] = mv.variance;
    os << j.dump(2) << "\n";
    return 0;
  }

  if (*thr_cmd) {
    const es::ScoreDistribution d = es::parse_distribution_spec(dist_spec);
    const es::ThresholdResult r = es::thresholds(thr_n, thr_k, delta, d);
    json j;
    j["meta"] = make_meta(command_line, seed);
    j["n"] = r.n;
    j["k"] = r.k;
    j["delta"] = r.delta;
    j["sigma"] = r.sigma;
    j["x"] = r.x;
    j["t"] = r.t;
    j["l"] = r.l;
    j["residual"] = r.residual;
    j["asymptotic_gap"] = r.asymptotic_gap;
    j["t_scaled"] = r.t_scaled;
    os << j.dump(2) << "\n";
    return 0;
  }

  if (*pmf_cmd) {
    const es::ScoreDistribution d = es::parse_distribution_spec(dist_spec);
    const es::ExactPmf pmf = es::exact_pmf(d, pmf_m);
    os << "# " << command_line << " | version=" << es::kVersion << "\n";
    os << "s,mass\n";
    if (pmf_theta) {
      const es::TiltedPmf tilted = es::tilt(pmf, *pmf_theta);
      for (size_t s = 0; s < tilted.mass.size(); ++s) {
        os << s << ',' << fmt_double(tilted.mass[s]) << "\n";
      }
    } else {
      for (size_t s = 0; s < pmf.mass.size(); ++s) {
        os << s << ',' << fmt_double(pmf.mass[s]) << "\n";
      }
    }
    return 0;
  }

  if (*bound_cmd) {
    if (!use_schedule && fixed_k < 1) {
      throw es::Error(es::ErrorCode::ConfigError, "bound needs --k or --k-schedule");
    }
    const es::ScoreDistribution d = es::parse_distribution_spec(dist_spec);
    os << "# " << command_line << " | version=" << es::kVersion << "\n";
    os << "n,k,t,bound,bound_normalized\n";
    for (int64_t n : bound_n) {
      const int64_t k = use_schedule ? es::k_schedule(n, damping) : fixed_k;
      const es::ThresholdResult th = es::thresholds(n, k, delta, d);
      const double bound = es::collision_bound_at(d, n, th.t);
      const double scale = static_cast<double>(k) * static_cast<double>(k) *
                           std::log(static_cast<double>(n) / static_cast<double>(k)) /
                           std::sqrt(static_cast<double>(n));
      os << n << ',' << k << ',' << fmt_double(th.t) << ',' << fmt_double(bound) << ','
         << fmt_double(bound / scale) << "\n";
    }
    return 0;
  }

  if (*exact_cmd) {
    const es::ScoreDistribution d = es::parse_distribution_spec(dist_spec);
    const es::ExactReport report = es::enumerate_exact(d, exact_n);
    json j;
    j["meta"] = make_meta(command_line, seed);
    j["n"] = report.n;
    j["q"] = report.q;
    j["dist"] = report.dist;
    j["P_U"] = rationals_by_k(report.p_top_distinct);
    j["P_U_tilde"] = rationals_by_k(report.p_bottom_distinct);
    json thresholds_json = json::array();
    for (const auto& s : report.per_threshold) {
      json tj;
      tj["t"] = s.t;
      tj["E_Z"] = es::fraction_string(s.e_z);
      tj["Var_Z"] = es::fraction_string(s.var_z);
      tj["E_W"] = es::fraction_string(s.e_w);
      tj["Var_W"] = es::fraction_string(s.var_w);
      tj["P_I1"] = es::fraction_string(s.p_i1);
      tj["P_I1I2"] = es::fraction_string(s.p_i1i2);
      tj["Cov_I1I2"] = es::fraction_string(s.cov_i1i2);
      tj["P_W_positive"] = es::fraction_string(s.p_w_positive);
      tj["P_Z_ge"] = rationals_by_k(s.p_z_at_least);
      tj["P_Z_ge_no_ties"] = rationals_by_k(s.p_z_at_least_no_ties);
      thresholds_json.push_back(tj);
    }
    j["thresholds"] = thresholds_json;
    os << j.dump(2) << "\n";
    return 0;
  }

  if (*est_cmd) {
    es::ExperimentConfig cfg;
    cfg.dist = es::parse_distribution_spec(dist_spec);
    cfg.n_grid = {est_n};
    cfg.k_rule = est_k >= 1 ? es::KRule{false, est_k, damping} : es::KRule{true, 0, damping};
    cfg.delta = delta;
    cfg.replications = reps;
    cfg.base_seed = seed;
    cfg.workers = workers;
    if (explicit_t) {
      cfg.threshold_mode = es::ThresholdMode::Explicit;
      cfg.explicit_threshold = *explicit_t;
    } else if (solve_t) {
      cfg.threshold_mode = es::ThresholdMode::Solved;
    }
    const es::EstimateResult r = es::estimate_top_k_distinct(cfg, est_n, cfg.k_rule.resolve(est_n));
    json j;
    j["meta"] = make_meta(command_line, seed);
    j["n"] = r.n;
    j["k"] = r.k;
    j["delta"] = r.delta;
    if (r.has_threshold) j["t_scaled"] = r.t_scaled;
    j["R"] = r.replications;
    j["successes"] = r.successes;
    j["phat"] = r.phat;
    j["ci_low"] = r.ci_low;
    j["ci_high"] = r.ci_high;
    if (r.has_threshold) {
      j["z_mean"] = r.z_mean;
      j["z_var"] = r.z_var;
      j["w_mean"] = r.w_mean;
      j["w_var"] = r.w_var;
      j["p_z_lt_k"] = r.p_z_lt_k;
      j["p_w_gt_0"] = r.p_w_gt_0;
    }
    j["seed"] = r.seed;
    j["workers"] = cfg.workers;
    if (timing) j["elapsed_ms"] = r.elapsed_ms;
    os << j.dump(2) << "\n";
    return 0;
  }

  if (*sweep_cmd) {
    es::ExperimentConfig cfg;
    if (!config_path.empty()) {
      cfg = es::load_experiment_config(config_path);
      // explicit flags override the file
      if (sweep_cmd->count("--seed")) cfg.base_seed = seed;
      if (sweep_cmd->count("--workers")) cfg.workers = workers;
      if (sweep_cmd->count("--reps")) cfg.replications = reps;
    } else {
      if (sweep_n.empty()) {
        throw es::Error(es::ErrorCode::ConfigError, "sweep needs --n values or --config");
      }
      cfg.dist = es::parse_distribution_spec(dist_spec);
      cfg.n_grid = sweep_n;
      cfg.k_rule = fixed_k >= 1 ? es::KRule{false, fixed_k, damping} : es::KRule{true, 0, damping};
      cfg.delta = delta;
      cfg.replications = reps;
      cfg.base_seed = seed;
      cfg.workers = workers;
      if (explicit_t) {
        cfg.threshold_mode = es::ThresholdMode::Explicit;
        cfg.explicit_threshold = *explicit_t;
      } else if (solve_t) {
        cfg.threshold_mode = es::ThresholdMode::Solved;
      }
    }
    const auto rows = es::convergence_sweep(cfg);
    es::write_sweep_csv(os, rows, command_line + " | version=" + es::kVersion, timing);
    return 0;
  }

  if (*sim_cmd) {
    const es::ScoreDistribution d = es::parse_distribution_spec(dist_spec);
    es::RandomStream stream(seed, stream_id);
    const es::ScoreVector v = es::simulate_scores(d, sim_n, stream);
    es::dump_score_vector(os, v, seed, stream_id);
    return 0;
  }

  return 0;
}

int main(int argc, char** argv) {
  try {
    return run_app(argc, argv);
  } catch (const es::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}
