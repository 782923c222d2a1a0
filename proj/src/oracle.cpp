#include "extremescore/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "extremescore/common.hpp"
#include "extremescore/experiments.hpp"

namespace extremescore {

namespace {

constexpr double kStateSpaceGuard = 1e8;

// Largest k such that the top k entries of the ascending sorted vector are
// pairwise distinct.
int64_t distinct_depth_top(const std::vector<int64_t>& sorted) {
  int64_t depth = 1;
  for (size_t i = sorted.size() - 1; i > 0; --i) {
    if (sorted[i - 1] == sorted[i]) break;
    ++depth;
  }
  return depth;
}

int64_t distinct_depth_bottom(const std::vector<int64_t>& sorted) {
  int64_t depth = 1;
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] == sorted[i - 1]) break;
    ++depth;
  }
  return depth;
}

} // namespace

const OracleThresholdStats& ExactReport::at(int64_t t_scaled) const {
  const int64_t index = t_scaled + 1;
  if (index < 0 || index >= static_cast<int64_t>(per_threshold.size())) {
    throw Error(ErrorCode::ValueOutOfRange,
                "threshold " + std::to_string(t_scaled) + " outside [-1, q(n-1)]");
  }
  return per_threshold[static_cast<size_t>(index)];
}

ExactReport enumerate_exact(const ScoreDistribution& d, int64_t n) {
  if (n < 2) throw Error(ErrorCode::PlayerCountTooSmall, "oracle requires n >= 2");
  const auto& probs = d.exact_probs(); // throws InexactProbabilities when decimal-built
  const auto& support = d.support();
  const int64_t r = static_cast<int64_t>(support.size());
  const int64_t pairs = n * (n - 1) / 2;
  if (static_cast<double>(pairs) * std::log(static_cast<double>(r)) >
      std::log(kStateSpaceGuard)) {
    throw Error(ErrorCode::StateSpaceTooLarge,
                "r^C(n,2) exceeds 1e8 for r=" + std::to_string(r) + ", n=" + std::to_string(n));
  }

  const int64_t q = d.denominator();
  ExactReport report;
  report.n = n;
  report.q = q;
  report.dist = d.name();
  report.p_top_distinct.assign(static_cast<size_t>(n), Rational(0));
  report.p_bottom_distinct.assign(static_cast<size_t>(n), Rational(0));

  const int64_t t_count = q * (n - 1) + 2; // t = -1 .. q(n-1)
  report.per_threshold.resize(static_cast<size_t>(t_count));
  for (int64_t i = 0; i < t_count; ++i) {
    auto& stats = report.per_threshold[static_cast<size_t>(i)];
    stats.t = i - 1;
    stats.p_z_at_least.assign(static_cast<size_t>(n), Rational(0));
    stats.p_z_at_least_no_ties.assign(static_cast<size_t>(n), Rational(0));
  }

  // Mixed-radix counter over the pairs, one digit (support index) per match.
  std::vector<int> digit(static_cast<size_t>(pairs), 0);
  std::vector<std::pair<int, int>> pair_index;
  pair_index.reserve(static_cast<size_t>(pairs));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pair_index.emplace_back(i, j);
  }

  std::vector<int64_t> scores(static_cast<size_t>(n));
  std::vector<int64_t> sorted(static_cast<size_t>(n));
  std::vector<int> mult(static_cast<size_t>(q * (n - 1)) + 1);

  while (true) {
    Rational prob = 1;
    std::fill(scores.begin(), scores.end(), int64_t{0});
    for (int64_t p = 0; p < pairs; ++p) {
      const int idx = digit[static_cast<size_t>(p)];
      prob *= probs[static_cast<size_t>(idx)];
      const auto [i, j] = pair_index[static_cast<size_t>(p)];
      scores[static_cast<size_t>(i)] += support[static_cast<size_t>(idx)];
      scores[static_cast<size_t>(j)] += q - support[static_cast<size_t>(idx)];
    }

    sorted = scores;
    std::sort(sorted.begin(), sorted.end());
    const int64_t top_depth = distinct_depth_top(sorted);
    const int64_t bottom_depth = distinct_depth_bottom(sorted);
    for (int64_t k = 1; k <= top_depth; ++k) {
      report.p_top_distinct[static_cast<size_t>(k - 1)] += prob;
    }
    for (int64_t k = 1; k <= bottom_depth; ++k) {
      report.p_bottom_distinct[static_cast<size_t>(k - 1)] += prob;
    }

    std::fill(mult.begin(), mult.end(), 0);
    for (int64_t s : sorted) ++mult[static_cast<size_t>(s)];

    for (int64_t t = -1; t <= q * (n - 1); ++t) {
      auto& stats = report.per_threshold[static_cast<size_t>(t + 1)];
      int64_t z = 0;
      int64_t w = 0;
      for (int64_t v = t + 1; v <= q * (n - 1); ++v) {
        const int64_t m = mult[static_cast<size_t>(v)];
        z += m;
        w += m * (m - 1) / 2;
      }
      stats.e_z += prob * z;
      stats.e_z2 += prob * z * z;
      stats.e_w += prob * w;
      stats.e_w2 += prob * w * w;
      if (w > 0) stats.p_w_positive += prob;
      const bool i1 = scores[0] > t;
      const bool i2 = scores[1] > t;
      if (i1) stats.p_i1 += prob;
      if (i2) stats.p_i2 += prob;
      if (i1 && i2) stats.p_i1i2 += prob;
      for (int64_t k = 1; k <= z; ++k) {
        stats.p_z_at_least[static_cast<size_t>(k - 1)] += prob;
        if (w == 0) stats.p_z_at_least_no_ties[static_cast<size_t>(k - 1)] += prob;
      }
    }

    // Advance the counter.
    int64_t pos = 0;
    while (pos < pairs) {
      if (++digit[static_cast<size_t>(pos)] < r) break;
      digit[static_cast<size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == pairs) break;
  }

  for (auto& stats : report.per_threshold) {
    stats.var_z = stats.e_z2 - stats.e_z * stats.e_z;
    stats.var_w = stats.e_w2 - stats.e_w * stats.e_w;
    stats.cov_i1i2 = stats.p_i1i2 - stats.p_i1 * stats.p_i2;
    stats.var_z.canonicalize();
    stats.var_w.canonicalize();
    stats.cov_i1i2.canonicalize();
  }
  return report;
}

double OracleComparison::max_abs_z() const {
  double best = 0.0;
  for (const auto& row : rows) best = std::max(best, std::abs(row.z));
  return best;
}

OracleComparison oracle_vs_montecarlo(const ScoreDistribution& d, int64_t n, int64_t k,
                                      int64_t t_scaled, int64_t replications, uint64_t seed) {
  if (replications < 1) {
    throw Error(ErrorCode::EmptyExperiment, "need at least one replication");
  }
  const ExactReport report = enumerate_exact(d, n);
  const OracleThresholdStats& stats = report.at(t_scaled);

  const ReplicationTotals totals =
      run_replications(d, n, k, /*has_threshold=*/true, t_scaled, replications, seed,
                       /*workers=*/1);
  const double R = static_cast<double>(replications);

  OracleComparison cmp;
  cmp.n = n;
  cmp.k = k;
  cmp.t_scaled = t_scaled;
  cmp.replications = replications;
  cmp.seed = seed;

  const auto z_score = [R](double estimate, double exact, double variance) {
    const double se = std::sqrt(std::max(variance, 0.0) / R);
    if (se == 0.0) {
      return estimate == exact ? 0.0 : std::numeric_limits<double>::infinity();
    }
    return (estimate - exact) / se;
  };
  const auto bernoulli = [&](const std::string& name, double estimate, const Rational& p) {
    const double pd = to_double(p);
    cmp.rows.push_back(EstimatorZScore{name, estimate, pd, z_score(estimate, pd, pd * (1 - pd))});
  };

  bernoulli("p_top_k_distinct", static_cast<double>(totals.successes_top_k) / R,
            report.p_top_distinct[static_cast<size_t>(k - 1)]);
  bernoulli("p_z_lt_k", static_cast<double>(totals.count_z_lt_k) / R,
            1 - stats.p_z_at_least[static_cast<size_t>(k - 1)]);
  bernoulli("p_w_positive", static_cast<double>(totals.count_w_gt_0) / R, stats.p_w_positive);
  bernoulli("p_z_ge_k_and_no_ties", static_cast<double>(totals.successes_gate) / R,
            stats.p_z_at_least_no_ties[static_cast<size_t>(k - 1)]);

  const double z_mean = static_cast<double>(totals.z_sum) / R;
  cmp.rows.push_back(EstimatorZScore{"mean_z", z_mean, to_double(stats.e_z),
                                     z_score(z_mean, to_double(stats.e_z),
                                             to_double(stats.var_z))});
  const double w_mean = static_cast<double>(totals.w_sum) / R;
  cmp.rows.push_back(EstimatorZScore{"mean_w", w_mean, to_double(stats.e_w),
                                     z_score(w_mean, to_double(stats.e_w),
                                             to_double(stats.var_w))});
  return cmp;
}

} // namespace extremescore
