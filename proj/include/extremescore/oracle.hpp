#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "extremescore/distribution.hpp"
#include "extremescore/rational.hpp"

namespace extremescore {

// Exact statistics at one scaled threshold t, over the full outcome space.
// I1/I2 are the exceedance indicators of players 1 and 2.
struct OracleThresholdStats {
  int64_t t = 0;
  Rational e_z, e_z2, var_z;
  Rational e_w, e_w2, var_w;
  Rational p_i1, p_i2, p_i1i2, cov_i1i2;
  Rational p_w_positive;
  std::vector<Rational> p_z_at_least;          // index k-1: P(Z_t >= k)
  std::vector<Rational> p_z_at_least_no_ties;  // index k-1: P(Z_t >= k and W_t = 0)
};

// Ground truth for every observable at small n, from full enumeration of the
// r^C(n,2) outcome assignments with exact rational arithmetic.
struct ExactReport {
  int64_t n = 0;
  int64_t q = 1;
  std::string dist;
  std::vector<Rational> p_top_distinct;    // index k-1: top k scores pairwise distinct
  std::vector<Rational> p_bottom_distinct; // index k-1: mirror event
  std::vector<OracleThresholdStats> per_threshold; // t = -1 .. q(n-1)

  const OracleThresholdStats& at(int64_t t_scaled) const;
};

// Guard: r^C(n,2) <= 1e8 and exact rational probabilities required.
ExactReport enumerate_exact(const ScoreDistribution& d, int64_t n);

struct EstimatorZScore {
  std::string name;
  double estimate = 0.0;
  double exact = 0.0;
  double z = 0.0;
};

struct OracleComparison {
  int64_t n = 0;
  int64_t k = 0;
  int64_t t_scaled = 0;
  int64_t replications = 0;
  uint64_t seed = 0;
  std::vector<EstimatorZScore> rows;
  double max_abs_z() const;
};

// Runs every Monte Carlo estimator at (n, k, t) and z-scores it against the
// enumeration oracle, using oracle moments for the standard errors.
OracleComparison oracle_vs_montecarlo(const ScoreDistribution& d, int64_t n, int64_t k,
                                      int64_t t_scaled, int64_t replications, uint64_t seed);

} // namespace extremescore
