#pragma once

#include <cstdint>
#include <vector>

#include "extremescore/distribution.hpp"
#include "extremescore/rational.hpp"

namespace extremescore {

// Distribution of the m-fold iid match-score sum on the scaled lattice
// {0, ..., m*q}; mass is palindromic because the match distribution is
// symmetric about 1/2.
struct ExactPmf {
  int64_t m = 0;
  int64_t q = 1;
  std::vector<double> mass; // index = scaled sum
};

// Exponentially reweighted copy: mass[s] proportional to e^{theta*s/q} * base[s].
struct TiltedPmf {
  double theta = 0.0;
  int64_t m = 0;
  int64_t q = 1;
  std::vector<double> mass;
};

struct PmfPoint {
  int64_t value = -1; // scaled support point; -1 when the region is empty
  double prob = 0.0;
};

// m-fold self-convolution in double precision, renormalized after a drift
// check. Guard: m*q <= 1e7.
ExactPmf exact_pmf(const ScoreDistribution& d, int64_t m);

// Oracle-grade exact convolution; requires rational probabilities and
// m*q <= 2000.
std::vector<Rational> exact_pmf_rational(const ScoreDistribution& d, int64_t m);

// log E[e^{theta * S_m}] with S_m in unscaled units; always finite.
double log_mgf(const ScoreDistribution& d, int64_t m, double theta);

// E[e^{theta * S_m}]; throws Overflow when the result exceeds double range
// (use log_mgf instead).
double mgf(const ScoreDistribution& d, int64_t m, double theta);

TiltedPmf tilt(const ExactPmf& pmf, double theta);

// Largest point mass; ties break toward the smaller support point.
PmfPoint sup_pmf(const ExactPmf& pmf);
// Restricted variants over support points with s/q > lower (strict).
PmfPoint sup_pmf_above(const ExactPmf& pmf, double lower);
PmfPoint sup_pmf_above(const TiltedPmf& pmf, double lower);

// P(S_m > t), t unscaled; summed from the far tail inward for accuracy.
double exact_tail(const ExactPmf& pmf, double t);

// e^{-theta*lower} * E[e^{theta*S_m}] * sup_{x > lower} P_theta(S_m = x);
// an upper bound for sup_{x > lower} P(S_m = x) for any theta > 0.
double chernoff_point_bound(const ScoreDistribution& d, int64_t m, double theta, double lower);

// Right side of the pair-collision bound at threshold t (unscaled):
// n(n-1)/2 * sup_{x > t-1, attainable} P(S_{n-2} = x) * P(S_{n-2} > t-1).
// Upper-bounds the expected number of tied pairs above t.
double collision_bound_at(const ScoreDistribution& d, int64_t n, double t);

// Same bound evaluated at the solved threshold for (n, k, delta).
double collision_expectation_bound(int64_t n, int64_t k, double delta,
                                   const ScoreDistribution& d);

} // namespace extremescore
