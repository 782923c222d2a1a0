#pragma once

#include <cstdint>

#include "extremescore/distribution.hpp"

namespace extremescore {

// Standard normal density and upper tail 1 - Phi(x) (erfc-based, relative
// error well under 1e-12 on [-8, 8]).
double normal_density(double x);
double normal_tail(double x);

// phi(x)/x, the classical upper estimate of the normal tail; requires x > 0.
double mills_ratio_approx(double x);

// Inverse of Phi on (0,1); rational approximation polished with one Halley
// step against erfc.
double normal_quantile(double p);

// Solves n * phi(x)/x = (1+delta) * k for the unique positive root. The left
// side is strictly decreasing, so safeguarded bisection always converges;
// relative residual <= 1e-10.
double solve_x(int64_t n, int64_t k, double delta);

// Exceedance threshold (n-1)/2 + x*sqrt(n-1)*sigma and its (n-2)-match
// companion (n-2)/2 + x*sqrt(n-2)*sigma, both in unscaled score units.
double threshold_at(int64_t n, double x, double sigma);
double reduced_threshold_at(int64_t n, double x, double sigma);

struct ThresholdResult {
  int64_t n = 0;
  int64_t k = 0;
  double delta = 0.0;
  double sigma = 0.0;
  double x = 0.0;              // solved normal deviate
  double t = 0.0;              // exceedance threshold, unscaled
  double l = 0.0;              // reduced threshold for the (n-2)-match sum
  double residual = 0.0;       // relative residual of the saddle equation at x
  double asymptotic_gap = 0.0; // x^2 - 2 log(n/k)
  int64_t t_scaled = 0;        // floor(t * q), for the scaled-lattice modules
};

ThresholdResult thresholds(int64_t n, int64_t k, double delta, const ScoreDistribution& d);

// k(n) = max(1, floor((n / ln n)^{1/4} / damping)); grows slowly enough that
// the distinctness probability should approach one along the schedule.
int64_t k_schedule(int64_t n, double damping = 1.0);

} // namespace extremescore
