#include "extremescore/asymptotics.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "extremescore/common.hpp"
#include "extremescore/statistics.hpp"

namespace extremescore {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014326779; // 1/sqrt(2*pi)
constexpr double kHalfLog2Pi = 0.9189385332046727418; // log(2*pi)/2
constexpr double kSolverTolerance = 1e-10;

// log(n * phi(x) / x) - log(target); strictly decreasing in x on (0, inf).
double saddle_log_gap(double x, double log_n, double log_target) {
  return log_n - 0.5 * x * x - std::log(x) - kHalfLog2Pi - log_target;
}

} // namespace

double normal_density(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_tail(double x) { return 0.5 * std::erfc(x * M_SQRT1_2); }

double mills_ratio_approx(double x) {
  if (!(x > 0.0)) {
    throw Error(ErrorCode::NonPositiveX, "mills_ratio_approx requires x > 0");
  }
  return normal_density(x) / x;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw Error(ErrorCode::ValueOutOfRange, "normal_quantile requires p in (0,1)");
  }
  // Acklam's rational approximation, then one Halley refinement.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;
  double z;
  if (p < p_low) {
    const double u = std::sqrt(-2.0 * std::log(p));
    z = (((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double u = p - 0.5;
    const double r = u * u;
    z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double u = std::sqrt(-2.0 * std::log(1.0 - p));
    z = -(((((c[0] * u + c[1]) * u + c[2]) * u + c[3]) * u + c[4]) * u + c[5]) /
        ((((d[0] * u + d[1]) * u + d[2]) * u + d[3]) * u + 1.0);
  }
  const double err = (1.0 - normal_tail(z)) - p;
  const double dens = normal_density(z);
  z -= err / (dens + 0.5 * z * err); // Halley step
  return z;
}

double solve_x(int64_t n, int64_t k, double delta) {
  if (n < 2) throw Error(ErrorCode::ValueOutOfRange, "solve_x requires n >= 2");
  if (k < 1 || k >= n) throw Error(ErrorCode::ValueOutOfRange, "solve_x requires 1 <= k < n");
  if (!(delta > 0.0 && delta < 1.0)) {
    throw Error(ErrorCode::ValueOutOfRange, "solve_x requires delta in (0,1)");
  }
  const double log_n = std::log(static_cast<double>(n));
  const double log_target = std::log1p(delta) + std::log(static_cast<double>(k));

  double lo = 1e-6;
  double hi = std::sqrt(2.0 * log_n) + 10.0;
  double gap_lo = saddle_log_gap(lo, log_n, log_target);
  double gap_hi = saddle_log_gap(hi, log_n, log_target);
  if (gap_lo < 0.0 || gap_hi > 0.0) {
    throw Error(ErrorCode::NoRootInBracket,
                "saddle equation has no root in [" + std::to_string(lo) + ", " +
                    std::to_string(hi) + "] for n=" + std::to_string(n) +
                    " k=" + std::to_string(k));
  }

  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double gap = saddle_log_gap(mid, log_n, log_target);
    if (std::abs(gap) <= 0.5 * kSolverTolerance) break;
    if (gap > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double residual = std::abs(std::expm1(saddle_log_gap(mid, log_n, log_target)));
  if (residual > kSolverTolerance) {
    throw Error(ErrorCode::NumericFailure,
                "saddle solver stalled, residual " + std::to_string(residual));
  }
  return mid;
}

double threshold_at(int64_t n, double x, double sigma) {
  return 0.5 * static_cast<double>(n - 1) + x * std::sqrt(static_cast<double>(n - 1)) * sigma;
}

double reduced_threshold_at(int64_t n, double x, double sigma) {
  return 0.5 * static_cast<double>(n - 2) + x * std::sqrt(static_cast<double>(n - 2)) * sigma;
}

ThresholdResult thresholds(int64_t n, int64_t k, double delta, const ScoreDistribution& d) {
  ThresholdResult r;
  r.n = n;
  r.k = k;
  r.delta = delta;
  r.sigma = std::sqrt(d.variance());
  r.x = solve_x(n, k, delta);
  r.t = threshold_at(n, r.x, r.sigma);
  r.l = reduced_threshold_at(n, r.x, r.sigma);
  const double target = (1.0 + delta) * static_cast<double>(k);
  r.residual = std::abs(static_cast<double>(n) * normal_density(r.x) / r.x - target) / target;
  r.asymptotic_gap =
      r.x * r.x - 2.0 * std::log(static_cast<double>(n) / static_cast<double>(k));
  r.t_scaled = scale_threshold(r.t, d.denominator());
  return r;
}

int64_t k_schedule(int64_t n, double damping) {
  if (n < 3) throw Error(ErrorCode::ValueOutOfRange, "k_schedule requires n >= 3");
  if (!(damping >= 1.0)) throw Error(ErrorCode::ValueOutOfRange, "damping must be >= 1");
  const double nn = static_cast<double>(n);
  const double k = std::floor(std::pow(nn / std::log(nn), 0.25) / damping);
  return std::max<int64_t>(1, static_cast<int64_t>(k));
}

} // namespace extremescore
