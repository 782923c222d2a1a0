#include "extremescore/tilting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "extremescore/asymptotics.hpp"
#include "extremescore/common.hpp"
#include "extremescore/statistics.hpp"

namespace extremescore {

namespace {

constexpr int64_t kConvolutionGuard = 10'000'000;
constexpr int64_t kRationalGuard = 2'000;

void check_m(const ScoreDistribution& d, int64_t m, int64_t guard) {
  if (m < 1) throw Error(ErrorCode::ValueOutOfRange, "summand count must be >= 1");
  if (m > guard / d.denominator()) {
    throw Error(ErrorCode::SupportTooLarge,
                "m*q = " + std::to_string(m * d.denominator()) + " exceeds guard " +
                    std::to_string(guard));
  }
}

// First scaled index with s/q > lower, clamped below at 0.
int64_t first_index_above(double lower, int64_t q) {
  const int64_t start = scale_threshold(lower, q) + 1;
  return std::max<int64_t>(start, 0);
}

PmfPoint max_mass_from(const std::vector<double>& mass, int64_t start) {
  PmfPoint best;
  for (size_t s = static_cast<size_t>(start); s < mass.size(); ++s) {
    if (mass[s] > best.prob) {
      best.prob = mass[s];
      best.value = static_cast<int64_t>(s);
    }
  }
  return best;
}

} // namespace

ExactPmf exact_pmf(const ScoreDistribution& d, int64_t m) {
  check_m(d, m, kConvolutionGuard);
  const int64_t q = d.denominator();
  const auto& support = d.support();
  const auto& probs = d.probs();

  std::vector<double> mass(static_cast<size_t>(q) + 1, 0.0);
  for (size_t i = 0; i < support.size(); ++i) mass[static_cast<size_t>(support[i])] = probs[i];

  std::vector<double> next;
  for (int64_t step = 2; step <= m; ++step) {
    next.assign(static_cast<size_t>(step * q) + 1, 0.0);
    for (size_t s = 0; s < mass.size(); ++s) {
      const double p = mass[s];
      if (p == 0.0) continue;
      for (size_t i = 0; i < support.size(); ++i) {
        next[s + static_cast<size_t>(support[i])] += p * probs[i];
      }
    }
    mass.swap(next);
  }

  double total = 0.0;
  for (double p : mass) total += p;
  if (std::abs(total - 1.0) > 1e-8) {
    throw Error(ErrorCode::NumericFailure,
                "convolution mass drifted to " + std::to_string(total));
  }
  for (double& p : mass) p /= total;
  return ExactPmf{m, q, std::move(mass)};
}

std::vector<Rational> exact_pmf_rational(const ScoreDistribution& d, int64_t m) {
  check_m(d, m, kRationalGuard);
  const auto& probs = d.exact_probs(); // throws InexactProbabilities if decimal-built
  const auto& support = d.support();
  const int64_t q = d.denominator();

  std::vector<Rational> mass(static_cast<size_t>(q) + 1, Rational(0));
  for (size_t i = 0; i < support.size(); ++i) mass[static_cast<size_t>(support[i])] = probs[i];

  std::vector<Rational> next;
  for (int64_t step = 2; step <= m; ++step) {
    next.assign(static_cast<size_t>(step * q) + 1, Rational(0));
    for (size_t s = 0; s < mass.size(); ++s) {
      if (mass[s] == 0) continue;
      for (size_t i = 0; i < support.size(); ++i) {
        next[s + static_cast<size_t>(support[i])] += mass[s] * probs[i];
      }
    }
    mass.swap(next);
  }
  return mass;
}

double log_mgf(const ScoreDistribution& d, int64_t m, double theta) {
  if (m < 1) throw Error(ErrorCode::ValueOutOfRange, "summand count must be >= 1");
  if (!std::isfinite(theta)) throw Error(ErrorCode::ValueOutOfRange, "theta must be finite");
  const double q = static_cast<double>(d.denominator());
  // log-sum-exp over the support of one match.
  double max_term = -std::numeric_limits<double>::infinity();
  const auto& support = d.support();
  const auto& probs = d.probs();
  std::vector<double> terms(support.size());
  for (size_t i = 0; i < support.size(); ++i) {
    terms[i] = theta * static_cast<double>(support[i]) / q + std::log(probs[i]);
    max_term = std::max(max_term, terms[i]);
  }
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - max_term);
  return static_cast<double>(m) * (max_term + std::log(sum));
}

double mgf(const ScoreDistribution& d, int64_t m, double theta) {
  const double lg = log_mgf(d, m, theta);
  if (lg > 709.0) {
    throw Error(ErrorCode::Overflow, "MGF exponent " + std::to_string(lg) +
                                         " exceeds double range; use log_mgf");
  }
  return std::exp(lg);
}

TiltedPmf tilt(const ExactPmf& pmf, double theta) {
  if (!std::isfinite(theta)) throw Error(ErrorCode::ValueOutOfRange, "theta must be finite");
  TiltedPmf out{theta, pmf.m, pmf.q, std::vector<double>(pmf.mass.size(), 0.0)};
  const double q = static_cast<double>(pmf.q);

  double max_log = -std::numeric_limits<double>::infinity();
  std::vector<double> logs(pmf.mass.size(), -std::numeric_limits<double>::infinity());
  for (size_t s = 0; s < pmf.mass.size(); ++s) {
    if (pmf.mass[s] <= 0.0) continue;
    logs[s] = theta * static_cast<double>(s) / q + std::log(pmf.mass[s]);
    max_log = std::max(max_log, logs[s]);
  }
  double total = 0.0;
  for (size_t s = 0; s < logs.size(); ++s) {
    if (logs[s] == -std::numeric_limits<double>::infinity()) continue;
    out.mass[s] = std::exp(logs[s] - max_log);
    total += out.mass[s];
  }
  for (double& p : out.mass) p /= total;
  return out;
}

PmfPoint sup_pmf(const ExactPmf& pmf) { return max_mass_from(pmf.mass, 0); }

PmfPoint sup_pmf_above(const ExactPmf& pmf, double lower) {
  return max_mass_from(pmf.mass, first_index_above(lower, pmf.q));
}

PmfPoint sup_pmf_above(const TiltedPmf& pmf, double lower) {
  return max_mass_from(pmf.mass, first_index_above(lower, pmf.q));
}

double exact_tail(const ExactPmf& pmf, double t) {
  const int64_t start = first_index_above(t, pmf.q);
  if (start <= 0) return 1.0;
  if (start >= static_cast<int64_t>(pmf.mass.size())) return 0.0;
  double tail = 0.0;
  for (int64_t s = static_cast<int64_t>(pmf.mass.size()) - 1; s >= start; --s) {
    tail += pmf.mass[static_cast<size_t>(s)];
  }
  return tail;
}

double chernoff_point_bound(const ScoreDistribution& d, int64_t m, double theta, double lower) {
  if (!(theta > 0.0)) throw Error(ErrorCode::ValueOutOfRange, "theta must be positive");
  const ExactPmf base = exact_pmf(d, m);
  const PmfPoint tilted_sup = sup_pmf_above(tilt(base, theta), lower);
  if (tilted_sup.prob <= 0.0) return 0.0;
  const double log_bound = -theta * lower + log_mgf(d, m, theta) + std::log(tilted_sup.prob);
  return std::exp(log_bound);
}

double collision_bound_at(const ScoreDistribution& d, int64_t n, double t) {
  if (n < 3) throw Error(ErrorCode::ValueOutOfRange, "collision bound requires n >= 3");
  const ExactPmf pmf = exact_pmf(d, n - 2);
  const double point_sup = sup_pmf_above(pmf, t - 1.0).prob;
  const double tail = exact_tail(pmf, t - 1.0);
  const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
  return pairs * point_sup * tail;
}

double collision_expectation_bound(int64_t n, int64_t k, double delta,
                                   const ScoreDistribution& d) {
  const ThresholdResult th = thresholds(n, k, delta, d);
  return collision_bound_at(d, n, th.t);
}

} // namespace extremescore
