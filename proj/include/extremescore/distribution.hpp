#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "extremescore/rational.hpp"
#include "extremescore/rng.hpp"

namespace extremescore {

// One match seen from one side: this player takes value/q, the opponent the
// complementary (q - value)/q, so every match hands out exactly one unit.
struct MatchOutcome {
  int64_t value = 0;
  int64_t denominator = 1;
  int64_t opponent_value() const { return denominator - value; }
};

// Per-match score distribution on the lattice {0, 1/q, ..., 1}, symmetric
// about 1/2 (mirror support point q - v carries the same probability as v).
// Immutable after construction and safe to share across workers.
class ScoreDistribution {
public:
  // Empty until assigned from one of the factories below.
  ScoreDistribution() = default;

  int64_t denominator() const { return q_; }
  const std::vector<int64_t>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }
  const std::string& name() const { return name_; }

  // True when probabilities were supplied as rationals; required by the
  // exact-enumeration oracle.
  bool exact() const { return !exact_probs_.empty(); }
  const std::vector<Rational>& exact_probs() const;

  double variance() const { return variance_; }
  Rational exact_variance() const;

  int64_t sample_value(RandomStream& stream) const;
  MatchOutcome sample_match(RandomStream& stream) const;

  // Two-point symmetric supports are a fair coin between support()[0] and
  // support()[1]; the engine exploits this with a bit-buffer fast path.
  bool is_two_point() const { return support_.size() == 2; }

private:
  friend struct DistributionBuilder;

  int64_t q_ = 1;
  std::vector<int64_t> support_;
  std::vector<double> probs_;
  std::vector<Rational> exact_probs_; // empty when built from decimals
  std::vector<double> cumulative_;
  double variance_ = 0.0;
  std::string name_ = "custom";
};

struct MeanVar {
  double mean;     // always 1/2, forced by the symmetry invariant
  double variance; // in (0, 1/4]
};

MeanVar mean_variance(const ScoreDistribution& d);

// Validating constructors. Values are scaled support points in [0, q];
// probabilities either exact rationals or decimals (checked within 1e-12).
ScoreDistribution make_distribution(int64_t denominator,
                                    const std::vector<std::pair<int64_t, Rational>>& entries,
                                    std::string name = "custom");
ScoreDistribution make_distribution(int64_t denominator,
                                    const std::vector<std::pair<int64_t, double>>& entries,
                                    std::string name = "custom");

// The classical win/loss model: q = 1, P(0) = P(1) = 1/2.
ScoreDistribution win_loss_model();

// q = 2 model with a draw worth 1/2: {0, 1, 2} with P(1) = p_draw.
ScoreDistribution draw_model(const Rational& p_draw);

// "m1", "draw:<p>" (p a fraction or decimal, parsed exactly), or a path to a
// JSON distribution file.
ScoreDistribution parse_distribution_spec(const std::string& spec);

// JSON schema: {"denominator": q, "entries": [{"value": v, "prob": "1/2"}|{"value": v, "prob": 0.5}, ...]};
// string probabilities are exact, numeric ones are treated as decimals.
ScoreDistribution load_distribution_file(const std::string& path);

} // namespace extremescore
