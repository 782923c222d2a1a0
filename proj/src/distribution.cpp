#include "extremescore/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "extremescore/common.hpp"

namespace extremescore {

namespace {

constexpr double kProbTolerance = 1e-12;

struct RawEntry {
  int64_t value;
  double prob;
  Rational exact_prob; // meaningful only when exact
};

} // namespace

struct DistributionBuilder {
  static ScoreDistribution build(int64_t q, std::vector<RawEntry> entries, bool exact,
                                 std::string name);
};

ScoreDistribution DistributionBuilder::build(int64_t q, std::vector<RawEntry> entries, bool exact,
                                             std::string name) {
  if (q < 1) throw Error(ErrorCode::ValueOutOfRange, "denominator must be >= 1");
  if (entries.size() < 2) {
    throw Error(ErrorCode::SingletonSupport, "support must contain at least two values");
  }

  std::sort(entries.begin(), entries.end(),
            [](const RawEntry& a, const RawEntry& b) { return a.value < b.value; });

  for (size_t i = 0; i < entries.size(); ++i) {
    const RawEntry& e = entries[i];
    if (e.value < 0 || e.value > q) {
      throw Error(ErrorCode::ValueOutOfRange,
                  "support value " + std::to_string(e.value) + " outside [0, q]");
    }
    if (i > 0 && entries[i - 1].value == e.value) {
      throw Error(ErrorCode::ValueOutOfRange,
                  "duplicate support value " + std::to_string(e.value));
    }
    const bool positive = exact ? e.exact_prob > 0 : e.prob > 0.0;
    const bool at_most_one = exact ? e.exact_prob <= 1 : e.prob <= 1.0;
    if (!positive || !at_most_one) {
      throw Error(ErrorCode::ValueOutOfRange, "probabilities must lie in (0, 1]");
    }
  }

  if (exact) {
    Rational sum = 0;
    for (const RawEntry& e : entries) sum += e.exact_prob;
    if (sum != 1) {
      throw Error(ErrorCode::ProbSumMismatch,
                  "probabilities sum to " + fraction_string(sum) + ", expected 1");
    }
  } else {
    double sum = 0.0;
    for (const RawEntry& e : entries) sum += e.prob;
    if (std::abs(sum - 1.0) > kProbTolerance) {
      throw Error(ErrorCode::ProbSumMismatch,
                  "probabilities sum to " + std::to_string(sum) + ", expected 1");
    }
  }

  // Symmetry: the mirror point q - v must be present with the same mass.
  std::map<int64_t, size_t> index;
  for (size_t i = 0; i < entries.size(); ++i) index[entries[i].value] = i;
  for (const RawEntry& e : entries) {
    auto it = index.find(q - e.value);
    if (it == index.end()) {
      throw Error(ErrorCode::AsymmetricSupport,
                  "support value " + std::to_string(e.value) + " lacks mirror " +
                      std::to_string(q - e.value));
    }
    const RawEntry& m = entries[it->second];
    const bool equal = exact ? e.exact_prob == m.exact_prob
                             : std::abs(e.prob - m.prob) <= kProbTolerance;
    if (!equal) {
      throw Error(ErrorCode::AsymmetricSupport,
                  "mirror probabilities differ at value " + std::to_string(e.value));
    }
  }

  ScoreDistribution d;
  d.q_ = q;
  d.name_ = std::move(name);
  d.support_.reserve(entries.size());
  d.probs_.reserve(entries.size());
  for (const RawEntry& e : entries) {
    d.support_.push_back(e.value);
    d.probs_.push_back(exact ? to_double(e.exact_prob) : e.prob);
    if (exact) d.exact_probs_.push_back(e.exact_prob);
  }

  d.cumulative_.resize(d.probs_.size());
  double run = 0.0;
  for (size_t i = 0; i < d.probs_.size(); ++i) {
    run += d.probs_[i];
    d.cumulative_[i] = run;
  }
  d.cumulative_.back() = 1.0;

  double var = 0.0;
  for (size_t i = 0; i < d.support_.size(); ++i) {
    const double centered = static_cast<double>(d.support_[i]) / static_cast<double>(q) - 0.5;
    var += d.probs_[i] * centered * centered;
  }
  d.variance_ = var;
  return d;
}

const std::vector<Rational>& ScoreDistribution::exact_probs() const {
  if (!exact()) {
    throw Error(ErrorCode::InexactProbabilities,
                "distribution '" + name_ + "' was built from decimal probabilities");
  }
  return exact_probs_;
}

Rational ScoreDistribution::exact_variance() const {
  const auto& probs = exact_probs();
  Rational var = 0;
  for (size_t i = 0; i < support_.size(); ++i) {
    Rational centered = Rational(support_[i], q_) - Rational(1, 2);
    var += probs[i] * centered * centered;
  }
  var.canonicalize();
  return var;
}

int64_t ScoreDistribution::sample_value(RandomStream& stream) const {
  const double u = stream.next_double();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  const size_t idx = std::min<size_t>(it - cumulative_.begin(), support_.size() - 1);
  return support_[idx];
}

MatchOutcome ScoreDistribution::sample_match(RandomStream& stream) const {
  return MatchOutcome{sample_value(stream), q_};
}

MeanVar mean_variance(const ScoreDistribution& d) { return MeanVar{0.5, d.variance()}; }

ScoreDistribution make_distribution(int64_t denominator,
                                    const std::vector<std::pair<int64_t, Rational>>& entries,
                                    std::string name) {
  std::vector<RawEntry> raw;
  raw.reserve(entries.size());
  for (const auto& [value, prob] : entries) {
    Rational p = prob;
    p.canonicalize();
    raw.push_back(RawEntry{value, to_double(p), p});
  }
  return DistributionBuilder::build(denominator, std::move(raw), /*exact=*/true, std::move(name));
}

ScoreDistribution make_distribution(int64_t denominator,
                                    const std::vector<std::pair<int64_t, double>>& entries,
                                    std::string name) {
  std::vector<RawEntry> raw;
  raw.reserve(entries.size());
  for (const auto& [value, prob] : entries) raw.push_back(RawEntry{value, prob, Rational(0)});
  return DistributionBuilder::build(denominator, std::move(raw), /*exact=*/false, std::move(name));
}

ScoreDistribution win_loss_model() {
  return make_distribution(1, std::vector<std::pair<int64_t, Rational>>{{0, Rational(1, 2)},
                                                                        {1, Rational(1, 2)}},
                           "m1");
}

ScoreDistribution draw_model(const Rational& p_draw) {
  if (!(p_draw > 0 && p_draw < 1)) {
    throw Error(ErrorCode::ValueOutOfRange, "draw probability must lie in (0, 1)");
  }
  Rational side = (1 - p_draw) / 2;
  side.canonicalize();
  return make_distribution(
      2,
      std::vector<std::pair<int64_t, Rational>>{{0, side}, {1, p_draw}, {2, side}},
      "draw:" + fraction_string(p_draw));
}

ScoreDistribution parse_distribution_spec(const std::string& spec) {
  if (spec == "m1") return win_loss_model();
  if (spec.rfind("draw:", 0) == 0) return draw_model(parse_rational(spec.substr(5)));
  if (std::filesystem::exists(spec)) return load_distribution_file(spec);
  throw Error(ErrorCode::ConfigError,
              "unknown distribution spec '" + spec + "' (expected m1, draw:<p>, or a file)");
}

ScoreDistribution load_distribution_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open distribution file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ConfigError, "bad JSON in " + path + ": " + e.what());
  }
  if (!j.contains("denominator") || !j.contains("entries") || !j["entries"].is_array()) {
    throw Error(ErrorCode::ConfigError, "distribution file needs 'denominator' and 'entries'");
  }
  const int64_t q = j["denominator"].get<int64_t>();

  bool exact = true;
  std::vector<std::pair<int64_t, Rational>> exact_entries;
  std::vector<std::pair<int64_t, double>> decimal_entries;
  for (const auto& e : j["entries"]) {
    if (!e.contains("value") || !e.contains("prob")) {
      throw Error(ErrorCode::ConfigError, "entry needs 'value' and 'prob'");
    }
    const int64_t value = e["value"].get<int64_t>();
    if (e["prob"].is_string()) {
      exact_entries.emplace_back(value, parse_rational(e["prob"].get<std::string>()));
      decimal_entries.emplace_back(value, to_double(exact_entries.back().second));
    } else {
      exact = false;
      decimal_entries.emplace_back(value, e["prob"].get<double>());
    }
  }
  const std::string name = std::filesystem::path(path).filename().string();
  if (exact) return make_distribution(q, exact_entries, name);
  return make_distribution(q, decimal_entries, name);
}

} // namespace extremescore
