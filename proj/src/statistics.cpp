#include "extremescore/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "extremescore/common.hpp"

namespace extremescore {

namespace {

void check_k(const ScoreVector& v, int64_t k) {
  if (k < 1 || k > v.n) {
    throw Error(ErrorCode::KOutOfRange,
                "k=" + std::to_string(k) + " outside [1, n=" + std::to_string(v.n) + "]");
  }
}

} // namespace

ScoreSummary order_scores(const ScoreVector& v) {
  ScoreSummary s{v.n, v.q, v.scores};
  std::sort(s.sorted.begin(), s.sorted.end());
  return s;
}

int64_t count_exceed(const ScoreVector& v, int64_t threshold_scaled) {
  int64_t count = 0;
  for (int64_t s : v.scores) {
    if (s > threshold_scaled) ++count;
  }
  return count;
}

int64_t count_tied_pairs_above(const ScoreVector& v, int64_t threshold_scaled) {
  std::unordered_map<int64_t, int64_t> multiplicity;
  for (int64_t s : v.scores) {
    if (s > threshold_scaled) ++multiplicity[s];
  }
  int64_t pairs = 0;
  for (const auto& [value, m] : multiplicity) pairs += m * (m - 1) / 2;
  return pairs;
}

bool top_k_distinct(const ScoreVector& v, int64_t k, std::vector<int64_t>& scratch) {
  check_k(v, k);
  if (k == 1) return true;
  scratch = v.scores;
  // Selection instead of a full sort: k is tiny next to n in the regime of
  // interest.
  const auto split = scratch.begin() + static_cast<size_t>(v.n - k);
  std::nth_element(scratch.begin(), split, scratch.end());
  std::sort(split, scratch.end());
  for (auto it = split; it + 1 != scratch.end(); ++it) {
    if (*it == *(it + 1)) return false;
  }
  return true;
}

bool top_k_distinct(const ScoreVector& v, int64_t k) {
  std::vector<int64_t> scratch;
  return top_k_distinct(v, k, scratch);
}

bool bottom_k_distinct(const ScoreVector& v, int64_t k, std::vector<int64_t>& scratch) {
  check_k(v, k);
  if (k == 1) return true;
  scratch = v.scores;
  const auto split = scratch.begin() + static_cast<size_t>(k - 1);
  std::nth_element(scratch.begin(), split, scratch.end());
  std::sort(scratch.begin(), split + 1);
  for (auto it = scratch.begin(); it != split; ++it) {
    if (*it == *(it + 1)) return false;
  }
  return true;
}

bool bottom_k_distinct(const ScoreVector& v, int64_t k) {
  std::vector<int64_t> scratch;
  return bottom_k_distinct(v, k, scratch);
}

ScoreVector reverse_scores(const ScoreVector& v) {
  ScoreVector r{v.n, v.q, v.scores};
  const int64_t top = v.max_score();
  for (int64_t& s : r.scores) s = top - s;
  return r;
}

int64_t scale_threshold(double t, int64_t q) {
  return static_cast<int64_t>(std::floor(t * static_cast<double>(q)));
}

} // namespace extremescore
