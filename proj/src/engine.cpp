#include "extremescore/engine.hpp"

#include <cassert>
#include <numeric>
#include <ostream>

#include "extremescore/common.hpp"

namespace extremescore {

namespace {

// Symmetric two-point supports are a fair coin, so one RNG word covers 64
// matches. Row player i accumulates via a per-row counter, opponents get the
// complementary value immediately.
void simulate_two_point(const ScoreDistribution& d, std::vector<int64_t>& scores,
                        RandomStream& stream) {
  const int64_t n = static_cast<int64_t>(scores.size());
  const int64_t lo = d.support()[0];
  const int64_t hi = d.support()[1];
  const int64_t span = hi - lo;
  for (int64_t i = 0; i < n; ++i) {
    uint64_t buf = 0;
    int bits = 0;
    int64_t hi_count = 0;
    for (int64_t j = i + 1; j < n; ++j) {
      if (bits == 0) {
        buf = stream.next_u64();
        bits = 64;
      }
      const int64_t b = static_cast<int64_t>(buf & 1u);
      buf >>= 1;
      --bits;
      hi_count += b;
      scores[j] += hi - b * span; // opponent takes q - a
    }
    const int64_t row = n - 1 - i;
    scores[i] += row * lo + hi_count * span;
  }
}

void simulate_generic(const ScoreDistribution& d, std::vector<int64_t>& scores,
                      RandomStream& stream) {
  const int64_t n = static_cast<int64_t>(scores.size());
  const int64_t q = d.denominator();
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t j = i + 1; j < n; ++j) {
      const int64_t a = d.sample_value(stream);
      scores[i] += a;
      scores[j] += q - a;
    }
  }
}

} // namespace

void simulate_scores(const ScoreDistribution& d, int64_t n, RandomStream& stream,
                     ScoreVector& out) {
  if (n < 2) {
    throw Error(ErrorCode::PlayerCountTooSmall, "need at least 2 players, got " + std::to_string(n));
  }
  out.n = n;
  out.q = d.denominator();
  out.scores.assign(static_cast<size_t>(n), 0);
  if (d.is_two_point()) {
    simulate_two_point(d, out.scores, stream);
  } else {
    simulate_generic(d, out.scores, stream);
  }
  assert(std::accumulate(out.scores.begin(), out.scores.end(), int64_t{0}) ==
         out.conserved_total());
}

ScoreVector simulate_scores(const ScoreDistribution& d, int64_t n, RandomStream& stream) {
  ScoreVector v;
  simulate_scores(d, n, stream, v);
  return v;
}

DegreeOnlyResult simulate_degree_only(const ScoreDistribution& d, int64_t n, RandomStream& stream,
                                      int64_t threshold_scaled) {
  DegreeOnlyResult r;
  simulate_scores(d, n, stream, r.scores);
  for (int64_t s : r.scores.scores) {
    if (s > threshold_scaled) ++r.exceed_count;
  }
  return r;
}

void dump_score_vector(std::ostream& os, const ScoreVector& v, uint64_t seed, uint64_t stream_id) {
  os << "# n=" << v.n << " q=" << v.q << " seed=" << seed << " stream_id=" << stream_id << "\n";
  for (int64_t s : v.scores) os << s << "\n";
}

} // namespace extremescore
