#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "extremescore/distribution.hpp"

namespace extremescore {

// Scaled per-player totals of one simulated tournament. The conserved total
// q * n(n-1)/2 holds exactly because every match hands out q units.
struct ScoreVector {
  int64_t n = 0;
  int64_t q = 1;
  std::vector<int64_t> scores;

  int64_t max_score() const { return q * (n - 1); }
  int64_t conserved_total() const { return q * n * (n - 1) / 2; }
};

// Streams over the C(n,2) pairs in row-major order, one draw per pair; the
// match matrix is never materialized. Deterministic in (d, n, stream).
ScoreVector simulate_scores(const ScoreDistribution& d, int64_t n, RandomStream& stream);

// Same contract, reusing the caller's storage across replications.
void simulate_scores(const ScoreDistribution& d, int64_t n, RandomStream& stream,
                     ScoreVector& out);

struct DegreeOnlyResult {
  ScoreVector scores;
  int64_t exceed_count = 0; // #{i : scores[i] > threshold}, strict
};

// Fused simulate-and-count pass; scores are identical to simulate_scores
// under the same stream.
DegreeOnlyResult simulate_degree_only(const ScoreDistribution& d, int64_t n, RandomStream& stream,
                                      int64_t threshold_scaled);

// Debug dump: '#'-prefixed header with n, q, seed, stream_id, then one score
// per line.
void dump_score_vector(std::ostream& os, const ScoreVector& v, uint64_t seed, uint64_t stream_id);

} // namespace extremescore
