#pragma once

#include <cstdint>
#include <vector>

#include "extremescore/engine.hpp"

namespace extremescore {

struct ScoreSummary {
  int64_t n = 0;
  int64_t q = 1;
  std::vector<int64_t> sorted; // ascending
};

ScoreSummary order_scores(const ScoreVector& v);

// #{j : scores[j] > t}, strict comparison on the scaled lattice.
int64_t count_exceed(const ScoreVector& v, int64_t threshold_scaled);

// Number of unordered pairs tied at a common score strictly above t:
// sum over values x > t of C(multiplicity(x), 2).
int64_t count_tied_pairs_above(const ScoreVector& v, int64_t threshold_scaled);

// True iff the k largest scores are pairwise distinct (k = 1 is vacuous).
bool top_k_distinct(const ScoreVector& v, int64_t k);
bool top_k_distinct(const ScoreVector& v, int64_t k, std::vector<int64_t>& scratch);

// Mirror event on the k smallest scores.
bool bottom_k_distinct(const ScoreVector& v, int64_t k);
bool bottom_k_distinct(const ScoreVector& v, int64_t k, std::vector<int64_t>& scratch);

// Edge-reversed tournament: every score s maps to q(n-1) - s. Involution;
// preserves the conservation invariant and, in law, the whole score vector.
ScoreVector reverse_scores(const ScoreVector& v);

// Lattice conversion for real-valued thresholds: floor(t*q). On the integer
// lattice, {s/q > t} equals {s_scaled > floor(t*q)} whenever t*q is not an
// attained integer; at integral t*q the floor convention applies as-is.
int64_t scale_threshold(double t, int64_t q);

} // namespace extremescore
