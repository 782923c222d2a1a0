#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "extremescore/common.hpp"
#include "extremescore/statistics.hpp"
#include "support/test_oracles.hpp"

using namespace extremescore;

namespace {

ScoreVector make_vector(int64_t q, std::vector<int64_t> scores) {
  ScoreVector v;
  v.n = static_cast<int64_t>(scores.size());
  v.q = q;
  v.scores = std::move(scores);
  return v;
}

} // namespace

TEST_CASE("ordering is a sorted permutation") {
  const ScoreVector v = make_vector(1, {2, 0, 1});
  CHECK(order_scores(v).sorted == std::vector<int64_t>{0, 1, 2});
  CHECK(order_scores(make_vector(1, {1, 1, 1})).sorted == std::vector<int64_t>{1, 1, 1});

  std::mt19937 gen(7);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<int64_t> scores(10);
    for (auto& s : scores) s = static_cast<int64_t>(gen() % 6);
    ScoreVector x = make_vector(1, scores);
    auto sorted = order_scores(x).sorted;
    CHECK(std::is_sorted(sorted.begin(), sorted.end()));
    auto expect = scores;
    std::sort(expect.begin(), expect.end());
    CHECK(sorted == expect); // multiset equality
    std::shuffle(scores.begin(), scores.end(), gen);
    CHECK(order_scores(make_vector(1, scores)).sorted == expect);
  }
}

TEST_CASE("exceedance count is strict") {
  const ScoreVector v = make_vector(1, {0, 1, 2});
  CHECK(count_exceed(v, 1) == 1);
  CHECK(count_exceed(make_vector(1, {1, 1, 1}), 0) == 3);
  CHECK(count_exceed(make_vector(1, {1, 1, 1}), 1) == 0);
  CHECK(count_exceed(make_vector(1, {2, 1, 0}), 1) == 1); // transitive triple, t = 1
}

TEST_CASE("tied pairs above a threshold") {
  const ScoreVector v = make_vector(1, {2, 2, 1, 1, 0});
  CHECK(count_tied_pairs_above(v, 0) == 2);
  CHECK(count_tied_pairs_above(v, 1) == 1);
  CHECK(count_tied_pairs_above(make_vector(1, {1, 1, 1}), 0) == 3);
}

TEST_CASE("top-k distinctness") {
  const ScoreVector v = make_vector(1, {3, 2, 2, 1});
  CHECK(top_k_distinct(v, 2));
  CHECK_FALSE(top_k_distinct(v, 3));
  CHECK(top_k_distinct(v, 1));
  CHECK(top_k_distinct(make_vector(1, {5, 5, 5}), 1)); // vacuous

  try {
    top_k_distinct(v, 0);
    FAIL("expected KOutOfRange");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::KOutOfRange);
  }
  CHECK_THROWS_AS(top_k_distinct(v, 5), Error);
}

TEST_CASE("bottom-k distinctness mirrors top-k under reversal") {
  CHECK(bottom_k_distinct(make_vector(1, {3, 2, 2, 1}), 2));
  CHECK_FALSE(bottom_k_distinct(make_vector(1, {0, 0, 3, 3}), 2));

  std::mt19937 gen(11);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<int64_t> scores(6);
    for (auto& s : scores) s = static_cast<int64_t>(gen() % 5);
    const ScoreVector v = make_vector(1, scores);
    for (int64_t k = 1; k <= v.n; ++k) {
      CHECK(bottom_k_distinct(v, k) == top_k_distinct(reverse_scores(v), k));
    }
  }
}

TEST_CASE("edge reversal is an involution that preserves conservation") {
  const ScoreVector v = make_vector(1, {3, 2, 1, 0});
  CHECK(reverse_scores(v).scores == std::vector<int64_t>{0, 1, 2, 3});

  std::mt19937 gen(13);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<int64_t> scores(5);
    int64_t total = 0;
    for (auto& s : scores) {
      s = static_cast<int64_t>(gen() % 9);
      total += s;
    }
    (void)total;
    const ScoreVector x = make_vector(2, scores);
    const ScoreVector rr = reverse_scores(reverse_scores(x));
    CHECK(rr.scores == x.scores);
  }

  // a genuine tournament keeps its conserved total after reversal
  const ScoreVector t = make_vector(1, {2, 1, 0}); // transitive triple
  const ScoreVector rev = reverse_scores(t);
  CHECK(rev.scores[0] + rev.scores[1] + rev.scores[2] == t.conserved_total());
}

TEST_CASE("no ties above t plus enough exceeders certifies top-k distinct") {
  std::mt19937 gen(17);
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<int64_t> scores(7);
    for (auto& s : scores) s = static_cast<int64_t>(gen() % 8);
    const ScoreVector v = make_vector(1, scores);
    const int64_t t = static_cast<int64_t>(gen() % 10) - 1;
    const int64_t z = count_exceed(v, t);
    const int64_t w = count_tied_pairs_above(v, t);
    for (int64_t k = 1; k <= std::min<int64_t>(z, v.n); ++k) {
      if (w == 0) CHECK(top_k_distinct(v, k));
    }
  }
}

TEST_CASE("counts are non-increasing in the threshold") {
  std::mt19937 gen(19);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<int64_t> scores(8);
    for (auto& s : scores) s = static_cast<int64_t>(gen() % 10);
    const ScoreVector v = make_vector(1, scores);
    for (int64_t t = -1; t < 10; ++t) {
      CHECK(count_exceed(v, t) >= count_exceed(v, t + 1));
      CHECK(count_tied_pairs_above(v, t) >= count_tied_pairs_above(v, t + 1));
    }
  }
}

TEST_CASE("reversal preserves the law of the score vector") {
  // Three-player win/loss law: each transitive labeling has mass 1/8, the
  // all-tied vector mass 1/4. Reversed samples must fit the same law.
  const ScoreDistribution d = win_loss_model();
  const int64_t reps = 100'000;
  std::map<std::vector<int64_t>, int64_t> counts;
  for (int64_t rep = 0; rep < reps; ++rep) {
    RandomStream stream(8888, static_cast<uint64_t>(rep));
    counts[reverse_scores(simulate_scores(d, 3, stream)).scores] += 1;
  }
  std::map<std::vector<int64_t>, double> expected;
  for (const auto& outcome : test_oracle::m1_three_player_outcomes()) {
    expected[outcome] += 0.125;
  }
  REQUIRE(expected.size() == 7);
  double chi2 = 0.0;
  for (const auto& [vec, p] : expected) {
    const double exp_count = p * static_cast<double>(reps);
    const double diff = static_cast<double>(counts[vec]) - exp_count;
    chi2 += diff * diff / exp_count;
  }
  CHECK(chi2 < test_oracle::kChi2Crit6); // 6 dof, significance 1e-3
}

TEST_CASE("threshold scaling follows the floor convention") {
  CHECK(scale_threshold(0.5, 1) == 0);
  CHECK(scale_threshold(1.5, 2) == 3);
  CHECK(scale_threshold(60.0, 1) == 60);
  CHECK(scale_threshold(-0.25, 2) == -1);
  CHECK(scale_threshold(-1.0, 1) == -1);
  // strict '>' equivalence on the lattice: s/q > t iff s > floor(t*q) when
  // t*q is non-integral
  const int64_t q = 2;
  for (double t : {0.3, 0.7, 1.1, 2.9}) {
    const int64_t ts = scale_threshold(t, q);
    for (int64_t s = 0; s <= 8; ++s) {
      CHECK((static_cast<double>(s) / 2.0 > t) == (s > ts));
    }
  }
}
