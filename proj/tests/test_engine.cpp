#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <sstream>

#include "extremescore/common.hpp"
#include "extremescore/engine.hpp"
#include "support/test_oracles.hpp"

using namespace extremescore;

TEST_CASE("two players share one unit") {
  const ScoreDistribution d = win_loss_model();
  for (uint64_t rep = 0; rep < 50; ++rep) {
    RandomStream stream(11, rep);
    const ScoreVector v = simulate_scores(d, 2, stream);
    const bool ok = (v.scores[0] == 0 && v.scores[1] == 1) ||
                    (v.scores[0] == 1 && v.scores[1] == 0);
    CHECK(ok);
  }
}

TEST_CASE("player count below two is rejected") {
  const ScoreDistribution d = win_loss_model();
  RandomStream stream(1, 0);
  for (int64_t n : {0, 1}) {
    try {
      simulate_scores(d, n, stream);
      FAIL("expected PlayerCountTooSmall");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PlayerCountTooSmall);
    }
  }
}

TEST_CASE("conservation holds for both sampling paths") {
  const ScoreDistribution m1 = win_loss_model();
  const ScoreDistribution draw = draw_model(Rational(1, 3));
  for (uint64_t rep = 0; rep < 200; ++rep) {
    for (const ScoreDistribution* d : {&m1, &draw}) {
      const int64_t n = 2 + static_cast<int64_t>(rep % 9);
      RandomStream stream(123, rep);
      const ScoreVector v = simulate_scores(*d, n, stream);
      CHECK(std::accumulate(v.scores.begin(), v.scores.end(), int64_t{0}) ==
            v.conserved_total());
      for (int64_t s : v.scores) {
        CHECK(s >= 0);
        CHECK(s <= v.max_score());
      }
    }
  }
}

TEST_CASE("all-tied three-player outcome shows up a quarter of the time") {
  const ScoreDistribution d = win_loss_model();
  const int64_t reps = 100'000;
  int64_t cyclic = 0;
  for (int64_t rep = 0; rep < reps; ++rep) {
    RandomStream stream(31337, static_cast<uint64_t>(rep));
    const ScoreVector v = simulate_scores(d, 3, stream);
    if (v.scores[0] == 1 && v.scores[1] == 1 && v.scores[2] == 1) ++cyclic;
  }
  const double freq = static_cast<double>(cyclic) / static_cast<double>(reps);
  const double se = std::sqrt(0.25 * 0.75 / static_cast<double>(reps));
  CHECK(std::abs(freq - 0.25) <= 4 * se);
}

TEST_CASE("degree-only pass reproduces simulate_scores and counts strictly") {
  const ScoreDistribution d = draw_model(Rational(1, 2));
  RandomStream a(77, 3);
  RandomStream b(77, 3);
  const ScoreVector plain = simulate_scores(d, 9, a);
  const DegreeOnlyResult fused = simulate_degree_only(d, 9, b, 8);
  CHECK(plain.scores == fused.scores.scores);

  int64_t manual = 0;
  for (int64_t s : plain.scores) manual += s > 8;
  CHECK(fused.exceed_count == manual);

  RandomStream c(77, 4);
  CHECK(simulate_degree_only(d, 9, c, -1).exceed_count == 9);
  RandomStream e(77, 4);
  CHECK(simulate_degree_only(d, 9, e, d.denominator() * 8).exceed_count == 0);
}

TEST_CASE("identical (d, n, seed, stream) reproduces the tournament") {
  for (const ScoreDistribution& d : {win_loss_model(), draw_model(Rational(1, 4))}) {
    RandomStream a(2718, 5);
    RandomStream b(2718, 5);
    CHECK(simulate_scores(d, 23, a).scores == simulate_scores(d, 23, b).scores);
  }
}

TEST_CASE("win/loss marginal is Binomial(n-1, 1/2)") {
  const ScoreDistribution d = win_loss_model();
  const int64_t n = 11;
  const int64_t reps = 100'000;
  std::vector<int64_t> counts(static_cast<size_t>(n), 0);
  double mean_first = 0.0;
  double mean_last = 0.0;
  for (int64_t rep = 0; rep < reps; ++rep) {
    RandomStream stream(424242, static_cast<uint64_t>(rep));
    const ScoreVector v = simulate_scores(d, n, stream);
    ++counts[static_cast<size_t>(v.scores[0])];
    mean_first += static_cast<double>(v.scores[0]);
    mean_last += static_cast<double>(v.scores[static_cast<size_t>(n - 1)]);
  }
  double chi2 = 0.0;
  for (int64_t s = 0; s < n; ++s) {
    const double expected =
        static_cast<double>(reps) * test_oracle::binomial_half_pmf(n - 1, s);
    const double diff = static_cast<double>(counts[static_cast<size_t>(s)]) - expected;
    chi2 += diff * diff / expected;
  }
  CHECK(chi2 < test_oracle::kChi2Crit10); // 10 dof, significance 1e-3

  // exchangeability: first and last marginal means agree with q(n-1)/2
  mean_first /= static_cast<double>(reps);
  mean_last /= static_cast<double>(reps);
  const double se = std::sqrt(0.25 * static_cast<double>(n - 1) / static_cast<double>(reps));
  CHECK(std::abs(mean_first - 5.0) <= 4 * se);
  CHECK(std::abs(mean_last - 5.0) <= 4 * se);
}

TEST_CASE("two-point supports off the {0,q} corners also conserve") {
  // q=3 with support {1,2}: still a fair coin between mirrored values
  const ScoreDistribution d = make_distribution(
      3, std::vector<std::pair<int64_t, Rational>>{{1, Rational(1, 2)}, {2, Rational(1, 2)}});
  CHECK(d.is_two_point());
  RandomStream stream(9, 0);
  const ScoreVector v = simulate_scores(d, 6, stream);
  CHECK(std::accumulate(v.scores.begin(), v.scores.end(), int64_t{0}) == v.conserved_total());
  for (int64_t s : v.scores) {
    CHECK(s >= 5);  // five matches, at least 1 each
    CHECK(s <= 10); // at most 2 each
  }
}

TEST_CASE("score dump carries its reproduction header") {
  const ScoreDistribution d = win_loss_model();
  RandomStream stream(17, 4);
  const ScoreVector v = simulate_scores(d, 4, stream);
  std::ostringstream os;
  dump_score_vector(os, v, 17, 4);
  const std::string text = os.str();
  CHECK(text.rfind("# n=4 q=1 seed=17 stream_id=4\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
}
