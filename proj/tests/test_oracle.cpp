#include <doctest.h>

#include <vector>

#include "extremescore/common.hpp"
#include "extremescore/oracle.hpp"
#include "extremescore/tilting.hpp"
#include "support/test_oracles.hpp"

using namespace extremescore;

TEST_CASE("three-player win/loss ground truth") {
  const ExactReport r = enumerate_exact(win_loss_model(), 3);
  CHECK(r.p_top_distinct[0] == 1);               // k = 1 is vacuous
  CHECK(r.p_top_distinct[1] == Rational(3, 4));  // top two distinct iff transitive
  CHECK(r.p_top_distinct[2] == Rational(3, 4));

  const auto& at_half = r.at(0); // unscaled t = 1/2
  CHECK(at_half.e_z == Rational(9, 4));
  CHECK(at_half.e_w == Rational(3, 4));
  CHECK(at_half.p_w_positive == Rational(1, 4));

  const auto& at_three_halves = r.at(1); // unscaled t = 3/2
  CHECK(at_three_halves.p_i1 == Rational(1, 4));
  CHECK(at_three_halves.p_i2 == Rational(1, 4));
  CHECK(at_three_halves.p_i1i2 == 0);
  CHECK(at_three_halves.cov_i1i2 == Rational(-1, 16));
}

TEST_CASE("oracle agrees with a standalone eight-outcome enumeration") {
  const ExactReport r = enumerate_exact(win_loss_model(), 3);
  const auto outcomes = test_oracle::m1_three_player_outcomes();
  REQUIRE(outcomes.size() == 8);
  for (int64_t t = -1; t <= 2; ++t) {
    Rational e_z = 0, e_w = 0;
    for (const auto& s : outcomes) {
      int64_t z = 0;
      for (int64_t v : s) z += v > t;
      int64_t w = 0;
      for (size_t i = 0; i < 3; ++i) {
        for (size_t j = i + 1; j < 3; ++j) w += s[i] == s[j] && s[i] > t;
      }
      e_z += Rational(z, 8);
      e_w += Rational(w, 8);
    }
    CHECK(r.at(t).e_z == e_z);
    CHECK(r.at(t).e_w == e_w);
  }
}

TEST_CASE("single-score marginal equals the rational convolution tail") {
  // dual route: P(s_1 > t) from full tournament enumeration must match the
  // tail of the (n-1)-fold iid sum
  for (const ScoreDistribution& d : {win_loss_model(), draw_model(Rational(1, 2))}) {
    const int64_t n = 4;
    const ExactReport r = enumerate_exact(d, n);
    const auto pmf = exact_pmf_rational(d, n - 1);
    for (int64_t t = -1; t <= d.denominator() * (n - 1); ++t) {
      Rational tail = 0;
      for (size_t s = 0; s < pmf.size(); ++s) {
        if (static_cast<int64_t>(s) > t) tail += pmf[s];
      }
      CHECK(r.at(t).p_i1 == tail);
    }
  }
}

TEST_CASE("edge reversal gives exactly equal top and bottom probabilities") {
  for (const ScoreDistribution& d : {win_loss_model(), draw_model(Rational(1, 2))}) {
    for (int64_t n : {2, 3, 4}) {
      const ExactReport r = enumerate_exact(d, n);
      for (int64_t k = 1; k <= n; ++k) {
        CHECK(r.p_top_distinct[static_cast<size_t>(k - 1)] ==
              r.p_bottom_distinct[static_cast<size_t>(k - 1)]);
      }
    }
  }
}

TEST_CASE("negative dependence of exceedance indicators") {
  for (const ScoreDistribution& d : {win_loss_model(), draw_model(Rational(1, 2))}) {
    for (int64_t n : {3, 4}) {
      const ExactReport r = enumerate_exact(d, n);
      for (const auto& stats : r.per_threshold) {
        CHECK(stats.p_i1 == stats.p_i2);
        CHECK(stats.cov_i1i2 <= 0);
        CHECK(stats.var_z <= stats.e_z);
        CHECK(stats.var_z >= 0);
      }
    }
  }
}

TEST_CASE("certifying event is contained in the distinctness event") {
  for (const ScoreDistribution& d : {win_loss_model(), draw_model(Rational(1, 2))}) {
    for (int64_t n : {3, 4}) {
      const ExactReport r = enumerate_exact(d, n);
      for (const auto& stats : r.per_threshold) {
        for (int64_t k = 1; k <= n; ++k) {
          CHECK(stats.p_z_at_least_no_ties[static_cast<size_t>(k - 1)] <=
                r.p_top_distinct[static_cast<size_t>(k - 1)]);
        }
      }
    }
  }
}

TEST_CASE("report invariants") {
  const ExactReport r = enumerate_exact(draw_model(Rational(1, 2)), 4);
  CHECK(r.p_top_distinct[0] == 1);
  for (size_t k = 1; k < r.p_top_distinct.size(); ++k) {
    CHECK(r.p_top_distinct[k] <= r.p_top_distinct[k - 1]); // events are nested
    CHECK(r.p_top_distinct[k] >= 0);
    CHECK(r.p_top_distinct[k] <= 1);
  }
  // t = -1: everyone exceeds, so Z == n with probability one
  const auto& bottom = r.at(-1);
  CHECK(bottom.e_z == r.n);
  CHECK(bottom.var_z == 0);
  CHECK(bottom.p_z_at_least[static_cast<size_t>(r.n - 1)] == 1);
  // t = q(n-1): nobody exceeds
  const auto& top = r.at(r.q * (r.n - 1));
  CHECK(top.e_z == 0);
  CHECK(top.e_w == 0);
}

TEST_CASE("oracle guards") {
  try {
    enumerate_exact(win_loss_model(), 40);
    FAIL("expected StateSpaceTooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StateSpaceTooLarge);
  }
  const ScoreDistribution inexact =
      make_distribution(1, std::vector<std::pair<int64_t, double>>{{0, 0.5}, {1, 0.5}});
  try {
    enumerate_exact(inexact, 3);
    FAIL("expected InexactProbabilities");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InexactProbabilities);
  }
  CHECK_THROWS_AS(enumerate_exact(win_loss_model(), 1), Error);
}

TEST_CASE("monte carlo estimators track the oracle") {
  const OracleComparison cmp =
      oracle_vs_montecarlo(win_loss_model(), 3, 2, 0, 20'000, 20260808);
  CHECK(cmp.rows.size() == 6);
  CHECK(cmp.max_abs_z() <= 4.0);

  const OracleComparison cmp4 =
      oracle_vs_montecarlo(draw_model(Rational(1, 2)), 4, 2, 2, 20'000, 20260808);
  CHECK(cmp4.max_abs_z() <= 4.0);

  try {
    oracle_vs_montecarlo(win_loss_model(), 3, 2, 0, 0, 1);
    FAIL("expected EmptyExperiment");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::EmptyExperiment);
  }
}
