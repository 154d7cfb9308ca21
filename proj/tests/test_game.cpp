#include <gtest/gtest.h>

#include <algorithm>

#include "qstatic/errors.hpp"
#include "qstatic/game.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace qstatic {
namespace {

using testing::Rng;

Eigen::Matrix2d m2(double a, double b, double c, double d) {
  Eigen::Matrix2d m;
  m << a, b, c, d;
  return m;
}

TEST(GamePayoffs, RejectsBrokenOrdering) {
  EXPECT_NO_THROW(GamePayoffs(3, 2, 1));
  EXPECT_THROW(GamePayoffs(2, 2, 1), ConstraintViolation);
  EXPECT_THROW(GamePayoffs(3, 1, 1), ConstraintViolation);
  EXPECT_THROW(GamePayoffs(1, 2, 3), ConstraintViolation);
  EXPECT_THROW(GamePayoffs(3, 2, std::nan("")), ConstraintViolation);
}

TEST(GamePayoffs, MessageNamesViolatedConstraint) {
  try {
    GamePayoffs(2, 2, 1);
    FAIL();
  } catch (const ConstraintViolation& e) {
    EXPECT_NE(std::string(e.what()).find("alpha > beta"), std::string::npos);
  }
  try {
    GamePayoffs(3, 1, 1);
    FAIL();
  } catch (const ConstraintViolation& e) {
    EXPECT_NE(std::string(e.what()).find("beta > gamma"), std::string::npos);
  }
}

TEST(BosBimatrix, PlacesEntries) {
  const auto g = bos_bimatrix(GamePayoffs(3, 2, 1));
  EXPECT_EQ(g.payoff_a, m2(3, 1, 1, 2));
  EXPECT_EQ(g.payoff_b, m2(2, 1, 1, 3));
  EXPECT_EQ(bos_bimatrix(GamePayoffs(2, 1, 0)).payoff_a, m2(2, 0, 0, 1));
  EXPECT_EQ(bos_bimatrix(GamePayoffs(5, 3, 0)).payoff_b, m2(3, 0, 0, 5));
}

TEST(StrategyLabels, DefaultsAndDistinctness) {
  StrategyLabels labels;
  EXPECT_EQ(labels.label(Player::alice, 0).name, "O");
  EXPECT_EQ(labels.label(Player::bob, 1).name, "T");
  EXPECT_THROW(StrategyLabels({"O", "O"}, {"O", "T"}), ConstraintViolation);
  EXPECT_NO_THROW(StrategyLabels({"Opera", "TV"}, {"Opera", "TV"}));
}

TEST(Bimatrix, ValidatesShape) {
  EXPECT_THROW(Bimatrix(Eigen::MatrixXd(2, 2), Eigen::MatrixXd(2, 3)), ConstraintViolation);
  EXPECT_THROW(Bimatrix(Eigen::MatrixXd(0, 2), Eigen::MatrixXd(0, 2)), ConstraintViolation);
  Eigen::MatrixXd inf = Eigen::MatrixXd::Zero(1, 1);
  inf(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_THROW(Bimatrix(inf, inf), ConstraintViolation);
}

TEST(MixProbabilities, RangeChecked) {
  EXPECT_NO_THROW(MixProbabilities(0, 1));
  EXPECT_THROW(MixProbabilities(-0.1, 0.5), ConstraintViolation);
  EXPECT_THROW(MixProbabilities(0.5, 1.0001), ConstraintViolation);
}

TEST(Elimination, BattleOfTheSexesHasNoDominatedStrategies) {
  const auto r = eliminate_strictly_dominated(bos_bimatrix(GamePayoffs(3, 2, 1)).general());
  EXPECT_TRUE(r.trace.empty());
  EXPECT_EQ(r.survivors_a, (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(r.survivors_b, (std::vector<std::size_t>{0, 1}));
}

TEST(Elimination, RowDominance) {
  const Bimatrix2x2 g(m2(1, 1, 0, 0), m2(0, 0, 0, 0));
  const auto r = eliminate_strictly_dominated(g.general());
  ASSERT_FALSE(r.trace.empty());
  EXPECT_EQ(r.trace[0].player, Player::alice);
  EXPECT_EQ(r.trace[0].strategy, 1u);
  EXPECT_EQ(r.trace[0].dominated_by, 0u);
  EXPECT_EQ(r.survivors_a, (std::vector<std::size_t>{0}));
}

TEST(Elimination, PrisonersDilemmaLeavesDefection) {
  // Oracle: row 1 beats row 0 in both columns and column 1 beats column 0 in
  // both rows, so (1,1) is the only survivor.
  const Eigen::Matrix2d a = m2(3, 0, 5, 1);
  const Eigen::Matrix2d b = m2(3, 5, 0, 1);
  ASSERT_TRUE((a.row(1).array() > a.row(0).array()).all());
  ASSERT_TRUE((b.col(1).array() > b.col(0).array()).all());

  const auto r = eliminate_strictly_dominated(Bimatrix(a, b));
  EXPECT_EQ(r.survivors_a, (std::vector<std::size_t>{1}));
  EXPECT_EQ(r.survivors_b, (std::vector<std::size_t>{1}));
  ASSERT_EQ(r.trace.size(), 2u);
  EXPECT_EQ(r.trace[0].player, Player::alice);
  EXPECT_EQ(r.trace[1].player, Player::bob);
}

TEST(Elimination, WeakDominanceIsKept) {
  // Row 1 ties row 0 in column 0, so it is only weakly dominated.
  const auto r = eliminate_strictly_dominated(Bimatrix2x2(m2(1, 2, 1, 0), m2(0, 0, 0, 0)).general());
  EXPECT_TRUE(r.trace.empty());
}

TEST(Elimination, IteratesThroughRectangularGame) {
  // Bob drops columns 1 and 2 first; only then is Alice's row 0 dominated.
  Eigen::MatrixXd a(2, 3), b(2, 3);
  a << 1, 1, 9,
       2, 2, 0;
  b << 2, 1, 0,
       2, 1, 0;
  const auto r = eliminate_strictly_dominated(Bimatrix(a, b));
  ASSERT_EQ(r.trace.size(), 3u);
  EXPECT_EQ(r.trace[0].player, Player::bob);
  EXPECT_EQ(r.trace[0].strategy, 1u);
  EXPECT_EQ(r.trace[1].player, Player::bob);
  EXPECT_EQ(r.trace[1].strategy, 2u);
  EXPECT_EQ(r.trace[2].player, Player::alice);
  EXPECT_EQ(r.survivors_a, (std::vector<std::size_t>{1}));
  EXPECT_EQ(r.survivors_b, (std::vector<std::size_t>{0}));
}

TEST(PureNash, BattleOfTheSexes) {
  const auto eq = pure_nash(bos_bimatrix(GamePayoffs(3, 2, 1)).general());
  ASSERT_EQ(eq.size(), 2u);
  EXPECT_EQ(eq[0].row, 0u);
  EXPECT_EQ(eq[0].col, 0u);
  EXPECT_EQ(eq[1].row, 1u);
  EXPECT_EQ(eq[1].col, 1u);
  EXPECT_EQ(eq[0].payoff_a, 3.0);
  EXPECT_EQ(eq[1].payoff_b, 3.0);
}

TEST(PureNash, ConstantGameEveryProfile) {
  const auto ones = m2(1, 1, 1, 1);
  EXPECT_EQ(pure_nash(Bimatrix(ones, ones)).size(), 4u);
}

TEST(PureNash, MatchingPenniesHasNone) {
  const auto a = m2(1, -1, -1, 1);
  ASSERT_TRUE(testing::brute_force_pure_nash(a, -a).empty());
  EXPECT_TRUE(pure_nash(Bimatrix(a, -a)).empty());
}

TEST(ExpectedPayoffs, CornersAndInterior) {
  const auto g = bos_bimatrix(GamePayoffs(3, 2, 1));
  const auto oo = expected_payoffs(g, {1, 1});
  EXPECT_EQ(oo.a, 3.0);
  EXPECT_EQ(oo.b, 2.0);
  const auto tt = expected_payoffs(g, {0, 0});
  EXPECT_EQ(tt.a, 2.0);
  EXPECT_EQ(tt.b, 3.0);
  const auto mixed = expected_payoffs(g, {2.0 / 3.0, 1.0 / 3.0});
  EXPECT_NEAR(mixed.a, 5.0 / 3.0, 1e-12);
  EXPECT_NEAR(mixed.b, 5.0 / 3.0, 1e-12);
}

TEST(ExpectedPayoffs, MatchesBattleOfTheSexesClosedForm) {
  Rng rng(11);
  for (int n = 0; n < 200; ++n) {
    const auto params = testing::random_bos(rng);
    const double al = params.alpha(), be = params.beta(), ga = params.gamma();
    const double p = testing::uniform(rng), q = testing::uniform(rng);
    const auto got = expected_payoffs(bos_bimatrix(params), {p, q});
    const double want_a = p * (q * (al - 2 * ga + be) + ga - be) + be + q * (ga - be);
    const double want_b = q * (p * (al - 2 * ga + be) + ga - al) + al + p * (ga - al);
    EXPECT_NEAR(got.a, want_a, 1e-12 * (1 + std::abs(want_a)) * 10);
    EXPECT_NEAR(got.b, want_b, 1e-12 * (1 + std::abs(want_b)) * 10);
  }
}

TEST(ExpectedPayoffsProperty, AffineInOwnProbability) {
  Rng rng(1);
  for (int n = 0; n < 500; ++n) {
    const auto g = testing::random_bimatrix2x2(rng);
    const double q = testing::uniform(rng);
    const double p0 = testing::uniform(rng), p1 = testing::uniform(rng);
    const double pm = 0.5 * (p0 + p1);
    const double mid = expected_payoffs(g, {pm, q}).a;
    const double avg = 0.5 * (expected_payoffs(g, {p0, q}).a + expected_payoffs(g, {p1, q}).a);
    EXPECT_NEAR(mid, avg, 1e-12 * 20);

    const double p = testing::uniform(rng);
    const double q0 = testing::uniform(rng), q1 = testing::uniform(rng);
    const double mid_b = expected_payoffs(g, {p, 0.5 * (q0 + q1)}).b;
    const double avg_b = 0.5 * (expected_payoffs(g, {p, q0}).b + expected_payoffs(g, {p, q1}).b);
    EXPECT_NEAR(mid_b, avg_b, 1e-12 * 20);
  }
}

TEST(ExpectedPayoffsProperty, CornersAreExactEntries) {
  Rng rng(2);
  for (int n = 0; n < 200; ++n) {
    const auto g = testing::random_bimatrix2x2(rng);
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        const auto e = expected_payoffs(g, {i == 0 ? 1.0 : 0.0, j == 0 ? 1.0 : 0.0});
        EXPECT_EQ(e.a, g.payoff_a(i, j));
        EXPECT_EQ(e.b, g.payoff_b(i, j));
      }
    }
  }
}

TEST(BilinearPayoffs, AgreeWithExpectedPayoffs) {
  Rng rng(3);
  for (int n = 0; n < 200; ++n) {
    const auto g = testing::random_bimatrix2x2(rng);
    const auto [fa, fb] = bilinear_payoffs(g);
    const double p = testing::uniform(rng), q = testing::uniform(rng);
    const auto e = expected_payoffs(g, {p, q});
    EXPECT_NEAR(fa(p, q), e.a, 1e-12 * 20);
    EXPECT_NEAR(fb(p, q), e.b, 1e-12 * 20);
  }
}

TEST(PureNashProperty, AgreesWithBruteForce) {
  Rng rng(4);
  for (int n = 0; n < 1000; ++n) {
    const Eigen::MatrixXd a = testing::random_int_matrix(rng, 2, 2);
    const Eigen::MatrixXd b = testing::random_int_matrix(rng, 2, 2);
    std::set<std::pair<std::size_t, std::size_t>> got;
    for (const auto& e : pure_nash(Bimatrix(a, b))) got.emplace(e.row, e.col);
    EXPECT_EQ(got, testing::brute_force_pure_nash(a, b));
  }
}

TEST(EliminationProperty, EliminatedStrategiesNeverInPureNash) {
  Rng rng(5);
  for (int n = 0; n < 1000; ++n) {
    const Eigen::Index k = n % 2 == 0 ? 2 : 3;
    const Bimatrix game(testing::random_int_matrix(rng, k, k), testing::random_int_matrix(rng, k, k));
    const auto elim = eliminate_strictly_dominated(game);
    for (const auto& e : pure_nash(game)) {
      for (const auto& gone : elim.trace) {
        const std::size_t used = gone.player == Player::alice ? e.row : e.col;
        EXPECT_NE(used, gone.strategy);
      }
    }
    // A singleton survivor set is the unique pure equilibrium.
    if (elim.survivors_a.size() == 1 && elim.survivors_b.size() == 1) {
      const auto eq = pure_nash(game);
      ASSERT_EQ(eq.size(), 1u);
      EXPECT_EQ(eq[0].row, elim.survivors_a[0]);
      EXPECT_EQ(eq[0].col, elim.survivors_b[0]);
    }
  }
}

TEST(EliminationProperty, SurvivorsAreNotStrictlyDominated) {
  Rng rng(6);
  for (int n = 0; n < 300; ++n) {
    const Bimatrix game(testing::random_int_matrix(rng, 3, 3), testing::random_int_matrix(rng, 3, 3));
    const auto r = eliminate_strictly_dominated(game);
    for (auto s : r.survivors_a) {
      for (auto t : r.survivors_a) {
        if (s == t) continue;
        bool dominated = true;
        for (auto j : r.survivors_b) {
          dominated = dominated && game.payoff_a(s, j) < game.payoff_a(t, j);
        }
        EXPECT_FALSE(dominated);
      }
    }
    EXPECT_EQ(r.survivors_a.size() + r.survivors_b.size() + r.trace.size(), 6u);
  }
}

}  // namespace
}  // namespace qstatic
