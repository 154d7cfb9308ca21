#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "qstatic/equilibria.hpp"
#include "qstatic/errors.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

namespace qstatic {
namespace {

using testing::Rng;

std::array<BilinearPayoff, 2> surfaces(const GamePayoffs& g, const DensityMatrix& rho) {
  const auto ops = payoff_operators(g);
  return bilinear_payoff_coefficients(rho, ops.alice, ops.bob);
}

std::array<BilinearPayoff, 2> surfaces(const GamePayoffs& g, double a2) {
  return surfaces(g, DensityMatrix::entangled_family(a2));
}

// Every returned point has a grid point of small regret nearby and every
// grid point of small regret lies near a returned point.
void check_against_grid(const BilinearPayoff& fa, const BilinearPayoff& fb,
                        const std::vector<NashPoint>& found, int steps = 1000) {
  const double h = 1.0 / steps;
  // The grid point nearest an exact interior equilibrium has regret at most
  // h/2 times the cross coefficient.
  const double slack = 0.5 * h * std::max(std::abs(fa.pq), std::abs(fb.pq)) + 1e-12;
  const auto near = testing::grid_near_equilibria(
      [&](double p, double q) { return std::array<double, 2>{fa(p, q), fb(p, q)}; }, steps, slack);
  ASSERT_FALSE(near.empty());
  for (const auto& pt : found) {
    const bool hit = std::any_of(near.begin(), near.end(), [&](const auto& g) {
      return std::abs(g.first - pt.p_star) <= 2 * h && std::abs(g.second - pt.q_star) <= 2 * h;
    });
    EXPECT_TRUE(hit) << "no grid witness near (" << pt.p_star << ", " << pt.q_star << ")";
  }
  const double radius = 0.05;
  for (const auto& [p, q] : near) {
    const bool covered = std::any_of(found.begin(), found.end(), [&](const NashPoint& pt) {
      if (pt.family) return pt.family->contains(p, q, radius);
      return std::abs(pt.p_star - p) <= radius && std::abs(pt.q_star - q) <= radius;
    });
    EXPECT_TRUE(covered) << "grid point (" << p << ", " << q << ") not near any equilibrium; A "
                         << fa.pq << " " << fa.p << " " << fa.q << " B " << fb.pq << " " << fb.p
                         << " " << fb.q << " found " << found.size();
    if (!covered) break;
  }
}

bool has_point(const std::vector<NashPoint>& pts, double p, double q, double tol = 1e-12) {
  return std::any_of(pts.begin(), pts.end(), [&](const NashPoint& x) {
    return !x.family && std::abs(x.p_star - p) <= tol && std::abs(x.q_star - q) <= tol;
  });
}

TEST(ClassicalMixed, CanonicalParameters) {
  const auto eq = classical_mixed_equilibria(GamePayoffs(3, 2, 1));
  EXPECT_EQ(eq[0].p_star, 1.0);
  EXPECT_EQ(eq[0].q_star, 1.0);
  EXPECT_EQ(eq[0].payoff_a, 3.0);
  EXPECT_EQ(eq[0].payoff_b, 2.0);
  EXPECT_EQ(eq[1].payoff_a, 2.0);
  EXPECT_EQ(eq[1].payoff_b, 3.0);
  EXPECT_NEAR(eq[2].p_star, 2.0 / 3, 1e-15);
  EXPECT_NEAR(eq[2].q_star, 1.0 / 3, 1e-15);
  EXPECT_NEAR(eq[2].payoff_a, 5.0 / 3, 1e-15);
  EXPECT_NEAR(eq[2].payoff_b, 5.0 / 3, 1e-15);
  EXPECT_EQ(eq[2].kind, NashKind::interior);
}

TEST(ClassicalMixed, FiveThreeOne) {
  const GamePayoffs g(5, 3, 1);
  const auto eq = classical_mixed_equilibria(g);
  EXPECT_NEAR(eq[2].p_star, 2.0 / 3, 1e-15);
  EXPECT_NEAR(eq[2].q_star, 1.0 / 3, 1e-15);
  EXPECT_NEAR(eq[2].payoff_a, 7.0 / 3, 1e-15);
  const auto [fa, fb] = bilinear_payoffs(bos_bimatrix(g));
  const auto found = enumerate_bilinear_nash(fa, fb);
  EXPECT_EQ(found.size(), 3u);
  EXPECT_TRUE(has_point(found, 2.0 / 3, 1.0 / 3));
}

TEST(ClassicalMixedProperty, InteriorPayoffOrdering) {
  Rng rng(41);
  for (int n = 0; n < 500; ++n) {
    const auto g = testing::random_bos(rng);
    const auto eq = classical_mixed_equilibria(g);
    EXPECT_GT(eq[2].payoff_a, g.gamma());
    EXPECT_LT(eq[2].payoff_a, g.beta());
    EXPECT_GT(eq[2].p_star, 0.0);
    EXPECT_LT(eq[2].p_star, 1.0);
    EXPECT_GT(eq[2].q_star, 0.0);
    EXPECT_LT(eq[2].q_star, 1.0);
  }
}

TEST(Factorizable, EquilibriaAndFinalStates) {
  const GamePayoffs g(3, 2, 1);
  const auto eq = factorizable_equilibria(g);
  EXPECT_NEAR(eq[2].point.p_star, 2.0 / 3, 1e-15);
  EXPECT_NEAR(eq[2].point.q_star, 1.0 / 3, 1e-15);
  EXPECT_NEAR(eq[2].point.payoff_a, 5.0 / 3, 1e-12);
  EXPECT_NEAR(eq[2].point.payoff_b, 5.0 / 3, 1e-12);
  EXPECT_NEAR(std::abs(eq[0].final_state[Outcome::OO]), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(eq[1].final_state[Outcome::TT]), 1.0, 1e-15);
  const auto probs = projection_probabilities(eq[2].final_state);
  const std::array<double, 4> want{2.0 / 9, 4.0 / 9, 1.0 / 9, 2.0 / 9};
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(probs[k], want[k], 1e-12);
  // Signs of the product state: (+, -, -, +).
  EXPECT_GT(eq[2].final_state[Outcome::OO].real(), 0);
  EXPECT_LT(eq[2].final_state[Outcome::OT].real(), 0);
  EXPECT_LT(eq[2].final_state[Outcome::TO].real(), 0);
  EXPECT_GT(eq[2].final_state[Outcome::TT].real(), 0);
}

TEST(Entangled, EightTenths) {
  const auto eq = entangled_equilibria(GamePayoffs(3, 2, 1), EntangledFamilyState(0.8));
  EXPECT_NEAR(eq[0].payoff_a, 2.8, 1e-12);
  EXPECT_NEAR(eq[0].payoff_b, 2.2, 1e-12);
  EXPECT_NEAR(eq[1].payoff_a, 2.2, 1e-12);
  EXPECT_NEAR(eq[1].payoff_b, 2.8, 1e-12);
  EXPECT_NEAR(eq[2].p_star, 0.6, 1e-12);
  EXPECT_NEAR(eq[2].q_star, 0.4, 1e-12);
  EXPECT_NEAR(eq[2].payoff_a, 1.72, 1e-12);
  EXPECT_NEAR(eq[2].payoff_b, 1.72, 1e-12);
}

TEST(Entangled, UnentangledLimitIsClassical) {
  const GamePayoffs g(3, 2, 1);
  const auto classical = classical_mixed_equilibria(g);
  const auto at_one = entangled_equilibria(g, EntangledFamilyState(1.0));
  for (int i = 0; i < 3; ++i) {
    EXPECT_EQ(at_one[i].p_star, classical[i].p_star);
    EXPECT_EQ(at_one[i].q_star, classical[i].q_star);
    EXPECT_NEAR(at_one[i].payoff_a, classical[i].payoff_a, 1e-15);
    EXPECT_NEAR(at_one[i].payoff_b, classical[i].payoff_b, 1e-15);
  }
}

TEST(Entangled, RejectsBadA2) {
  EXPECT_THROW(EntangledFamilyState(1.1), ConstraintViolation);
  EXPECT_THROW(EntangledFamilyState(-0.01), ConstraintViolation);
}

TEST(EntangledProperty, ReductionOrderingAndOracle) {
  Rng rng(42);
  for (int n = 0; n < 300; ++n) {
    const auto g = testing::random_bos(rng);
    const double a2 = n % 10 == 0 ? (n % 20 == 0 ? 0.0 : 1.0) : testing::uniform(rng);
    const auto eq = entangled_equilibria(g, EntangledFamilyState(a2));
    for (int c = 0; c < 2; ++c) {
      EXPECT_LT(eq[2].payoff_a, eq[c].payoff_a);
      EXPECT_LT(eq[2].payoff_b, eq[c].payoff_b);
    }
    EXPECT_GT(eq[2].p_star, 0.0);
    EXPECT_LT(eq[2].p_star, 1.0);
    const auto [fa, fb] = surfaces(g, a2);
    for (const auto& pt : eq) {
      EXPECT_TRUE(passes_best_response(fa, fb, pt.p_star, pt.q_star, 1e-12 * 100));
      EXPECT_NEAR(fa(pt.p_star, pt.q_star), pt.payoff_a, 1e-9);
      EXPECT_NEAR(fb(pt.p_star, pt.q_star), pt.payoff_b, 1e-9);
    }
    if (a2 == 0.0 || a2 == 1.0) {
      const auto classical = classical_mixed_equilibria(g);
      const int swap = a2 == 0.0 ? 1 : 0;  // a2 = 0 starts from |TT>
      EXPECT_EQ(eq[0].payoff_a, classical[swap].payoff_a);
      EXPECT_EQ(eq[0].payoff_b, classical[swap].payoff_b);
      EXPECT_EQ(eq[1].payoff_a, classical[1 - swap].payoff_a);
      EXPECT_NEAR(eq[2].payoff_a, classical[2].payoff_a, 1e-12 * (1 + std::abs(classical[2].payoff_a)));
    }
  }
}

TEST(EntangledProperty, SymmetricAtMaximalEntanglement) {
  Rng rng(43);
  for (int n = 0; n < 20; ++n) {
    const auto [fa, fb] = surfaces(testing::random_bos(rng), 0.5);
    for (int i = 0; i <= 20; ++i) {
      for (int j = 0; j <= 20; ++j) {
        const double p = i / 20.0, q = j / 20.0;
        EXPECT_NEAR(fa(p, q), fb(q, p), 1e-12 * 10);
      }
    }
  }
}

TEST(Enumerator, ClassicalBattleOfTheSexes) {
  const GamePayoffs g(3, 2, 1);
  const auto [fa, fb] = surfaces(g, DensityMatrix::pure(StateVector::basis(Outcome::OO)));
  const auto found = enumerate_bilinear_nash(fa, fb);
  ASSERT_EQ(found.size(), 3u);
  EXPECT_TRUE(has_point(found, 1, 1));
  EXPECT_TRUE(has_point(found, 0, 0));
  EXPECT_TRUE(has_point(found, 2.0 / 3, 1.0 / 3, 1e-15));
  EXPECT_EQ(found[2].kind, NashKind::interior);
  check_against_grid(fa, fb, found);
}

TEST(Enumerator, MaximallyEntangled) {
  const auto [fa, fb] = surfaces(GamePayoffs(3, 2, 1), 0.5);
  const auto found = enumerate_bilinear_nash(fa, fb);
  ASSERT_EQ(found.size(), 3u);
  EXPECT_TRUE(has_point(found, 1, 1));
  EXPECT_TRUE(has_point(found, 0, 0));
  EXPECT_TRUE(has_point(found, 0.5, 0.5));
  check_against_grid(fa, fb, found);
}

TEST(Enumerator, ConstantPayoffsAreOneFamily) {
  const auto found = enumerate_bilinear_nash({}, {});
  ASSERT_EQ(found.size(), 1u);
  EXPECT_EQ(found[0].kind, NashKind::degenerate_family);
  ASSERT_TRUE(found[0].family);
  EXPECT_EQ(found[0].family->p_min, 0.0);
  EXPECT_EQ(found[0].family->p_max, 1.0);
  EXPECT_EQ(found[0].family->q_min, 0.0);
  EXPECT_EQ(found[0].family->q_max, 1.0);
}

TEST(Enumerator, MatchingPenniesOnlyInterior) {
  Eigen::Matrix2d a;
  a << 1, -1, -1, 1;
  const auto [fa, fb] = bilinear_payoffs(Bimatrix2x2(a, -a));
  const auto found = enumerate_bilinear_nash(fa, fb);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_TRUE(has_point(found, 0.5, 0.5));
  check_against_grid(fa, fb, found);
}

TEST(Enumerator, DominantStrategies) {
  Eigen::Matrix2d a, b;
  a << 3, 0, 5, 1;
  b << 3, 5, 0, 1;
  const auto [fa, fb] = bilinear_payoffs(Bimatrix2x2(a, b));
  const auto found = enumerate_bilinear_nash(fa, fb);
  ASSERT_EQ(found.size(), 1u);
  EXPECT_TRUE(has_point(found, 0, 0));  // strategy index 1 for both: p = q = 0
  check_against_grid(fa, fb, found);
}

TEST(Enumerator, EdgeFamilyReportedOnce) {
  // Alice strictly prefers p = 1; Bob is indifferent everywhere.
  const BilinearPayoff alice{0, 1, 0, 0};
  const BilinearPayoff bob{};
  const auto found = enumerate_bilinear_nash(alice, bob);
  ASSERT_EQ(found.size(), 1u);
  ASSERT_TRUE(found[0].family);
  EXPECT_EQ(found[0].family->p_min, 1.0);
  EXPECT_EQ(found[0].family->p_max, 1.0);
  EXPECT_EQ(found[0].family->q_min, 0.0);
  EXPECT_EQ(found[0].family->q_max, 1.0);
}

TEST(Enumerator, PartialEdgeFamily) {
  // Bob indifferent only along p = 1; Alice wants p = 1 when q >= 0.25.
  const BilinearPayoff alice{4, -1, 0, 0};
  const BilinearPayoff bob{1, 0, -1, 0};
  const auto found = enumerate_bilinear_nash(alice, bob);
  const auto fam = std::find_if(found.begin(), found.end(), [](const NashPoint& x) { return x.family.has_value(); });
  ASSERT_NE(fam, found.end());
  EXPECT_EQ(fam->family->p_min, 1.0);
  EXPECT_NEAR(fam->family->q_min, 0.25, 1e-15);
  EXPECT_EQ(fam->family->q_max, 1.0);
  for (const auto& pt : found) EXPECT_TRUE(passes_best_response(alice, bob, pt.p_star, pt.q_star));
  check_against_grid(alice, bob, found);
}

TEST(Enumerator, InteriorLineFamily) {
  // Alice indifferent everywhere; Bob switches at p = 1/2.
  const BilinearPayoff alice{};
  const BilinearPayoff bob{1, 0, -0.5, 0};
  const auto found = enumerate_bilinear_nash(alice, bob);
  ASSERT_EQ(found.size(), 3u);
  for (const auto& pt : found) {
    ASSERT_TRUE(pt.family);
    EXPECT_EQ(pt.kind, NashKind::degenerate_family);
  }
  check_against_grid(alice, bob, found);
}

TEST(EnumeratorProperty, CertificateOnRandomGames) {
  Rng rng(44);
  for (int n = 0; n < 1000; ++n) {
    const auto g = n % 2 ? testing::random_bimatrix2x2(rng)
                         : Bimatrix2x2(testing::random_int_matrix(rng, 2, 2),
                                       testing::random_int_matrix(rng, 2, 2));
    const auto [fa, fb] = bilinear_payoffs(g);
    const auto found = enumerate_bilinear_nash(fa, fb);
    EXPECT_FALSE(found.empty());  // every finite game has an equilibrium
    for (const auto& pt : found) {
      EXPECT_TRUE(passes_best_response(fa, fb, pt.p_star, pt.q_star, 1e-12 * 10));
      if (pt.family) {
        EXPECT_TRUE(passes_best_response(fa, fb, pt.family->p_max, pt.family->q_max, 1e-12 * 10));
      }
    }
  }
}

TEST(EnumeratorProperty, GridOracleOnRandomGames) {
  Rng rng(45);
  for (int n = 0; n < 20; ++n) {
    const auto [fa, fb] = bilinear_payoffs(testing::random_bimatrix2x2(rng));
    check_against_grid(fa, fb, enumerate_bilinear_nash(fa, fb), 1000);
  }
}

TEST(EnumeratorProperty, MatchesEntangledClosedForms) {
  Rng rng(46);
  for (int n = 0; n < 500; ++n) {
    const auto g = testing::random_bos(rng);
    const double a2 = testing::uniform(rng);
    const auto closed = entangled_equilibria(g, EntangledFamilyState(a2));
    const auto [fa, fb] = surfaces(g, a2);
    const auto found = enumerate_bilinear_nash(fa, fb);
    ASSERT_EQ(found.size(), 3u);
    for (const auto& c : closed) {
      const auto match = std::find_if(found.begin(), found.end(), [&](const NashPoint& f) {
        return std::abs(f.p_star - c.p_star) <= 1e-9 && std::abs(f.q_star - c.q_star) <= 1e-9;
      });
      ASSERT_NE(match, found.end());
      EXPECT_NEAR(match->payoff_a, c.payoff_a, 1e-9);
      EXPECT_NEAR(match->payoff_b, c.payoff_b, 1e-9);
      EXPECT_EQ(match->kind, c.kind);
    }
  }
}

TEST(Rank, InteriorLastAtEightTenths) {
  const auto eq = entangled_equilibria(GamePayoffs(3, 2, 1), EntangledFamilyState(0.8));
  const auto ranked = rank_equilibria({eq.begin(), eq.end()});
  ASSERT_EQ(ranked.order.size(), 3u);
  EXPECT_EQ(ranked.order.back().kind, NashKind::interior);
  EXPECT_EQ(ranked.differences.size(), 3u);
  for (const auto& d : ranked.differences) {
    if (d.second == 2) {
      EXPECT_GT(d.delta_a, 0.0);
      EXPECT_GT(d.delta_b, 0.0);
    }
  }
}

TEST(Rank, MaximalEntanglementTie) {
  const auto eq = entangled_equilibria(GamePayoffs(3, 2, 1), EntangledFamilyState(0.5));
  // Feed (0,0) first; ranking still puts (1,1) ahead.
  const auto ranked = rank_equilibria({eq[2], eq[1], eq[0]});
  EXPECT_EQ(ranked.order[0].p_star, 1.0);
  EXPECT_EQ(ranked.order[1].p_star, 0.0);
  EXPECT_NEAR(ranked.order[0].payoff_a, 2.5, 1e-12);
  EXPECT_NEAR(ranked.order[1].payoff_b, 2.5, 1e-12);
  EXPECT_NEAR(ranked.order[2].payoff_a, 1.75, 1e-12);
  EXPECT_EQ(ranked.differences[0].delta_a, 0.0);
  EXPECT_EQ(ranked.differences[0].delta_b, 0.0);
}

TEST(Rank, PayoffDifferencesMatchClosedForm) {
  const GamePayoffs g(3, 2, 1);
  const double a2 = 0.8;
  const auto eq = entangled_equilibria(g, EntangledFamilyState(a2));
  const auto ranked = rank_equilibria({eq[0], eq[1]});
  // (alpha - beta)(|a|^2 - |b|^2) for Alice, the negative for Bob.
  const double want = (g.alpha() - g.beta()) * (a2 - (1 - a2));
  const auto& d = ranked.differences.at(0);
  const double sign = ranked.order[0].p_star == 1.0 ? 1.0 : -1.0;
  EXPECT_NEAR(sign * d.delta_a, want, 1e-12);
  EXPECT_NEAR(sign * d.delta_b, -want, 1e-12);
}

TEST(Rank, SingletonUnchanged) {
  const NashPoint pt{0.3, 0.7, 1.0, 2.0, NashKind::interior, std::nullopt};
  const auto ranked = rank_equilibria({pt});
  ASSERT_EQ(ranked.order.size(), 1u);
  EXPECT_EQ(ranked.order[0].p_star, 0.3);
  EXPECT_TRUE(ranked.differences.empty());
}

TEST(UniqueSolution, MaximallyEntangled) {
  const auto v = unique_solution(GamePayoffs(3, 2, 1), EntangledFamilyState(0.5));
  ASSERT_TRUE(v.solution);
  EXPECT_NEAR(v.solution->payoff_a, 2.5, 1e-12);
  EXPECT_NEAR(v.solution->payoff_b, 2.5, 1e-12);
  EXPECT_GE(fidelity(StateVector::bell(), DensityMatrix::pure(v.solution->final_state)), 1 - 1e-12);
  EXPECT_GE(v.solution->fidelity, 1 - 1e-12);
  EXPECT_EQ(v.preferences.alice, Preference::indifferent);
  EXPECT_EQ(v.preferences.bob, Preference::indifferent);
}

TEST(UniqueSolution, ConflictWhenAliceFavoured) {
  const auto v = unique_solution(GamePayoffs(3, 2, 1), EntangledFamilyState(0.8));
  EXPECT_FALSE(v.solution);
  EXPECT_EQ(v.preferences.alice, Preference::corner_11);
  EXPECT_EQ(v.preferences.bob, Preference::corner_00);
  EXPECT_NEAR(v.preferences.alice_gain, 0.6, 1e-12);
  EXPECT_NEAR(v.preferences.bob_gain, -0.6, 1e-12);
}

TEST(UniqueSolution, ConflictWhenBobFavoured) {
  const auto v = unique_solution(GamePayoffs(3, 2, 1), EntangledFamilyState(0.2));
  EXPECT_FALSE(v.solution);
  EXPECT_EQ(v.preferences.alice, Preference::corner_00);
  EXPECT_EQ(v.preferences.bob, Preference::corner_11);
}

TEST(UniqueSolution, MergesOnlyWithinTolerance) {
  const GamePayoffs g(3, 2, 1);
  for (double off : {0.0, 1e-13, -1e-13, 9e-13, -9e-13}) {
    EXPECT_TRUE(unique_solution(g, EntangledFamilyState(0.5 + off)).solution) << off;
  }
  for (double off : {3e-12, -3e-12, 1e-9, 1e-6, -1e-6, 0.1}) {
    EXPECT_FALSE(unique_solution(g, EntangledFamilyState(0.5 + off)).solution) << off;
  }
}

}  // namespace
}  // namespace qstatic
