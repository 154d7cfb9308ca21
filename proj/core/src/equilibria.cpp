#include "qstatic/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qstatic/errors.hpp"

namespace qstatic {

namespace {

constexpr double kPositionTolerance = 1e-12;

struct Interval {
  double lo;
  double hi;
};

// {x in [0,1] : sign * (slope * x + intercept) >= -tol}.
std::optional<Interval> where_nonnegative(double slope, double intercept, double sign) {
  const double s = sign * slope;
  const double c = sign * intercept;
  if (std::abs(s) <= kSlopeTolerance) {
    if (c >= -kSlopeTolerance) return Interval{0.0, 1.0};
    return std::nullopt;
  }
  const double root = -c / s;
  if (s > 0.0) {
    if (root > 1.0) return std::nullopt;
    return Interval{std::max(0.0, root), 1.0};
  }
  if (root < 0.0) return std::nullopt;
  return Interval{0.0, std::min(1.0, root)};
}

// True when `own` is a best response given the own-strategy slope.
bool is_best_response(double own, double slope) {
  if (std::abs(slope) <= kSlopeTolerance) return true;
  if (own == 1.0) return slope >= 0.0;
  if (own == 0.0) return slope <= 0.0;
  return false;
}

bool in_unit(double x) { return x >= -kPositionTolerance && x <= 1.0 + kPositionTolerance; }

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

bool is_corner(double p, double q) {
  return (p == 0.0 || p == 1.0) && (q == 0.0 || q == 1.0);
}

NashPoint make_point(const BilinearPayoff& alice, const BilinearPayoff& bob, double p, double q) {
  NashPoint pt;
  pt.p_star = p;
  pt.q_star = q;
  pt.payoff_a = alice(p, q);
  pt.payoff_b = bob(p, q);
  pt.kind = is_corner(p, q) ? NashKind::corner : NashKind::interior;
  return pt;
}

NashPoint make_family(const BilinearPayoff& alice, const BilinearPayoff& bob,
                      const FamilyRegion& region) {
  NashPoint pt = make_point(alice, bob, region.p_min, region.q_min);
  pt.kind = NashKind::degenerate_family;
  pt.family = region;
  return pt;
}

}  // namespace

std::string to_string(NashKind kind) {
  switch (kind) {
    case NashKind::corner:
      return "corner";
    case NashKind::interior:
      return "interior";
    case NashKind::degenerate_family:
      return "degenerate-family";
  }
  return "unknown";
}

std::string to_string(Preference preference) {
  switch (preference) {
    case Preference::corner_11:
      return "(1,1)";
    case Preference::corner_00:
      return "(0,0)";
    case Preference::indifferent:
      return "indifferent";
  }
  return "unknown";
}

bool FamilyRegion::contains(double p, double q, double tol) const {
  return p >= p_min - tol && p <= p_max + tol && q >= q_min - tol && q <= q_max + tol;
}

bool FamilyRegion::contains(const FamilyRegion& other, double tol) const {
  return contains(other.p_min, other.q_min, tol) && contains(other.p_max, other.q_max, tol);
}

EntangledFamilyState::EntangledFamilyState(double a2) : a2_(a2) {
  if (!(a2 >= 0.0 && a2 <= 1.0)) {
    std::ostringstream msg;
    msg << "initial_state: a2 must lie in [0, 1] (got " << a2 << ")";
    throw ConstraintViolation(msg.str());
  }
}

std::array<NashPoint, 3> classical_mixed_equilibria(const GamePayoffs& params) {
  const double al = params.alpha();
  const double be = params.beta();
  const double ga = params.gamma();
  const double s = params.spread();
  const double mixed = (al * be - ga * ga) / s;
  return {NashPoint{1.0, 1.0, al, be, NashKind::corner, std::nullopt},
          NashPoint{0.0, 0.0, be, al, NashKind::corner, std::nullopt},
          NashPoint{(al - ga) / s, (be - ga) / s, mixed, mixed, NashKind::interior, std::nullopt}};
}

std::array<FactorizableEquilibrium, 3> factorizable_equilibria(const GamePayoffs& params) {
  const auto classical = classical_mixed_equilibria(params);
  auto build = [&](const NashPoint& c) {
    const double a2 = c.p_star;
    const double c2 = c.q_star;
    const LocalUnitary alice(std::sqrt(a2), std::sqrt(1.0 - a2));
    const LocalUnitary bob(std::sqrt(c2), std::sqrt(1.0 - c2));
    const auto payoffs = payoffs_factorizable(params, a2, c2);
    NashPoint pt{a2, c2, payoffs.a, payoffs.b, c.kind, std::nullopt};
    return FactorizableEquilibrium{
        pt, apply_local_unitaries(alice, bob, StateVector::basis(Outcome::OO))};
  };
  return {build(classical[0]), build(classical[1]), build(classical[2])};
}

std::array<NashPoint, 3> entangled_equilibria(const GamePayoffs& params,
                                              const EntangledFamilyState& state) {
  const double al = params.alpha();
  const double be = params.beta();
  const double ga = params.gamma();
  const double s = params.spread();
  const double a2 = state.a2();
  const double b2 = state.b2();
  const double p3 = ((al - ga) * a2 + (be - ga) * b2) / s;
  const double q3 = ((al - ga) * b2 + (be - ga) * a2) / s;
  const double mixed = (al * be + (al - be) * (al - be) * a2 * b2 - ga * ga) / s;
  return {NashPoint{1.0, 1.0, al * a2 + be * b2, be * a2 + al * b2, NashKind::corner,
                    std::nullopt},
          NashPoint{0.0, 0.0, be * a2 + al * b2, al * a2 + be * b2, NashKind::corner,
                    std::nullopt},
          NashPoint{p3, q3, mixed, mixed, NashKind::interior, std::nullopt}};
}

bool passes_best_response(const BilinearPayoff& alice, const BilinearPayoff& bob, double p,
                          double q, double tol) {
  const double pa = alice(p, q);
  const double pb = bob(p, q);
  return pa >= alice(0.0, q) - tol && pa >= alice(1.0, q) - tol && pb >= bob(p, 0.0) - tol &&
         pb >= bob(p, 1.0) - tol;
}

std::vector<NashPoint> enumerate_bilinear_nash(const BilinearPayoff& alice,
                                               const BilinearPayoff& bob) {
  std::vector<FamilyRegion> families;
  auto add_family = [&](FamilyRegion r) {
    for (const auto& f : families) {
      if (f.contains(r, kPositionTolerance)) return;
    }
    std::erase_if(families, [&](const FamilyRegion& f) { return r.contains(f, kPositionTolerance); });
    families.push_back(r);
  };

  const bool alice_flat = std::abs(alice.pq) <= kSlopeTolerance && std::abs(alice.p) <= kSlopeTolerance;
  const bool bob_flat = std::abs(bob.pq) <= kSlopeTolerance && std::abs(bob.q) <= kSlopeTolerance;

  if (alice_flat && bob_flat) {
    add_family({0.0, 1.0, 0.0, 1.0});
  }
  // Bob indifferent along the edge p = e: every q at which Alice still wants e.
  for (double e : {1.0, 0.0}) {
    if (std::abs(bob.slope_in_q(e)) > kSlopeTolerance) continue;
    const double sign = e == 1.0 ? 1.0 : -1.0;
    if (auto iv = where_nonnegative(alice.pq, alice.p, sign); iv && iv->hi - iv->lo > kPositionTolerance) {
      add_family({e, e, iv->lo, iv->hi});
    }
  }
  // Alice indifferent along the edge q = e.
  for (double e : {1.0, 0.0}) {
    if (std::abs(alice.slope_in_p(e)) > kSlopeTolerance) continue;
    const double sign = e == 1.0 ? 1.0 : -1.0;
    if (auto iv = where_nonnegative(bob.pq, bob.q, sign); iv && iv->hi - iv->lo > kPositionTolerance) {
      add_family({iv->lo, iv->hi, e, e});
    }
  }
  // One player indifferent everywhere, the other only on a single line.
  if (alice_flat && std::abs(bob.pq) > kSlopeTolerance) {
    const double p0 = -bob.q / bob.pq;
    if (in_unit(p0)) add_family({clamp_unit(p0), clamp_unit(p0), 0.0, 1.0});
  }
  if (bob_flat && std::abs(alice.pq) > kSlopeTolerance) {
    const double q0 = -alice.p / alice.pq;
    if (in_unit(q0)) add_family({0.0, 1.0, clamp_unit(q0), clamp_unit(q0)});
  }

  std::vector<NashPoint> out;
  auto add_point = [&](double p, double q) {
    for (const auto& f : families) {
      if (f.contains(p, q, kPositionTolerance)) return;
    }
    for (const auto& existing : out) {
      if (std::abs(existing.p_star - p) <= kPositionTolerance &&
          std::abs(existing.q_star - q) <= kPositionTolerance) {
        return;
      }
    }
    out.push_back(make_point(alice, bob, p, q));
  };

  const std::array<std::array<double, 2>, 4> corners{{{1.0, 1.0}, {0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}}};
  for (const auto& [p, q] : corners) {
    if (is_best_response(p, alice.slope_in_p(q)) && is_best_response(q, bob.slope_in_q(p))) {
      add_point(p, q);
    }
  }
  if (std::abs(alice.pq) > kSlopeTolerance && std::abs(bob.pq) > kSlopeTolerance) {
    const double q0 = -alice.p / alice.pq;
    const double p0 = -bob.q / bob.pq;
    if (in_unit(p0) && in_unit(q0)) add_point(clamp_unit(p0), clamp_unit(q0));
  }

  for (const auto& f : families) out.push_back(make_family(alice, bob, f));
  return out;
}

RankedEquilibria rank_equilibria(std::vector<NashPoint> points) {
  auto better = [](const NashPoint& x, const NashPoint& y) {
    const double min_x = std::min(x.payoff_a, x.payoff_b);
    const double min_y = std::min(y.payoff_a, y.payoff_b);
    if (min_x != min_y) return min_x > min_y;
    const double sum_x = x.payoff_a + x.payoff_b;
    const double sum_y = y.payoff_a + y.payoff_b;
    if (sum_x != sum_y) return sum_x > sum_y;
    if (x.p_star != y.p_star) return x.p_star > y.p_star;
    return x.q_star > y.q_star;
  };
  std::stable_sort(points.begin(), points.end(), better);

  RankedEquilibria ranked;
  ranked.order = std::move(points);
  for (std::size_t i = 0; i < ranked.order.size(); ++i) {
    for (std::size_t j = i + 1; j < ranked.order.size(); ++j) {
      ranked.differences.push_back({i, j, ranked.order[i].payoff_a - ranked.order[j].payoff_a,
                                    ranked.order[i].payoff_b - ranked.order[j].payoff_b});
    }
  }
  return ranked;
}

SolutionVerdict unique_solution(const GamePayoffs& params, const EntangledFamilyState& state) {
  const bool maximal = std::abs(state.a2() - 0.5) <= kMaximalEntanglementTolerance;
  // Within tolerance the state is taken to be exactly maximally entangled.
  const EntangledFamilyState effective = maximal ? EntangledFamilyState(0.5) : state;
  const auto eq = entangled_equilibria(params, effective);
  const NashPoint& high = eq[0];
  const NashPoint& low = eq[1];

  auto preference = [](double gain) {
    if (gain > 0.0) return Preference::corner_11;
    if (gain < 0.0) return Preference::corner_00;
    return Preference::indifferent;
  };
  SolutionVerdict verdict;
  const double alice_gain = high.payoff_a - low.payoff_a;
  const double bob_gain = high.payoff_b - low.payoff_b;
  verdict.preferences = {preference(alice_gain), preference(bob_gain), alice_gain, bob_gain};
  if (!maximal) return verdict;

  const DensityMatrix rho_in = DensityMatrix::entangled_family(effective.a2());
  const DensityMatrix rho_11 = mixed_final_density(rho_in, MixingChoice(1.0, 1.0));
  const DensityMatrix rho_00 = mixed_final_density(rho_in, MixingChoice(0.0, 0.0));
  const double density_gap = (rho_11.entries() - rho_00.entries()).cwiseAbs().maxCoeff();
  const bool same_payoffs = std::abs(high.payoff_a - low.payoff_a) <= kMaximalEntanglementTolerance &&
                            std::abs(high.payoff_b - low.payoff_b) <= kMaximalEntanglementTolerance &&
                            std::abs(high.payoff_a - high.payoff_b) <= kMaximalEntanglementTolerance;
  if (!same_payoffs || density_gap > kMaximalEntanglementTolerance) {
    throw InternalConsistencyError("maximally entangled corners failed to merge");
  }

  const StateVector final_state =
      StateVector::entangled(std::sqrt(effective.a2()), std::sqrt(effective.b2()));
  verdict.solution = UniqueSolution{{high, low}, high.payoff_a, high.payoff_b, final_state,
                                    fidelity(final_state, rho_11)};
  return verdict;
}

}  // namespace qstatic
