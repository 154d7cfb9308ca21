#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "qstatic/game.hpp"
#include "qstatic/quantum.hpp"

namespace qstatic {

enum class NashKind { corner, interior, degenerate_family };

std::string to_string(NashKind kind);

/// Axis-aligned set of equilibria: an edge segment, an interior line or the
/// whole unit square.
struct FamilyRegion {
  double p_min;
  double p_max;
  double q_min;
  double q_max;

  bool contains(double p, double q, double tol) const;
  bool contains(const FamilyRegion& other, double tol) const;
};

/// An equilibrium of a bilinear game in the mixing probabilities (p*, q*).
/// For a degenerate family (p*, q*) is the region's lower-left corner.
struct NashPoint {
  double p_star = 0.0;
  double q_star = 0.0;
  double payoff_a = 0.0;
  double payoff_b = 0.0;
  NashKind kind = NashKind::corner;
  std::optional<FamilyRegion> family;
};

/// Initial state a|OO> + b|TT>, described by a2 = |a|^2. Phases do not affect
/// any payoff.
class EntangledFamilyState {
 public:
  explicit EntangledFamilyState(double a2);

  double a2() const { return a2_; }
  double b2() const { return 1.0 - a2_; }

 private:
  double a2_;
};

/// Slopes at or below this magnitude are treated as zero.
inline constexpr double kSlopeTolerance = 1e-12;
/// |a2 - 1/2| at or below this counts as maximal entanglement.
inline constexpr double kMaximalEntanglementTolerance = 1e-12;

/// (1,1), (0,0) and the interior mixed equilibrium, in that order.
std::array<NashPoint, 3> classical_mixed_equilibria(const GamePayoffs& params);

struct FactorizableEquilibrium {
  NashPoint point;  // (p*, q*) = (|a|^2, |c|^2)
  StateVector final_state;
};

/// Equilibria over factorizable SU(2) strategies acting on |OO>, with their
/// final product states. Same order as classical_mixed_equilibria.
std::array<FactorizableEquilibrium, 3> factorizable_equilibria(const GamePayoffs& params);

/// Equilibria of the identity/flip game started from a|OO> + b|TT>:
/// (1,1), (0,0), then the interior point.
std::array<NashPoint, 3> entangled_equilibria(const GamePayoffs& params,
                                              const EntangledFamilyState& state);

/// Exact equilibrium set of a game whose payoffs are bilinear in (p, q).
///
/// Candidates are the four corners, the interior point where both players are
/// indifferent, and, when a player's slope vanishes identically along a line,
/// that line as one degenerate-family entry. Points covered by a family are
/// not repeated. Order: corners (1,1), (0,0), (1,0), (0,1), interior, families.
std::vector<NashPoint> enumerate_bilinear_nash(const BilinearPayoff& alice,
                                               const BilinearPayoff& bob);

/// Neither player gains more than `tol` by moving to either endpoint of their
/// own coordinate. Endpoint checks suffice since payoffs are affine in the
/// own probability.
bool passes_best_response(const BilinearPayoff& alice, const BilinearPayoff& bob, double p,
                          double q, double tol = 1e-12);

struct PayoffDifference {
  std::size_t first;   // index into RankedEquilibria::order
  std::size_t second;
  double delta_a;      // payoff_a(first) - payoff_a(second)
  double delta_b;
};

struct RankedEquilibria {
  std::vector<NashPoint> order;
  std::vector<PayoffDifference> differences;
};

/// Sorts by the worse-off player's payoff, then by total payoff, both
/// descending; ties keep (1,1) ahead of (0,0). Every pair gets its per-player
/// payoff difference.
RankedEquilibria rank_equilibria(std::vector<NashPoint> points);

enum class Preference { corner_11, corner_00, indifferent };

std::string to_string(Preference preference);

/// Which pure-corner equilibrium each player prefers.
struct CornerPreferences {
  Preference alice;
  Preference bob;
  double alice_gain;  // payoff_a(1,1) - payoff_a(0,0)
  double bob_gain;    // payoff_b(1,1) - payoff_b(0,0)
};

struct UniqueSolution {
  std::array<NashPoint, 2> merged;  // (1,1) and (0,0)
  double payoff_a;
  double payoff_b;
  StateVector final_state;
  double fidelity;  // of final_state with the final density matrix
};

struct SolutionVerdict {
  std::optional<UniqueSolution> solution;
  CornerPreferences preferences;
};

/// The corner equilibria merge into a single solution exactly when the
/// initial state is maximally entangled: both players then receive the same
/// payoff at both corners and the final density matrices coincide. Otherwise
/// the verdict carries only the players' conflicting preferences.
SolutionVerdict unique_solution(const GamePayoffs& params, const EntangledFamilyState& state);

}  // namespace qstatic
