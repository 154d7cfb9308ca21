#pragma once

// Quantum strategy space of two players with two strategies each. The joint
// space is spanned by |OO>, |OT>, |TO>, |TT> with Alice's symbol first.

#include <array>
#include <complex>
#include <cstddef>

#include <Eigen/Core>

#include "qstatic/game.hpp"

namespace qstatic {

using Complex = std::complex<double>;

/// Index into the canonical joint basis.
enum class Outcome : std::size_t { OO = 0, OT = 1, TO = 2, TT = 3 };

inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-12;
inline constexpr double kTraceTolerance = 1e-12;
inline constexpr double kEigenvalueFloor = -1e-10;

/// Normalized pure joint strategy.
class StateVector {
 public:
  /// Throws ConstraintViolation when the norm differs from 1 by more than
  /// `tolerance`.
  explicit StateVector(const Eigen::Vector4cd& amplitudes, double tolerance = kNormTolerance);

  static StateVector basis(Outcome outcome);
  /// a|OO> + b|TT>.
  static StateVector entangled(Complex a, Complex b);
  /// (|OO> + |TT>) / sqrt(2).
  static StateVector bell();

  const Eigen::Vector4cd& amplitudes() const { return amplitudes_; }
  Complex operator[](Outcome k) const { return amplitudes_(static_cast<Eigen::Index>(k)); }

 private:
  Eigen::Vector4cd amplitudes_;
};

struct DensityDiagnostics {
  double hermiticity_error;  // max |rho - rho^dagger| entry
  double trace_error;        // |Tr rho - 1|
  double min_eigenvalue;
};

DensityDiagnostics diagnose(const Eigen::Matrix4cd& rho);

/// Hermitian, unit-trace, positive semidefinite 4x4 matrix.
class DensityMatrix {
 public:
  /// Throws ConstraintViolation if any invariant fails its tolerance.
  explicit DensityMatrix(const Eigen::Matrix4cd& entries);

  static DensityMatrix pure(const StateVector& psi);
  /// Projector on a|OO> + b|TT> with real a = sqrt(a2), b = sqrt(1 - a2).
  static DensityMatrix entangled_family(double a2);

  const Eigen::Matrix4cd& entries() const { return entries_; }
  /// Real diagonal, i.e. the probabilities of the four joint outcomes.
  std::array<double, 4> diagonal() const;

 private:
  Eigen::Matrix4cd entries_;
};

/// SU(2) operator [[a, b], [-b*, a*]] used by one player.
class LocalUnitary {
 public:
  /// Throws ConstraintViolation unless |a|^2 + |b|^2 = 1 within 1e-12.
  LocalUnitary(Complex a, Complex b);

  static LocalUnitary identity() { return {1.0, 0.0}; }

  Complex a() const { return a_; }
  Complex b() const { return b_; }
  Eigen::Matrix2cd matrix() const;

 private:
  Complex a_;
  Complex b_;
};

/// Observable diagonal in the canonical basis.
struct PayoffOperator {
  std::array<double, 4> diagonal{};

  Eigen::Matrix4cd matrix() const;
};

/// Probabilities with which Alice (p) and Bob (q) apply the identity rather
/// than the flip.
struct MixingChoice {
  double p;
  double q;

  /// Throws ConstraintViolation unless both lie in [0, 1].
  MixingChoice(double p, double q);
};

/// Kronecker product left (x) right, Alice's factor first.
Eigen::Matrix4cd kron(const Eigen::Matrix2cd& left, const Eigen::Matrix2cd& right);

/// (ua (x) ub) psi.
StateVector apply_local_unitaries(const LocalUnitary& ua, const LocalUnitary& ub,
                                  const StateVector& psi);

/// |amplitude_k|^2 over the canonical basis.
std::array<double, 4> projection_probabilities(const StateVector& psi);

/// Payoffs of the factorizable strategy with |a|^2 = a2 (Alice) and
/// |c|^2 = c2 (Bob) acting on |OO>.
PayoffPair payoffs_factorizable(const GamePayoffs& params, double a2, double c2);

/// The flip C exchanging |O> and |T>.
Eigen::Matrix2cd flip_operator();

/// pq rho + p(1-q) (I(x)C) rho (I(x)C)^dagger + (1-p)q (C(x)I) rho (C(x)I)^dagger
///   + (1-p)(1-q) (C(x)C) rho (C(x)C)^dagger.
DensityMatrix mixed_final_density(const DensityMatrix& rho_in, const MixingChoice& mix);

struct PayoffOperators {
  PayoffOperator alice;
  PayoffOperator bob;
};

/// Alice diag(alpha, gamma, gamma, beta); Bob diag(beta, gamma, gamma, alpha).
PayoffOperators payoff_operators(const GamePayoffs& params);
/// Diagonals read off an arbitrary 2x2 bimatrix in canonical order.
PayoffOperators payoff_operators(const Bimatrix2x2& game);

/// (Tr(P_A rho), Tr(P_B rho)). Throws InternalConsistencyError if a trace has
/// an imaginary part above 1e-9.
PayoffPair trace_payoffs(const PayoffOperator& pa, const PayoffOperator& pb,
                         const DensityMatrix& rho);

/// Exact bilinear payoff surfaces in the mixing probabilities (p, q) for an
/// arbitrary initial density matrix, from the payoffs of the four pure
/// identity/flip combinations.
std::array<BilinearPayoff, 2> bilinear_payoff_coefficients(const DensityMatrix& rho_in,
                                                           const PayoffOperator& pa,
                                                           const PayoffOperator& pb);

/// <psi| rho |psi>.
double fidelity(const StateVector& psi, const DensityMatrix& rho);

}  // namespace qstatic
