#include "qstatic/quantum.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "qstatic/errors.hpp"

namespace qstatic {

namespace {

constexpr double kImaginaryTolerance = 1e-9;

void check_unit_interval(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    std::ostringstream msg;
    msg << name << " must lie in [0, 1] (got " << value << ")";
    throw ConstraintViolation(msg.str());
  }
}

Eigen::Matrix4cd conjugate(const Eigen::Matrix4cd& op, const Eigen::Matrix4cd& rho) {
  return op * rho * op.adjoint();
}

}  // namespace

StateVector::StateVector(const Eigen::Vector4cd& amplitudes, double tolerance)
    : amplitudes_(amplitudes) {
  if (!amplitudes_.allFinite()) throw ConstraintViolation("state: amplitudes must be finite");
  const double norm2 = amplitudes_.squaredNorm();
  if (std::abs(norm2 - 1.0) > tolerance) {
    std::ostringstream msg;
    msg << "state: amplitudes are not normalized (sum of squared moduli = " << norm2 << ")";
    throw ConstraintViolation(msg.str());
  }
}

StateVector StateVector::basis(Outcome outcome) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(static_cast<Eigen::Index>(outcome)) = 1.0;
  return StateVector(v);
}

StateVector StateVector::entangled(Complex a, Complex b) {
  Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
  v(0) = a;
  v(3) = b;
  return StateVector(v);
}

StateVector StateVector::bell() {
  const double h = 1.0 / std::sqrt(2.0);
  return entangled(h, h);
}

DensityDiagnostics diagnose(const Eigen::Matrix4cd& rho) {
  DensityDiagnostics d{};
  d.hermiticity_error = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  d.trace_error = std::abs(rho.trace() - Complex(1.0, 0.0));
  // Eigenvalues of the Hermitian part; the anti-Hermitian residue is bounded
  // separately above.
  const Eigen::Matrix4cd herm = 0.5 * (rho + rho.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> solver(herm, Eigen::EigenvaluesOnly);
  d.min_eigenvalue = solver.eigenvalues().minCoeff();
  return d;
}

DensityMatrix::DensityMatrix(const Eigen::Matrix4cd& entries) : entries_(entries) {
  if (!entries_.allFinite()) throw ConstraintViolation("density matrix: entries must be finite");
  const auto d = diagnose(entries_);
  std::ostringstream msg;
  if (d.hermiticity_error > kHermitianTolerance) {
    msg << "density matrix: not Hermitian (max deviation " << d.hermiticity_error << ")";
  } else if (d.trace_error > kTraceTolerance) {
    msg << "density matrix: trace differs from 1 by " << d.trace_error;
  } else if (d.min_eigenvalue < kEigenvalueFloor) {
    msg << "density matrix: not positive semidefinite (eigenvalue " << d.min_eigenvalue << ")";
  } else {
    return;
  }
  throw ConstraintViolation(msg.str());
}

DensityMatrix DensityMatrix::pure(const StateVector& psi) {
  const auto& v = psi.amplitudes();
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix DensityMatrix::entangled_family(double a2) {
  check_unit_interval(a2, "a2");
  return pure(StateVector::entangled(std::sqrt(a2), std::sqrt(1.0 - a2)));
}

std::array<double, 4> DensityMatrix::diagonal() const {
  return {entries_(0, 0).real(), entries_(1, 1).real(), entries_(2, 2).real(),
          entries_(3, 3).real()};
}

LocalUnitary::LocalUnitary(Complex a, Complex b) : a_(a), b_(b) {
  const double n = std::norm(a) + std::norm(b);
  if (!(std::abs(n - 1.0) <= kNormTolerance)) {
    std::ostringstream msg;
    msg << "local unitary: |a|^2 + |b|^2 must equal 1 (got " << n << ")";
    throw ConstraintViolation(msg.str());
  }
}

Eigen::Matrix2cd LocalUnitary::matrix() const {
  Eigen::Matrix2cd m;
  m << a_, b_, -std::conj(b_), std::conj(a_);
  return m;
}

Eigen::Matrix4cd PayoffOperator::matrix() const {
  Eigen::Vector4cd d;
  d << diagonal[0], diagonal[1], diagonal[2], diagonal[3];
  return d.asDiagonal();
}

MixingChoice::MixingChoice(double p_val, double q_val) : p(p_val), q(q_val) {
  check_unit_interval(p, "p");
  check_unit_interval(q, "q");
}

Eigen::Matrix4cd kron(const Eigen::Matrix2cd& left, const Eigen::Matrix2cd& right) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out.block<2, 2>(2 * i, 2 * j) = left(i, j) * right;
    }
  }
  return out;
}

StateVector apply_local_unitaries(const LocalUnitary& ua, const LocalUnitary& ub,
                                  const StateVector& psi) {
  return StateVector(kron(ua.matrix(), ub.matrix()) * psi.amplitudes());
}

std::array<double, 4> projection_probabilities(const StateVector& psi) {
  const auto& v = psi.amplitudes();
  return {std::norm(v(0)), std::norm(v(1)), std::norm(v(2)), std::norm(v(3))};
}

PayoffPair payoffs_factorizable(const GamePayoffs& params, double a2, double c2) {
  check_unit_interval(a2, "|a|^2");
  check_unit_interval(c2, "|c|^2");
  const double al = params.alpha();
  const double be = params.beta();
  const double ga = params.gamma();
  const double s = params.spread();
  return {a2 * (s * c2 - be + ga) + be + (ga - be) * c2,
          c2 * (s * a2 - al + ga) + al + (ga - al) * a2};
}

Eigen::Matrix2cd flip_operator() {
  Eigen::Matrix2cd c;
  c << 0.0, 1.0, 1.0, 0.0;
  return c;
}

DensityMatrix mixed_final_density(const DensityMatrix& rho_in, const MixingChoice& mix) {
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd c = flip_operator();
  const auto& rho = rho_in.entries();
  const double p = mix.p;
  const double q = mix.q;
  Eigen::Matrix4cd out = p * q * rho;
  out += p * (1.0 - q) * conjugate(kron(id, c), rho);
  out += (1.0 - p) * q * conjugate(kron(c, id), rho);
  out += (1.0 - p) * (1.0 - q) * conjugate(kron(c, c), rho);
  return DensityMatrix(out);
}

PayoffOperators payoff_operators(const GamePayoffs& params) {
  const double al = params.alpha();
  const double be = params.beta();
  const double ga = params.gamma();
  return {PayoffOperator{{al, ga, ga, be}}, PayoffOperator{{be, ga, ga, al}}};
}

PayoffOperators payoff_operators(const Bimatrix2x2& game) {
  const auto& a = game.payoff_a;
  const auto& b = game.payoff_b;
  return {PayoffOperator{{a(0, 0), a(0, 1), a(1, 0), a(1, 1)}},
          PayoffOperator{{b(0, 0), b(0, 1), b(1, 0), b(1, 1)}}};
}

PayoffPair trace_payoffs(const PayoffOperator& pa, const PayoffOperator& pb,
                         const DensityMatrix& rho) {
  auto mean = [&](const PayoffOperator& op, const char* who) {
    const Complex t = (op.matrix() * rho.entries()).trace();
    if (std::abs(t.imag()) > kImaginaryTolerance) {
      std::ostringstream msg;
      msg << "trace payoff of " << who << " has imaginary part " << t.imag();
      throw InternalConsistencyError(msg.str());
    }
    return t.real();
  };
  return {mean(pa, "alice"), mean(pb, "bob")};
}

std::array<BilinearPayoff, 2> bilinear_payoff_coefficients(const DensityMatrix& rho_in,
                                                           const PayoffOperator& pa,
                                                           const PayoffOperator& pb) {
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd c = flip_operator();
  const auto& rho = rho_in.entries();
  // Corner payoffs t_XY for Alice applying X and Bob applying Y.
  auto corner = [&](const Eigen::Matrix2cd& x, const Eigen::Matrix2cd& y) {
    return trace_payoffs(pa, pb, DensityMatrix(conjugate(kron(x, y), rho)));
  };
  const PayoffPair t_ii = corner(id, id);
  const PayoffPair t_ic = corner(id, c);
  const PayoffPair t_ci = corner(c, id);
  const PayoffPair t_cc = corner(c, c);
  return {BilinearPayoff::from_corners(t_ii.a, t_ic.a, t_ci.a, t_cc.a),
          BilinearPayoff::from_corners(t_ii.b, t_ic.b, t_ci.b, t_cc.b)};
}

double fidelity(const StateVector& psi, const DensityMatrix& rho) {
  const auto& v = psi.amplitudes();
  return (v.adjoint() * rho.entries() * v)(0, 0).real();
}

}  // namespace qstatic
