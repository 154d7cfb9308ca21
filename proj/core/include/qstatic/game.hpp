#pragma once

// Classical normal-form machinery for two-player static games: bimatrices,
// iterated elimination of strictly dominated strategies, pure equilibria and
// expected payoffs of mixed strategies on 2x2 games.

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace qstatic {

enum class Player { alice, bob };

std::string to_string(Player player);

/// One pure strategy of one player. Index 0 is "O", index 1 is "T" in the
/// Battle of the Sexes.
struct StrategyLabel {
  std::size_t index = 0;
  std::string name;
};

/// Display names for both players' strategies. Names within one player must
/// be distinct.
class StrategyLabels {
 public:
  StrategyLabels();  // O/T for both players
  StrategyLabels(std::vector<std::string> alice, std::vector<std::string> bob);

  const std::vector<std::string>& of(Player player) const;
  StrategyLabel label(Player player, std::size_t index) const;

 private:
  std::vector<std::string> alice_;
  std::vector<std::string> bob_;
};

/// Payoffs of the Battle of the Sexes, alpha > beta > gamma.
class GamePayoffs {
 public:
  /// Throws ConstraintViolation unless alpha > beta > gamma and all finite.
  GamePayoffs(double alpha, double beta, double gamma);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }

  /// alpha + beta - 2 gamma, the common denominator of every closed form.
  double spread() const { return alpha_ + beta_ - 2.0 * gamma_; }

 private:
  double alpha_;
  double beta_;
  double gamma_;
};

/// Arbitrary finite bimatrix. Rows are Alice's strategies, columns Bob's.
struct Bimatrix {
  Eigen::MatrixXd payoff_a;
  Eigen::MatrixXd payoff_b;

  /// Throws ConstraintViolation on shape mismatch, empty matrices or
  /// non-finite entries.
  Bimatrix(Eigen::MatrixXd a, Eigen::MatrixXd b);

  std::size_t rows() const { return static_cast<std::size_t>(payoff_a.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(payoff_a.cols()); }
};

/// Two-strategy-per-player bimatrix, the setting of all mixed and quantum
/// analysis.
struct Bimatrix2x2 {
  Eigen::Matrix2d payoff_a;
  Eigen::Matrix2d payoff_b;

  Bimatrix2x2(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b);

  Bimatrix general() const;
};

/// Mixing probabilities of the two players: p is Alice's probability of
/// strategy 0, q is Bob's.
struct MixProbabilities {
  double p;
  double q;

  /// Throws ConstraintViolation unless both lie in [0, 1].
  MixProbabilities(double p, double q);
};

struct PayoffPair {
  double a = 0.0;
  double b = 0.0;
};

/// Expected payoff surface c_pq * p*q + c_p * p + c_q * q + c_0 of one player.
struct BilinearPayoff {
  double pq = 0.0;
  double p = 0.0;
  double q = 0.0;
  double constant = 0.0;

  double operator()(double p_val, double q_val) const {
    return pq * p_val * q_val + p * p_val + q * q_val + constant;
  }
  /// d/dp, the own-strategy slope for Alice.
  double slope_in_p(double q_val) const { return pq * q_val + p; }
  /// d/dq, the own-strategy slope for Bob.
  double slope_in_q(double p_val) const { return pq * p_val + q; }

  /// Coefficients from the payoffs at the four corners (p, q) in
  /// {(1,1), (1,0), (0,1), (0,0)}.
  static BilinearPayoff from_corners(double at_11, double at_10, double at_01,
                                     double at_00);
};

/// Battle of the Sexes bimatrix: Alice [[a,g],[g,b]], Bob [[b,g],[g,a]].
Bimatrix2x2 bos_bimatrix(const GamePayoffs& params);

struct Elimination {
  Player player;
  std::size_t strategy;
  std::size_t dominated_by;
};

struct EliminationResult {
  std::vector<std::size_t> survivors_a;
  std::vector<std::size_t> survivors_b;
  std::vector<Elimination> trace;
};

/// Iterated elimination of strictly dominated pure strategies. Scans Alice
/// then Bob, strategies ascending, and restarts after every removal. Weakly
/// dominated strategies survive.
EliminationResult eliminate_strictly_dominated(const Bimatrix& game);

struct PureEquilibrium {
  std::size_t row;
  std::size_t col;
  double payoff_a;
  double payoff_b;
};

/// Every pure profile from which neither player gains by deviating. Exact
/// comparisons, row-major order.
std::vector<PureEquilibrium> pure_nash(const Bimatrix& game);

/// Probability-weighted payoffs over the four pure profiles.
PayoffPair expected_payoffs(const Bimatrix2x2& game, const MixProbabilities& mix);

/// Bilinear payoff surfaces (Alice, Bob) of a 2x2 game in (p, q).
std::array<BilinearPayoff, 2> bilinear_payoffs(const Bimatrix2x2& game);

}  // namespace qstatic
