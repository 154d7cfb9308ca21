#include "qstatic/game.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "qstatic/errors.hpp"

namespace qstatic {

namespace {

void check_distinct(const std::vector<std::string>& names, Player player) {
  if (names.empty()) {
    throw ConstraintViolation("labels: " + to_string(player) + " needs at least one strategy name");
  }
  std::set<std::string> seen(names.begin(), names.end());
  if (seen.size() != names.size()) {
    throw ConstraintViolation("labels: strategy names of " + to_string(player) +
                              " must be distinct");
  }
}

bool all_finite(const Eigen::MatrixXd& m) { return m.allFinite(); }

// True when strategy `worse` of the row player yields strictly less than
// `better` against every surviving opponent strategy.
bool row_strictly_dominated(const Eigen::MatrixXd& payoff, std::size_t worse, std::size_t better,
                            const std::vector<std::size_t>& opponent) {
  return std::all_of(opponent.begin(), opponent.end(), [&](std::size_t j) {
    return payoff(static_cast<Eigen::Index>(worse), static_cast<Eigen::Index>(j)) <
           payoff(static_cast<Eigen::Index>(better), static_cast<Eigen::Index>(j));
  });
}

}  // namespace

std::string to_string(Player player) { return player == Player::alice ? "alice" : "bob"; }

StrategyLabels::StrategyLabels() : alice_{"O", "T"}, bob_{"O", "T"} {}

StrategyLabels::StrategyLabels(std::vector<std::string> alice, std::vector<std::string> bob)
    : alice_(std::move(alice)), bob_(std::move(bob)) {
  check_distinct(alice_, Player::alice);
  check_distinct(bob_, Player::bob);
}

const std::vector<std::string>& StrategyLabels::of(Player player) const {
  return player == Player::alice ? alice_ : bob_;
}

StrategyLabel StrategyLabels::label(Player player, std::size_t index) const {
  const auto& names = of(player);
  if (index < names.size()) return {index, names[index]};
  return {index, std::to_string(index)};
}

GamePayoffs::GamePayoffs(double alpha, double beta, double gamma)
    : alpha_(alpha), beta_(beta), gamma_(gamma) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma)) {
    throw ConstraintViolation("payoffs: alpha, beta and gamma must be finite");
  }
  if (!(alpha > beta)) {
    std::ostringstream msg;
    msg << "payoffs: constraint alpha > beta violated (alpha = " << alpha << ", beta = " << beta
        << ")";
    throw ConstraintViolation(msg.str());
  }
  if (!(beta > gamma)) {
    std::ostringstream msg;
    msg << "payoffs: constraint beta > gamma violated (beta = " << beta << ", gamma = " << gamma
        << ")";
    throw ConstraintViolation(msg.str());
  }
}

Bimatrix::Bimatrix(Eigen::MatrixXd a, Eigen::MatrixXd b)
    : payoff_a(std::move(a)), payoff_b(std::move(b)) {
  if (payoff_a.rows() == 0 || payoff_a.cols() == 0) {
    throw ConstraintViolation("bimatrix: each player needs at least one strategy");
  }
  if (payoff_a.rows() != payoff_b.rows() || payoff_a.cols() != payoff_b.cols()) {
    throw ConstraintViolation("bimatrix: payoff matrices of the two players differ in shape");
  }
  if (!all_finite(payoff_a) || !all_finite(payoff_b)) {
    throw ConstraintViolation("bimatrix: all entries must be finite");
  }
}

Bimatrix2x2::Bimatrix2x2(const Eigen::Matrix2d& a, const Eigen::Matrix2d& b)
    : payoff_a(a), payoff_b(b) {
  if (!payoff_a.allFinite() || !payoff_b.allFinite()) {
    throw ConstraintViolation("bimatrix: all entries must be finite");
  }
}

Bimatrix Bimatrix2x2::general() const { return Bimatrix(payoff_a, payoff_b); }

MixProbabilities::MixProbabilities(double p_val, double q_val) : p(p_val), q(q_val) {
  if (!(p >= 0.0 && p <= 1.0) || !(q >= 0.0 && q <= 1.0)) {
    std::ostringstream msg;
    msg << "mixing probabilities must lie in [0, 1] (p = " << p << ", q = " << q << ")";
    throw ConstraintViolation(msg.str());
  }
}

BilinearPayoff BilinearPayoff::from_corners(double at_11, double at_10, double at_01,
                                            double at_00) {
  return {at_11 - at_10 - at_01 + at_00, at_10 - at_00, at_01 - at_00, at_00};
}

Bimatrix2x2 bos_bimatrix(const GamePayoffs& params) {
  const double a = params.alpha();
  const double b = params.beta();
  const double g = params.gamma();
  Eigen::Matrix2d alice;
  alice << a, g, g, b;
  Eigen::Matrix2d bob;
  bob << b, g, g, a;
  return {alice, bob};
}

EliminationResult eliminate_strictly_dominated(const Bimatrix& game) {
  EliminationResult result;
  for (std::size_t i = 0; i < game.rows(); ++i) result.survivors_a.push_back(i);
  for (std::size_t j = 0; j < game.cols(); ++j) result.survivors_b.push_back(j);

  // Bob's payoffs transposed so that both players are scanned as row players.
  const Eigen::MatrixXd bob_rows = game.payoff_b.transpose();

  auto remove_one = [&](Player player) {
    auto& own = player == Player::alice ? result.survivors_a : result.survivors_b;
    const auto& other = player == Player::alice ? result.survivors_b : result.survivors_a;
    const Eigen::MatrixXd& payoff = player == Player::alice ? game.payoff_a : bob_rows;
    for (auto it = own.begin(); it != own.end(); ++it) {
      for (std::size_t better : own) {
        if (better == *it) continue;
        if (row_strictly_dominated(payoff, *it, better, other)) {
          result.trace.push_back({player, *it, better});
          own.erase(it);
          return true;
        }
      }
    }
    return false;
  };

  while (remove_one(Player::alice) || remove_one(Player::bob)) {
  }
  return result;
}

std::vector<PureEquilibrium> pure_nash(const Bimatrix& game) {
  std::vector<PureEquilibrium> out;
  const auto& a = game.payoff_a;
  const auto& b = game.payoff_b;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      const bool alice_best = a(i, j) >= a.col(j).maxCoeff();
      const bool bob_best = b(i, j) >= b.row(i).maxCoeff();
      if (alice_best && bob_best) {
        out.push_back({static_cast<std::size_t>(i), static_cast<std::size_t>(j), a(i, j), b(i, j)});
      }
    }
  }
  return out;
}

PayoffPair expected_payoffs(const Bimatrix2x2& game, const MixProbabilities& mix) {
  const Eigen::Vector2d alice(mix.p, 1.0 - mix.p);
  const Eigen::Vector2d bob(mix.q, 1.0 - mix.q);
  return {alice.dot(game.payoff_a * bob), alice.dot(game.payoff_b * bob)};
}

std::array<BilinearPayoff, 2> bilinear_payoffs(const Bimatrix2x2& game) {
  auto surface = [](const Eigen::Matrix2d& m) {
    return BilinearPayoff::from_corners(m(0, 0), m(0, 1), m(1, 0), m(1, 1));
  };
  return {surface(game.payoff_a), surface(game.payoff_b)};
}

}  // namespace qstatic
