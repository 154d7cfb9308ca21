#pragma once

// Repeated play with measurement collapse: every round prepares the same
// initial state, applies the players' identity/flip mixing, measures in the
// canonical basis and pays out the classical bimatrix entry of the outcome.

#include <array>
#include <cstdint>

#include "qstatic/game.hpp"
#include "qstatic/quantum.hpp"

namespace qstatic {

struct SimulationConfig {
  std::uint64_t rounds;
  std::uint64_t seed;
  MixingChoice mix;
  DensityMatrix initial;
  Bimatrix2x2 payoffs;

  /// Throws ConstraintViolation when rounds == 0.
  SimulationConfig(std::uint64_t rounds, std::uint64_t seed, MixingChoice mix,
                   DensityMatrix initial, Bimatrix2x2 payoffs);
  SimulationConfig(std::uint64_t rounds, std::uint64_t seed, MixingChoice mix,
                   DensityMatrix initial, const GamePayoffs& payoffs);
};

struct SimulationReport {
  std::uint64_t rounds = 0;
  std::array<std::uint64_t, 4> counts{};  // indexed by Outcome
  double mean_payoff_a = 0.0;
  double mean_payoff_b = 0.0;
  double std_error_a = 0.0;  // sample standard deviation / sqrt(rounds)
  double std_error_b = 0.0;
};

/// Rounds per independently seeded block. Blocks are the unit of work
/// distribution, so the report does not depend on the worker count.
inline constexpr std::uint64_t kRoundsPerBlock = 1u << 16;

/// Seed of block `index`, derived from the user seed by SplitMix64 mixing.
std::uint64_t block_seed(std::uint64_t seed, std::uint64_t index);

/// Runs the simulation. `workers == 0` picks the hardware concurrency. Equal
/// configs give bit-identical reports for any worker count.
SimulationReport simulate(const SimulationConfig& config, unsigned workers = 0);

/// Mean payoffs and standard errors of a given outcome histogram.
SimulationReport summarize(const std::array<std::uint64_t, 4>& counts, const Bimatrix2x2& payoffs);

}  // namespace qstatic
