#include "qstatic/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <thread>
#include <vector>

#include "qstatic/errors.hpp"

namespace qstatic {

namespace {

std::array<double, 4> outcome_payoffs(const Eigen::Matrix2d& m) {
  return {m(0, 0), m(0, 1), m(1, 0), m(1, 1)};
}

std::array<std::uint64_t, 4> run_block(const std::array<double, 4>& probs, std::uint64_t seed,
                                       std::uint64_t rounds) {
  std::mt19937_64 rng(seed);
  std::discrete_distribution<std::size_t> outcome(probs.begin(), probs.end());
  std::array<std::uint64_t, 4> counts{};
  for (std::uint64_t r = 0; r < rounds; ++r) ++counts[outcome(rng)];
  return counts;
}

}  // namespace

SimulationConfig::SimulationConfig(std::uint64_t rounds_, std::uint64_t seed_, MixingChoice mix_,
                                   DensityMatrix initial_, Bimatrix2x2 payoffs_)
    : rounds(rounds_),
      seed(seed_),
      mix(mix_),
      initial(std::move(initial_)),
      payoffs(std::move(payoffs_)) {
  if (rounds == 0) throw ConstraintViolation("simulation: rounds must be at least 1");
}

SimulationConfig::SimulationConfig(std::uint64_t rounds_, std::uint64_t seed_, MixingChoice mix_,
                                   DensityMatrix initial_, const GamePayoffs& payoffs_)
    : SimulationConfig(rounds_, seed_, mix_, std::move(initial_), bos_bimatrix(payoffs_)) {}

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SimulationReport summarize(const std::array<std::uint64_t, 4>& counts,
                           const Bimatrix2x2& payoffs) {
  SimulationReport report;
  report.counts = counts;
  report.rounds = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  if (report.rounds == 0) return report;

  const auto pay_a = outcome_payoffs(payoffs.payoff_a);
  const auto pay_b = outcome_payoffs(payoffs.payoff_b);
  const double n = static_cast<double>(report.rounds);
  auto moments = [&](const std::array<double, 4>& pay, double& mean, double& std_error) {
    mean = 0.0;
    for (std::size_t k = 0; k < 4; ++k) mean += static_cast<double>(counts[k]) * pay[k];
    mean /= n;
    double ss = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
      const double d = pay[k] - mean;
      ss += static_cast<double>(counts[k]) * d * d;
    }
    std_error = report.rounds > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
  };
  moments(pay_a, report.mean_payoff_a, report.std_error_a);
  moments(pay_b, report.mean_payoff_b, report.std_error_b);
  return report;
}

SimulationReport simulate(const SimulationConfig& config, unsigned workers) {
  const DensityMatrix final_density = mixed_final_density(config.initial, config.mix);
  std::array<double, 4> probs = final_density.diagonal();
  for (double& p : probs) p = std::max(p, 0.0);

  const std::uint64_t blocks = (config.rounds + kRoundsPerBlock - 1) / kRoundsPerBlock;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, blocks));

  std::vector<std::array<std::uint64_t, 4>> block_counts(blocks);
  std::atomic<std::uint64_t> next{0};
  auto work = [&] {
    for (std::uint64_t b = next++; b < blocks; b = next++) {
      const std::uint64_t begin = b * kRoundsPerBlock;
      const std::uint64_t rounds = std::min(kRoundsPerBlock, config.rounds - begin);
      block_counts[b] = run_block(probs, block_seed(config.seed, b), rounds);
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  std::array<std::uint64_t, 4> counts{};
  for (const auto& bc : block_counts) {
    for (std::size_t k = 0; k < 4; ++k) counts[k] += bc[k];
  }
  return summarize(counts, config.payoffs);
}

}  // namespace qstatic
