#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "qstatic/config.hpp"
#include "qstatic/report.hpp"

namespace qstatic::cli {

enum class QuantumMode { factorizable, entangled };

struct SimulateOptions {
  std::uint64_t rounds = 100000;
  std::uint64_t seed = 42;
  double p = 0.0;
  double q = 0.0;
  unsigned workers = 0;
};

enum class SweepParameter { a2, p, q };

struct SweepOptions {
  SweepParameter parameter = SweepParameter::a2;
  int steps = 11;
  std::optional<double> p;  // fixed Alice probability for a q sweep
  std::optional<double> q;  // fixed Bob probability for a p sweep
};

Report cmd_classical(const GameConfig& config);
Report cmd_quantum(const GameConfig& config, QuantumMode mode);
Report cmd_simulate(const GameConfig& config, const SimulateOptions& options);
Report cmd_sweep(const GameConfig& config, const SweepOptions& options);

/// Exit status of the command line tool.
enum ExitCode : int { kSuccess = 0, kInternalError = 1, kValidationError = 2 };

/// Runs `body`, mapping library and configuration errors to exit codes and
/// writing their messages to `err`.
int guarded(const std::function<void()>& body, std::ostream& err);

/// Entry point behind `main`; `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qstatic::cli
