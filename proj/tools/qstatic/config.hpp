#pragma once

// Game configuration files: one JSON document with `payoffs`, an optional
// `initial_state` and optional strategy `labels`.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "qstatic/errors.hpp"
#include "qstatic/game.hpp"
#include "qstatic/quantum.hpp"

namespace qstatic::cli {

/// Malformed or invalid configuration. The message starts with
/// "<source>:<line>: " whenever the offending field can be located.
class ConfigError : public Error {
 public:
  using Error::Error;
};

struct InitialState {
  std::string description;  // preset name, "a2=<x>" or "explicit"
  StateVector state;
  std::optional<double> family_a2;  // set when the state is a|OO> + b|TT>
};

struct GameConfig {
  std::variant<GamePayoffs, Bimatrix> payoffs;
  std::optional<InitialState> initial_state;
  StrategyLabels labels;

  const GamePayoffs* bos() const { return std::get_if<GamePayoffs>(&payoffs); }
  /// The payoff table; Battle of the Sexes parameters are expanded.
  Bimatrix bimatrix() const;
  bool is_2x2() const;
  /// Throws ConfigError unless the game is 2x2.
  Bimatrix2x2 bimatrix_2x2() const;
  /// The configured initial state, or |OO> when none was given.
  InitialState initial_or_default() const;
};

/// Amplitudes given explicitly must be normalized to within this tolerance.
inline constexpr double kAmplitudeTolerance = 1e-9;

GameConfig parse_config(std::string_view text, std::string_view source = "<config>");
GameConfig load_config(const std::filesystem::path& path);

/// 1-based line of the value addressed by `keys` in `text`, or 0.
int locate_line(std::string_view text, std::initializer_list<std::string_view> keys);

}  // namespace qstatic::cli
