#include "qstatic/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace qstatic::cli {
namespace {

using nlohmann::json;

// Walks raw JSON text far enough to find where a nested value starts, so
// errors can name a line. The text is known to parse by the time this runs.
class Locator {
 public:
  explicit Locator(std::string_view text) : text_(text) {}

  int find(const std::vector<std::string_view>& path) {
    skip_ws();
    return descend(path, 0);
  }

 private:
  int descend(const std::vector<std::string_view>& path, std::size_t depth) {
    if (depth == path.size()) return line_;
    if (at_end()) return 0;
    const char open = text_[pos_];
    if (open == '{') {
      advance();
      while (true) {
        skip_ws();
        if (at_end() || text_[pos_] == '}') return 0;
        const std::string key = read_string();
        skip_ws();
        advance();  // ':'
        skip_ws();
        if (key == path[depth]) return descend(path, depth + 1);
        skip_value();
        skip_ws();
        if (!at_end() && text_[pos_] == ',') advance();
      }
    }
    if (open == '[') {
      const auto& want = path[depth];
      if (want.empty() || !std::all_of(want.begin(), want.end(),
                                       [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
        return 0;
      }
      const std::size_t target = std::stoul(std::string(want));
      advance();
      for (std::size_t index = 0;; ++index) {
        skip_ws();
        if (at_end() || text_[pos_] == ']') return 0;
        if (index == target) return descend(path, depth + 1);
        skip_value();
        skip_ws();
        if (!at_end() && text_[pos_] == ',') advance();
      }
    }
    return 0;
  }

  void skip_value() {
    if (at_end()) return;
    const char c = text_[pos_];
    if (c == '"') {
      read_string();
    } else if (c == '{' || c == '[') {
      int depth = 0;
      while (!at_end()) {
        const char d = text_[pos_];
        if (d == '"') {
          read_string();
          continue;
        }
        if (d == '{' || d == '[') ++depth;
        if (d == '}' || d == ']') --depth;
        advance();
        if (depth == 0) return;
      }
    } else {
      while (!at_end() && text_[pos_] != ',' && text_[pos_] != '}' && text_[pos_] != ']' &&
             !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        advance();
      }
    }
  }

  std::string read_string() {
    std::string out;
    advance();  // opening quote
    while (!at_end() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') advance();
      if (!at_end()) out += text_[pos_];
      advance();
    }
    advance();
    return out;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
  }
  void advance() {
    if (at_end()) return;
    if (text_[pos_] == '\n') ++line_;
    ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

class Parser {
 public:
  Parser(std::string_view text, std::string_view source) : text_(text), source_(source) {}

  GameConfig parse() {
    json doc;
    try {
      doc = json::parse(text_);
    } catch (const json::parse_error& e) {
      throw ConfigError(fmt::format("{}:{}: invalid JSON: {}", source_, line_at_byte(e.byte),
                                    e.what()));
    }
    if (!doc.is_object()) fail({}, "the configuration must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      if (key != "payoffs" && key != "initial_state" && key != "labels") {
        fail({key}, fmt::format("unknown field '{}'", key));
      }
    }
    if (!doc.contains("payoffs")) fail({}, "missing required field 'payoffs'");

    GameConfig config{parse_payoffs(doc["payoffs"]), std::nullopt, StrategyLabels{}};
    if (doc.contains("initial_state")) {
      config.initial_state = parse_state(doc["initial_state"]);
    }
    if (doc.contains("labels")) {
      config.labels = parse_labels(doc["labels"], config.bimatrix());
    }
    return config;
  }

 private:
  [[noreturn]] void fail(std::vector<std::string> path, const std::string& message) const {
    std::vector<std::string_view> view(path.begin(), path.end());
    int line = Locator(text_).find(view);
    if (line == 0) line = 1;
    throw ConfigError(fmt::format("{}:{}: {}", source_, line, message));
  }

  int line_at_byte(std::size_t byte) const {
    const std::size_t end = std::min(byte, text_.size());
    return 1 + static_cast<int>(std::count(text_.begin(), text_.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
  }

  double number(const json& value, std::vector<std::string> path, std::string_view what) const {
    if (!value.is_number()) fail(std::move(path), fmt::format("{} must be a number", what));
    const double x = value.get<double>();
    if (!std::isfinite(x)) fail(std::move(path), fmt::format("{} must be finite", what));
    return x;
  }

  std::variant<GamePayoffs, Bimatrix> parse_payoffs(const json& node) const {
    if (node.is_object()) {
      for (const auto& [key, value] : node.items()) {
        if (key != "alpha" && key != "beta" && key != "gamma") {
          fail({"payoffs", key}, fmt::format("unknown payoff parameter '{}'", key));
        }
      }
      std::array<double, 3> params{};
      const std::array<const char*, 3> names{"alpha", "beta", "gamma"};
      for (std::size_t i = 0; i < names.size(); ++i) {
        if (!node.contains(names[i])) {
          fail({"payoffs"}, fmt::format("payoffs: missing '{}'", names[i]));
        }
        params[i] = number(node[names[i]], {"payoffs", names[i]}, fmt::format("payoffs.{}", names[i]));
      }
      try {
        return GamePayoffs(params[0], params[1], params[2]);
      } catch (const ConstraintViolation& e) {
        fail({"payoffs"}, e.what());
      }
    }
    if (node.is_array()) return parse_bimatrix(node);
    fail({"payoffs"},
         "payoffs must be either {\"alpha\", \"beta\", \"gamma\"} or a rows x cols x 2 array");
  }

  Bimatrix parse_bimatrix(const json& node) const {
    const std::string shape = "payoffs must be a non-empty rows x cols x 2 array";
    if (node.empty()) fail({"payoffs"}, shape);
    const std::size_t rows = node.size();
    std::size_t cols = 0;
    Eigen::MatrixXd a;
    Eigen::MatrixXd b;
    for (std::size_t r = 0; r < rows; ++r) {
      const std::string rs = std::to_string(r);
      const json& row = node[r];
      if (!row.is_array() || row.empty()) fail({"payoffs", rs}, shape);
      if (r == 0) {
        cols = row.size();
        a.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        b.resize(a.rows(), a.cols());
      } else if (row.size() != cols) {
        fail({"payoffs", rs}, fmt::format("payoffs row {} has {} entries, expected {}", r,
                                          row.size(), cols));
      }
      for (std::size_t c = 0; c < cols; ++c) {
        const std::string cs = std::to_string(c);
        const json& cell = row[c];
        if (!cell.is_array() || cell.size() != 2) {
          fail({"payoffs", rs, cs},
               fmt::format("payoffs[{}][{}] must be a pair [alice, bob]", r, c));
        }
        const std::string where = fmt::format("payoffs[{}][{}]", r, c);
        a(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            number(cell[0], {"payoffs", rs, cs, "0"}, where + "[0]");
        b(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            number(cell[1], {"payoffs", rs, cs, "1"}, where + "[1]");
      }
    }
    return Bimatrix(std::move(a), std::move(b));
  }

  InitialState parse_state(const json& node) const {
    if (node.is_string()) {
      const auto name = node.get<std::string>();
      if (name == "OO") return {name, StateVector::basis(Outcome::OO), 1.0};
      if (name == "TT") return {name, StateVector::basis(Outcome::TT), 0.0};
      if (name == "OT") return {name, StateVector::basis(Outcome::OT), std::nullopt};
      if (name == "TO") return {name, StateVector::basis(Outcome::TO), std::nullopt};
      if (name == "bell") return {name, StateVector::bell(), 0.5};
      fail({"initial_state"},
           fmt::format("unknown initial_state preset '{}' (expected OO, OT, TO, TT or bell)", name));
    }
    if (node.is_object()) {
      for (const auto& [key, value] : node.items()) {
        if (key != "a2") fail({"initial_state", key}, fmt::format("unknown initial_state field '{}'", key));
      }
      if (!node.contains("a2")) fail({"initial_state"}, "initial_state object must give 'a2'");
      const double a2 = number(node["a2"], {"initial_state", "a2"}, "initial_state.a2");
      if (a2 < 0.0 || a2 > 1.0) {
        fail({"initial_state", "a2"}, fmt::format("initial_state.a2 = {} is outside [0, 1]", a2));
      }
      return {fmt::format("a2={}", a2),
              StateVector::entangled(std::sqrt(a2), std::sqrt(1.0 - a2)), a2};
    }
    if (node.is_array()) return parse_amplitudes(node);
    fail({"initial_state"},
         "initial_state must be a preset name, {\"a2\": x} or four [re, im] amplitude pairs");
  }

  InitialState parse_amplitudes(const json& node) const {
    if (node.size() != 4) {
      fail({"initial_state"}, fmt::format("initial_state needs 4 amplitudes, got {}", node.size()));
    }
    Eigen::Vector4cd amps;
    for (std::size_t k = 0; k < 4; ++k) {
      const std::string ks = std::to_string(k);
      const json& pair = node[k];
      if (!pair.is_array() || pair.size() != 2) {
        fail({"initial_state", ks}, fmt::format("initial_state[{}] must be a pair [re, im]", k));
      }
      const std::string where = fmt::format("initial_state[{}]", k);
      amps(static_cast<Eigen::Index>(k)) =
          Complex(number(pair[0], {"initial_state", ks, "0"}, where + "[0]"),
                  number(pair[1], {"initial_state", ks, "1"}, where + "[1]"));
    }
    const double norm = amps.norm();
    if (std::abs(norm - 1.0) > kAmplitudeTolerance) {
      fail({"initial_state"},
           fmt::format("initial_state amplitudes have norm {:.12g}, expected 1 within {:g}", norm,
                       kAmplitudeTolerance));
    }
    amps /= norm;
    std::optional<double> a2;
    if (std::abs(amps(1)) <= kNormTolerance && std::abs(amps(2)) <= kNormTolerance) {
      a2 = std::norm(amps(0)) / (std::norm(amps(0)) + std::norm(amps(3)));
    }
    return {"explicit", StateVector(amps), a2};
  }

  StrategyLabels parse_labels(const json& node, const Bimatrix& game) const {
    if (!node.is_object()) fail({"labels"}, "labels must be an object with 'alice' and 'bob'");
    std::array<std::vector<std::string>, 2> names;
    const std::array<std::size_t, 2> counts{game.rows(), game.cols()};
    const std::array<const char*, 2> players{"alice", "bob"};
    for (const auto& [key, value] : node.items()) {
      if (key != "alice" && key != "bob") fail({"labels", key}, fmt::format("unknown labels field '{}'", key));
    }
    for (std::size_t i = 0; i < 2; ++i) {
      if (!node.contains(players[i])) {
        names[i] = StrategyLabels().of(i == 0 ? Player::alice : Player::bob);
        if (names[i].size() != counts[i]) {
          names[i].clear();
          for (std::size_t k = 0; k < counts[i]; ++k) names[i].push_back(fmt::format("s{}", k));
        }
        continue;
      }
      const json& list = node[players[i]];
      if (!list.is_array() || list.size() != counts[i] ||
          !std::all_of(list.begin(), list.end(), [](const json& s) { return s.is_string(); })) {
        fail({"labels", players[i]},
             fmt::format("labels.{} must list {} strategy names", players[i], counts[i]));
      }
      for (const auto& s : list) names[i].push_back(s.get<std::string>());
    }
    try {
      return StrategyLabels(names[0], names[1]);
    } catch (const ConstraintViolation& e) {
      fail({"labels"}, fmt::format("labels: {}", e.what()));
    }
  }

  std::string_view text_;
  std::string_view source_;
};

}  // namespace

Bimatrix GameConfig::bimatrix() const {
  if (const auto* params = bos()) return bos_bimatrix(*params).general();
  return std::get<Bimatrix>(payoffs);
}

bool GameConfig::is_2x2() const {
  if (bos() != nullptr) return true;
  const auto& game = std::get<Bimatrix>(payoffs);
  return game.rows() == 2 && game.cols() == 2;
}

Bimatrix2x2 GameConfig::bimatrix_2x2() const {
  if (const auto* params = bos()) return bos_bimatrix(*params);
  if (!is_2x2()) {
    const auto& game = std::get<Bimatrix>(payoffs);
    throw ConfigError(fmt::format("this analysis needs a 2x2 game, the configuration has {}x{}",
                                  game.rows(), game.cols()));
  }
  const auto& game = std::get<Bimatrix>(payoffs);
  return Bimatrix2x2(game.payoff_a, game.payoff_b);
}

InitialState GameConfig::initial_or_default() const {
  if (initial_state) return *initial_state;
  return {"OO", StateVector::basis(Outcome::OO), 1.0};
}

int locate_line(std::string_view text, std::initializer_list<std::string_view> keys) {
  return Locator(text).find(std::vector<std::string_view>(keys));
}

GameConfig parse_config(std::string_view text, std::string_view source) {
  return Parser(text, source).parse();
}

GameConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("{}: cannot open configuration file", path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str(), path.string());
}

}  // namespace qstatic::cli
