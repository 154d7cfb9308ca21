#include "qstatic/commands.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <utility>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "qstatic/equilibria.hpp"
#include "qstatic/errors.hpp"
#include "qstatic/montecarlo.hpp"

namespace qstatic::cli {
namespace {

using nlohmann::json;

constexpr std::array<const char*, 4> kOutcomeNames{"OO", "OT", "TO", "TT"};

// Exact rational rendering of closed forms with integer payoff parameters.
struct ExactPoint {
  std::string p;
  std::string q;
  std::string payoff_a;
  std::string payoff_b;
};

std::string fraction(long long num, long long den) {
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  num /= g;
  den /= g;
  if (den == 1) return std::to_string(num);
  return fmt::format("{}/{}", num, den);
}

std::optional<std::array<long long, 3>> integer_parameters(const GamePayoffs& params) {
  std::array<double, 3> values{params.alpha(), params.beta(), params.gamma()};
  std::array<long long, 3> out{};
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (std::abs(values[i]) > 1e6 || values[i] != std::floor(values[i])) return std::nullopt;
    out[i] = static_cast<long long>(values[i]);
  }
  return out;
}

std::optional<std::array<ExactPoint, 3>> exact_classical(const GamePayoffs& params) {
  const auto ints = integer_parameters(params);
  if (!ints) return std::nullopt;
  const auto [al, be, ga] = *ints;
  const long long s = al + be - 2 * ga;
  const std::string mixed = fraction(al * be - ga * ga, s);
  return std::array<ExactPoint, 3>{
      ExactPoint{"1", "1", std::to_string(al), std::to_string(be)},
      ExactPoint{"0", "0", std::to_string(be), std::to_string(al)},
      ExactPoint{fraction(al - ga, s), fraction(be - ga, s), mixed, mixed}};
}

json state_json(const StateVector& psi) {
  json out = json::array();
  for (Eigen::Index k = 0; k < 4; ++k) {
    out.push_back({json_number(psi.amplitudes()(k).real()), json_number(psi.amplitudes()(k).imag())});
  }
  return out;
}

std::string state_text(const StateVector& psi) {
  std::string text;
  for (std::size_t k = 0; k < 4; ++k) {
    const Complex amp = psi.amplitudes()(static_cast<Eigen::Index>(k));
    if (std::abs(amp) <= 1e-12) continue;
    std::string coeff = std::abs(amp.imag()) <= 1e-12
                            ? format_number(amp.real(), kTableDigits)
                            : fmt::format("({}{:+}i)", format_number(amp.real(), kTableDigits),
                                          std::stod(format_number(amp.imag(), kTableDigits)));
    if (!text.empty()) text += " + ";
    text += fmt::format("{}|{}>", coeff, kOutcomeNames[k]);
  }
  return text.empty() ? "0" : text;
}

json outcome_json(const std::array<double, 4>& values) {
  json out = json::object();
  for (std::size_t k = 0; k < 4; ++k) out[kOutcomeNames[k]] = json_number(values[k]);
  return out;
}

json region_json(const FamilyRegion& r) {
  return {{"p_min", json_number(r.p_min)},
          {"p_max", json_number(r.p_max)},
          {"q_min", json_number(r.q_min)},
          {"q_max", json_number(r.q_max)}};
}

std::string region_text(const std::optional<FamilyRegion>& r) {
  if (!r) return {};
  auto span = [](double lo, double hi) {
    if (lo == hi) return format_number(lo, kMachineDigits);
    return fmt::format("[{};{}]", format_number(lo, kMachineDigits), format_number(hi, kMachineDigits));
  };
  return fmt::format("p={} q={}", span(r->p_min, r->p_max), span(r->q_min, r->q_max));
}

json point_json(const NashPoint& pt, const ExactPoint* exact) {
  json out{{"p", json_number(pt.p_star)},
           {"q", json_number(pt.q_star)},
           {"payoff_a", json_number(pt.payoff_a)},
           {"payoff_b", json_number(pt.payoff_b)},
           {"kind", to_string(pt.kind)}};
  if (pt.family) out["region"] = region_json(*pt.family);
  if (exact != nullptr) {
    out["exact"] = {{"p", exact->p}, {"q", exact->q}, {"payoff_a", exact->payoff_a},
                    {"payoff_b", exact->payoff_b}};
  }
  return out;
}

Cell text_cell(const std::string& s) {
  if (s.empty()) return std::monostate{};
  return s;
}

std::vector<Cell> exact_cells(const ExactPoint* exact) {
  if (exact == nullptr) return {std::monostate{}, std::monostate{}, std::monostate{}, std::monostate{}};
  return {exact->p, exact->q, exact->payoff_a, exact->payoff_b};
}

json game_json(const GameConfig& config) {
  if (const auto* params = config.bos()) {
    return {{"form", "battle-of-the-sexes"},
            {"alpha", json_number(params->alpha())},
            {"beta", json_number(params->beta())},
            {"gamma", json_number(params->gamma())}};
  }
  const Bimatrix game = config.bimatrix();
  auto matrix = [](const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(json_number(m(r, c)));
      rows.push_back(row);
    }
    return rows;
  };
  return {{"form", "bimatrix"},
          {"rows", game.rows()},
          {"cols", game.cols()},
          {"payoff_a", matrix(game.payoff_a)},
          {"payoff_b", matrix(game.payoff_b)}};
}

std::string game_text(const GameConfig& config) {
  if (const auto* params = config.bos()) {
    return fmt::format("Battle of the Sexes, alpha={} beta={} gamma={}",
                       format_number(params->alpha(), kTableDigits),
                       format_number(params->beta(), kTableDigits),
                       format_number(params->gamma(), kTableDigits));
  }
  const Bimatrix game = config.bimatrix();
  return fmt::format("{}x{} bimatrix game", game.rows(), game.cols());
}

json labels_json(const StrategyLabels& labels) {
  return {{"alice", labels.of(Player::alice)}, {"bob", labels.of(Player::bob)}};
}

Report start_report(std::string command, const GameConfig& config) {
  Report report;
  report.document = {{"schema", kSchemaVersion}, {"command", command}, {"game", game_json(config)},
                     {"labels", labels_json(config.labels)}};
  report.heading.push_back(fmt::format("qstatic {}: {}", command, game_text(config)));
  return report;
}

void finish(Report& report) { report.document["notes"] = report.notes; }

// Label of a pure strategy when a mixing probability sits on an endpoint.
std::string pure_label(const StrategyLabels& labels, Player player, double prob) {
  if (prob == 1.0) return labels.label(player, 0).name;
  if (prob == 0.0) return labels.label(player, 1).name;
  return "mixed";
}

// --- ranking ----------------------------------------------------------------

void add_ranking(Report& report, const std::vector<NashPoint>& points) {
  const RankedEquilibria ranked = rank_equilibria(points);
  json order = json::array();
  Table table{"Ranking (worse-off payoff, then total, both descending)",
              {"rank", "kind", "p", "q", "payoff_a", "payoff_b"},
              {}};
  for (std::size_t i = 0; i < ranked.order.size(); ++i) {
    const NashPoint& pt = ranked.order[i];
    json entry = point_json(pt, nullptr);
    entry["rank"] = i + 1;
    order.push_back(entry);
    table.rows.push_back({std::to_string(i + 1), to_string(pt.kind), pt.p_star, pt.q_star,
                          pt.payoff_a, pt.payoff_b});
  }
  json diffs = json::array();
  Table diff_table{"Payoff differences (first minus second)",
                   {"first", "second", "delta_a", "delta_b"},
                   {}};
  for (const auto& d : ranked.differences) {
    diffs.push_back({{"first", d.first + 1},
                     {"second", d.second + 1},
                     {"delta_a", json_number(d.delta_a)},
                     {"delta_b", json_number(d.delta_b)}});
    diff_table.rows.push_back(
        {std::to_string(d.first + 1), std::to_string(d.second + 1), d.delta_a, d.delta_b});
  }
  report.document["ranking"] = order;
  report.document["payoff_differences"] = diffs;
  report.tables.push_back(std::move(table));
  report.tables.push_back(std::move(diff_table));
}

// --- quantum helpers --------------------------------------------------------

const std::vector<std::string> kQuantumColumns{
    "kind",    "p",       "q",          "payoff_a",   "payoff_b", "p_exact", "q_exact",
    "payoff_a_exact", "payoff_b_exact", "prob_OO", "prob_OT", "prob_TO", "prob_TT", "region"};

std::vector<Cell> quantum_row(const NashPoint& pt, const ExactPoint* exact,
                              const std::array<double, 4>& probs) {
  std::vector<Cell> row{to_string(pt.kind), pt.p_star, pt.q_star, pt.payoff_a, pt.payoff_b};
  for (auto& cell : exact_cells(exact)) row.push_back(std::move(cell));
  for (double x : probs) row.emplace_back(x);
  row.push_back(text_cell(region_text(pt.family)));
  return row;
}

StateVector product_state(double p, double q) {
  const LocalUnitary alice(std::sqrt(p), std::sqrt(1.0 - p));
  const LocalUnitary bob(std::sqrt(q), std::sqrt(1.0 - q));
  return apply_local_unitaries(alice, bob, StateVector::basis(Outcome::OO));
}

std::string best_response(double slope) {
  if (slope > kSlopeTolerance) return "1";
  if (slope < -kSlopeTolerance) return "0";
  return "[0;1]";
}

Report quantum_factorizable(const GameConfig& config) {
  Report report = start_report("quantum", config);
  report.document["mode"] = "factorizable";
  report.heading.push_back("mode: factorizable strategies acting on |OO>");
  if (config.initial_state && config.initial_state->description != "OO") {
    report.notes.push_back(fmt::format(
        "factorizable mode always starts from |OO>; initial_state '{}' is not used",
        config.initial_state->description));
  }

  std::vector<NashPoint> points;
  std::vector<StateVector> finals;
  std::optional<std::array<ExactPoint, 3>> exact;
  if (const auto* params = config.bos()) {
    for (const auto& eq : factorizable_equilibria(*params)) {
      points.push_back(eq.point);
      finals.push_back(eq.final_state);
    }
    exact = exact_classical(*params);
  } else {
    const Bimatrix2x2 game = config.bimatrix_2x2();
    const auto ops = payoff_operators(game);
    const auto surfaces = bilinear_payoff_coefficients(
        DensityMatrix::pure(StateVector::basis(Outcome::OO)), ops.alice, ops.bob);
    points = enumerate_bilinear_nash(surfaces[0], surfaces[1]);
    for (const auto& pt : points) finals.push_back(product_state(pt.p_star, pt.q_star));
    report.notes.push_back(
        "general bimatrix: equilibria come from the generic bilinear enumerator");
  }

  json list = json::array();
  Table table{"Equilibria", kQuantumColumns, {}};
  for (std::size_t i = 0; i < points.size(); ++i) {
    const ExactPoint* ex = exact ? &(*exact)[i] : nullptr;
    const auto probs = projection_probabilities(finals[i]);
    json entry = point_json(points[i], ex);
    entry["final_state"] = state_json(finals[i]);
    entry["outcome_probabilities"] = outcome_json(probs);
    list.push_back(entry);
    table.rows.push_back(quantum_row(points[i], ex, probs));
  }
  report.document["equilibria"] = list;
  report.tables.push_back(std::move(table));
  add_ranking(report, points);
  report.document["unique_solution"] = nullptr;
  finish(report);
  return report;
}

json preferences_json(const CornerPreferences& prefs) {
  return {{"alice", to_string(prefs.alice)},
          {"bob", to_string(prefs.bob)},
          {"alice_gain", json_number(prefs.alice_gain)},
          {"bob_gain", json_number(prefs.bob_gain)}};
}

Report quantum_entangled(const GameConfig& config) {
  if (!config.initial_state) {
    throw ConfigError("entangled mode needs an initial_state in the configuration");
  }
  const InitialState& initial = *config.initial_state;
  Report report = start_report("quantum", config);
  report.document["mode"] = "entangled";
  report.document["initial_state"] = {{"description", initial.description},
                                      {"amplitudes", state_json(initial.state)}};
  report.heading.push_back(
      fmt::format("mode: entangled, initial state {} = {}", initial.description, state_text(initial.state)));

  const Bimatrix2x2 game = config.bimatrix_2x2();
  const DensityMatrix rho_in = DensityMatrix::pure(initial.state);
  const auto ops = payoff_operators(game);

  std::vector<NashPoint> points;
  const auto* params = config.bos();
  const bool closed_form = params != nullptr && initial.family_a2.has_value();
  if (closed_form) {
    const auto eqs = entangled_equilibria(*params, EntangledFamilyState(*initial.family_a2));
    points.assign(eqs.begin(), eqs.end());
  } else {
    const auto surfaces = bilinear_payoff_coefficients(rho_in, ops.alice, ops.bob);
    points = enumerate_bilinear_nash(surfaces[0], surfaces[1]);
    report.notes.push_back(
        params == nullptr
            ? "general bimatrix: equilibria come from the generic bilinear enumerator"
            : "initial state is outside the a|OO> + b|TT> family: equilibria come from the "
              "generic bilinear enumerator");
  }

  json list = json::array();
  Table table{"Equilibria", kQuantumColumns, {}};
  for (const auto& pt : points) {
    const DensityMatrix rho = mixed_final_density(rho_in, MixingChoice(pt.p_star, pt.q_star));
    const auto probs = rho.diagonal();
    json entry = point_json(pt, nullptr);
    entry["outcome_probabilities"] = outcome_json(probs);
    list.push_back(entry);
    table.rows.push_back(quantum_row(pt, nullptr, probs));
  }
  report.document["equilibria"] = list;
  report.tables.push_back(std::move(table));
  add_ranking(report, points);

  if (!closed_form) {
    report.document["unique_solution"] = nullptr;
    report.notes.push_back("no unique-solution verdict outside the closed-form family");
    finish(report);
    return report;
  }

  const SolutionVerdict verdict = unique_solution(*params, EntangledFamilyState(*initial.family_a2));
  json verdict_json{{"exists", verdict.solution.has_value()},
                    {"preferences", preferences_json(verdict.preferences)}};
  if (verdict.solution) {
    const UniqueSolution& sol = *verdict.solution;
    verdict_json["payoff_a"] = json_number(sol.payoff_a);
    verdict_json["payoff_b"] = json_number(sol.payoff_b);
    verdict_json["final_state"] = state_json(sol.final_state);
    verdict_json["fidelity"] = json_number(sol.fidelity);
    report.heading.push_back(fmt::format(
        "unique solution: corners (1,1) and (0,0) merge, payoffs ({}, {}), final state {} "
        "(fidelity {})",
        format_number(sol.payoff_a, kTableDigits), format_number(sol.payoff_b, kTableDigits),
        state_text(sol.final_state), format_number(sol.fidelity, kMachineDigits)));
  } else {
    const auto& prefs = verdict.preferences;
    const bool conflict = prefs.alice != prefs.bob && prefs.alice != Preference::indifferent &&
                          prefs.bob != Preference::indifferent;
    verdict_json["conflict"] = conflict;
    report.heading.push_back(fmt::format(
        "unique solution: none; Alice prefers {} (gain {}), Bob prefers {} (gain {}){}",
        to_string(prefs.alice), format_number(prefs.alice_gain, kTableDigits),
        to_string(prefs.bob), format_number(prefs.bob_gain, kTableDigits),
        conflict ? ", so the players' preferences conflict" : ""));
  }
  report.document["unique_solution"] = verdict_json;
  finish(report);
  return report;
}

}  // namespace

Report cmd_classical(const GameConfig& config) {
  Report report = start_report("classical", config);
  const Bimatrix game = config.bimatrix();
  const StrategyLabels& labels = config.labels;

  const EliminationResult elim = eliminate_strictly_dominated(game);
  json trace = json::array();
  Table trace_table{"Iterated elimination of strictly dominated strategies",
                    {"step", "player", "removed", "dominated_by"},
                    {}};
  for (std::size_t i = 0; i < elim.trace.size(); ++i) {
    const Elimination& e = elim.trace[i];
    const std::string removed = labels.label(e.player, e.strategy).name;
    const std::string by = labels.label(e.player, e.dominated_by).name;
    trace.push_back({{"player", to_string(e.player)},
                     {"strategy", removed},
                     {"index", e.strategy},
                     {"dominated_by", by},
                     {"dominated_by_index", e.dominated_by}});
    trace_table.rows.push_back({std::to_string(i + 1), to_string(e.player), removed, by});
  }
  auto survivor_names = [&](Player player, const std::vector<std::size_t>& idx) {
    std::vector<std::string> names;
    for (auto k : idx) names.push_back(labels.label(player, k).name);
    return names;
  };
  report.document["elimination"] = {
      {"trace", trace},
      {"survivors",
       {{"alice", survivor_names(Player::alice, elim.survivors_a)},
        {"bob", survivor_names(Player::bob, elim.survivors_b)}}}};
  if (elim.trace.empty()) report.notes.push_back("no strategy is strictly dominated");

  Table table{"Equilibria",
              {"source", "alice", "bob", "kind", "p", "q", "payoff_a", "payoff_b", "p_exact",
               "q_exact", "payoff_a_exact", "payoff_b_exact", "region"},
              {}};

  json pure = json::array();
  for (const auto& eq : pure_nash(game)) {
    const std::string a = labels.label(Player::alice, eq.row).name;
    const std::string b = labels.label(Player::bob, eq.col).name;
    pure.push_back({{"alice", a},
                    {"bob", b},
                    {"row", eq.row},
                    {"col", eq.col},
                    {"payoff_a", json_number(eq.payoff_a)},
                    {"payoff_b", json_number(eq.payoff_b)}});
    std::vector<Cell> row{"pure", a, b, "pure", std::monostate{}, std::monostate{},
                          eq.payoff_a, eq.payoff_b};
    for (auto& cell : exact_cells(nullptr)) row.push_back(std::move(cell));
    row.emplace_back(std::monostate{});
    table.rows.push_back(std::move(row));
  }
  report.document["pure_equilibria"] = pure;

  std::vector<NashPoint> mixed;
  std::optional<std::array<ExactPoint, 3>> exact;
  if (const auto* params = config.bos()) {
    const auto eqs = classical_mixed_equilibria(*params);
    mixed.assign(eqs.begin(), eqs.end());
    exact = exact_classical(*params);
  } else if (config.is_2x2()) {
    const auto surfaces = bilinear_payoffs(config.bimatrix_2x2());
    mixed = enumerate_bilinear_nash(surfaces[0], surfaces[1]);
  } else {
    report.notes.push_back("mixed equilibria are computed for 2x2 games only");
  }
  json mixed_json = json::array();
  for (std::size_t i = 0; i < mixed.size(); ++i) {
    const NashPoint& pt = mixed[i];
    const ExactPoint* ex = exact ? &(*exact)[i] : nullptr;
    mixed_json.push_back(point_json(pt, ex));
    std::vector<Cell> row{"mixed",
                          pt.family ? "family" : pure_label(labels, Player::alice, pt.p_star),
                          pt.family ? "family" : pure_label(labels, Player::bob, pt.q_star),
                          to_string(pt.kind),
                          pt.p_star,
                          pt.q_star,
                          pt.payoff_a,
                          pt.payoff_b};
    for (auto& cell : exact_cells(ex)) row.push_back(std::move(cell));
    row.push_back(text_cell(region_text(pt.family)));
    table.rows.push_back(std::move(row));
  }
  report.document["mixed_equilibria"] = mixed_json;

  report.tables.push_back(std::move(table));
  report.tables.push_back(std::move(trace_table));
  finish(report);
  return report;
}

Report cmd_quantum(const GameConfig& config, QuantumMode mode) {
  return mode == QuantumMode::factorizable ? quantum_factorizable(config)
                                           : quantum_entangled(config);
}

Report cmd_simulate(const GameConfig& config, const SimulateOptions& options) {
  const InitialState initial = config.initial_or_default();
  const Bimatrix2x2 game = config.bimatrix_2x2();
  const DensityMatrix rho_in = DensityMatrix::pure(initial.state);
  const MixingChoice mix(options.p, options.q);
  const SimulationConfig sim(options.rounds, options.seed, mix, rho_in, game);
  const SimulationReport result = simulate(sim, options.workers);

  const auto ops = payoff_operators(game);
  const DensityMatrix rho_fin = mixed_final_density(rho_in, mix);
  const PayoffPair analytic = trace_payoffs(ops.alice, ops.bob, rho_fin);
  const auto probs = rho_fin.diagonal();
  auto z_score = [](double mean, double expected, double se) -> std::optional<double> {
    if (se > 0.0) return (mean - expected) / se;
    if (std::abs(mean - expected) <= 1e-12) return 0.0;
    return std::nullopt;
  };
  const auto z_a = z_score(result.mean_payoff_a, analytic.a, result.std_error_a);
  const auto z_b = z_score(result.mean_payoff_b, analytic.b, result.std_error_b);

  Report report = start_report("simulate", config);
  report.heading.push_back(fmt::format("initial state {} = {}, p={} q={}, {} rounds, seed {}",
                                       initial.description, state_text(initial.state),
                                       format_number(options.p, kTableDigits),
                                       format_number(options.q, kTableDigits), options.rounds,
                                       options.seed));
  json counts = json::object();
  std::array<double, 4> freqs{};
  Table outcomes{"Measured outcomes",
                 {"outcome", "count", "frequency", "probability", "payoff_a", "payoff_b"},
                 {}};
  for (std::size_t k = 0; k < 4; ++k) {
    counts[kOutcomeNames[k]] = result.counts[k];
    freqs[k] = static_cast<double>(result.counts[k]) / static_cast<double>(result.rounds);
    outcomes.rows.push_back({kOutcomeNames[k], std::to_string(result.counts[k]), freqs[k], probs[k],
                             ops.alice.diagonal[k], ops.bob.diagonal[k]});
  }
  auto optional_number = [](const std::optional<double>& x) -> json {
    return x ? json_number(*x) : json(nullptr);
  };
  auto optional_cell = [](const std::optional<double>& x) -> Cell {
    if (x) return *x;
    return std::monostate{};
  };
  report.document.update({{"initial_state",
                           {{"description", initial.description},
                            {"amplitudes", state_json(initial.state)}}},
                          {"rounds", result.rounds},
                          {"seed", options.seed},
                          {"p", json_number(options.p)},
                          {"q", json_number(options.q)},
                          {"counts", counts},
                          {"frequencies", outcome_json(freqs)},
                          {"probabilities", outcome_json(probs)},
                          {"mean_payoff_a", json_number(result.mean_payoff_a)},
                          {"mean_payoff_b", json_number(result.mean_payoff_b)},
                          {"std_error_a", json_number(result.std_error_a)},
                          {"std_error_b", json_number(result.std_error_b)},
                          {"analytic", {{"payoff_a", json_number(analytic.a)},
                                        {"payoff_b", json_number(analytic.b)}}},
                          {"z_score_a", optional_number(z_a)},
                          {"z_score_b", optional_number(z_b)}});
  Table summary{"Mean payoffs",
                {"player", "mean", "std_error", "analytic", "z_score"},
                {{"alice", result.mean_payoff_a, result.std_error_a, analytic.a, optional_cell(z_a)},
                 {"bob", result.mean_payoff_b, result.std_error_b, analytic.b, optional_cell(z_b)}}};
  report.tables.push_back(std::move(outcomes));
  report.tables.push_back(std::move(summary));
  finish(report);
  return report;
}

Report cmd_sweep(const GameConfig& config, const SweepOptions& options) {
  if (options.steps < 2) {
    throw ConfigError(fmt::format("--steps must be at least 2, got {}", options.steps));
  }
  const int steps = options.steps;
  auto grid = [&](int i) { return i == steps - 1 ? 1.0 : static_cast<double>(i) / (steps - 1); };

  Report report = start_report("sweep", config);
  Table table;
  std::string parameter;

  if (options.parameter == SweepParameter::a2) {
    parameter = "a2";
    const auto* params = config.bos();
    if (params == nullptr) {
      throw ConfigError("sweeping a2 needs Battle of the Sexes payoffs {alpha, beta, gamma}");
    }
    table = Table{"Entangled equilibria across a2",
                  {"a2", "corner11_payoff_a", "corner11_payoff_b", "corner00_payoff_a",
                   "corner00_payoff_b", "interior_p", "interior_q", "interior_payoff_a",
                   "interior_payoff_b", "unique_solution"},
                  {}};
    for (int i = 0; i < steps; ++i) {
      const EntangledFamilyState state(grid(i));
      const auto eqs = entangled_equilibria(*params, state);
      const bool unique = unique_solution(*params, state).solution.has_value();
      table.rows.push_back({state.a2(), eqs[0].payoff_a, eqs[0].payoff_b, eqs[1].payoff_a,
                            eqs[1].payoff_b, eqs[2].p_star, eqs[2].q_star, eqs[2].payoff_a,
                            eqs[2].payoff_b, std::string(unique ? "yes" : "no")});
    }
    report.heading.push_back(fmt::format("sweep of a2 over {} steps, state a|OO> + b|TT>", steps));
  } else {
    const bool sweep_p = options.parameter == SweepParameter::p;
    parameter = sweep_p ? "p" : "q";
    const auto& fixed = sweep_p ? options.q : options.p;
    if (!fixed) {
      throw ConfigError(sweep_p ? "sweeping p needs --q for Bob's fixed probability"
                                : "sweeping q needs --p for Alice's fixed probability");
    }
    if (*fixed < 0.0 || *fixed > 1.0) {
      throw ConfigError(fmt::format("fixed probability {} is outside [0, 1]", *fixed));
    }
    const InitialState initial = config.initial_or_default();
    const auto ops = payoff_operators(config.bimatrix_2x2());
    const auto surfaces =
        bilinear_payoff_coefficients(DensityMatrix::pure(initial.state), ops.alice, ops.bob);
    table = Table{sweep_p ? "Payoffs across Alice's probability p" : "Payoffs across Bob's probability q",
                  {"p", "q", "payoff_a", "payoff_b", "alice_best_response", "bob_best_response"},
                  {}};
    for (int i = 0; i < steps; ++i) {
      const double p = sweep_p ? grid(i) : *fixed;
      const double q = sweep_p ? *fixed : grid(i);
      table.rows.push_back({p, q, surfaces[0](p, q), surfaces[1](p, q),
                            best_response(surfaces[0].slope_in_p(q)),
                            best_response(surfaces[1].slope_in_q(p))});
    }
    report.heading.push_back(fmt::format("sweep of {} over {} steps, {} fixed at {}, initial state {}",
                                         parameter, steps, sweep_p ? "q" : "p",
                                         format_number(*fixed, kTableDigits), initial.description));
  }

  json rows = json::array();
  for (const auto& row : table.rows) {
    json entry = json::object();
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      if (const auto* x = std::get_if<double>(&row[c])) {
        entry[table.columns[c]] = json_number(*x);
      } else if (const auto* s = std::get_if<std::string>(&row[c])) {
        entry[table.columns[c]] = *s;
      } else {
        entry[table.columns[c]] = nullptr;
      }
    }
    rows.push_back(entry);
  }
  report.document["parameter"] = parameter;
  report.document["steps"] = steps;
  report.document["columns"] = table.columns;
  report.document["rows"] = rows;
  report.tables.push_back(std::move(table));
  finish(report);
  return report;
}

int guarded(const std::function<void()>& body, std::ostream& err) {
  try {
    body();
    return kSuccess;
  } catch (const ConfigError& e) {
    err << "qstatic: error: " << e.what() << '\n';
    return kValidationError;
  } catch (const ConstraintViolation& e) {
    err << "qstatic: error: " << e.what() << '\n';
    return kValidationError;
  } catch (const InternalConsistencyError& e) {
    err << "qstatic: internal error: " << e.what() << '\n';
    return kInternalError;
  } catch (const std::exception& e) {
    err << "qstatic: internal error: " << e.what() << '\n';
    return kInternalError;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classical and quantum analysis of two-player static games", "qstatic"};
  app.require_subcommand(1);

  std::string config_path;
  std::string format_name = "table";
  std::string mode_name = "factorizable";
  std::string param_name = "a2";
  SimulateOptions sim;
  SweepOptions sweep;
  double fixed_p = 0.0;
  double fixed_q = 0.0;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Game configuration (JSON)")->required();
    sub->add_option("--format", format_name, "Output format")
        ->check(CLI::IsMember({"json", "csv", "table"}))
        ->capture_default_str();
  };
  const CLI::Range unit(0.0, 1.0);

  auto* classical = app.add_subcommand("classical", "Dominance, pure and mixed equilibria");
  add_common(classical);

  auto* quantum = app.add_subcommand("quantum", "Equilibria over quantum strategies");
  add_common(quantum);
  quantum->add_option("--mode", mode_name, "Strategy space")
      ->check(CLI::IsMember({"factorizable", "entangled"}))
      ->capture_default_str();

  auto* simulate_cmd = app.add_subcommand("simulate", "Repeated play with measurement");
  add_common(simulate_cmd);
  simulate_cmd->add_option("--rounds", sim.rounds, "Number of rounds")
      ->check(CLI::Range(std::uint64_t{1}, std::numeric_limits<std::uint64_t>::max()))
      ->capture_default_str();
  simulate_cmd->add_option("--seed", sim.seed, "Random seed")->capture_default_str();
  simulate_cmd->add_option("--p", sim.p, "Alice's identity probability")->required()->check(unit);
  simulate_cmd->add_option("--q", sim.q, "Bob's identity probability")->required()->check(unit);

  auto* sweep_cmd = app.add_subcommand("sweep", "Tabulate equilibria or payoffs over a parameter");
  add_common(sweep_cmd);
  sweep_cmd->add_option("--param", param_name, "Swept parameter")
      ->check(CLI::IsMember({"a2", "p", "q"}))
      ->capture_default_str();
  sweep_cmd->add_option("--steps", sweep.steps, "Number of grid points (>= 2)")->capture_default_str();
  auto* sweep_p = sweep_cmd->add_option("--p", fixed_p, "Fixed p for a q sweep")->check(unit);
  auto* sweep_q = sweep_cmd->add_option("--q", fixed_q, "Fixed q for a p sweep")->check(unit);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kValidationError;
  }

  return guarded(
      [&] {
        const GameConfig config = load_config(config_path);
        Report report;
        if (classical->parsed()) {
          report = cmd_classical(config);
        } else if (quantum->parsed()) {
          report = cmd_quantum(config, mode_name == "entangled" ? QuantumMode::entangled
                                                                : QuantumMode::factorizable);
        } else if (simulate_cmd->parsed()) {
          report = cmd_simulate(config, sim);
        } else {
          sweep.parameter = param_name == "p"   ? SweepParameter::p
                            : param_name == "q" ? SweepParameter::q
                                                : SweepParameter::a2;
          if (sweep_p->count() > 0) sweep.p = fixed_p;
          if (sweep_q->count() > 0) sweep.q = fixed_q;
          report = cmd_sweep(config, sweep);
        }
        const Format format = format_name == "json"  ? Format::json
                              : format_name == "csv" ? Format::csv
                                                     : Format::table;
        render(report, format, out);
      },
      err);
}

}  // namespace qstatic::cli
