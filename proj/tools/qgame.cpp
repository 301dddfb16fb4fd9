// qgame: solve, verify and inspect quantum zero-sum games from JSON specs.
//
// Exit codes: 0 success / certified, 1 invalid input, 2 solver did not reach
// its gap tolerance (the report is still written).

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "qgame/game_io.hpp"
#include "qgame/verify.hpp"

namespace {

using qgame::io::json;

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kNotConverged = 2;

struct Overrides {
  std::optional<double> gap_tol;
  std::optional<long> max_iters;
  std::optional<std::uint64_t> seed;

  qgame::GameInstance<double> apply(const qgame::GameInstance<double>& g) const {
    auto opts = g.options();
    if (gap_tol) opts.gap_tol = *gap_tol;
    if (max_iters) opts.max_iters = *max_iters;
    if (seed) opts.seed = *seed;
    if (!(opts.gap_tol > 0) || opts.max_iters < 1) throw qgame::DomainError("--gap-tol must be > 0 and --max-iters >= 1");
    return g.with_options(opts);
  }
};

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw qgame::io::SpecError("cannot write '" + path + "'");
  out << text;
}

int cmd_solve(const std::string& spec_path, const std::string& out_path, const std::string& history_path,
              const std::string& marginals_path, const Overrides& overrides) {
  const auto game = overrides.apply(qgame::io::quantum_game(qgame::io::load_game_spec(spec_path)));
  const auto result = qgame::solve(game);
  const std::string report = qgame::io::report_json(game, result).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << report;
  } else {
    write_file(out_path, report);
  }
  if (!history_path.empty()) {
    std::ostringstream os;
    qgame::io::write_history_csv(os, result);
    write_file(history_path, os.str());
  }
  if (!marginals_path.empty()) {
    std::ostringstream os;
    qgame::io::write_marginals_csv(os, game, result);
    write_file(marginals_path, os.str());
  }
  std::cerr << std::setprecision(10) << "value " << result.value << " in [" << result.value_lower << ", "
            << result.value_upper << "], gap " << result.gap << " after " << result.iterations << " iterations"
            << (result.converged ? "" : " (NOT converged)") << "\n";
  return result.converged ? kOk : kNotConverged;
}

int cmd_verify(const std::string& spec_path, long samples, std::uint64_t seed, const Overrides& overrides) {
  if (samples < 1) throw qgame::DomainError("--samples must be >= 1");
  const auto game = overrides.apply(qgame::io::quantum_game(qgame::io::load_game_spec(spec_path)));
  bool all = true;
  std::cout << std::left << std::setw(24) << "suite" << std::setw(8) << "trials" << std::setw(16) << "max_violation"
            << std::setw(12) << "tolerance" << "status\n";
  for (const auto& s : qgame::run_invariant_suites(game, samples, seed)) {
    all = all && s.passed;
    std::cout << std::left << std::setw(24) << s.name << std::setw(8) << s.trials << std::setw(16)
              << std::setprecision(4) << s.max_violation << std::setw(12) << s.tolerance
              << (s.passed ? "PASS" : "FAIL") << "\n";
  }
  return all ? kOk : kInvalid;
}

int cmd_best_response(const std::string& spec_path, const std::string& side, const std::string& opponent_path,
                      const std::string& objective_path, double gap_tol) {
  qgame::OracleResult<double> result = [&] {
    if (!objective_path.empty()) {
      // {"objective": <operator>, "energy": <constraint>, "sense": "max"|"min"}
      const json doc = qgame::io::load_json(objective_path);
      if (!doc.contains("objective") || !doc.contains("energy")) {
        throw qgame::io::SpecError("objective file needs \"objective\" and \"energy\"");
      }
      const auto m = qgame::io::parse_operator(doc["objective"], "objective");
      const auto k = qgame::io::parse_energy(doc["energy"], "energy");
      const std::string sense = doc.value("sense", "max");
      if (sense != "max" && sense != "min") throw qgame::io::SpecError("spec field 'sense': expected \"max\" or \"min\"");
      return sense == "max" ? qgame::best_response_max(m, k, gap_tol) : qgame::best_response_min(m, k, gap_tol);
    }
    if (spec_path.empty() || opponent_path.empty()) {
      throw qgame::io::SpecError("best-response needs a spec and --opponent, or --objective");
    }
    const auto game = qgame::io::quantum_game(qgame::io::load_game_spec(spec_path));
    const auto opponent = qgame::io::parse_state(qgame::io::load_json(opponent_path), "opponent");
    if (side == "blue") {
      return qgame::best_response_max(game.blue_response_operator(opponent), game.constraint_blue(), gap_tol);
    }
    return qgame::best_response_min(game.red_response_operator(opponent), game.constraint_red(), gap_tol);
  }();
  std::cout << qgame::io::to_json(result).dump(2) << "\n";
  return kOk;
}

int cmd_classical(const std::string& spec_path, const Overrides& overrides) {
  const auto spec = qgame::io::load_game_spec(spec_path);
  const auto* classical = std::get_if<qgame::io::ClassicalSpec>(&spec);
  if (classical == nullptr) throw qgame::io::SpecError("spec field 'type': classical command needs \"type\": \"classical\"");
  const auto game = overrides.apply(classical->lift());
  const auto& opts = game.options();
  const auto sol = qgame::solve_classical(classical->game, opts.gap_tol, opts.max_iters);
  const auto quantum = qgame::solve(game);
  json out = {{"classical",
               {{"value", sol.value},
                {"value_lower", sol.lower},
                {"value_upper", sol.upper},
                {"gap", sol.gap},
                {"iterations", sol.iterations},
                {"converged", sol.converged},
                {"p", std::vector<double>(sol.p.begin(), sol.p.end())},
                {"q", std::vector<double>(sol.q.begin(), sol.q.end())}}},
              {"quantum",
               {{"value", quantum.value},
                {"value_lower", quantum.value_lower},
                {"value_upper", quantum.value_upper},
                {"gap", quantum.gap},
                {"iterations", quantum.iterations},
                {"converged", quantum.converged}}},
              {"difference", std::abs(sol.value - quantum.value)}};
  std::cout << out.dump(2) << "\n";
  return sol.converged && quantum.converged ? kOk : kNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimax solver for quantum zero-sum games on energy-capped state sets"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_path;
  std::string history_path;
  std::string marginals_path;
  std::string side = "blue";
  std::string opponent_path;
  std::string objective_path;
  long samples = 1000;
  std::uint64_t verify_seed = 0;
  double oracle_gap_tol = 1e-9;
  Overrides overrides;

  const auto add_overrides = [&overrides](CLI::App* cmd) {
    cmd->add_option("--gap-tol", overrides.gap_tol, "Solver duality-gap tolerance");
    cmd->add_option("--max-iters", overrides.max_iters, "Fictitious-play iteration limit");
  };

  auto* solve = app.add_subcommand("solve", "Compute and certify the minimax value");
  solve->add_option("spec", spec_path, "Game spec JSON")->required();
  solve->add_option("--out", out_path, "Report JSON path (stdout if omitted)");
  solve->add_option("--history", history_path, "Gap history CSV path");
  solve->add_option("--marginals", marginals_path, "Optimal marginals CSV path");
  solve->add_option("--seed", overrides.seed, "Solver seed");
  add_overrides(solve);

  auto* verify = app.add_subcommand("verify", "Run the randomized invariant suites");
  verify->add_option("spec", spec_path, "Game spec JSON")->required();
  verify->add_option("--samples", samples, "Trials per suite")->capture_default_str();
  verify->add_option("--seed", verify_seed, "Sampling seed")->capture_default_str();
  add_overrides(verify);

  auto* best = app.add_subcommand("best-response", "Exact best response against an opponent state");
  best->add_option("spec", spec_path, "Game spec JSON");
  best->add_option("--side", side, "Responding player")->check(CLI::IsMember({"blue", "red"}))->capture_default_str();
  best->add_option("--opponent", opponent_path, "Opponent density operator JSON");
  best->add_option("--objective", objective_path, "Raw oracle problem JSON instead of a game");
  best->add_option("--gap-tol", oracle_gap_tol, "Oracle gap tolerance")->capture_default_str();

  auto* classical = app.add_subcommand("classical", "Solve a classical game and its quantum lift");
  classical->add_option("spec", spec_path, "Classical game spec JSON")->required();
  add_overrides(classical);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*solve) return cmd_solve(spec_path, out_path, history_path, marginals_path, overrides);
    if (*verify) return cmd_verify(spec_path, samples, verify_seed, overrides);
    if (*best) return cmd_best_response(spec_path, side, opponent_path, objective_path, oracle_gap_tol);
    if (*classical) return cmd_classical(spec_path, overrides);
  } catch (const qgame::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kInvalid;
}
