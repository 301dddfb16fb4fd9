#pragma once

// JSON game specifications, result reports and CSV exports.
//
// Complex matrices are nested arrays of [re, im] pairs. Doubles are written
// in shortest round-trip form, so a report read back yields bit-identical
// matrices.

#include "json.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <variant>

#include "qgame/classical_bridge.hpp"

namespace qgame::io {

using json = nlohmann::json;

/// Unreadable or schema-invalid specification; the message names the field.
class SpecError : public Error {
 public:
  using Error::Error;
};

struct ClassicalSpec {
  ClassicalGame game;
  std::optional<EnergyData> energy_blue;
  std::optional<EnergyData> energy_red;
  SolverOptions<double> options;

  GameInstance<double> lift() const { return lift_to_quantum(game, energy_blue, energy_red, options); }
};

using GameSpec = std::variant<GameInstance<double>, ClassicalSpec>;

json load_json(const std::string& path);

SolverOptions<double> parse_solver_options(const json& doc);
ComplexMatrix<double> parse_complex_matrix(const json& value, const std::string& field);
HermitianOperator<double> parse_operator(const json& value, const std::string& field);
PayoffKernel<double> parse_kernel(const json& value, const std::string& field);
EnergyConstraint<double> parse_energy(const json& value, const std::string& field);
/// Accepts {"matrix": [...]} (as written in reports) or a bare matrix.
DensityOperator<double> parse_state(const json& value, const std::string& field);

GameSpec parse_game_spec(const json& doc);
GameSpec load_game_spec(const std::string& path);

/// The quantum game of a spec, lifting classical specs.
GameInstance<double> quantum_game(const GameSpec& spec);

json to_json(const ComplexMatrix<double>& m);
json to_json(const DensityOperator<double>& rho);
json to_json(const StepDistribution<double>& s);
json to_json(const OracleResult<double>& r);

/// SaddleResult report. The "generated_at" timestamp is the only field that
/// differs between runs on identical input.
json report_json(const GameInstance<double>& game, const SaddleResult<double>& result, bool timestamp = true);

void write_history_csv(std::ostream& os, const SaddleResult<double>& result);
void write_marginals_csv(std::ostream& os, const GameInstance<double>& game, const SaddleResult<double>& result);

}  // namespace qgame::io
