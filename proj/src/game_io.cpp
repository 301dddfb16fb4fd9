#include "qgame/game_io.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace qgame::io {

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw SpecError("spec field '" + field + "': " + what);
}

const json& require(const json& obj, const std::string& key, const std::string& field) {
  if (!obj.is_object()) fail(field, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end()) fail(field.empty() ? key : field + "." + key, "missing required key");
  return *it;
}

std::string join(const std::string& field, const std::string& key) { return field.empty() ? key : field + "." + key; }

double number(const json& value, const std::string& field) {
  if (!value.is_number()) fail(field, "expected a number");
  return value.get<double>();
}

long integer(const json& value, const std::string& field) {
  if (!value.is_number_integer()) fail(field, "expected an integer");
  return value.get<long>();
}

Eigen::VectorXd real_vector(const json& value, const std::string& field) {
  if (!value.is_array() || value.empty()) fail(field, "expected a non-empty array of numbers");
  Eigen::VectorXd v(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) v(Index(i)) = number(value[i], field + "[" + std::to_string(i) + "]");
  return v;
}

Eigen::MatrixXd real_matrix(const json& value, const std::string& field) {
  if (!value.is_array() || value.empty() || !value[0].is_array() || value[0].empty()) {
    fail(field, "expected a non-empty array of non-empty rows");
  }
  const std::size_t cols = value[0].size();
  Eigen::MatrixXd m(value.size(), cols);
  for (std::size_t i = 0; i < value.size(); ++i) {
    const std::string row = field + "[" + std::to_string(i) + "]";
    if (!value[i].is_array() || value[i].size() != cols) fail(row, "rows must all have " + std::to_string(cols) + " entries");
    for (std::size_t j = 0; j < cols; ++j) m(Index(i), Index(j)) = number(value[i][j], row + "[" + std::to_string(j) + "]");
  }
  return m;
}

std::string timestamp_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::ostringstream os;
  os << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

}  // namespace

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SpecError("'" + path + "' is not valid JSON: " + e.what());
  }
}

SolverOptions<double> parse_solver_options(const json& doc) {
  SolverOptions<double> opts;
  if (!doc.is_object() || !doc.contains("solver")) return opts;
  const json& s = doc["solver"];
  if (!s.is_object()) fail("solver", "expected an object");
  if (s.contains("gap_tol")) opts.gap_tol = number(s["gap_tol"], "solver.gap_tol");
  if (s.contains("max_iters")) opts.max_iters = integer(s["max_iters"], "solver.max_iters");
  if (s.contains("check_interval")) opts.check_interval = integer(s["check_interval"], "solver.check_interval");
  if (s.contains("seed")) {
    if (!s["seed"].is_number_unsigned()) fail("solver.seed", "expected a non-negative integer");
    opts.seed = s["seed"].get<std::uint64_t>();
  }
  if (!(opts.gap_tol > 0)) fail("solver.gap_tol", "must be positive");
  if (opts.max_iters < 1) fail("solver.max_iters", "must be >= 1");
  if (opts.check_interval < 1) fail("solver.check_interval", "must be >= 1");
  return opts;
}

ComplexMatrix<double> parse_complex_matrix(const json& value, const std::string& field) {
  if (!value.is_array() || value.empty()) fail(field, "expected a non-empty square array of [re, im] entries");
  const std::size_t n = value.size();
  ComplexMatrix<double> m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string row = field + "[" + std::to_string(i) + "]";
    if (!value[i].is_array() || value[i].size() != n) fail(row, "matrix must be square (" + std::to_string(n) + " columns)");
    for (std::size_t j = 0; j < n; ++j) {
      const json& entry = value[i][j];
      const std::string where = row + "[" + std::to_string(j) + "]";
      if (entry.is_number()) {
        m(Index(i), Index(j)) = {entry.get<double>(), 0.0};
      } else if (entry.is_array() && entry.size() == 2) {
        m(Index(i), Index(j)) = {number(entry[0], where + "[0]"), number(entry[1], where + "[1]")};
      } else {
        fail(where, "expected [re, im]");
      }
    }
  }
  return m;
}

HermitianOperator<double> parse_operator(const json& value, const std::string& field) {
  const json& type = require(value, "type", field);
  if (type == "diagonal") {
    return HermitianOperator<double>::diagonal(real_vector(require(value, "eigenvalues", field), join(field, "eigenvalues")));
  }
  if (type == "dense_hermitian") {
    const std::string where = join(field, "matrix");
    try {
      return HermitianOperator<double>(parse_complex_matrix(require(value, "matrix", field), where));
    } catch (const InvalidOperator& e) {
      fail(where, e.what());
    }
  }
  fail(join(field, "type"), "expected \"diagonal\" or \"dense_hermitian\"");
}

PayoffKernel<double> parse_kernel(const json& value, const std::string& field) {
  const json& type = require(value, "type", field);
  if (type == "table") return PayoffKernel<double>::table(real_matrix(require(value, "values", field), join(field, "values")));
  if (type != "builtin") fail(join(field, "type"), "expected \"table\" or \"builtin\"");
  const json& name = require(value, "name", field);
  const double shift = value.contains("shift") ? number(value["shift"], join(field, "shift")) : 0.0;
  if (name == "squared_difference") return PayoffKernel<double>::squared_difference(shift);
  if (name == "shifted_product") return PayoffKernel<double>::shifted_product(shift);
  fail(join(field, "name"), "unknown builtin kernel (expected \"squared_difference\" or \"shifted_product\")");
}

EnergyConstraint<double> parse_energy(const json& value, const std::string& field) {
  const double cap = number(require(value, "cap", field), join(field, "cap"));
  if (value.contains("eigenvalues")) {
    return EnergyConstraint<double>::diagonal(real_vector(value["eigenvalues"], join(field, "eigenvalues")), cap);
  }
  if (value.contains("matrix")) {
    const std::string where = join(field, "matrix");
    try {
      return EnergyConstraint<double>(HermitianOperator<double>(parse_complex_matrix(value["matrix"], where)), cap);
    } catch (const InvalidOperator& e) {
      fail(where, e.what());
    }
  }
  fail(field, "expected \"eigenvalues\" or \"matrix\"");
}

DensityOperator<double> parse_state(const json& value, const std::string& field) {
  if (value.is_object()) return DensityOperator<double>(parse_complex_matrix(require(value, "matrix", field), join(field, "matrix")));
  return DensityOperator<double>(parse_complex_matrix(value, field));
}

namespace {

std::optional<EnergyData> classical_energy(const json& doc, const std::string& key) {
  if (!doc.contains(key)) return std::nullopt;
  const json& e = doc[key];
  return EnergyData{real_vector(require(e, "eigenvalues", key), key + ".eigenvalues"),
                    number(require(e, "cap", key), key + ".cap")};
}

EnergyConstraint<double> energy_or_default(const json& doc, const std::string& key, Index dim) {
  if (doc.contains(key)) {
    auto e = parse_energy(doc[key], key);
    if (e.dim() != dim) {
      fail(key, "energy operator is " + std::to_string(e.dim()) + "-dimensional, player is " + std::to_string(dim) +
                    "-dimensional");
    }
    return e;
  }
  const EnergyData d = inactive_energy(dim);
  return EnergyConstraint<double>::diagonal(d.levels, d.cap);
}

}  // namespace

GameSpec parse_game_spec(const json& doc) {
  if (!doc.is_object()) throw SpecError("spec must be a JSON object");
  const SolverOptions<double> options = parse_solver_options(doc);
  if (doc.contains("type")) {
    if (doc["type"] != "classical") fail("type", "expected \"classical\" (omit for quantum games)");
    ClassicalGame game(real_vector(require(doc, "blue_moves", ""), "blue_moves"),
                       real_vector(require(doc, "red_moves", ""), "red_moves"),
                       real_matrix(require(doc, "payoff", ""), "payoff"));
    return ClassicalSpec{std::move(game), classical_energy(doc, "energy_blue"), classical_energy(doc, "energy_red"),
                         options};
  }
  auto blue = parse_operator(require(doc, "blue_operator", ""), "blue_operator");
  auto red = parse_operator(require(doc, "red_operator", ""), "red_operator");
  auto kernel = parse_kernel(require(doc, "payoff", ""), "payoff");
  auto eb = energy_or_default(doc, "energy_blue", blue.dim());
  auto er = energy_or_default(doc, "energy_red", red.dim());
  return GameInstance<double>(std::move(blue), std::move(red), kernel, std::move(eb), std::move(er), options);
}

GameSpec load_game_spec(const std::string& path) { return parse_game_spec(load_json(path)); }

GameInstance<double> quantum_game(const GameSpec& spec) {
  if (const auto* c = std::get_if<ClassicalSpec>(&spec)) return c->lift();
  return std::get<GameInstance<double>>(spec);
}

json to_json(const ComplexMatrix<double>& m) {
  json rows = json::array();
  for (Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json to_json(const DensityOperator<double>& rho) { return {{"dim", rho.dim()}, {"matrix", to_json(rho.matrix())}}; }

json to_json(const StepDistribution<double>& s) {
  return {{"support", std::vector<double>(s.support().begin(), s.support().end())},
          {"masses", std::vector<double>(s.masses().begin(), s.masses().end())}};
}

json to_json(const OracleResult<double>& r) {
  return {{"value", r.primal_value},   {"dual_value", r.dual_value}, {"multiplier", r.multiplier},
          {"gap", r.gap},              {"certified", r.certified},   {"iterations", r.iterations},
          {"state", to_json(r.state)}};
}

json report_json(const GameInstance<double>& game, const SaddleResult<double>& result, bool timestamp) {
  json history = json::array();
  for (const auto& h : result.gap_history) history.push_back({h.iteration, h.lower, h.upper, h.gap});
  json report = {
      {"value", result.value},
      {"value_lower", result.value_lower},
      {"value_upper", result.value_upper},
      {"gap", result.gap},
      {"gap_tol", game.options().gap_tol},
      {"converged", result.converged},
      {"iterations", result.iterations},
      {"zmax", game.payoff().zmax},
      {"rho_star", to_json(result.rho_star)},
      {"phi_star", to_json(result.phi_star)},
      {"marginals",
       {{"blue", to_json(game.blue_marginal(result.rho_star))}, {"red", to_json(game.red_marginal(result.phi_star))}}},
      {"energy", {{"blue", game.constraint_blue().energy_of(result.rho_star)},
                  {"red", game.constraint_red().energy_of(result.phi_star)}}},
      {"gap_history", std::move(history)},
  };
  if (timestamp) report["generated_at"] = timestamp_now();
  return report;
}

void write_history_csv(std::ostream& os, const SaddleResult<double>& result) {
  const auto old = os.precision(17);
  os << "iteration,lower,upper,gap\n";
  for (const auto& h : result.gap_history) os << h.iteration << ',' << h.lower << ',' << h.upper << ',' << h.gap << '\n';
  os.precision(old);
}

void write_marginals_csv(std::ostream& os, const GameInstance<double>& game, const SaddleResult<double>& result) {
  const auto old = os.precision(17);
  os << "player,lambda,mass\n";
  const auto emit = [&os](const char* who, const StepDistribution<double>& s) {
    for (Index i = 0; i < s.size(); ++i) os << who << ',' << s.support()(i) << ',' << s.masses()(i) << '\n';
  };
  emit("blue", game.blue_marginal(result.rho_star));
  emit("red", game.red_marginal(result.phi_star));
  os.precision(old);
}

}  // namespace qgame::io
