#include "qgame/classical_bridge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

namespace qgame {

namespace {

void check_grid(const Eigen::VectorXd& grid, const char* what) {
  if (grid.size() < 1) throw DomainError(std::string(what) + " grid is empty");
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    if (!std::isfinite(grid(i))) throw DomainError(std::string(what) + " grid has non-finite points");
    if (i > 0 && !(grid(i) > grid(i - 1))) {
      throw DomainError(std::string(what) + " grid must be strictly increasing");
    }
  }
}

}  // namespace

ClassicalGame::ClassicalGame(Eigen::VectorXd blue_moves, Eigen::VectorXd red_moves, Eigen::MatrixXd payoff)
    : blue_moves_(std::move(blue_moves)), red_moves_(std::move(red_moves)), payoff_(std::move(payoff)) {
  check_grid(blue_moves_, "blue");
  check_grid(red_moves_, "red");
  if (payoff_.rows() != blue_moves_.size() || payoff_.cols() != red_moves_.size()) {
    throw DimensionMismatch("classical payoff is " + std::to_string(payoff_.rows()) + "x" +
                            std::to_string(payoff_.cols()) + " but the grids have " +
                            std::to_string(blue_moves_.size()) + " and " + std::to_string(red_moves_.size()) +
                            " moves");
  }
  if (!payoff_.allFinite() || payoff_.minCoeff() < 0) {
    throw InvalidKernel("classical payoff entries must be finite and non-negative");
  }
}

double ClassicalGame::expected_payoff(const Eigen::VectorXd& p, const Eigen::VectorXd& q) const {
  if (p.size() != payoff_.rows() || q.size() != payoff_.cols()) {
    throw DimensionMismatch("mixed strategy length does not match the payoff matrix");
  }
  return p.dot(payoff_ * q);
}

HermitianOperator<double> discretize_multiplication_operator(const Eigen::VectorXd& grid) {
  check_grid(grid, "move");
  return HermitianOperator<double>::diagonal(grid);
}

ClassicalSolution solve_classical(const ClassicalGame& game, double gap_tol, long max_iters) {
  if (!(gap_tol > 0) || max_iters < 1) throw DomainError("solve_classical: need gap_tol > 0 and max_iters >= 1");
  const Eigen::MatrixXd& z = game.payoff();
  const Eigen::Index rows = z.rows();
  const Eigen::Index cols = z.cols();

  Eigen::VectorXd p = Eigen::VectorXd::Unit(rows, 0);
  Eigen::VectorXd q = Eigen::VectorXd::Unit(cols, 0);
  ClassicalSolution best{0, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                         0, p, q, 0, false};

  long t = 0;
  for (;; ++t) {
    const Eigen::VectorXd row_payoffs = z * q;               // blue's payoff per pure move
    const Eigen::VectorXd col_payoffs = z.transpose() * p;  // red's loss per pure move
    Eigen::Index i_best = 0;
    Eigen::Index j_best = 0;
    const double upper = row_payoffs.maxCoeff(&i_best);
    const double lower = col_payoffs.minCoeff(&j_best);
    if (t > 0) {
      if (lower > best.lower) {
        best.lower = lower;
        best.p = p;
      }
      if (upper < best.upper) {
        best.upper = upper;
        best.q = q;
      }
      if (best.upper - best.lower <= gap_tol) {
        best.converged = true;
        break;
      }
    }
    if (t == max_iters) break;
    const double step = 1.0 / double(t + 1);
    p *= 1.0 - step;
    p(i_best) += step;
    q *= 1.0 - step;
    q(j_best) += step;
  }
  best.iterations = t;
  best.gap = std::max(0.0, best.upper - best.lower);
  best.value = 0.5 * (best.lower + best.upper);
  return best;
}

EnergyData inactive_energy(Eigen::Index moves) {
  return {Eigen::VectorXd::LinSpaced(moves, 0.0, double(moves - 1)), double(moves - 1)};
}

GameInstance<double> lift_to_quantum(const ClassicalGame& game, const std::optional<EnergyData>& blue_energy,
                                     const std::optional<EnergyData>& red_energy, SolverOptions<double> options) {
  const EnergyData eb = blue_energy.value_or(inactive_energy(game.blue_moves().size()));
  const EnergyData er = red_energy.value_or(inactive_energy(game.red_moves().size()));
  return GameInstance<double>(discretize_multiplication_operator(game.blue_moves()),
                              discretize_multiplication_operator(game.red_moves()),
                              PayoffKernel<double>::table(game.payoff()),
                              EnergyConstraint<double>::diagonal(eb.levels, eb.cap),
                              EnergyConstraint<double>::diagonal(er.levels, er.cap), options);
}

}  // namespace qgame
