#pragma once

// Classical continuous games discretised on move grids: diagonal
// (multiplication-operator) lifts into quantum games, and a stand-alone
// vector fictitious-play solver used as an independent cross-check.

#include <Eigen/Dense>

#include <optional>

#include "qgame/saddle_solver.hpp"

namespace qgame {

/// Moves of each player on an increasing grid and Z on the grid product.
class ClassicalGame {
 public:
  ClassicalGame(Eigen::VectorXd blue_moves, Eigen::VectorXd red_moves, Eigen::MatrixXd payoff);

  const Eigen::VectorXd& blue_moves() const { return blue_moves_; }
  const Eigen::VectorXd& red_moves() const { return red_moves_; }
  const Eigen::MatrixXd& payoff() const { return payoff_; }

  /// p^T Z q.
  double expected_payoff(const Eigen::VectorXd& p, const Eigen::VectorXd& q) const;

 private:
  Eigen::VectorXd blue_moves_;
  Eigen::VectorXd red_moves_;
  Eigen::MatrixXd payoff_;
};

struct ClassicalSolution {
  double value;
  double lower;
  double upper;
  double gap;
  Eigen::VectorXd p;
  Eigen::VectorXd q;
  long iterations;
  bool converged;
};

/// diag(grid): the truncated multiplication operator whose spectrum is the grid.
HermitianOperator<double> discretize_multiplication_operator(const Eigen::VectorXd& grid);

/// Fictitious play on the simplices with pure best responses (lowest index on
/// ties); the bracket [min_j (p^T Z)_j, max_i (Z q)_i] is checked every step.
ClassicalSolution solve_classical(const ClassicalGame& game, double gap_tol = 1e-3, long max_iters = 200000);

/// Diagonal energy operator and cap for one side of a lifted game.
struct EnergyData {
  Eigen::VectorXd levels;
  double cap;
};

/// Default energy for n moves: levels 0, 1, ..., n - 1 with cap n - 1, which
/// never binds.
EnergyData inactive_energy(Eigen::Index moves);

/// Quantum game with diagonal players from the grids and the payoff as a
/// table kernel on their spectra.
GameInstance<double> lift_to_quantum(const ClassicalGame& game, const std::optional<EnergyData>& blue_energy = {},
                                     const std::optional<EnergyData>& red_energy = {},
                                     SolverOptions<double> options = {});

}  // namespace qgame
