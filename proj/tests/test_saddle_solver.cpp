#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qgame/saddle_solver.hpp"

using namespace qgame;
using Game = GameInstance<double>;
using Constraint = EnergyConstraint<double>;
using Mat = ComplexMatrix<double>;

namespace {

RealVector<double> rv(std::initializer_list<double> xs) {
  RealVector<double> v(Index(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

Game matching_pennies(double blue_cap = 10.0, double red_cap = 10.0) {
  const auto diag = HermitianOperator<double>::diagonal(rv({0, 1}));
  return Game(diag, diag, PayoffKernel<double>::table(RealMatrix<double>::Identity(2, 2)),
              Constraint::diagonal(rv({0, 1}), blue_cap), Constraint::diagonal(rv({0, 1}), red_cap));
}

DensityOperator<double> diagonal_state(double w0, double w1) {
  Mat m = Mat::Zero(2, 2);
  m(0, 0) = w0;
  m(1, 1) = w1;
  return DensityOperator<double>(m);
}

Game random_game(std::mt19937_64& rng, Index nb, Index nr, SolverOptions<double> opts = {}) {
  std::uniform_real_distribution<double> u(0, 5);
  const auto blue = random_hermitian<double>(nb, rng);
  const auto red = random_hermitian<double>(nr, rng);
  RealMatrix<double> z(nb, nr);
  for (Index i = 0; i < nb; ++i)
    for (Index j = 0; j < nr; ++j) z(i, j) = u(rng);
  const auto eb = random_hermitian<double>(nb, rng);
  const auto er = random_hermitian<double>(nr, rng);
  const auto lb = eigensolve<double>(eb.matrix()).eigenvalues();
  const auto lr = eigensolve<double>(er.matrix()).eigenvalues();
  return Game(blue, red, PayoffKernel<double>::table(z), Constraint(eb, lb(0) + 0.3 * (lb(nb - 1) - lb(0))),
              Constraint(er, lr(0) + 0.3 * (lr(nr - 1) - lr(0))), opts);
}

}  // namespace

TEST_CASE("game construction validates dimensions") {
  const auto diag = HermitianOperator<double>::diagonal(rv({0, 1}));
  CHECK_THROWS_AS(Game(diag, diag, PayoffKernel<double>::constant(1.0), Constraint::diagonal(rv({0, 1, 2}), 1.0),
                       Constraint::diagonal(rv({0, 1}), 1.0)),
                  DimensionMismatch);
  CHECK_THROWS_AS(Game(diag, diag, PayoffKernel<double>::table(RealMatrix<double>::Ones(3, 2)),
                       Constraint::diagonal(rv({0, 1}), 1.0), Constraint::diagonal(rv({0, 1}), 1.0)),
                  DimensionMismatch);
}

TEST_CASE("lower and upper values") {
  const auto diag = HermitianOperator<double>::diagonal(rv({0, 1}));
  const Game ones(diag, diag, PayoffKernel<double>::constant(1.0), Constraint::diagonal(rv({0, 1}), 10.0),
                  Constraint::diagonal(rv({0, 1}), 10.0));
  const auto half = diagonal_state(0.5, 0.5);
  CHECK(std::abs(lower_value(ones, half) - 1.0) <= 1e-9);
  CHECK(std::abs(upper_value(ones, half) - 1.0) <= 1e-9);

  const Game mp = matching_pennies();
  CHECK(std::abs(lower_value(mp, half) - 0.5) <= 1e-9);
  CHECK(std::abs(upper_value(mp, half) - 0.5) <= 1e-9);
  CHECK(std::abs(lower_value(mp, diagonal_state(1, 0))) <= 1e-9);
  CHECK(std::abs(upper_value(mp, diagonal_state(1, 0)) - 1.0) <= 1e-9);

  CHECK_THROWS_AS(lower_value(matching_pennies(0.1), half), InvalidState);
}

TEST_CASE("constant kernel converges at the first check") {
  const auto diag = HermitianOperator<double>::diagonal(rv({0, 1, 2}));
  const Game g(diag, diag, PayoffKernel<double>::constant(2.0), Constraint::diagonal(rv({0, 1, 2}), 1.0),
               Constraint::diagonal(rv({0, 1, 2}), 1.0));
  const auto r = solve(g);
  CHECK(r.converged);
  CHECK(r.iterations == g.options().check_interval);
  CHECK(std::abs(r.value - 2.0) <= 1e-9);
  CHECK(r.gap <= 1e-9);
}

TEST_CASE("quantum matching pennies") {
  const Game g = matching_pennies();
  const auto r = solve(g);
  CHECK(r.converged);
  CHECK(std::abs(r.value - 0.5) <= 1e-3);
  CHECK(r.gap <= 1e-3);
  const auto p = g.blue_marginal(r.rho_star);
  const auto q = g.red_marginal(r.phi_star);
  CHECK(std::abs(p.masses()(0) - 0.5) <= 1e-2);
  CHECK(std::abs(q.masses()(0) - 0.5) <= 1e-2);
}

TEST_CASE("energy-starved matching pennies matches the grid brute force") {
  const Game g = matching_pennies(0.1, 10.0);
  const double expected = oracle::grid_minimax_2x2(Eigen::Matrix2d::Identity(), 0.1, 1e-3);
  const auto r = solve(g);
  CHECK(r.converged);
  CHECK(r.value_lower <= expected + 1e-9);
  CHECK(r.value_upper >= expected - 1e-9);
  CHECK(std::abs(r.value - expected) <= 1e-3);
  CHECK(g.constraint_blue().energy_of(r.rho_star) <= 0.1 + 1e-9);
}

TEST_CASE("solver bracket and certificate on random games") {
  std::mt19937_64 rng(9);
  SolverOptions<double> opts;
  opts.gap_tol = 1e-2;
  for (int trial = 0; trial < 6; ++trial) {
    const Game g = random_game(rng, 2 + trial % 3, 2 + (trial + 1) % 3, opts);
    const auto r = solve(g);
    CHECK(r.converged);
    CHECK(r.value_lower <= r.value_upper + 1e-12);
    CHECK(r.gap == doctest::Approx(r.value_upper - r.value_lower));
    CHECK(membership(r.rho_star, g.constraint_blue()));
    CHECK(membership(r.phi_star, g.constraint_red()));

    double run_lower = -1e300, run_upper = 1e300;
    for (const auto& h : r.gap_history) {
      CHECK(h.lower <= h.upper + 1e-12);
      const double next_lower = std::max(run_lower, h.lower);
      const double next_upper = std::min(run_upper, h.upper);
      CHECK(next_lower >= run_lower);
      CHECK(next_upper <= run_upper);
      CHECK(next_lower <= next_upper + 1e-12);
      run_lower = next_lower;
      run_upper = next_upper;
    }
    CHECK(run_lower == r.value_lower);
    CHECK(run_upper == r.value_upper);

    for (int s = 0; s < 100; ++s) {
      const auto rho = random_feasible_state(g.constraint_blue(), rng, s % 2 == 0);
      const auto phi = random_feasible_state(g.constraint_red(), rng, s % 2 == 1);
      CHECK(g.expected_payoff(rho, r.phi_star) <= r.value_upper + 1e-9);
      CHECK(g.expected_payoff(r.rho_star, phi) >= r.value_lower - 1e-9);
    }
  }
}

TEST_CASE("affine payoff transformations act on values and preserve optimal states") {
  std::mt19937_64 rng(12);
  SolverOptions<double> opts;
  opts.gap_tol = 1e-2;
  const Game g = random_game(rng, 3, 3, opts);
  const auto r = solve(g);
  const double alpha = 2.5, beta = 0.75;
  const Game h = g.with_affine_payoff(alpha, beta);
  CHECK(std::abs(lower_value(h, r.rho_star) - (alpha * lower_value(g, r.rho_star) + beta)) <= 1e-8);
  CHECK(std::abs(upper_value(h, r.phi_star) - (alpha * upper_value(g, r.phi_star) + beta)) <= 1e-8);
  CHECK(std::abs(lower_value(h, r.rho_star) - (alpha * r.value_lower + beta)) <= 1e-8);
  CHECK(std::abs(upper_value(h, r.phi_star) - (alpha * r.value_upper + beta)) <= 1e-8);
}

TEST_CASE("non-convergence is flagged, not thrown") {
  std::mt19937_64 rng(4);
  SolverOptions<double> opts;
  opts.gap_tol = 1e-12;
  opts.max_iters = 60;
  const Game g = random_game(rng, 4, 4, opts);
  const auto r = solve(g);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 60);
  CHECK(r.gap > 1e-12);
  REQUIRE(!r.gap_history.empty());
  CHECK(r.gap_history.back().iteration == 60);
}
