#include "qgame/verify.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace qgame {

namespace {

using State = DensityOperator<double>;

class Suite {
 public:
  Suite(std::string name, double tolerance) : result_{std::move(name), 0, 0.0, tolerance, true} {}

  // Records one trial whose bound is `lhs <= rhs`.
  void bound(double lhs, double rhs) {
    ++result_.trials;
    result_.max_violation = std::max(result_.max_violation, lhs - rhs);
  }

  SuiteResult finish() {
    result_.passed = result_.max_violation <= result_.tolerance;
    return result_;
  }

 private:
  SuiteResult result_;
};

template <typename Rng>
State sample_state(Index dim, Rng& rng) {
  if (std::bernoulli_distribution(0.5)(rng)) {
    return rank_one_state<double>(ComplexVector<double>(random_ginibre<double>(dim, 1, rng)));
  }
  return random_density<double>(dim, rng);
}

}  // namespace

std::vector<SuiteResult> run_invariant_suites(const GameInstance<double>& game, long samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("verify: samples must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Index nb = game.blue().dim();
  const Index nr = game.red().dim();
  const double zmax = game.payoff().zmax;

  Suite lipschitz_red("lipschitz_red", 1e-9);
  Suite lipschitz_blue("lipschitz_blue", 1e-9);
  Suite tv_red("total_variation_red", 1e-9);
  Suite tv_blue("total_variation_blue", 1e-9);
  Suite fubini("fubini", 1e-12 * zmax);
  Suite bilinear("bilinearity", 1e-10);
  Suite consistency("response_consistency", 1e-11);

  for (long s = 0; s < samples; ++s) {
    const State rho1 = sample_state(nb, rng);
    const State rho2 = sample_state(nb, rng);
    const State phi1 = sample_state(nr, rng);
    const State phi2 = sample_state(nr, rng);
    const double t = unit(rng);

    const double k11 = game.expected_payoff(rho1, phi1);
    const double k12 = game.expected_payoff(rho1, phi2);
    const double k21 = game.expected_payoff(rho2, phi1);
    const double dphi = trace_norm(phi1.matrix() - phi2.matrix());
    const double drho = trace_norm(rho1.matrix() - rho2.matrix());
    lipschitz_red.bound(std::abs(k11 - k12), zmax * dphi);
    lipschitz_blue.bound(std::abs(k11 - k21), zmax * drho);

    tv_red.bound(total_variation(difference(game.red_marginal(phi1), game.red_marginal(phi2))), dphi);
    tv_blue.bound(total_variation(difference(game.blue_marginal(rho1), game.blue_marginal(rho2))), drho);

    const auto [by_rows, by_cols] = fubini_swap_check(game.payoff(), game.blue_marginal(rho1), game.red_marginal(phi1));
    fubini.bound(std::abs(by_rows - by_cols), 0.0);

    const State rho_mix = State::mixture(rho1, rho2, t);
    const State phi_mix = State::mixture(phi1, phi2, t);
    bilinear.bound(std::abs(game.expected_payoff(rho_mix, phi1) - (t * k11 + (1 - t) * k21)), 0.0);
    bilinear.bound(std::abs(game.expected_payoff(rho1, phi_mix) - (t * k11 + (1 - t) * k12)), 0.0);

    consistency.bound(std::abs(rho1.expectation(game.blue_response_operator(phi1)) - k11), 0.0);
    consistency.bound(std::abs(phi1.expectation(game.red_response_operator(rho1)) - k11), 0.0);
  }

  // Deviations from the certified states never escape the certified bracket.
  Suite saddle("saddle_certificate", 1e-9);
  const auto result = solve(game);
  for (long s = 0; s < samples; ++s) {
    const State rho = random_feasible_state(game.constraint_blue(), rng, s % 2 == 1);
    const State phi = random_feasible_state(game.constraint_red(), rng, s % 2 == 1);
    saddle.bound(game.expected_payoff(rho, result.phi_star), result.value_upper);
    saddle.bound(result.value_lower, game.expected_payoff(result.rho_star, phi));
  }

  return {lipschitz_red.finish(), lipschitz_blue.finish(), tv_red.finish(), tv_blue.finish(),
          fubini.finish(),        bilinear.finish(),       consistency.finish(), saddle.finish()};
}

}  // namespace qgame
