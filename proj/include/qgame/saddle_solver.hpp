#pragma once

// Minimax value of a quantum zero-sum game over energy-capped state sets,
// computed by fictitious play with state-space averaging. Every reported
// bracket [value_lower, value_upper] is certified by exact best-response
// oracle calls at the averaged states.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "qgame/energy_sets.hpp"
#include "qgame/payoff.hpp"

namespace qgame {

template <typename Real>
struct SolverOptions {
  long max_iters = 200000;
  Real gap_tol = Real(1e-3);
  long check_interval = 25;
  std::uint64_t seed = 0;
  Real oracle_gap_tol = Real(1e-9);
};

template <typename Real>
class GameInstance {
 public:
  GameInstance(HermitianOperator<Real> blue, HermitianOperator<Real> red, const PayoffKernel<Real>& kernel,
               EnergyConstraint<Real> constraint_blue, EnergyConstraint<Real> constraint_red,
               SolverOptions<Real> options = {})
      : blue_(std::move(blue)),
        red_(std::move(red)),
        blue_spectrum_(spectral_decompose<Real>(blue_)),
        red_spectrum_(spectral_decompose<Real>(red_)),
        constraint_blue_(std::move(constraint_blue)),
        constraint_red_(std::move(constraint_red)),
        options_(options) {
    if (constraint_blue_.dim() != blue_.dim()) {
      throw DimensionMismatch("blue energy operator is " + std::to_string(constraint_blue_.dim()) +
                              "-dimensional but the blue player is " + std::to_string(blue_.dim()) + "-dimensional");
    }
    if (constraint_red_.dim() != red_.dim()) {
      throw DimensionMismatch("red energy operator is " + std::to_string(constraint_red_.dim()) +
                              "-dimensional but the red player is " + std::to_string(red_.dim()) + "-dimensional");
    }
    if (!(options_.gap_tol > Real(0)) || !(options_.oracle_gap_tol > Real(0))) {
      throw DomainError("solver tolerances must be positive");
    }
    if (options_.max_iters < 1 || options_.check_interval < 1) {
      throw DomainError("max_iters and check_interval must be >= 1");
    }
    payoff_ = tabulate<Real>(kernel, blue_spectrum_, red_spectrum_);
  }

  const HermitianOperator<Real>& blue() const { return blue_; }
  const HermitianOperator<Real>& red() const { return red_; }
  const SpectralDecomposition<Real>& blue_spectrum() const { return blue_spectrum_; }
  const SpectralDecomposition<Real>& red_spectrum() const { return red_spectrum_; }
  const PayoffMatrix<Real>& payoff() const { return payoff_; }
  const EnergyConstraint<Real>& constraint_blue() const { return constraint_blue_; }
  const EnergyConstraint<Real>& constraint_red() const { return constraint_red_; }
  const SolverOptions<Real>& options() const { return options_; }

  StepDistribution<Real> blue_marginal(const DensityOperator<Real>& rho) const {
    return spectral_masses<Real>(rho, blue_spectrum_);
  }
  StepDistribution<Real> red_marginal(const DensityOperator<Real>& phi) const {
    return spectral_masses<Real>(phi, red_spectrum_);
  }

  /// K(rho, phi).
  Real expected_payoff(const DensityOperator<Real>& rho, const DensityOperator<Real>& phi) const {
    return qgame::expected_payoff<Real>(payoff_, blue_marginal(rho), red_marginal(phi));
  }

  HermitianOperator<Real> blue_response_operator(const DensityOperator<Real>& phi) const {
    return response_operator_blue<Real>(payoff_, blue_spectrum_, red_marginal(phi));
  }
  HermitianOperator<Real> red_response_operator(const DensityOperator<Real>& rho) const {
    return response_operator_red<Real>(payoff_, red_spectrum_, blue_marginal(rho));
  }

  /// Same players and constraints with payoff alpha * Z + beta on the grid.
  GameInstance with_affine_payoff(Real alpha, Real beta) const {
    RealMatrix<Real> values = (alpha * payoff_.values.array() + beta).matrix();
    return GameInstance(blue_, red_, PayoffKernel<Real>::table(std::move(values)), constraint_blue_, constraint_red_,
                        options_);
  }

  GameInstance with_options(SolverOptions<Real> options) const {
    GameInstance g = *this;
    g.options_ = options;
    return g;
  }

 private:
  HermitianOperator<Real> blue_;
  HermitianOperator<Real> red_;
  SpectralDecomposition<Real> blue_spectrum_;
  SpectralDecomposition<Real> red_spectrum_;
  EnergyConstraint<Real> constraint_blue_;
  EnergyConstraint<Real> constraint_red_;
  SolverOptions<Real> options_;
  PayoffMatrix<Real> payoff_;
};

template <typename Real>
struct GapRecord {
  long iteration;
  Real lower;
  Real upper;
  Real gap;
};

template <typename Real>
struct SaddleResult {
  Real value_lower;
  Real value_upper;
  Real value;
  Real gap;
  DensityOperator<Real> rho_star;
  DensityOperator<Real> phi_star;
  long iterations;
  bool converged;
  std::vector<GapRecord<Real>> gap_history;
};

/// Certified lower bound on min_phi K(rho, phi).
template <typename Real>
Real lower_value(const GameInstance<Real>& g, const DensityOperator<Real>& rho) {
  if (!membership<Real>(rho, g.constraint_blue())) throw InvalidState("lower_value: blue state violates its energy cap");
  return best_response_min<Real>(g.red_response_operator(rho), g.constraint_red(), g.options().oracle_gap_tol)
      .dual_value;
}

/// Certified upper bound on max_rho K(rho, phi).
template <typename Real>
Real upper_value(const GameInstance<Real>& g, const DensityOperator<Real>& phi) {
  if (!membership<Real>(phi, g.constraint_red())) throw InvalidState("upper_value: red state violates its energy cap");
  return best_response_max<Real>(g.blue_response_operator(phi), g.constraint_blue(), g.options().oracle_gap_tol)
      .dual_value;
}

namespace detail {

template <typename Real>
RealVector<Real> masses_of(const ComplexMatrix<Real>& state, const SpectralDecomposition<Real>& d) {
  RealVector<Real> w(d.size());
  for (Index i = 0; i < d.size(); ++i) w(i) = trace_product(state, d.projectors[i]);
  return w;
}

}  // namespace detail

/// Fictitious play: each side best-responds to the opponent's running
/// average and the averages are updated with weight 1/t. The bracket keeps
/// the best certified lower bound (and its blue state) and the best certified
/// upper bound (and its red state) seen at any check.
template <typename Real>
SaddleResult<Real> solve(const GameInstance<Real>& g) {
  using Matrix = ComplexMatrix<Real>;
  const auto& opts = g.options();
  const auto& pm = g.payoff();

  Matrix rho_bar = g.constraint_blue().ground_state().matrix();
  Matrix phi_bar = g.constraint_red().ground_state().matrix();
  Matrix rho_best = rho_bar;
  Matrix phi_best = phi_bar;
  Real best_lower = -std::numeric_limits<Real>::infinity();
  Real best_upper = std::numeric_limits<Real>::infinity();
  std::vector<GapRecord<Real>> history;
  bool converged = false;

  long t = 0;
  for (;; ++t) {
    const RealVector<Real> p = detail::masses_of<Real>(rho_bar, g.blue_spectrum());
    const RealVector<Real> q = detail::masses_of<Real>(phi_bar, g.red_spectrum());
    const auto blue_op = weighted_projector_sum<Real>(g.blue_spectrum(), RealVector<Real>(pm.values * q));
    const auto red_op = weighted_projector_sum<Real>(g.red_spectrum(), RealVector<Real>(pm.values.transpose() * p));
    const auto blue_br = best_response_max<Real>(blue_op, g.constraint_blue(), opts.oracle_gap_tol);
    const auto red_br = best_response_min<Real>(red_op, g.constraint_red(), opts.oracle_gap_tol);

    if (t > 0 && (t % opts.check_interval == 0 || t == opts.max_iters)) {
      const Real lower = red_br.dual_value;
      const Real upper = blue_br.dual_value;
      history.push_back({t, lower, upper, upper - lower});
      if (lower > best_lower) {
        best_lower = lower;
        rho_best = rho_bar;
      }
      if (upper < best_upper) {
        best_upper = upper;
        phi_best = phi_bar;
      }
      if (best_upper - best_lower <= opts.gap_tol) {
        converged = true;
        break;
      }
    }
    if (t == opts.max_iters) break;

    const Real step = Real(1) / Real(t + 1);
    rho_bar = (Real(1) - step) * rho_bar + step * blue_br.state.matrix();
    phi_bar = (Real(1) - step) * phi_bar + step * red_br.state.matrix();
  }

  const Real gap = std::max(Real(0), best_upper - best_lower);
  return {best_lower,
          best_upper,
          (best_lower + best_upper) / 2,
          gap,
          DensityOperator<Real>(rho_best),
          DensityOperator<Real>(phi_best),
          t,
          converged,
          std::move(history)};
}

}  // namespace qgame
