#pragma once

// Energy-capped state sets A(c) = { rho : tr(rho E) <= c } and the exact
// linear best-response oracle max / min tr(rho M) over A(c).
//
// The oracle works on the Lagrangian dual
//     g(mu) = lambda_max(M - mu E) + mu c,   mu >= 0,
// which upper-bounds every feasible tr(rho M). The top eigenvector energy
// e(mu) is non-increasing in mu (it is minus a subgradient of the convex
// function lambda_max(M - mu E)), so the optimal multiplier is bracketed by
// bisection on the sign of e(mu) - c. The primal state is the mixture of the
// two bracket eigenvectors whose energy is exactly c, and the duality gap
// g(mu) - tr(rho M) is reported as a certificate.

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "qgame/operator_core.hpp"

namespace qgame {

template <typename Real>
class EnergyConstraint {
 public:
  EnergyConstraint(HermitianOperator<Real> energy, Real cap) : energy_(std::move(energy)), cap_(cap) {
    if (!std::isfinite(cap)) throw DomainError("energy cap must be finite");
    const auto es = eigensolve<Real>(energy_.matrix());
    levels_ = es.eigenvalues();
    eigenvectors_ = es.eigenvectors();
    if (levels_(0) > cap_) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "infeasible energy constraint: cap " << cap_ << " is below the minimum energy " << levels_(0);
      throw InfeasibleConstraint(msg.str());
    }
  }

  /// Energy operator diagonal in the standard basis with the given levels.
  static EnergyConstraint diagonal(const RealVector<Real>& levels, Real cap) {
    return EnergyConstraint(HermitianOperator<Real>::diagonal(levels), cap);
  }

  Index dim() const { return energy_.dim(); }
  const HermitianOperator<Real>& energy() const { return energy_; }
  Real cap() const { return cap_; }
  Real ground_energy() const { return levels_(0); }
  /// Eigenvalues of the energy operator in increasing order.
  const RealVector<Real>& levels() const { return levels_; }
  const ComplexMatrix<Real>& eigenvectors() const { return eigenvectors_; }

  /// A minimum-energy pure state (first eigenvector of E).
  DensityOperator<Real> ground_state() const {
    return DensityOperator<Real>::projector_onto(ComplexVector<Real>(eigenvectors_.col(0)));
  }

  Real energy_of(const DensityOperator<Real>& rho) const { return rho.expectation(energy_); }

 private:
  HermitianOperator<Real> energy_;
  Real cap_;
  RealVector<Real> levels_;
  ComplexMatrix<Real> eigenvectors_;
};

template <typename Real>
constexpr Real kMembershipTol = Real(1e-9);

template <typename Real>
bool membership(const DensityOperator<Real>& rho, const EnergyConstraint<Real>& k) {
  if (rho.dim() != k.dim()) throw DimensionMismatch("membership: state and energy operator dimensions differ");
  return k.energy_of(rho) <= k.cap() + kMembershipTol<Real>;
}

/// Output of one best-response call. For maximisation primal_value <=
/// dual_value and gap = dual - primal; for minimisation the roles flip.
template <typename Real>
struct OracleResult {
  DensityOperator<Real> state;
  Real primal_value;
  Real dual_value;
  Real multiplier;
  Real gap;
  bool certified;
  int iterations;
};

namespace detail {

template <typename Real>
struct DualProbe {
  Real mu;
  Real top;     // lambda_max(M - mu E)
  Real energy;  // <v, E v>
  Real value;   // <v, M v>
  ComplexVector<Real> vec;

  Real dual(Real cap) const { return top + mu * cap; }
};

template <typename Real>
DualProbe<Real> probe_dual(const ComplexMatrix<Real>& m, const ComplexMatrix<Real>& e, Real mu) {
  const auto es = eigensolve<Real>(ComplexMatrix<Real>(m - mu * e));
  const Index n = m.rows();
  DualProbe<Real> p{mu, es.eigenvalues()(n - 1), 0, 0, es.eigenvectors().col(n - 1)};
  p.energy = p.vec.dot(e * p.vec).real();
  p.value = p.vec.dot(m * p.vec).real();
  return p;
}

// Orthonormal basis of the eigenspace of `es` with eigenvalues >= top - tol
// (from_top) or <= bottom + tol.
template <typename Real>
ComplexMatrix<Real> extremal_eigenspace(const Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>>& es, Real tol,
                                        bool from_top) {
  const auto& ev = es.eigenvalues();
  const Index n = ev.size();
  Index count = 1;
  if (from_top) {
    while (count < n && ev(n - 1 - count) >= ev(n - 1) - tol) ++count;
    return es.eigenvectors().rightCols(count);
  }
  while (count < n && ev(count) <= ev(0) + tol) ++count;
  return es.eigenvectors().leftCols(count);
}

// Minimum-energy unit vector inside span(basis).
template <typename Real>
ComplexVector<Real> min_energy_vector(const ComplexMatrix<Real>& basis, const ComplexMatrix<Real>& e) {
  if (basis.cols() == 1) return basis.col(0);
  const auto es = eigensolve<Real>(ComplexMatrix<Real>(basis.adjoint() * e * basis));
  ComplexVector<Real> v = basis * es.eigenvectors().col(0);
  return v / v.norm();
}

}  // namespace detail

/// Maximises tr(rho M) over A(c). Among maximisers the minimum-energy one is
/// returned when the energy cap is slack.
template <typename Real>
OracleResult<Real> best_response_max(const HermitianOperator<Real>& m_op, const EnergyConstraint<Real>& k,
                                     Real gap_tol = Real(1e-9)) {
  using Vector = ComplexVector<Real>;
  using State = DensityOperator<Real>;
  if (m_op.dim() != k.dim()) throw DimensionMismatch("best response: objective and energy operator dimensions differ");
  if (!(gap_tol > Real(0))) throw DomainError("best response: gap_tol must be positive");

  const auto& m = m_op.matrix();
  const auto& e = k.energy().matrix();
  const Real cap = k.cap();

  // Slack cap: the minimum-energy vector of the top eigenspace is optimal.
  const auto es = eigensolve<Real>(m);
  const Real top = es.eigenvalues()(m.rows() - 1);
  const Vector x = detail::min_energy_vector<Real>(detail::extremal_eigenspace<Real>(es, gap_tol / 2, true), e);
  const Real x_energy = x.dot(e * x).real();
  const Real x_value = x.dot(m * x).real();
  if (x_energy <= cap) {
    return {State::projector_onto(x), x_value, top, Real(0), std::max(Real(0), top - x_value), true, 0};
  }

  // Cap at the ground energy: only ground-space states are feasible and the
  // dual infimum is approached as mu -> infinity.
  const Real scale = Real(1) + std::abs(cap) + std::abs(k.ground_energy());
  if (cap - k.ground_energy() <= Real(1e-12) * scale) {
    const auto ground_es = eigensolve<Real>(e);
    const ComplexMatrix<Real> ground = detail::extremal_eigenspace<Real>(ground_es, Real(1e-10) * scale, false);
    const auto restricted = eigensolve<Real>(ComplexMatrix<Real>(ground.adjoint() * m * ground));
    Vector y = ground * restricted.eigenvectors().col(restricted.eigenvalues().size() - 1);
    y /= y.norm();
    const Real value = y.dot(m * y).real();
    Real dual = top;
    Real mu_best = 0;
    for (Real mu = 1; mu < Real(1e12); mu *= 2) {
      const Real g = detail::probe_dual<Real>(m, e, mu).dual(cap);
      if (g < dual) {
        dual = g;
        mu_best = mu;
      }
    }
    const Real gap = std::max(Real(0), dual - value);
    return {State::projector_onto(y), value, dual, mu_best, gap, gap <= gap_tol, 0};
  }

  detail::DualProbe<Real> lo{Real(0), top, x_energy, x_value, x};
  detail::DualProbe<Real> hi = detail::probe_dual<Real>(m, e, Real(1));
  int doublings = 0;
  while (hi.energy > cap) {
    lo = hi;
    hi = detail::probe_dual<Real>(m, e, Real(2) * hi.mu);
    if (++doublings > 200) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "best response: multiplier bracketing failed after 200 doublings (dim " << k.dim() << ", cap " << cap
          << ", ground energy " << k.ground_energy() << ")";
      throw NumericalError(msg.str());
    }
  }

  Real best_dual = std::min(lo.dual(cap), hi.dual(cap));
  Real best_mu = lo.dual(cap) <= hi.dual(cap) ? lo.mu : hi.mu;
  Real weight = 0;
  Real primal = 0;
  int iterations = 0;
  for (;; ++iterations) {
    weight = (cap - hi.energy) / (lo.energy - hi.energy);
    primal = weight * lo.value + (Real(1) - weight) * hi.value;
    if (best_dual - primal <= gap_tol || iterations >= 200) break;
    if (hi.mu - lo.mu <= std::numeric_limits<Real>::epsilon() * (Real(1) + hi.mu)) break;
    auto mid = detail::probe_dual<Real>(m, e, (lo.mu + hi.mu) / 2);
    if (mid.dual(cap) < best_dual) {
      best_dual = mid.dual(cap);
      best_mu = mid.mu;
    }
    if (mid.energy > cap) {
      lo = std::move(mid);
    } else {
      hi = std::move(mid);
    }
  }

  const Real gap = std::max(Real(0), best_dual - primal);
  return {State::pure_mixture({{weight, lo.vec}, {Real(1) - weight, hi.vec}}),
          primal,
          best_dual,
          best_mu,
          gap,
          gap <= gap_tol,
          iterations};
}

/// Minimises tr(phi M) over A(c); dual_value is a certified lower bound.
template <typename Real>
OracleResult<Real> best_response_min(const HermitianOperator<Real>& m, const EnergyConstraint<Real>& k,
                                     Real gap_tol = Real(1e-9)) {
  auto r = best_response_max<Real>(-m, k, gap_tol);
  r.primal_value = -r.primal_value;
  r.dual_value = -r.dual_value;
  return r;
}

/// Random state pulled into A(c) by mixing towards the ground state until
/// the energy equals the cap. `pure` samples a random pure state instead of a
/// full-rank one.
template <typename Real, typename Rng>
DensityOperator<Real> random_feasible_state(const EnergyConstraint<Real>& k, Rng& rng, bool pure = false) {
  const auto rho = pure ? rank_one_state<Real>(ComplexVector<Real>(random_ginibre<Real>(k.dim(), 1, rng)))
                        : random_density<Real>(k.dim(), rng);
  const Real energy = k.energy_of(rho);
  if (energy <= k.cap()) return rho;
  const Real t = (k.cap() - k.ground_energy()) / (energy - k.ground_energy());
  return DensityOperator<Real>::mixture(rho, k.ground_state(), std::clamp(t, Real(0), Real(1)));
}

}  // namespace qgame
