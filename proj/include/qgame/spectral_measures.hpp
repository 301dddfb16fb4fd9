#pragma once

// Distribution functions F(lambda) = tr(rho E(lambda)) of a state with respect
// to a spectral resolution, stored as jump masses on the (atomic) spectrum.

#include <algorithm>
#include <cmath>
#include <ostream>
#include <vector>

#include "qgame/operator_core.hpp"

namespace qgame {

/// Right-continuous step function sum_{lambda_i <= x} w_i on a strictly
/// increasing support. Probability instances have w_i >= 0 summing to one;
/// differences of such carry signed masses.
template <typename Real>
class StepDistribution {
 public:
  static constexpr Real kProbabilityTol = Real(1e-10);

  StepDistribution(RealVector<Real> support, RealVector<Real> masses)
      : support_(std::move(support)), masses_(std::move(masses)) {
    if (support_.size() != masses_.size()) {
      throw DimensionMismatch("step distribution: support and masses differ in length");
    }
    for (Index i = 1; i < support_.size(); ++i) {
      if (!(support_(i) > support_(i - 1))) {
        throw DomainError("step distribution: support must be strictly increasing");
      }
    }
  }

  const RealVector<Real>& support() const { return support_; }
  const RealVector<Real>& masses() const { return masses_; }
  Index size() const { return support_.size(); }

  bool is_probability(Real tol = kProbabilityTol) const {
    return size() > 0 && masses_.minCoeff() >= -tol && std::abs(masses_.sum() - Real(1)) <= tol;
  }

 private:
  RealVector<Real> support_;
  RealVector<Real> masses_;
};

/// Jump masses w_i = tr(rho P_i) of F_rho on the spectrum of `d`.
template <typename Real>
StepDistribution<Real> spectral_masses(const DensityOperator<Real>& rho,
                                       const SpectralDecomposition<Real>& d) {
  if (rho.dim() != d.dim()) throw DimensionMismatch("spectral_masses: state and operator dimensions differ");
  RealVector<Real> w(d.size());
  for (Index i = 0; i < d.size(); ++i) w(i) = detail::trace_product(rho.matrix(), d.projectors[i]);
  return StepDistribution<Real>(d.eigenvalues, std::move(w));
}

template <typename Real>
Real cdf(const StepDistribution<Real>& s, Real lambda) {
  Real acc = 0;
  for (Index i = 0; i < s.size() && s.support()(i) <= lambda; ++i) acc += s.masses()(i);
  return acc;
}

/// Total variation of the step function: the sum of absolute jumps.
template <typename Real>
Real total_variation(const StepDistribution<Real>& s) {
  return s.masses().cwiseAbs().sum();
}

/// s1 - s2 on the union of supports. Support points closer than `merge_tol`
/// are identified; a missing point carries zero mass.
template <typename Real>
StepDistribution<Real> difference(const StepDistribution<Real>& s1, const StepDistribution<Real>& s2,
                                  Real merge_tol = Real(1e-12)) {
  std::vector<Real> support;
  std::vector<Real> masses;
  Index i = 0;
  Index j = 0;
  while (i < s1.size() || j < s2.size()) {
    if (j == s2.size() || (i < s1.size() && s1.support()(i) < s2.support()(j) - merge_tol)) {
      support.push_back(s1.support()(i));
      masses.push_back(s1.masses()(i));
      ++i;
    } else if (i == s1.size() || s2.support()(j) < s1.support()(i) - merge_tol) {
      support.push_back(s2.support()(j));
      masses.push_back(-s2.masses()(j));
      ++j;
    } else {
      support.push_back(s1.support()(i));
      masses.push_back(s1.masses()(i) - s2.masses()(j));
      ++i;
      ++j;
    }
  }
  const Index n = Index(support.size());
  return StepDistribution<Real>(Eigen::Map<RealVector<Real>>(support.data(), n),
                                Eigen::Map<RealVector<Real>>(masses.data(), n));
}

/// One "lambda,mass,cdf" row per support point, with header.
template <typename Real>
void write_csv(std::ostream& os, const StepDistribution<Real>& s) {
  const auto old_precision = os.precision(17);
  os << "lambda,mass,cdf\n";
  Real acc = 0;
  for (Index i = 0; i < s.size(); ++i) {
    acc += s.masses()(i);
    os << s.support()(i) << ',' << s.masses()(i) << ',' << acc << '\n';
  }
  os.precision(old_precision);
}

}  // namespace qgame
