#pragma once

// Payoff kernel Z(lambda, l) >= 0, its tabulation on the product of two
// spectra, and the bilinear expected payoff K(rho, phi).

#include <cmath>
#include <functional>
#include <sstream>
#include <string>
#include <utility>

#include "qgame/spectral_measures.hpp"

namespace qgame {

template <typename Real>
class PayoffKernel {
 public:
  using Function = std::function<Real(Real, Real)>;

  /// Values given directly on (blue spectrum) x (red spectrum), both in
  /// increasing order of the distinct eigenvalues.
  static PayoffKernel table(RealMatrix<Real> values) {
    PayoffKernel k;
    k.name_ = "table";
    k.table_ = std::move(values);
    return k;
  }

  static PayoffKernel constant(Real c) {
    return function([c](Real, Real) { return c; }, "constant", c);
  }

  /// (lambda - l)^2 + shift.
  static PayoffKernel squared_difference(Real shift = Real(0)) {
    return function([shift](Real x, Real y) { return (x - y) * (x - y) + shift; }, "squared_difference",
                    shift);
  }

  /// lambda * l + shift.
  static PayoffKernel shifted_product(Real shift) {
    return function([shift](Real x, Real y) { return x * y + shift; }, "shifted_product", shift);
  }

  static PayoffKernel function(Function f, std::string name, Real shift = Real(0)) {
    PayoffKernel k;
    k.name_ = std::move(name);
    k.f_ = std::move(f);
    k.shift_ = shift;
    return k;
  }

  bool is_table() const { return !f_; }
  const std::string& name() const { return name_; }
  Real shift() const { return shift_; }
  const RealMatrix<Real>& table_values() const { return table_; }

  Real operator()(Real lambda, Real l) const {
    if (is_table()) throw InvalidKernel("table kernels are only defined on their spectrum grid");
    return f_(lambda, l);
  }

 private:
  PayoffKernel() = default;

  std::string name_;
  Function f_;
  RealMatrix<Real> table_;
  Real shift_ = 0;
};

/// Z evaluated on sigma(B) x sigma(R), with its maximum Z(lambda0, l0).
template <typename Real>
struct PayoffMatrix {
  RealVector<Real> rows;
  RealVector<Real> cols;
  RealMatrix<Real> values;
  Real zmax = 0;
  Index argmax_row = 0;
  Index argmax_col = 0;

  Real lambda0() const { return rows(argmax_row); }
  Real l0() const { return cols(argmax_col); }
};

template <typename Real>
PayoffMatrix<Real> make_payoff_matrix(RealVector<Real> rows, RealVector<Real> cols, RealMatrix<Real> values) {
  if (values.rows() != rows.size() || values.cols() != cols.size()) {
    std::ostringstream msg;
    msg << "payoff table is " << values.rows() << "x" << values.cols() << " but the spectra have "
        << rows.size() << " and " << cols.size() << " distinct points";
    throw DimensionMismatch(msg.str());
  }
  for (Index i = 0; i < values.rows(); ++i) {
    for (Index j = 0; j < values.cols(); ++j) {
      const Real z = values(i, j);
      if (!(z >= Real(0)) || !std::isfinite(z)) {
        std::ostringstream msg;
        msg.precision(17);
        msg << "invalid kernel: Z(" << rows(i) << ", " << cols(j) << ") = " << z << " is not a finite non-negative value";
        throw InvalidKernel(msg.str());
      }
    }
  }
  PayoffMatrix<Real> pm;
  pm.zmax = values.maxCoeff(&pm.argmax_row, &pm.argmax_col);
  if (!(pm.zmax > Real(0))) throw DegenerateKernel("degenerate kernel: Z vanishes on the whole spectrum grid");
  pm.rows = std::move(rows);
  pm.cols = std::move(cols);
  pm.values = std::move(values);
  return pm;
}

template <typename Real>
PayoffMatrix<Real> tabulate(const PayoffKernel<Real>& z, const SpectralDecomposition<Real>& blue,
                            const SpectralDecomposition<Real>& red) {
  if (z.is_table()) return make_payoff_matrix<Real>(blue.eigenvalues, red.eigenvalues, z.table_values());
  RealMatrix<Real> values(blue.size(), red.size());
  for (Index i = 0; i < blue.size(); ++i) {
    for (Index j = 0; j < red.size(); ++j) values(i, j) = z(blue.eigenvalues(i), red.eigenvalues(j));
  }
  return make_payoff_matrix<Real>(blue.eigenvalues, red.eigenvalues, std::move(values));
}

namespace detail {

template <typename Real>
void check_support(const RealVector<Real>& grid, const StepDistribution<Real>& s, const char* what) {
  if (s.size() != grid.size() || s.support() != grid) {
    throw DimensionMismatch(std::string(what) + " distribution support does not match the payoff grid");
  }
}

}  // namespace detail

/// K = sum_ij Z(lambda_i, l_j) p_i q_j.
template <typename Real>
Real expected_payoff(const PayoffMatrix<Real>& pm, const StepDistribution<Real>& p,
                     const StepDistribution<Real>& q) {
  detail::check_support(pm.rows, p, "blue");
  detail::check_support(pm.cols, q, "red");
  return p.masses().dot(pm.values * q.masses());
}

/// (row-major sum, column-major sum) of the double sum defining K.
template <typename Real>
std::pair<Real, Real> fubini_swap_check(const PayoffMatrix<Real>& pm, const StepDistribution<Real>& p,
                                        const StepDistribution<Real>& q) {
  detail::check_support(pm.rows, p, "blue");
  detail::check_support(pm.cols, q, "red");
  Real by_rows = 0;
  for (Index i = 0; i < pm.values.rows(); ++i) {
    Real inner = 0;
    for (Index j = 0; j < pm.values.cols(); ++j) inner += pm.values(i, j) * q.masses()(j);
    by_rows += p.masses()(i) * inner;
  }
  Real by_cols = 0;
  for (Index j = 0; j < pm.values.cols(); ++j) {
    Real inner = 0;
    for (Index i = 0; i < pm.values.rows(); ++i) inner += pm.values(i, j) * p.masses()(i);
    by_cols += q.masses()(j) * inner;
  }
  return {by_rows, by_cols};
}

/// sum_i a_i P_i; tr(rho * result) is linear in rho with coefficients a.
template <typename Real>
HermitianOperator<Real> weighted_projector_sum(const SpectralDecomposition<Real>& d, const RealVector<Real>& a) {
  ComplexMatrix<Real> m = ComplexMatrix<Real>::Zero(d.dim(), d.dim());
  for (Index i = 0; i < d.size(); ++i) m += a(i) * d.projectors[i];
  return HermitianOperator<Real>::hermitian_part(m);
}

/// M_B(q) = sum_i (Z q)_i P_i, so that tr(rho M_B(q)) = K(rho, q).
template <typename Real>
HermitianOperator<Real> response_operator_blue(const PayoffMatrix<Real>& pm, const SpectralDecomposition<Real>& blue,
                                               const StepDistribution<Real>& q) {
  if (blue.eigenvalues != pm.rows) throw DimensionMismatch("blue spectrum does not match the payoff grid");
  detail::check_support(pm.cols, q, "red");
  return weighted_projector_sum<Real>(blue, RealVector<Real>(pm.values * q.masses()));
}

/// M_R(p) = sum_j (Z^T p)_j P'_j, so that tr(phi M_R(p)) = K(p, phi).
template <typename Real>
HermitianOperator<Real> response_operator_red(const PayoffMatrix<Real>& pm, const SpectralDecomposition<Real>& red,
                                              const StepDistribution<Real>& p) {
  if (red.eigenvalues != pm.cols) throw DimensionMismatch("red spectrum does not match the payoff grid");
  detail::check_support(pm.rows, p, "blue");
  return weighted_projector_sum<Real>(red, RealVector<Real>(pm.values.transpose() * p.masses()));
}

}  // namespace qgame
