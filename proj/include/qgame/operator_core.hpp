#pragma once

// Finite-dimensional Hermitian linear algebra: self-adjoint operators, their
// spectral resolutions, density operators and the trace norm.
//
// All types are templated on the real scalar; complex entries are
// std::complex<Real>. Everything is immutable after construction.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qgame/errors.hpp"

namespace qgame {

using Index = Eigen::Index;

template <typename Real>
using Complex = std::complex<Real>;
template <typename Real>
using ComplexMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using ComplexVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;
template <typename Real>
using RealMatrix = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using RealVector = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

namespace detail {

template <typename Derived>
typename Derived::RealScalar max_hermitian_defect(const Eigen::MatrixBase<Derived>& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Re tr(A B) without forming the product.
template <typename DerivedA, typename DerivedB>
typename DerivedA::RealScalar trace_product(const Eigen::MatrixBase<DerivedA>& a,
                                            const Eigen::MatrixBase<DerivedB>& b) {
  return a.cwiseProduct(b.transpose()).sum().real();
}

}  // namespace detail

/// Self-adjoint operator on a truncated Hilbert space of dimension dim().
///
/// Construction accepts matrices that are Hermitian up to an absolute entry
/// tolerance and stores the exact Hermitian part (A + A*)/2.
template <typename Real>
class HermitianOperator {
 public:
  using Matrix = ComplexMatrix<Real>;
  static constexpr Real kDefaultTolerance = Real(1e-12);

  explicit HermitianOperator(const Matrix& m, Real tol = kDefaultTolerance) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
      throw InvalidOperator("Hermitian operator must be square with dim >= 1, got " +
                            std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (!m.allFinite()) throw InvalidOperator("Hermitian operator has non-finite entries");
    const Real defect = detail::max_hermitian_defect(m);
    if (defect > tol) {
      throw InvalidOperator("matrix is not Hermitian: max |A - A*| = " + std::to_string(defect));
    }
    m_ = (m + m.adjoint()) / Real(2);
  }

  /// Hermitian part of an arbitrary square matrix; no tolerance check.
  static HermitianOperator hermitian_part(const Matrix& m) {
    return HermitianOperator(Matrix((m + m.adjoint()) / Real(2)), Real(0));
  }

  static HermitianOperator diagonal(const RealVector<Real>& values) {
    return HermitianOperator(Matrix(values.template cast<Complex<Real>>().asDiagonal()));
  }

  static HermitianOperator identity(Index dim) {
    return HermitianOperator(Matrix::Identity(dim, dim));
  }

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

  HermitianOperator operator-() const { return HermitianOperator(Matrix(-m_), Real(0)); }

 private:
  Matrix m_;
};

/// Spectral resolution A = sum_i eigenvalues[i] * projectors[i] with distinct,
/// strictly increasing eigenvalues.
template <typename Real>
struct SpectralDecomposition {
  using Matrix = ComplexMatrix<Real>;

  RealVector<Real> eigenvalues;
  std::vector<Matrix> projectors;
  // Orthonormal columns spanning each eigenspace; projectors[i] = B B*.
  std::vector<Matrix> eigenbases;

  Index dim() const { return projectors.empty() ? 0 : projectors.front().rows(); }
  Index size() const { return eigenvalues.size(); }

  /// m(T): smallest point of the spectrum.
  Real lower_bound() const { return eigenvalues(0); }
  /// M(T): largest point of the spectrum.
  Real upper_bound() const { return eigenvalues(eigenvalues.size() - 1); }

  /// E(lambda): projector onto the eigenspaces with eigenvalue <= lambda.
  Matrix cumulative_projector(Real lambda) const {
    Matrix e = Matrix::Zero(dim(), dim());
    for (Index i = 0; i < size() && eigenvalues(i) <= lambda; ++i) e += projectors[i];
    return e;
  }

  Matrix reconstruct() const {
    Matrix a = Matrix::Zero(dim(), dim());
    for (Index i = 0; i < size(); ++i) a += eigenvalues(i) * projectors[i];
    return a;
  }
};

template <typename Real>
Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> eigensolve(const ComplexMatrix<Real>& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix<Real>> es(m);
  if (es.info() != Eigen::Success) {
    throw NumericalError("eigensolver failed to converge on a " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()) + " matrix");
  }
  return es;
}

/// Default eigenvalue clustering tolerance, 1e-8 * (1 + ||A||).
template <typename Real>
Real default_cluster_tolerance(Real operator_norm) {
  return Real(1e-8) * (Real(1) + operator_norm);
}

/// Eigendecomposition with eigenvalues closer than cluster_tol merged into one
/// multiplicity-weighted mean; a non-positive cluster_tol selects the default.
template <typename Real>
SpectralDecomposition<Real> spectral_decompose(const HermitianOperator<Real>& a,
                                               Real cluster_tol = Real(-1)) {
  using Matrix = ComplexMatrix<Real>;
  const auto es = eigensolve<Real>(a.matrix());
  const RealVector<Real>& ev = es.eigenvalues();
  const Matrix& vecs = es.eigenvectors();
  const Index n = ev.size();
  if (cluster_tol <= Real(0)) {
    cluster_tol = default_cluster_tolerance<Real>(std::max(std::abs(ev(0)), std::abs(ev(n - 1))));
  }

  SpectralDecomposition<Real> d;
  std::vector<Real> values;
  Index start = 0;
  for (Index i = 1; i <= n; ++i) {
    if (i < n && ev(i) - ev(i - 1) <= cluster_tol) continue;
    const Index count = i - start;
    values.push_back(ev.segment(start, count).mean());
    Matrix basis = vecs.middleCols(start, count);
    d.projectors.push_back(basis * basis.adjoint());
    d.eigenbases.push_back(std::move(basis));
    start = i;
  }
  d.eigenvalues = Eigen::Map<const RealVector<Real>>(values.data(), Index(values.size()));
  return d;
}

/// Sum of singular values, Tr sqrt(T* T).
template <typename Derived>
typename Derived::RealScalar trace_norm(const Eigen::MatrixBase<Derived>& t) {
  using Scalar = typename Derived::Scalar;
  if (t.rows() != t.cols()) throw DimensionMismatch("trace_norm requires a square matrix");
  if (t.size() == 0) return 0;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> m = t;
  Eigen::JacobiSVD<decltype(m)> svd(m);
  return svd.singularValues().sum();
}

/// Positive semidefinite, unit-trace operator: a mixed quantum strategy.
template <typename Real>
class DensityOperator {
 public:
  using Matrix = ComplexMatrix<Real>;
  static constexpr Real kHermitianTol = Real(1e-12);
  static constexpr Real kTraceTol = Real(1e-10);
  static constexpr Real kPositivityTol = Real(1e-10);

  /// Validates Hermiticity, unit trace and positivity, naming the first
  /// violated invariant in the InvalidState message.
  explicit DensityOperator(const Matrix& m) {
    if (m.rows() < 1 || m.rows() != m.cols()) {
      throw InvalidState("density operator must be square with dim >= 1");
    }
    if (!m.allFinite()) throw InvalidState("density operator has non-finite entries");
    const Real defect = detail::max_hermitian_defect(m);
    if (defect > kHermitianTol) {
      throw InvalidState("density operator is not Hermitian (max |A - A*| = " +
                         std::to_string(defect) + ")");
    }
    m_ = (m + m.adjoint()) / Real(2);
    const Real tr = m_.trace().real();
    if (std::abs(tr - Real(1)) > kTraceTol) {
      throw InvalidState("density operator trace is " + std::to_string(tr) + ", expected 1");
    }
    const Real min_eig = eigensolve<Real>(m_).eigenvalues()(0);
    if (min_eig < -kPositivityTol) {
      throw InvalidState("density operator is not positive semidefinite (min eigenvalue " +
                         std::to_string(min_eig) + ")");
    }
  }

  static DensityOperator maximally_mixed(Index dim) {
    return DensityOperator(Matrix(Matrix::Identity(dim, dim) / Real(dim)), Trusted{});
  }

  /// t * a + (1 - t) * b for t in [0, 1].
  static DensityOperator mixture(const DensityOperator& a, const DensityOperator& b, Real t) {
    if (a.dim() != b.dim()) throw DimensionMismatch("mixture of states with different dimensions");
    if (!(t >= Real(0) && t <= Real(1))) throw DomainError("mixture weight must lie in [0, 1]");
    return DensityOperator(Matrix(t * a.m_ + (Real(1) - t) * b.m_), Trusted{});
  }

  /// Pure state |v><v| for a unit vector v; no normalisation is applied.
  static DensityOperator projector_onto(const ComplexVector<Real>& unit) {
    return DensityOperator(Matrix(unit * unit.adjoint()), Trusted{});
  }

  /// Convex combination sum_i w_i |v_i><v_i| of unit vectors, w on the simplex.
  static DensityOperator pure_mixture(const std::vector<std::pair<Real, ComplexVector<Real>>>& parts) {
    if (parts.empty()) throw DomainError("empty pure-state mixture");
    const Index n = parts.front().second.size();
    Matrix m = Matrix::Zero(n, n);
    for (const auto& [w, v] : parts) m.noalias() += w * (v * v.adjoint());
    return DensityOperator(std::move(m), Trusted{});
  }

  Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

  /// tr(rho A).
  Real expectation(const HermitianOperator<Real>& a) const {
    if (a.dim() != dim()) throw DimensionMismatch("expectation: operator and state dimensions differ");
    return detail::trace_product(m_, a.matrix());
  }

 private:
  struct Trusted {};
  DensityOperator(Matrix m, Trusted) : m_(std::move(m)) {}

  Matrix m_;
};

/// |v^><v^| with v^ = v / ||v||.
template <typename Real>
DensityOperator<Real> rank_one_state(const ComplexVector<Real>& v) {
  const Real norm = v.norm();
  if (v.size() < 1 || !(norm > Real(0))) throw DomainError("rank_one_state: zero vector");
  return DensityOperator<Real>::projector_onto(ComplexVector<Real>(v / norm));
}

/// Standard complex Gaussian matrix: independent entries (x + iy)/sqrt(2).
template <typename Real, typename Rng>
ComplexMatrix<Real> random_ginibre(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<Real> normal(Real(0), Real(1));
  const Real scale = Real(1) / std::sqrt(Real(2));
  ComplexMatrix<Real> g(rows, cols);
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) {
      const Real re = normal(rng);
      const Real im = normal(rng);
      g(i, j) = Complex<Real>(re * scale, im * scale);
    }
  }
  return g;
}

/// G G* / tr(G G*) for a Ginibre matrix G; full rank with probability one.
template <typename Real, typename Rng>
DensityOperator<Real> random_density(Index dim, Rng& rng) {
  if (dim < 1) throw DomainError("random_density: dim must be >= 1");
  const ComplexMatrix<Real> g = random_ginibre<Real>(dim, dim, rng);
  ComplexMatrix<Real> w = g * g.adjoint();
  w /= w.trace().real();
  return DensityOperator<Real>(w);
}

template <typename Real>
DensityOperator<Real> random_density(Index dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_density<Real>(dim, rng);
}

/// (G + G*)/2 scaled by `scale`, G Ginibre.
template <typename Real, typename Rng>
HermitianOperator<Real> random_hermitian(Index dim, Rng& rng, Real scale = Real(1)) {
  const ComplexMatrix<Real> g = random_ginibre<Real>(dim, dim, rng);
  return HermitianOperator<Real>::hermitian_part(ComplexMatrix<Real>(scale * g));
}

/// Haar-ish unitary from the QR factor of a Ginibre matrix.
template <typename Real, typename Rng>
ComplexMatrix<Real> random_unitary(Index dim, Rng& rng) {
  const ComplexMatrix<Real> g = random_ginibre<Real>(dim, dim, rng);
  Eigen::HouseholderQR<ComplexMatrix<Real>> qr(g);
  return qr.householderQ();
}

}  // namespace qgame
