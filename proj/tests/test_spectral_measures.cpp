#include <random>
#include <sstream>

#include "doctest.h"
#include "qgame/spectral_measures.hpp"

using namespace qgame;
using Mat = ComplexMatrix<double>;
using Vec = ComplexVector<double>;
using Dist = StepDistribution<double>;

namespace {

RealVector<double> rv(std::initializer_list<double> xs) {
  RealVector<double> v(Index(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

SpectralDecomposition<double> diag01() { return spectral_decompose(HermitianOperator<double>::diagonal(rv({0, 1}))); }

}  // namespace

TEST_CASE("spectral_masses examples") {
  Vec e1(2);
  e1 << 1, 0;
  auto s = spectral_masses(rank_one_state(e1), diag01());
  CHECK(s.support() == rv({0, 1}));
  CHECK(s.masses()(0) == doctest::Approx(1.0));
  CHECK(s.masses()(1) == doctest::Approx(0.0));

  Mat px(2, 2);
  px << 0, 1, 1, 0;
  s = spectral_masses(DensityOperator<double>::maximally_mixed(2), spectral_decompose(HermitianOperator<double>(px)));
  CHECK(s.masses()(0) == doctest::Approx(0.5));
  CHECK(s.masses()(1) == doctest::Approx(0.5));

  Vec v(2);
  v << std::sqrt(3.0) / 2, 0.5;
  s = spectral_masses(rank_one_state(v), diag01());
  CHECK(s.masses()(0) == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(s.masses()(1) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(s.is_probability());

  CHECK_THROWS_AS(spectral_masses(DensityOperator<double>::maximally_mixed(3), diag01()), DimensionMismatch);
}

TEST_CASE("cdf") {
  CHECK(cdf(Dist(rv({0, 1}), rv({1, 0})), 0.0) == 1.0);
  CHECK(cdf(Dist(rv({0, 1}), rv({0.5, 0.5})), 0.5) == 0.5);
  CHECK(cdf(Dist(rv({0, 1}), rv({0.75, 0.25})), 2.0) == 1.0);
  CHECK(cdf(Dist(rv({0, 1}), rv({0.75, 0.25})), -0.1) == 0.0);
}

TEST_CASE("total_variation") {
  const Dist p(rv({-1, 0.5, 2}), rv({0.2, 0.3, 0.5}));
  CHECK(total_variation(p) == doctest::Approx(1.0));
  CHECK(total_variation(difference(p, p)) == 0.0);
  CHECK(total_variation(Dist(rv({0, 1}), rv({0.3, -0.3}))) == doctest::Approx(0.6));
}

TEST_CASE("difference merges supports") {
  auto d = difference(Dist(rv({0, 1}), rv({0.5, 0.5})), Dist(rv({0, 1}), rv({1, 0})));
  CHECK(d.support() == rv({0, 1}));
  CHECK(d.masses() == rv({-0.5, 0.5}));

  d = difference(Dist(rv({0}), rv({1})), Dist(rv({1}), rv({1})));
  CHECK(d.support() == rv({0, 1}));
  CHECK(d.masses() == rv({1, -1}));

  // Points within 1e-12 are identified.
  d = difference(Dist(rv({0, 1}), rv({0.5, 0.5})), Dist(rv({0, 1 + 1e-13}), rv({0.5, 0.5})));
  CHECK(d.size() == 2);
  CHECK(total_variation(d) == 0.0);
}

TEST_CASE("step distribution rejects unsorted support") {
  CHECK_THROWS_AS(Dist(rv({1, 0}), rv({0.5, 0.5})), DomainError);
  CHECK_THROWS_AS(Dist(rv({0, 1}), rv({1})), DimensionMismatch);
}

TEST_CASE("distribution properties on random states") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const Index n = 1 + trial % 6;
    const auto d = spectral_decompose(random_hermitian<double>(n, rng));
    const auto rho1 = random_density<double>(n, rng);
    const auto rho2 = random_density<double>(n, rng);
    const auto s1 = spectral_masses(rho1, d);
    const auto s2 = spectral_masses(rho2, d);
    CHECK(s1.is_probability());

    // Total variation of a difference never exceeds the trace distance.
    CHECK(total_variation(difference(s1, s2)) <= trace_norm(rho1.matrix() - rho2.matrix()) + 1e-9);

    // Monotone cdf reaching one at M(T).
    double prev = -1;
    for (Index i = 0; i < d.size(); ++i) {
      const double f = cdf(s1, d.eigenvalues(i));
      CHECK(f >= prev - 1e-12);
      prev = f;
    }
    CHECK(std::abs(cdf(s1, d.upper_bound()) - 1.0) <= 1e-10);

    // Masses are linear in the state.
    const double t = double(trial % 11) / 10.0;
    const auto mix = spectral_masses(DensityOperator<double>::mixture(rho1, rho2, t), d);
    CHECK((mix.masses() - (t * s1.masses() + (1 - t) * s2.masses())).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("csv export") {
  std::ostringstream os;
  write_csv(os, Dist(rv({0, 1}), rv({0.75, 0.25})));
  CHECK(os.str() == "lambda,mass,cdf\n0,0.75,0.75\n1,0.25,1\n");
}
