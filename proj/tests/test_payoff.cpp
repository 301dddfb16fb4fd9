#include <random>

#include "doctest.h"
#include "qgame/payoff.hpp"

using namespace qgame;
using Mat = ComplexMatrix<double>;
using Dist = StepDistribution<double>;

namespace {

RealVector<double> rv(std::initializer_list<double> xs) {
  RealVector<double> v(Index(xs.size()));
  Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

RealMatrix<double> identity2() { return RealMatrix<double>::Identity(2, 2); }

SpectralDecomposition<double> diag01() { return spectral_decompose(HermitianOperator<double>::diagonal(rv({0, 1}))); }

}  // namespace

TEST_CASE("tabulate") {
  const auto d = diag01();
  auto pm = tabulate(PayoffKernel<double>::constant(1.0), d, d);
  CHECK(pm.values == RealMatrix<double>::Ones(2, 2));
  CHECK(pm.zmax == 1.0);

  pm = tabulate(PayoffKernel<double>::squared_difference(), d, d);
  RealMatrix<double> expected(2, 2);
  expected << 0, 1, 1, 0;
  CHECK(pm.values == expected);
  CHECK(pm.zmax == 1.0);

  pm = tabulate(PayoffKernel<double>::table(identity2()), d, d);
  CHECK(pm.values == identity2());
  CHECK(pm.zmax == 1.0);
  CHECK(pm.lambda0() == 0.0);
  CHECK(pm.l0() == 0.0);

  pm = tabulate(PayoffKernel<double>::shifted_product(0.5), d, d);
  CHECK(pm.values(1, 1) == 1.5);
}

TEST_CASE("tabulate rejects invalid kernels") {
  const auto d = spectral_decompose(HermitianOperator<double>::diagonal(rv({-1, 1})));
  CHECK_THROWS_WITH_AS(tabulate(PayoffKernel<double>::shifted_product(0.0), d, d),
                       doctest::Contains("Z(-1, 1)"), InvalidKernel);
  CHECK_NOTHROW(tabulate(PayoffKernel<double>::shifted_product(1.0), d, d));
  CHECK_THROWS_AS(tabulate(PayoffKernel<double>::constant(0.0), d, d), DegenerateKernel);
  CHECK_THROWS_AS(tabulate(PayoffKernel<double>::table(RealMatrix<double>::Ones(3, 2)), d, d), DimensionMismatch);
}

TEST_CASE("expected_payoff and fubini swap") {
  const auto d = diag01();
  const auto pm = tabulate(PayoffKernel<double>::table(identity2()), d, d);
  const Dist half(rv({0, 1}), rv({0.5, 0.5}));
  CHECK(expected_payoff(pm, half, half) == doctest::Approx(0.5));
  CHECK(expected_payoff(pm, Dist(rv({0, 1}), rv({1, 0})), Dist(rv({0, 1}), rv({0, 1}))) == 0.0);

  const auto [rows, cols] = fubini_swap_check(pm, half, half);
  CHECK(rows == doctest::Approx(0.5));
  CHECK(cols == doctest::Approx(0.5));

  const auto c = tabulate(PayoffKernel<double>::constant(2.5), d, d);
  CHECK(expected_payoff(c, half, Dist(rv({0, 1}), rv({0.1, 0.9}))) == doctest::Approx(2.5));
  const auto [r1, c1] = fubini_swap_check(tabulate(PayoffKernel<double>::constant(1.0), d, d), half, half);
  CHECK(r1 == 1.0);
  CHECK(c1 == 1.0);

  CHECK_THROWS_AS(expected_payoff(pm, Dist(rv({0, 2}), rv({0.5, 0.5})), half), DimensionMismatch);
}

TEST_CASE("response operators") {
  const auto d = diag01();
  const Dist half(rv({0, 1}), rv({0.5, 0.5}));

  const auto ones = tabulate(PayoffKernel<double>::constant(1.0), d, d);
  CHECK((response_operator_blue(ones, d, half).matrix() - Mat::Identity(2, 2)).norm() < 1e-15);
  CHECK((response_operator_red(ones, d, half).matrix() - Mat::Identity(2, 2)).norm() < 1e-15);

  const auto pm = tabulate(PayoffKernel<double>::table(identity2()), d, d);
  CHECK((response_operator_blue(pm, d, half).matrix() - 0.5 * Mat::Identity(2, 2)).norm() < 1e-15);
  CHECK((response_operator_red(pm, d, half).matrix() - 0.5 * Mat::Identity(2, 2)).norm() < 1e-15);

  Mat p0 = Mat::Zero(2, 2), p1 = Mat::Zero(2, 2);
  p0(0, 0) = 1;
  p1(1, 1) = 1;
  CHECK((response_operator_blue(pm, d, Dist(rv({0, 1}), rv({1, 0}))).matrix() - p0).norm() < 1e-15);
  CHECK((response_operator_red(pm, d, Dist(rv({0, 1}), rv({0, 1}))).matrix() - p1).norm() < 1e-15);
}

TEST_CASE("payoff properties on random instances") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0, 5);
  for (int trial = 0; trial < 1000; ++trial) {
    const Index nb = 1 + trial % 6;
    const Index nr = 1 + (trial / 6) % 6;
    const auto db = spectral_decompose(random_hermitian<double>(nb, rng));
    const auto dr = spectral_decompose(random_hermitian<double>(nr, rng));
    RealMatrix<double> z(db.size(), dr.size());
    for (Index i = 0; i < z.rows(); ++i)
      for (Index j = 0; j < z.cols(); ++j) z(i, j) = u(rng);
    const auto pm = tabulate(PayoffKernel<double>::table(z), db, dr);

    const auto rho1 = random_density<double>(nb, rng);
    const auto rho2 = random_density<double>(nb, rng);
    const auto phi1 = random_density<double>(nr, rng);
    const auto phi2 = random_density<double>(nr, rng);
    const auto p1 = spectral_masses(rho1, db);
    const auto p2 = spectral_masses(rho2, db);
    const auto q1 = spectral_masses(phi1, dr);
    const auto q2 = spectral_masses(phi2, dr);

    const double k11 = expected_payoff(pm, p1, q1);
    CHECK(k11 >= -1e-12);
    CHECK(k11 <= pm.zmax + 1e-12);

    // Lipschitz in each argument with constant zmax in trace norm.
    CHECK(std::abs(k11 - expected_payoff(pm, p1, q2)) <= pm.zmax * trace_norm(phi1.matrix() - phi2.matrix()) + 1e-9);
    CHECK(std::abs(k11 - expected_payoff(pm, p2, q1)) <= pm.zmax * trace_norm(rho1.matrix() - rho2.matrix()) + 1e-9);

    // Affine under mixing.
    const double t = double(trial % 7) / 6.0;
    const auto pmix = spectral_masses(DensityOperator<double>::mixture(rho1, rho2, t), db);
    CHECK(std::abs(expected_payoff(pm, pmix, q1) - (t * k11 + (1 - t) * expected_payoff(pm, p2, q1))) <= 1e-10);

    const auto [rows, cols] = fubini_swap_check(pm, p1, q1);
    CHECK(std::abs(rows - cols) <= 1e-12 * pm.zmax);

    CHECK(std::abs(rho1.expectation(response_operator_blue(pm, db, q1)) - k11) <= 1e-11);
    CHECK(std::abs(phi1.expectation(response_operator_red(pm, dr, p1)) - k11) <= 1e-11);
  }
}
