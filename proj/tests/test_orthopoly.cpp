#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "sphdesign/orthopoly.hpp"

using namespace sphdesign;

TEST_CASE("legendre: closed values") {
  CHECK(legendre(0, 0.37) == 1.0);
  CHECK(legendre(3, 1.0) == 1.0);
  for (int n = 0; n <= 30; ++n) CHECK(legendre(n, 1.0) == 1.0);
  CHECK(std::abs(legendre(2, 1.0 / std::sqrt(3.0))) < 1e-14);
}

TEST_CASE("legendre: domain") {
  CHECK_THROWS_AS(legendre(2, 1.0 + 1e-9), std::domain_error);
  CHECK(legendre(4, 1.0 + 5e-13) == 1.0);  // snapped onto the endpoint
  CHECK(legendre(3, -1.0 - 5e-13) == -1.0);
}

TEST_CASE("legendre: recurrence agrees with monomial expansion") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> x(-1.0, 1.0);
  for (int n = 0; n <= 10; ++n) {
    for (int k = 0; k < 50; ++k) {
      const double v = x(rng);
      const double expected = oracle::legendre_monomial(n, v);
      CHECK(std::abs(legendre(n, v) - expected) <= 1e-12 * std::max(1.0, std::abs(expected)));
    }
  }
}

TEST_CASE("legendre: parity") {
  std::mt19937 rng(12);
  std::uniform_real_distribution<double> x(-1.0, 1.0);
  for (int n = 0; n <= 20; ++n) {
    const double v = x(rng);
    const double sign = n % 2 ? -1.0 : 1.0;
    CHECK(std::abs(legendre(n, -v) - sign * legendre(n, v)) < 1e-14);
  }
}

TEST_CASE("assoc_legendre: examples") {
  for (double v : {-0.9, -0.2, 0.0, 0.4, 1.0}) {
    for (int n = 0; n <= 8; ++n) CHECK(assoc_legendre(n, 0, v) == doctest::Approx(legendre(n, v)).epsilon(1e-15));
  }
  CHECK(assoc_legendre(1, 1, 0.0) == doctest::Approx(-1.0));
  CHECK(assoc_legendre(2, 2, 1.0) == 0.0);
  CHECK_THROWS_AS(assoc_legendre(2, 3, 0.1), std::domain_error);
  CHECK_THROWS_AS(assoc_legendre(2, -1, 0.1), std::domain_error);
}

TEST_CASE("assoc_legendre: matches the ultraspherical representation") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> x(-0.99, 0.99);
  for (int n = 0; n <= 9; ++n) {
    for (int m = 0; m <= n; ++m) {
      for (int k = 0; k < 5; ++k) {
        const double v = x(rng);
        const double expected = oracle::assoc_legendre_gegenbauer(n, m, v);
        CHECK(std::abs(assoc_legendre(n, m, v) - expected) <= 1e-11 * std::max(1.0, std::abs(expected)));
      }
    }
  }
}

TEST_CASE("assoc_legendre: satisfies the associated Legendre ODE") {
  std::mt19937 rng(14);
  std::uniform_real_distribution<double> x(-0.9, 0.9);
  const long double h = 1e-3L;
  for (int n = 1; n <= 6; ++n) {
    for (int m = 0; m <= n; ++m) {
      // Residual measured against the size of P_n^m, which grows like (n+m)!/(n-m)!.
      long double scale = 1;
      for (int k = n - m + 1; k <= n + m; ++k) scale *= k;
      for (int k = 0; k < 50; ++k) {
        const long double v = x(rng);
        auto p = [&](long double t) { return assoc_legendre<long double>(n, m, t); };
        const long double d1 = (-p(v + 2 * h) + 8 * p(v + h) - 8 * p(v - h) + p(v - 2 * h)) / (12 * h);
        const long double d2 =
            (-p(v + 2 * h) + 16 * p(v + h) - 30 * p(v) + 16 * p(v - h) - p(v - 2 * h)) / (12 * h * h);
        const long double residual =
            (1 - v * v) * d2 - 2 * v * d1 + (n * (n + 1) - m * m / (1 - v * v)) * p(v);
        CHECK(std::abs(static_cast<double>(residual / scale)) < 1e-8);
      }
    }
  }
}

TEST_CASE("assoc_legendre: odd orders carry a sqrt(1 - x^2) factor") {
  // P_n^m / sqrt(1 - x^2) for odd m is a polynomial of degree n - 1: its
  // n-th finite difference on an equispaced grid vanishes.
  const int n = 5, m = 3;
  std::vector<long double> g;
  for (int i = 0; i <= n; ++i) {
    const long double v = -0.5L + 0.2L * i;
    g.push_back(assoc_legendre<long double>(n, m, v) / std::sqrt(1 - v * v));
  }
  for (int order = 0; order < n; ++order) {
    for (std::size_t i = 0; i + 1 < g.size() - order; ++i) g[i] = g[i + 1] - g[i];
  }
  CHECK(std::abs(static_cast<double>(g[0])) < 1e-9);
}

TEST_CASE("jacobi: examples") {
  CHECK(jacobi(2, 1, 1, 1.0) == doctest::Approx(3.0));
  for (double v : {-0.7, 0.1, 0.55}) {
    CHECK(jacobi(2, 1, 1, v) == doctest::Approx(0.75 * (5 * v * v - 1)));
    CHECK(jacobi(2, 1, 0, v) == doctest::Approx((5 * v * v + 2 * v - 1) / 2));
  }
  CHECK(jacobi(2, 1, 0, 0.2) == doctest::Approx(-0.2));
  CHECK(jacobi(0, 0, 1, 0.9) == 1.0);
  for (int j = 0; j <= 10; ++j) {
    CHECK(jacobi(j, 0, 0, 0.3) == doctest::Approx(legendre(j, 0.3)));
    CHECK(jacobi(j, 1, 0, 1.0) == doctest::Approx(j + 1.0));
    CHECK(jacobi(j, 0, 1, 1.0) == doctest::Approx(1.0));
  }
  CHECK_THROWS_AS(jacobi(2, 2, 0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(jacobi(2, 0, -1, 0.1), std::invalid_argument);
}

TEST_CASE("gegenbauer: agrees with the explicit sum") {
  for (int n = 0; n <= 8; ++n) {
    for (double lambda : {0.5, 1.0, 2.5}) {
      for (double v : {-0.8, 0.0, 0.3}) {
        CHECK(gegenbauer(n, lambda, v) ==
              doctest::Approx(static_cast<double>(oracle::gegenbauer_sum(n, lambda, v))).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("poly_roots: closed forms") {
  const Eigen::VectorXd gauss3 = poly_roots(PolySpec::legendre(3));
  REQUIRE(gauss3.size() == 3);
  CHECK(gauss3[0] == doctest::Approx(-std::sqrt(0.6)).epsilon(1e-15));
  CHECK(std::abs(gauss3[1]) < 1e-15);
  CHECK(gauss3[2] == doctest::Approx(std::sqrt(0.6)).epsilon(1e-15));

  const Eigen::VectorXd lob = poly_roots(PolySpec::jacobi(2, 1, 1));
  CHECK(lob[0] == doctest::Approx(-std::sqrt(0.2)).epsilon(1e-15));
  CHECK(lob[1] == doctest::Approx(std::sqrt(0.2)).epsilon(1e-15));

  const Eigen::VectorXd rad = poly_roots(PolySpec::jacobi(2, 1, 0));
  CHECK(rad[0] == doctest::Approx((-1 - std::sqrt(6.0)) / 5).epsilon(1e-15));
  CHECK(rad[1] == doctest::Approx((-1 + std::sqrt(6.0)) / 5).epsilon(1e-15));
}

TEST_CASE("poly_roots: residuals, ordering and counts") {
  for (int n = 1; n <= 12; ++n) {
    for (auto spec : {PolySpec::legendre(n), PolySpec::jacobi(n, 1, 0), PolySpec::jacobi(n, 0, 1),
                      PolySpec::jacobi(n, 1, 1)}) {
      const Eigen::VectorXd roots = poly_roots(spec);
      REQUIRE(roots.size() == n);
      for (int i = 0; i < n; ++i) {
        CHECK(roots[i] > -1.0);
        CHECK(roots[i] < 1.0);
        if (i > 0) CHECK(roots[i] > roots[i - 1]);
        CHECK(std::abs(jacobi(n, spec.alpha, spec.beta, roots[i])) < 1e-13);
      }
    }
  }
}

TEST_CASE("poly_roots: consecutive Legendre degrees interlace") {
  for (int n = 2; n <= 25; ++n) {
    const Eigen::VectorXd lower = poly_roots(PolySpec::legendre(n - 1));
    const Eigen::VectorXd upper = poly_roots(PolySpec::legendre(n));
    for (int i = 0; i < n - 1; ++i) {
      CHECK(upper[i] < lower[i]);
      CHECK(lower[i] < upper[i + 1]);
    }
  }
}

TEST_CASE("poly_roots: associated Legendre and ultraspherical families") {
  const Eigen::VectorXd roots = poly_roots(PolySpec::associated_legendre(6, 2));
  REQUIRE(roots.size() == 4);
  for (double r : roots) CHECK(std::abs(assoc_legendre(6, 2, r)) < 1e-12);
  // C^{(1/2)} is the Legendre polynomial.
  const Eigen::VectorXd c = poly_roots(PolySpec::ultraspherical(5, 0.5));
  const Eigen::VectorXd p = poly_roots(PolySpec::legendre(5));
  CHECK((c - p).cwiseAbs().maxCoeff() < 1e-15);
  CHECK_THROWS_AS(poly_roots(PolySpec::jacobi(3, 2, 0)), std::invalid_argument);
}

TEST_CASE("templates instantiate for long double") {
  const auto roots = poly_roots<long double>(PolySpec::legendre(4));
  const Eigen::VectorXd dbl = poly_roots(PolySpec::legendre(4));
  for (int i = 0; i < 4; ++i) CHECK(std::abs(static_cast<double>(roots[i]) - dbl[i]) < 1e-15);
}
