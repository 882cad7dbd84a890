#pragma once

// Classical orthogonal polynomials on [-1, 1]: Legendre, associated Legendre
// (with the Condon-Shortley phase), Jacobi and ultraspherical (Gegenbauer),
// plus a root finder for the families that interlace.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sphdesign {

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

/// Abscissae within this distance of +-1 are snapped onto the endpoint.
inline constexpr double kEndpointSnap = 1e-12;

/// Snaps |x| <= 1 + kEndpointSnap into [-1, 1]; anything further out is a
/// domain error.
template <typename Scalar>
Scalar clamp_abscissa(Scalar x) {
  using std::abs;
  if (!(abs(x) <= Scalar(1) + Scalar(kEndpointSnap))) {
    throw std::domain_error("orthopoly: abscissa outside [-1, 1]");
  }
  if (x > Scalar(1) - Scalar(kEndpointSnap)) return Scalar(1);
  if (x < Scalar(-1) + Scalar(kEndpointSnap)) return Scalar(-1);
  return x;
}

/// Legendre polynomial P_n(x) by the three-term recurrence.
template <typename Scalar>
Scalar legendre(int n, Scalar x) {
  if (n < 0) throw std::domain_error("legendre: negative degree");
  x = clamp_abscissa(x);
  Scalar p0(1);
  if (n == 0) return p0;
  Scalar p1 = x;
  for (int k = 2; k <= n; ++k) {
    Scalar p2 = (Scalar(2 * k - 1) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// Associated Legendre function P_n^m(x), including the (-1)^m phase.
/// Runs the upward recurrence in n seeded from P_m^m.
template <typename Scalar>
Scalar assoc_legendre(int n, int m, Scalar x) {
  if (m < 0 || n < m) {
    throw std::domain_error("assoc_legendre: require 0 <= m <= n");
  }
  using std::sqrt;
  x = clamp_abscissa(x);
  const Scalar s = sqrt((Scalar(1) - x) * (Scalar(1) + x));
  Scalar pmm(1);
  for (int k = 1; k <= m; ++k) pmm *= -Scalar(2 * k - 1) * s;
  if (n == m) return pmm;
  Scalar p0 = pmm;
  Scalar p1 = x * Scalar(2 * m + 1) * pmm;
  for (int l = m + 2; l <= n; ++l) {
    Scalar p2 = (Scalar(2 * l - 1) * x * p1 - Scalar(l + m - 1) * p0) /
                Scalar(l - m);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

namespace detail {

// Jacobi P_n^{(a,b)} for real a, b > -1, standard normalization.
template <typename Scalar>
Scalar jacobi_general(int n, Scalar a, Scalar b, Scalar x) {
  Scalar p0(1);
  if (n == 0) return p0;
  Scalar p1 = (a + Scalar(1)) + (a + b + Scalar(2)) * (x - Scalar(1)) / Scalar(2);
  for (int k = 2; k <= n; ++k) {
    const Scalar c = Scalar(2 * k) + a + b;
    const Scalar lead = Scalar(2 * k) * (Scalar(k) + a + b) * (c - Scalar(2));
    const Scalar mid = (c - Scalar(1)) * (c * (c - Scalar(2)) * x + a * a - b * b);
    const Scalar tail = Scalar(2) * (Scalar(k) + a - Scalar(1)) *
                        (Scalar(k) + b - Scalar(1)) * c;
    Scalar p2 = (mid * p1 - tail * p0) / lead;
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

template <typename Scalar>
Scalar jacobi_general_derivative(int n, Scalar a, Scalar b, Scalar x) {
  if (n == 0) return Scalar(0);
  return (Scalar(n) + a + b + Scalar(1)) / Scalar(2) *
         jacobi_general(n - 1, a + Scalar(1), b + Scalar(1), x);
}

template <typename Scalar>
Scalar gegenbauer_raw(int n, Scalar lambda, Scalar x) {
  Scalar c0(1);
  if (n == 0) return c0;
  Scalar c1 = Scalar(2) * lambda * x;
  for (int k = 2; k <= n; ++k) {
    Scalar c2 = (Scalar(2) * x * (Scalar(k) + lambda - Scalar(1)) * c1 -
                 (Scalar(k) + Scalar(2) * lambda - Scalar(2)) * c0) /
                Scalar(k);
    c0 = c1;
    c1 = c2;
  }
  return c1;
}

}  // namespace detail

/// Jacobi polynomial P_j^{(alpha,beta)}(x), P_j(1) = C(j + alpha, j).
/// Only the four parameter pairs with alpha, beta in {0, 1} are supported.
template <typename Scalar>
Scalar jacobi(int j, int alpha, int beta, Scalar x) {
  if (j < 0) throw std::domain_error("jacobi: negative degree");
  if ((alpha != 0 && alpha != 1) || (beta != 0 && beta != 1)) {
    throw std::invalid_argument("jacobi: parameters must lie in {0, 1}");
  }
  return detail::jacobi_general(j, Scalar(alpha), Scalar(beta),
                                clamp_abscissa(x));
}

/// Ultraspherical polynomial C_n^{(lambda)}(x), lambda > 0.
template <typename Scalar>
Scalar gegenbauer(int n, Scalar lambda, Scalar x) {
  if (n < 0) throw std::domain_error("gegenbauer: negative degree");
  if (!(lambda > Scalar(0))) {
    throw std::invalid_argument("gegenbauer: lambda must be positive");
  }
  return detail::gegenbauer_raw(n, lambda, clamp_abscissa(x));
}

enum class PolyFamily { Legendre, AssociatedLegendre, Jacobi, Ultraspherical };

/// Which polynomial to root-find. `order` is the m of P_n^m; `alpha`/`beta`
/// the Jacobi parameters; `lambda` the ultraspherical parameter.
struct PolySpec {
  PolyFamily family = PolyFamily::Legendre;
  int degree = 0;
  int order = 0;
  int alpha = 0;
  int beta = 0;
  double lambda = 0.5;

  static PolySpec legendre(int n) { return {PolyFamily::Legendre, n}; }
  static PolySpec associated_legendre(int n, int m) {
    return {PolyFamily::AssociatedLegendre, n, m};
  }
  static PolySpec jacobi(int n, int alpha, int beta) {
    return {PolyFamily::Jacobi, n, 0, alpha, beta};
  }
  static PolySpec ultraspherical(int n, double lambda) {
    return {PolyFamily::Ultraspherical, n, 0, 0, 0, lambda};
  }
};

namespace detail {

// Polynomial part of a family at degree k, with derivative. For associated
// Legendre this is C_k^{(m+1/2)}, whose zeros are the interior zeros of
// P_{k+m}^m.
template <typename Scalar>
struct FamilyEval {
  PolyFamily family;
  Scalar a, b, lambda;

  static FamilyEval from(const PolySpec& spec) {
    switch (spec.family) {
      case PolyFamily::Legendre:
        return {spec.family, Scalar(0), Scalar(0), Scalar(0)};
      case PolyFamily::Jacobi:
        if ((spec.alpha != 0 && spec.alpha != 1) ||
            (spec.beta != 0 && spec.beta != 1)) {
          throw std::invalid_argument("poly_roots: jacobi parameters must lie in {0, 1}");
        }
        return {spec.family, Scalar(spec.alpha), Scalar(spec.beta), Scalar(0)};
      case PolyFamily::AssociatedLegendre:
        if (spec.order < 0 || spec.order > spec.degree) {
          throw std::domain_error("poly_roots: require 0 <= m <= n");
        }
        return {spec.family, Scalar(0), Scalar(0), Scalar(spec.order) + Scalar(0.5)};
      case PolyFamily::Ultraspherical:
        if (!(spec.lambda > 0)) {
          throw std::invalid_argument("poly_roots: lambda must be positive");
        }
        return {spec.family, Scalar(0), Scalar(0), Scalar(spec.lambda)};
    }
    throw std::logic_error("poly_roots: unknown family");
  }

  Scalar value(int k, Scalar x) const {
    if (family == PolyFamily::Legendre || family == PolyFamily::Jacobi) {
      return jacobi_general(k, a, b, x);
    }
    return gegenbauer_raw(k, lambda, x);
  }

  Scalar derivative(int k, Scalar x) const {
    if (family == PolyFamily::Legendre || family == PolyFamily::Jacobi) {
      return jacobi_general_derivative(k, a, b, x);
    }
    if (k == 0) return Scalar(0);
    return Scalar(2) * lambda * gegenbauer_raw(k - 1, lambda + Scalar(1), x);
  }
};

}  // namespace detail

/// Zeros of the polynomial named by `spec`, strictly increasing in (-1, 1).
///
/// Roots of degree k are bracketed by those of degree k-1 (strict
/// interlacing), located by bisection to the last representable bit and
/// polished with one Newton step. For the associated Legendre family the
/// interior zeros of P_n^m are returned (n - m of them).
template <typename Scalar = double>
VectorX<Scalar> poly_roots(const PolySpec& spec) {
  using std::abs;
  const auto eval = detail::FamilyEval<Scalar>::from(spec);
  const int target = spec.family == PolyFamily::AssociatedLegendre
                         ? spec.degree - spec.order
                         : spec.degree;
  if (target < 0) throw std::domain_error("poly_roots: negative degree");

  std::vector<Scalar> roots;
  for (int k = 1; k <= target; ++k) {
    std::vector<Scalar> next;
    next.reserve(k);
    for (int i = 0; i < k; ++i) {
      Scalar lo = i == 0 ? Scalar(-1) : roots[i - 1];
      Scalar hi = i == k - 1 ? Scalar(1) : roots[i];
      Scalar flo = eval.value(k, lo);
      const Scalar lo0 = lo, hi0 = hi;
      for (int iter = 0; iter < 400; ++iter) {
        const Scalar mid = (lo + hi) / Scalar(2);
        if (mid <= lo || mid >= hi) break;
        const Scalar fmid = eval.value(k, mid);
        if (fmid == Scalar(0)) {
          lo = hi = mid;
          break;
        }
        if ((fmid < Scalar(0)) == (flo < Scalar(0))) {
          lo = mid;
          flo = fmid;
        } else {
          hi = mid;
        }
      }
      Scalar x = (lo + hi) / Scalar(2);
      const Scalar fx = eval.value(k, x);
      const Scalar dfx = eval.derivative(k, x);
      if (dfx != Scalar(0)) {
        const Scalar polished = x - fx / dfx;
        if (polished > lo0 && polished < hi0 &&
            abs(eval.value(k, polished)) <= abs(fx)) {
          x = polished;
        }
      }
      if (!(x > lo0 && x < hi0)) {
        throw std::runtime_error("poly_roots: root escaped its bracket");
      }
      next.push_back(x);
    }
    roots = std::move(next);
  }
  VectorX<Scalar> out(roots.size());
  for (std::size_t i = 0; i < roots.size(); ++i) out[i] = roots[i];
  return out;
}

}  // namespace sphdesign
