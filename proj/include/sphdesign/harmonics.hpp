#pragma once

// Real orthonormal spherical harmonics Y_l^m and the regression vector f_d.
//
//   Y_l^m(theta, phi) = gamma_lm * P_l^|m|(cos theta) * psi_m(phi)
//   gamma_lm = sqrt((2l + 1) (l - |m|)! / (l + |m|)!)
//   psi_0 = 1, psi_m = sqrt(2) cos(m phi) (m > 0), sqrt(2) sin(|m| phi) (m < 0)
//
// normalized so that (1/4pi) * integral over the sphere of Y_l^m Y_l'^m' is
// the Kronecker delta.

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "sphdesign/orthopoly.hpp"

namespace sphdesign {

/// Polar angle theta in [0, pi], azimuth phi in (-pi, pi].
struct SphericalAngle {
  double theta = 0.0;
  double phi = 0.0;

  /// Validates theta and wraps phi into (-pi, pi].
  static SphericalAngle make(double theta, double phi);
};

/// Wraps an azimuth into (-pi, pi] by whole turns.
inline double normalize_azimuth(double phi) {
  constexpr double pi = std::numbers::pi;
  if (!std::isfinite(phi)) throw std::domain_error("azimuth is not finite");
  while (phi > pi) phi -= 2.0 * pi;
  while (phi <= -pi) phi += 2.0 * pi;
  return phi;
}

inline SphericalAngle SphericalAngle::make(double theta, double phi) {
  if (!(theta >= 0.0 && theta <= std::numbers::pi)) {
    throw std::domain_error("polar angle outside [0, pi]");
  }
  return {theta, normalize_azimuth(phi)};
}

struct HarmonicIndex {
  int ell = 0;
  int m = 0;
};

/// Number of harmonics of level <= d.
constexpr int harmonic_count(int d) { return (d + 1) * (d + 1); }

/// Position of Y_l^m in f_d: levels in order, m = -l..l within a level.
constexpr int harmonic_offset(int ell, int m) { return ell * ell + ell + m; }

inline HarmonicIndex harmonic_at(int offset) {
  int ell = 0;
  while ((ell + 1) * (ell + 1) <= offset) ++ell;
  return {ell, offset - ell * ell - ell};
}

/// sqrt((2l + 1) (l - m)! / (l + m)!) for m >= 0.
template <typename Scalar = double>
Scalar harmonic_norm(int ell, int m) {
  using std::sqrt;
  Scalar ratio(1);
  for (int k = ell - m + 1; k <= ell + m; ++k) ratio /= Scalar(k);
  return sqrt(Scalar(2 * ell + 1) * ratio);
}

namespace detail {

// cos/sin of the polar angle with the poles made exact: at theta = 0 or pi
// the sine is exactly zero so every m != 0 harmonic vanishes.
template <typename Scalar>
void polar_cos_sin(Scalar theta, Scalar& x, Scalar& s) {
  using std::cos;
  using std::sin;
  const Scalar pi = std::numbers::pi_v<Scalar>;
  if (theta == Scalar(0)) {
    x = Scalar(1);
    s = Scalar(0);
  } else if (theta == pi) {
    x = Scalar(-1);
    s = Scalar(0);
  } else {
    x = cos(theta);
    s = sin(theta);
  }
}

}  // namespace detail

/// Y_l^m(theta, phi).
template <typename Scalar>
Scalar ylm(int ell, int m, Scalar theta, Scalar phi) {
  using std::abs;
  using std::cos;
  using std::sin;
  using std::sqrt;
  if (ell < 0 || abs(m) > ell) throw std::domain_error("ylm: require |m| <= l");
  Scalar x, s;
  detail::polar_cos_sin(theta, x, s);
  const int am = abs(m);
  // P_l^|m| from x and s directly so the pole handling above carries through.
  Scalar pmm(1);
  for (int k = 1; k <= am; ++k) pmm *= -Scalar(2 * k - 1) * s;
  Scalar plm = pmm;
  if (ell > am) {
    Scalar p0 = pmm;
    Scalar p1 = x * Scalar(2 * am + 1) * pmm;
    for (int l = am + 2; l <= ell; ++l) {
      Scalar p2 = (Scalar(2 * l - 1) * x * p1 - Scalar(l + am - 1) * p0) / Scalar(l - am);
      p0 = p1;
      p1 = p2;
    }
    plm = p1;
  }
  Scalar psi(1);
  if (m > 0) psi = sqrt(Scalar(2)) * cos(Scalar(m) * phi);
  if (m < 0) psi = sqrt(Scalar(2)) * sin(Scalar(am) * phi);
  return harmonic_norm<Scalar>(ell, am) * plm * psi;
}

inline double ylm_eval(HarmonicIndex idx, SphericalAngle angle) {
  return ylm<double>(idx.ell, idx.m, angle.theta, angle.phi);
}

/// Writes f_d(theta, phi) into `out` (length (d+1)^2).
///
/// All P_l^m for l <= d are produced column by column (fixed m, rising l) so
/// the whole vector costs O(d^2).
template <typename Scalar, typename Derived>
void regression_vector_into(int d, Scalar theta, Scalar phi,
                            Eigen::MatrixBase<Derived> const& out_) {
  using std::cos;
  using std::sin;
  using std::sqrt;
  auto& out = const_cast<Eigen::MatrixBase<Derived>&>(out_);
  if (d < 0) throw std::domain_error("regression_vector: negative degree");
  Scalar x, s;
  detail::polar_cos_sin(theta, x, s);
  const Scalar root2 = sqrt(Scalar(2));

  Scalar pmm(1);
  for (int m = 0; m <= d; ++m) {
    if (m > 0) pmm *= -Scalar(2 * m - 1) * s;
    const Scalar c = m == 0 ? Scalar(1) : root2 * cos(Scalar(m) * phi);
    const Scalar sn = m == 0 ? Scalar(0) : root2 * sin(Scalar(m) * phi);
    Scalar p0(0), p1 = pmm;
    for (int l = m; l <= d; ++l) {
      if (l == m + 1) {
        p0 = p1;
        p1 = x * Scalar(2 * m + 1) * pmm;
      } else if (l > m + 1) {
        Scalar p2 = (Scalar(2 * l - 1) * x * p1 - Scalar(l + m - 1) * p0) / Scalar(l - m);
        p0 = p1;
        p1 = p2;
      }
      const Scalar base = harmonic_norm<Scalar>(l, m) * p1;
      out(harmonic_offset(l, m)) = base * c;
      if (m > 0) out(harmonic_offset(l, -m)) = base * sn;
    }
  }
}

template <typename Scalar = double>
VectorX<Scalar> regression_vector(int d, Scalar theta, Scalar phi) {
  VectorX<Scalar> f(harmonic_count(d));
  regression_vector_into(d, theta, phi, f);
  return f;
}

inline Eigen::VectorXd regression_vector(int d, SphericalAngle angle) {
  return regression_vector<double>(d, angle.theta, angle.phi);
}

}  // namespace sphdesign
