#pragma once

// Designs on the sphere: weighted support points (theta, phi) and their
// information matrices in the spherical harmonic model of degree d.

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "sphdesign/harmonics.hpp"
#include "sphdesign/quadrature.hpp"

namespace sphdesign {

/// Points closer than this (radians) to a pole are merged onto it.
inline constexpr double kPoleEpsilon = 1e-12;
/// Coordinate tolerance for treating two support points as the same point.
inline constexpr double kPointTolerance = 1e-10;

/// Weighted points on an interval: a polar factor (theta) or an azimuthal
/// factor (phi).
struct MarginalDesign {
  Eigen::VectorXd points;
  Eigen::VectorXd weights;

  int size() const { return static_cast<int>(points.size()); }
};

struct SupportPoint {
  double theta = 0.0;
  double phi = 0.0;
  double weight = 0.0;
};

/// A probability measure with finite support on [0, pi] x (-pi, pi].
class SphereDesign {
 public:
  SphereDesign() = default;
  /// Validates angles and weights (positive, summing to 1 within 1e-12) and
  /// wraps azimuths into (-pi, pi].
  explicit SphereDesign(std::vector<SupportPoint> support);

  const std::vector<SupportPoint>& support() const { return support_; }
  int size() const { return static_cast<int>(support_.size()); }

  /// True if two support points coincide on the sphere (poles compared
  /// without regard to azimuth).
  bool has_coincident_points() const;

 private:
  std::vector<SupportPoint> support_;
};

/// Square symmetric (d+1)^2 matrix together with its model degree.
struct InformationMatrix {
  int degree = 0;
  Eigen::MatrixXd entries;
};

/// theta_i = arccos(x_i); returned in increasing theta.
MarginalDesign polar_from_rule(const QuadratureRule& rule);

/// t equally spaced azimuths alpha + 2 pi j / t, j = 1..t, weight 1/t each.
/// alpha must lie in [-(t+1) pi / t, -pi].
MarginalDesign azimuthal_design(double alpha, int t);

SphereDesign product_design(const MarginalDesign& polar, const MarginalDesign& azimuthal);

/// Collapses all points within kPoleEpsilon of a pole into (0, 0) or (pi, 0).
/// The information matrix is unchanged.
SphereDesign merge_poles(const SphereDesign& design);

/// Uniform design on theta_i = i pi / (n1 + 1), phi_j = 2 j pi / n2 - pi.
SphereDesign grid_design(int n1, int n2);

/// Uniform design on the circles cos(theta_i) = 1 - 2i / (n1 + 1).
SphereDesign equal_height_design(int n1, int n2);

/// One observation per point: node i of an equal-weight rule carries
/// band_sizes[i] azimuths phi = pi (2j - t_i) / t_i, j = 1..t_i; every point
/// has weight 1 / sum(t_i). Bands follow the rule's node order.
SphereDesign banded_design(const QuadratureRule& rule, const std::vector<int>& band_sizes);

/// M = sum_k w_k f_d(theta_k, phi_k) f_d(theta_k, phi_k)^T.
InformationMatrix information_matrix(const SphereDesign& design, int d);

/// Row k holds f_d at support point k.
Eigen::MatrixXd support_regression_matrix(const SphereDesign& design, int d);

}  // namespace sphdesign
