#pragma once

// Least-squares fitting of spherical harmonic coefficients to sampled radii,
// and a Monte Carlo check of the covariance law cov(c_hat) ~ (sigma^2/n) M^-1.

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "sphdesign/design.hpp"
#include "sphdesign/harmonics.hpp"

namespace sphdesign {

struct RadiusSample {
  SphericalAngle angle;
  double radius = 0.0;
};

/// Coefficients c_l^m ordered as in f_d.
struct CoefficientVector {
  int degree = 0;
  Eigen::VectorXd c;
};

/// Least squares is underdetermined: `deficiency` columns are unidentified.
class RankDeficiencyError : public std::runtime_error {
 public:
  RankDeficiencyError(const std::string& what, int deficiency)
      : std::runtime_error(what), deficiency_(deficiency) {}
  int deficiency() const { return deficiency_; }

 private:
  int deficiency_;
};

/// Row i is f_d(angle_i).
Eigen::MatrixXd design_matrix(const std::vector<SphericalAngle>& angles, int d);

/// Column-pivoted QR least squares; rank threshold 1e-10 relative to the
/// largest pivot.
CoefficientVector fit(const std::vector<RadiusSample>& samples, int d);

/// c^T f_d(angle).
double synthesize_radius(const CoefficientVector& coefficients, SphericalAngle angle);

/// Largest-remainder apportionment of n observations to the weights; ties go
/// to the lowest index.
std::vector<int> apportion(const Eigen::VectorXd& weights, int n);

/// Empirical covariance (over `reps` replications) of the least-squares
/// estimate when n observations are allocated to the design by apportion()
/// and each radius carries independent N(0, sigma^2) noise. Replication k
/// draws from std::mt19937_64 seeded with seed_seq{seed, k}.
Eigen::MatrixXd monte_carlo_covariance(const SphereDesign& design, int d, double sigma, int n,
                                       int reps, std::uint64_t seed);

}  // namespace sphdesign
