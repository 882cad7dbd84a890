#pragma once

// Optimality criteria for designs in the spherical harmonic model: Kiefer's
// Phi_p family for selected harmonic levels, the Psi_{p,r} family on the r
// smallest eigenvalues of M, efficiencies relative to the uniform measure on
// the sphere (M = I), the equivalence-theorem check and the polar support
// bound for designs with M = I.

#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sphdesign/design.hpp"

namespace sphdesign {

/// p = -infinity (E-type criteria).
inline constexpr double kMinusInfinity = -std::numeric_limits<double>::infinity();
/// Eigenvalues below this are treated as zero for rank and pseudo-inverses.
inline constexpr double kRankThreshold = 1e-10;

/// Raised when K^T c is not estimable under the design (range(K) is not
/// contained in range(M)).
class EstimabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A strictly increasing subset of the levels 0..d.
struct LevelSelector {
  int d = 0;
  std::vector<int> levels;

  static LevelSelector full(int d);
  static LevelSelector of(int d, std::vector<int> levels);

  /// s = sum over selected levels of (2k + 1).
  int size() const;
};

/// 0/1 matrix K of shape (d+1)^2 x s with K^T K = I_s.
Eigen::MatrixXd selector_matrix(const LevelSelector& sel);

/// max |M_ij - I_ij|.
double identity_deviation(const Eigen::MatrixXd& m);

/// Phi_p(M) = (tr C^p)^{1/p} with C = (K^T M^- K)^{-1}; p = 0 gives det C and
/// p = -inf gives lambda_min(C). Throws EstimabilityError.
double phi_p(const InformationMatrix& m, const LevelSelector& sel, double p);

/// Psi_{p,r}(M) = (sum of the p-th powers of the r smallest eigenvalues)^{1/p};
/// p = 0 gives their product and p = -inf the smallest eigenvalue.
double psi_pr(const InformationMatrix& m, double p, int r);

struct CriterionSpec {
  enum class Kind { PhiP, PsiPR };
  Kind kind = Kind::PhiP;
  double p = 0.0;
  int r = 1;
  /// Levels for PhiP; empty means all levels 0..d.
  std::vector<int> levels;

  static CriterionSpec d_optimality() { return {Kind::PhiP, 0.0, 1, {}}; }
  static CriterionSpec a_optimality() { return {Kind::PhiP, -1.0, 1, {}}; }
  static CriterionSpec e_optimality() { return {Kind::PhiP, kMinusInfinity, 1, {}}; }
  static CriterionSpec psi(double p, int r) { return {Kind::PsiPR, p, r, {}}; }
  static CriterionSpec phi(double p, std::vector<int> levels) {
    return {Kind::PhiP, p, 1, std::move(levels)};
  }

  /// Parses "D", "A", "E" or "psi:<p>:<r>" (p may be "-inf").
  static CriterionSpec parse(const std::string& text);
  /// Column label, e.g. "eff_D" or "eff_psi(-1,2)".
  std::string label() const;
};

/// Criterion value relative to its value at M = I (the optimum):
///   Phi_p:  (tr C^p / s)^{1/p},  det(C)^{1/s} at p = 0,  lambda_min(C) at -inf
///   Psi:    Psi_{p,r}(M) / r^{1/p},  the plain product at p = 0
double efficiency(const InformationMatrix& m, const CriterionSpec& criterion);
double efficiency(const SphereDesign& design, int d, const CriterionSpec& criterion);

/// Precomputed regression vectors on a theta x phi grid. Theta runs over
/// i pi / (n_theta - 1) (poles included), phi over -pi + 2 pi (j + 1) / n_phi.
class EquivalenceGrid {
 public:
  EquivalenceGrid(int d, int n_theta = 200, int n_phi = 400);

  int degree() const { return d_; }
  const Eigen::MatrixXd& regressors() const { return f_; }
  SphericalAngle angle(Eigen::Index row) const;

 private:
  int d_;
  int n_theta_, n_phi_;
  Eigen::MatrixXd f_;
};

struct EquivalenceResult {
  bool holds = false;
  double max_lhs = 0.0;
  double bound = 0.0;
  SphericalAngle argmax;
};

/// Checks f^T M^- K C^{p+1} K^T M^- f <= tr C^p over the grid (slack 1e-8),
/// C = (K^T M^- K)^{-1}. Needs a finite p < 1. For M = I this is
/// sum over selected levels of (Y_k^m)^2 <= s.
EquivalenceResult equivalence_check(const SphereDesign& design, const LevelSelector& sel, double p,
                                    const EquivalenceGrid& grid);
EquivalenceResult equivalence_check(const SphereDesign& design, int d, const LevelSelector& sel,
                                    double p, int n_theta = 200, int n_phi = 400);

/// z* = arccos |x_1*|, x_1* the smallest zero of P_{d+1}. No design supported
/// in [z, pi - z] x (-pi, pi] with z > z* has M = I.
double support_bound(int d);

struct BandSearchResult {
  double best_deviation = std::numeric_limits<double>::infinity();
  long candidates = 0;
};

/// Randomized search (with local refinement of the best candidates) for a
/// design on [z* + margin, pi - z* - margin] x (-pi, pi] minimizing
/// identity_deviation(M). Evaluates at least `candidates` designs.
BandSearchResult search_inside_support_bound(int d, double margin, long candidates,
                                             std::uint64_t seed);

}  // namespace sphdesign
