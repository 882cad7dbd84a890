#include "sphdesign/regression.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace sphdesign {
namespace {

Eigen::ColPivHouseholderQR<Eigen::MatrixXd> checked_qr(const Eigen::MatrixXd& b) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(b.rows(), b.cols());
  qr.setThreshold(1e-10);
  qr.compute(b);
  const int deficiency = static_cast<int>(b.cols() - qr.rank());
  if (deficiency > 0) {
    throw RankDeficiencyError("least squares: design matrix is rank deficient by " +
                                  std::to_string(deficiency),
                              deficiency);
  }
  return qr;
}

}  // namespace

Eigen::MatrixXd design_matrix(const std::vector<SphericalAngle>& angles, int d) {
  if (angles.empty()) throw std::invalid_argument("design_matrix: no angles");
  Eigen::MatrixXd b(angles.size(), harmonic_count(d));
  for (std::size_t i = 0; i < angles.size(); ++i) {
    regression_vector_into(d, angles[i].theta, angles[i].phi, b.row(i).transpose());
  }
  return b;
}

CoefficientVector fit(const std::vector<RadiusSample>& samples, int d) {
  std::vector<SphericalAngle> angles;
  Eigen::VectorXd r(samples.size());
  angles.reserve(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].radius)) throw std::invalid_argument("fit: non-finite radius");
    angles.push_back(samples[i].angle);
    r[i] = samples[i].radius;
  }
  const Eigen::MatrixXd b = design_matrix(angles, d);
  if (b.rows() < b.cols()) {
    throw RankDeficiencyError("least squares: fewer samples than coefficients",
                              static_cast<int>(b.cols() - b.rows()));
  }
  return {d, checked_qr(b).solve(r)};
}

double synthesize_radius(const CoefficientVector& coefficients, SphericalAngle angle) {
  return coefficients.c.dot(regression_vector(coefficients.degree, angle));
}

std::vector<int> apportion(const Eigen::VectorXd& weights, int n) {
  const Eigen::Index k = weights.size();
  std::vector<int> counts(k);
  std::vector<double> remainder(k);
  int assigned = 0;
  for (Eigen::Index i = 0; i < k; ++i) {
    const double quota = weights[i] * n;
    // Guard quotas like 9.999999999 that should be integers.
    const double snapped = std::abs(quota - std::round(quota)) < 1e-9 ? std::round(quota) : quota;
    counts[i] = static_cast<int>(std::floor(snapped));
    remainder[i] = snapped - counts[i];
    assigned += counts[i];
  }
  std::vector<Eigen::Index> order(k);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index a, Eigen::Index b) { return remainder[a] > remainder[b]; });
  for (Eigen::Index i = 0; assigned < n && i < k; ++i, ++assigned) ++counts[order[i]];
  return counts;
}

Eigen::MatrixXd monte_carlo_covariance(const SphereDesign& design, int d, double sigma, int n,
                                       int reps, std::uint64_t seed) {
  if (reps < 2) throw std::invalid_argument("monte_carlo_covariance: need reps >= 2");
  if (!(sigma >= 0.0)) throw std::invalid_argument("monte_carlo_covariance: sigma must be >= 0");
  Eigen::VectorXd weights(design.size());
  for (int i = 0; i < design.size(); ++i) weights[i] = design.support()[i].weight;
  const std::vector<int> counts = apportion(weights, n);

  std::vector<SphericalAngle> angles;
  angles.reserve(n);
  for (int i = 0; i < design.size(); ++i) {
    const auto& p = design.support()[i];
    for (int k = 0; k < counts[i]; ++k) angles.push_back({p.theta, p.phi});
  }
  const Eigen::MatrixXd b = design_matrix(angles, d);
  if (b.rows() < b.cols()) {
    throw RankDeficiencyError("monte carlo: fewer observations than coefficients",
                              static_cast<int>(b.cols() - b.rows()));
  }
  const auto qr = checked_qr(b);

  // The mean response does not affect the covariance; use c = e_1.
  const Eigen::VectorXd mean_response = b.col(0);
  const int p = harmonic_count(d);
  Eigen::MatrixXd estimates(reps, p);
  Eigen::VectorXd r(b.rows());
  for (int rep = 0; rep < reps; ++rep) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(rep)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = mean_response[i] + sigma * noise(rng);
    estimates.row(rep) = qr.solve(r).transpose();
  }
  const Eigen::RowVectorXd mean = estimates.colwise().mean();
  const Eigen::MatrixXd centred = estimates.rowwise() - mean;
  return centred.transpose() * centred / static_cast<double>(reps - 1);
}

}  // namespace sphdesign
