#include "sphdesign/design.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sphdesign {
namespace {

constexpr double kPi = std::numbers::pi;

bool near_north(double theta) { return theta < kPoleEpsilon; }
bool near_south(double theta) { return theta > kPi - kPoleEpsilon; }

}  // namespace

SphereDesign::SphereDesign(std::vector<SupportPoint> support) : support_(std::move(support)) {
  if (support_.empty()) throw std::invalid_argument("design: empty support");
  double total = 0.0;
  for (auto& p : support_) {
    if (!(p.theta >= 0.0 && p.theta <= kPi)) {
      throw std::invalid_argument("design: polar angle outside [0, pi]");
    }
    p.phi = normalize_azimuth(p.phi);
    if (!(p.weight > 0.0) || !std::isfinite(p.weight)) {
      throw std::invalid_argument("design: weights must be positive");
    }
    total += p.weight;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("design: weights do not sum to 1");
  }
}

bool SphereDesign::has_coincident_points() const {
  auto canonical = [](SupportPoint p) {
    if (near_north(p.theta)) return SupportPoint{0.0, 0.0, p.weight};
    if (near_south(p.theta)) return SupportPoint{kPi, 0.0, p.weight};
    return p;
  };
  for (std::size_t i = 0; i < support_.size(); ++i) {
    const SupportPoint a = canonical(support_[i]);
    for (std::size_t j = i + 1; j < support_.size(); ++j) {
      const SupportPoint b = canonical(support_[j]);
      double dphi = std::abs(a.phi - b.phi);
      dphi = std::min(dphi, 2.0 * kPi - dphi);
      if (std::abs(a.theta - b.theta) < kPointTolerance && dphi < kPointTolerance) return true;
    }
  }
  return false;
}

MarginalDesign polar_from_rule(const QuadratureRule& rule) {
  const int r = rule.size();
  MarginalDesign mu{Eigen::VectorXd(r), Eigen::VectorXd(r)};
  for (int i = 0; i < r; ++i) {
    // arccos reverses the order of the nodes.
    const int src = r - 1 - i;
    mu.points[i] = std::acos(std::clamp(rule.nodes[src], -1.0, 1.0));
    mu.weights[i] = rule.weights[src];
  }
  return mu;
}

MarginalDesign azimuthal_design(double alpha, int t) {
  if (t < 1) throw std::domain_error("azimuthal_design: need t >= 1");
  const double lower = -(t + 1) * kPi / t;
  if (alpha < lower - 1e-12 || alpha > -kPi + 1e-12) {
    throw std::domain_error("azimuthal_design: phase outside [-(t+1)pi/t, -pi]");
  }
  MarginalDesign nu{Eigen::VectorXd(t), Eigen::VectorXd::Constant(t, 1.0 / t)};
  for (int j = 1; j <= t; ++j) nu.points[j - 1] = normalize_azimuth(alpha + 2.0 * kPi * j / t);
  return nu;
}

SphereDesign product_design(const MarginalDesign& polar, const MarginalDesign& azimuthal) {
  std::vector<SupportPoint> support;
  support.reserve(polar.size() * azimuthal.size());
  for (int i = 0; i < polar.size(); ++i) {
    for (int j = 0; j < azimuthal.size(); ++j) {
      support.push_back({polar.points[i], azimuthal.points[j], polar.weights[i] * azimuthal.weights[j]});
    }
  }
  return SphereDesign(std::move(support));
}

SphereDesign merge_poles(const SphereDesign& design) {
  std::vector<SupportPoint> support;
  double north = 0.0, south = 0.0;
  for (const auto& p : design.support()) {
    if (near_north(p.theta)) {
      north += p.weight;
    } else if (near_south(p.theta)) {
      south += p.weight;
    } else {
      support.push_back(p);
    }
  }
  if (north > 0.0) support.push_back({0.0, 0.0, north});
  if (south > 0.0) support.push_back({kPi, 0.0, south});
  return SphereDesign(std::move(support));
}

SphereDesign grid_design(int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw std::domain_error("grid_design: need n1, n2 >= 1");
  std::vector<SupportPoint> support;
  const double w = 1.0 / (static_cast<double>(n1) * n2);
  for (int i = 1; i <= n1; ++i) {
    for (int j = 1; j <= n2; ++j) {
      support.push_back({i * kPi / (n1 + 1), 2.0 * j * kPi / n2 - kPi, w});
    }
  }
  return SphereDesign(std::move(support));
}

SphereDesign equal_height_design(int n1, int n2) {
  if (n1 < 1 || n2 < 1) throw std::domain_error("equal_height_design: need n1, n2 >= 1");
  std::vector<SupportPoint> support;
  const double w = 1.0 / (static_cast<double>(n1) * n2);
  for (int i = 1; i <= n1; ++i) {
    const double theta = std::acos(1.0 - 2.0 * i / (n1 + 1));
    for (int j = 1; j <= n2; ++j) support.push_back({theta, 2.0 * j * kPi / n2 - kPi, w});
  }
  return SphereDesign(std::move(support));
}

SphereDesign banded_design(const QuadratureRule& rule, const std::vector<int>& band_sizes) {
  if (static_cast<int>(band_sizes.size()) != rule.size()) {
    throw std::invalid_argument("banded_design: one band size per node required");
  }
  if (rule.size() == 0) throw std::invalid_argument("banded_design: empty rule");
  if (rule.weights.maxCoeff() - rule.weights.minCoeff() > 1e-12) {
    throw std::invalid_argument("banded_design: rule must have equal weights");
  }
  long total = 0;
  for (int t : band_sizes) {
    if (t < 1) throw std::invalid_argument("banded_design: band sizes must be >= 1");
    total += t;
  }
  std::vector<SupportPoint> support;
  support.reserve(total);
  for (int i = 0; i < rule.size(); ++i) {
    const double theta = std::acos(std::clamp(rule.nodes[i], -1.0, 1.0));
    const int t = band_sizes[i];
    for (int j = 1; j <= t; ++j) {
      support.push_back({theta, kPi * (2.0 * j - t) / t, 1.0 / static_cast<double>(total)});
    }
  }
  return SphereDesign(std::move(support));
}

Eigen::MatrixXd support_regression_matrix(const SphereDesign& design, int d) {
  Eigen::MatrixXd rows(design.size(), harmonic_count(d));
  for (int k = 0; k < design.size(); ++k) {
    const auto& p = design.support()[k];
    regression_vector_into(d, p.theta, p.phi, rows.row(k).transpose());
  }
  return rows;
}

InformationMatrix information_matrix(const SphereDesign& design, int d) {
  if (d < 0) throw std::domain_error("information_matrix: negative degree");
  const Eigen::MatrixXd rows = support_regression_matrix(design, d);
  Eigen::VectorXd w(design.size());
  for (int k = 0; k < design.size(); ++k) w[k] = design.support()[k].weight;
  Eigen::MatrixXd m = rows.transpose() * w.asDiagonal() * rows;
  m = 0.5 * (m + m.transpose()).eval();
  return {d, std::move(m)};
}

}  // namespace sphdesign
