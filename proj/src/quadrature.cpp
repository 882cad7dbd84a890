#include "sphdesign/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>

#include "sphdesign/orthopoly.hpp"

namespace sphdesign {
namespace {

constexpr double kMomentTolerance = 1e-10;

// Gauss nodes and weights straight from the Legendre roots, weights from the
// closed form 1 / ((1 - x^2) P_r'(x)^2) (already normalized to dx/2).
QuadratureRule gauss_closed_form(int r) {
  QuadratureRule rule;
  rule.nodes = poly_roots(PolySpec::legendre(r));
  rule.weights.resize(r);
  for (int i = 0; i < r; ++i) {
    const double x = rule.nodes[i];
    const double dp = detail::jacobi_general_derivative(r, 0.0, 0.0, x);
    rule.weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  rule.degree = 2 * r - 1;
  return rule;
}

QuadratureRule interpolatory_rule(Eigen::VectorXd nodes, int degree) {
  std::sort(nodes.begin(), nodes.end());
  QuadratureRule rule;
  rule.weights = weights_from_nodes(nodes);
  rule.nodes = std::move(nodes);
  rule.degree = degree;
  return rule;
}

// Table of published equal-weight nodes (positive half, 3 decimals). Used as
// the first Newton start and as the node-count schedule.
struct EqualWeightSeed {
  bool centre;
  std::vector<double> half;
};

const EqualWeightSeed& equal_weight_seed(int d) {
  static const std::array<EqualWeightSeed, 7> seeds = {{
      {false, {0.577}},
      {false, {0.188, 0.795}},
      {false, {0.267, 0.423, 0.866}},
      {true, {0.168, 0.529, 0.601, 0.912}},
      {true, {0.223, 0.247, 0.443, 0.671, 0.724, 0.939}},
      {true, {0.008, 0.282, 0.358, 0.458, 0.566, 0.760, 0.778, 0.954}},
      {true, {0.174, 0.177, 0.186, 0.328, 0.502, 0.533, 0.542, 0.712, 0.797,
              0.852, 0.965}},
  }};
  if (d < 1 || d > 7) {
    throw std::domain_error("equal_weight_rule: supported for 1 <= d <= 7");
  }
  return seeds[d - 1];
}

// Even-moment residuals (2/n) sum y_i^{2j} - 1/(2j + 1), j = 1..d.
Eigen::VectorXd even_moment_residual(const Eigen::VectorXd& y, int n, int d) {
  Eigen::VectorXd f(d);
  for (int j = 1; j <= d; ++j) {
    double sum = 0.0;
    for (double v : y) sum += std::pow(v, 2 * j);
    f[j - 1] = 2.0 / n * sum - 1.0 / (2 * j + 1);
  }
  return f;
}

Eigen::MatrixXd even_moment_jacobian(const Eigen::VectorXd& y, int n, int d) {
  Eigen::MatrixXd jac(d, y.size());
  for (int j = 1; j <= d; ++j) {
    for (int i = 0; i < y.size(); ++i) {
      jac(j - 1, i) = 2.0 / n * 2 * j * std::pow(y[i], 2 * j - 1);
    }
  }
  return jac;
}

// Damped minimum-norm Newton. Returns the final iterate.
Eigen::VectorXd solve_even_moments(Eigen::VectorXd y, int n, int d) {
  double norm = even_moment_residual(y, n, d).norm();
  for (int iter = 0; iter < 200 && norm > 1e-15; ++iter) {
    const Eigen::VectorXd f = even_moment_residual(y, n, d);
    const Eigen::MatrixXd jac = even_moment_jacobian(y, n, d);
    const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-f);
    double damping = 1.0;
    bool improved = false;
    for (int halving = 0; halving < 30; ++halving) {
      const Eigen::VectorXd trial = y + damping * step;
      const double trial_norm = even_moment_residual(trial, n, d).norm();
      if (trial_norm < norm) {
        y = trial;
        norm = trial_norm;
        improved = true;
        break;
      }
      damping *= 0.5;
    }
    if (!improved) break;
  }
  return y;
}

}  // namespace

double reference_moment(int l) {
  if (l < 0) throw std::domain_error("reference_moment: negative order");
  return l % 2 == 0 ? 1.0 / (l + 1) : 0.0;
}

Eigen::VectorXd weights_from_nodes(const Eigen::VectorXd& nodes) {
  const int n = static_cast<int>(nodes.size());
  if (n == 0) throw std::invalid_argument("weights_from_nodes: no nodes");
  for (int i = 0; i < n; ++i) {
    if (!(std::abs(nodes[i]) <= 1.0 + kEndpointSnap)) {
      throw std::invalid_argument("weights_from_nodes: node outside [-1, 1]");
    }
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(nodes[i] - nodes[j]) < 1e-14) {
        throw std::invalid_argument("weights_from_nodes: duplicate node");
      }
    }
  }
  // Lagrange basis polynomials have degree n - 1; a Gauss rule with
  // n/2 + 1 points integrates them exactly.
  const QuadratureRule reference = gauss_closed_form(n / 2 + 1);
  Eigen::VectorXd weights = Eigen::VectorXd::Zero(n);
  for (int k = 0; k < reference.size(); ++k) {
    const double x = reference.nodes[k];
    for (int j = 0; j < n; ++j) {
      double basis = 1.0;
      for (int i = 0; i < n; ++i) {
        if (i != j) basis *= (x - nodes[i]) / (nodes[j] - nodes[i]);
      }
      weights[j] += reference.weights[k] * basis;
    }
  }
  return weights;
}

QuadratureRule gauss_rule(int r) {
  if (r < 1) throw std::domain_error("gauss_rule: need at least one node");
  return gauss_closed_form(r);
}

QuadratureRule radau_rule(int r, FixedEnd fixed_end) {
  if (r < 2) throw std::domain_error("radau_rule: need at least two nodes");
  const bool plus = fixed_end == FixedEnd::PlusOne;
  // (1 - x) P_{r-1}^{(1,0)} for the +1 end, (1 + x) P_{r-1}^{(0,1)} for -1.
  const Eigen::VectorXd interior =
      poly_roots(PolySpec::jacobi(r - 1, plus ? 1 : 0, plus ? 0 : 1));
  Eigen::VectorXd nodes(r);
  if (plus) {
    nodes << interior, 1.0;
  } else {
    nodes << -1.0, interior;
  }
  return interpolatory_rule(std::move(nodes), 2 * r - 2);
}

QuadratureRule lobatto_rule(int r) {
  if (r < 3) throw std::domain_error("lobatto_rule: need at least three nodes");
  const Eigen::VectorXd interior = poly_roots(PolySpec::jacobi(r - 2, 1, 1));
  Eigen::VectorXd nodes(r);
  nodes << -1.0, interior, 1.0;
  QuadratureRule rule = interpolatory_rule(std::move(nodes), 2 * r - 3);
  // Symmetrize away the last-bit asymmetry of the root finder.
  for (int i = 0; i < r / 2; ++i) {
    const double x = 0.5 * (rule.nodes[r - 1 - i] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[r - 1 - i] + rule.weights[i]);
    rule.nodes[i] = -x;
    rule.nodes[r - 1 - i] = x;
    rule.weights[i] = rule.weights[r - 1 - i] = w;
  }
  if (r % 2 == 1) rule.nodes[r / 2] = 0.0;
  return rule;
}

int equal_weight_node_count(int d) {
  const EqualWeightSeed& seed = equal_weight_seed(d);
  return 2 * static_cast<int>(seed.half.size()) + (seed.centre ? 1 : 0);
}

QuadratureRule equal_weight_rule(int d) {
  const EqualWeightSeed& seed = equal_weight_seed(d);
  const int k = static_cast<int>(seed.half.size());
  const int n = equal_weight_node_count(d);

  std::mt19937_64 rng(0x5eed0000u + static_cast<unsigned>(d));
  std::normal_distribution<double> jitter(0.0, 0.01);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  constexpr int kStarts = 400;
  double best_residual = std::numeric_limits<double>::infinity();
  for (int start = 0; start < kStarts; ++start) {
    Eigen::VectorXd y(k);
    if (start == 0) {
      for (int i = 0; i < k; ++i) y[i] = seed.half[i];
    } else if (start < kStarts / 2) {
      for (int i = 0; i < k; ++i) y[i] = std::clamp(seed.half[i] + jitter(rng), 0.001, 0.999);
    } else {
      for (int i = 0; i < k; ++i) y[i] = (i + unit(rng)) / k;
    }
    y = solve_even_moments(std::move(y), n, d);
    std::sort(y.begin(), y.end());

    const double residual = even_moment_residual(y, n, d).cwiseAbs().maxCoeff();
    best_residual = std::min(best_residual, residual);
    bool admissible = y[0] > 1e-8 && y[k - 1] <= 1.0;
    for (int i = 1; i < k && admissible; ++i) admissible = y[i] - y[i - 1] > 1e-8;
    if (!admissible) continue;

    QuadratureRule rule;
    rule.nodes.resize(n);
    for (int i = 0; i < k; ++i) {
      rule.nodes[i] = -y[k - 1 - i];
      rule.nodes[n - 1 - i] = y[k - 1 - i];
    }
    if (seed.centre) rule.nodes[k] = 0.0;
    rule.weights = Eigen::VectorXd::Constant(n, 1.0 / n);
    rule.degree = 2 * d;
    if (verify_degree(rule, 2 * d).exact) return rule;
  }
  throw QuadratureSearchError(
      "equal_weight_rule: no start converged for d = " + std::to_string(d) +
          " (best moment residual " + std::to_string(best_residual) + ")",
      best_residual);
}

DegreeCheck verify_degree(const QuadratureRule& rule, int z) {
  DegreeCheck check;
  for (int l = 0; l <= z; ++l) {
    double sum = 0.0;
    for (int i = 0; i < rule.size(); ++i) sum += rule.weights[i] * std::pow(rule.nodes[i], l);
    check.max_residual = std::max(check.max_residual, std::abs(sum - reference_moment(l)));
  }
  check.exact = check.max_residual < kMomentTolerance;
  return check;
}

void validate(const QuadratureRule& rule) {
  if (rule.nodes.size() == 0 || rule.nodes.size() != rule.weights.size()) {
    throw std::invalid_argument("quadrature rule: node/weight size mismatch");
  }
  for (int i = 0; i < rule.size(); ++i) {
    if (!(std::abs(rule.nodes[i]) <= 1.0)) {
      throw std::invalid_argument("quadrature rule: node outside [-1, 1]");
    }
    if (i > 0 && !(rule.nodes[i] > rule.nodes[i - 1])) {
      throw std::invalid_argument("quadrature rule: nodes not strictly increasing");
    }
    if (!(rule.weights[i] > 0.0)) {
      throw std::invalid_argument("quadrature rule: non-positive weight");
    }
  }
  if (std::abs(rule.weights.sum() - 1.0) > 1e-12) {
    throw std::invalid_argument("quadrature rule: weights do not sum to 1");
  }
  if (!verify_degree(rule, rule.degree).exact) {
    throw std::invalid_argument("quadrature rule: declared degree not attained");
  }
}

}  // namespace sphdesign
