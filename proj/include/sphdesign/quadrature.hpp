#pragma once

// Quadrature rules on [-1, 1] for the probability measure dx/2: weights sum
// to one, odd moments vanish and the even moment of order l is 1/(l + 1).

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace sphdesign {

struct QuadratureRule {
  Eigen::VectorXd nodes;    // strictly increasing, in [-1, 1]
  Eigen::VectorXd weights;  // positive, summing to 1
  int degree = 0;           // declared degree of exactness

  int size() const { return static_cast<int>(nodes.size()); }
};

/// Thrown by equal_weight_rule when no start of the multistart search yields a
/// verified rule. Carries the best residual seen.
class QuadratureSearchError : public std::runtime_error {
 public:
  QuadratureSearchError(const std::string& what, double best_residual)
      : std::runtime_error(what), best_residual_(best_residual) {}
  double best_residual() const { return best_residual_; }

 private:
  double best_residual_;
};

struct DegreeCheck {
  bool exact = false;
  double max_residual = 0.0;
};

enum class FixedEnd { PlusOne, MinusOne };

/// (1/2) * integral of x^l over [-1, 1].
double reference_moment(int l);

/// Interpolatory weights w_j = (1/2) * integral of the j-th Lagrange basis
/// polynomial. May be negative for poor node sets; positivity is the caller's
/// business. Throws std::invalid_argument on duplicate nodes.
Eigen::VectorXd weights_from_nodes(const Eigen::VectorXd& nodes);

/// r-point Gauss-Legendre rule, degree 2r - 1.
QuadratureRule gauss_rule(int r);

/// r-point Gauss-Radau rule with one node pinned at +1 or -1, degree 2r - 2.
QuadratureRule radau_rule(int r, FixedEnd fixed_end);

/// r-point Gauss-Lobatto rule, degree 2r - 3.
QuadratureRule lobatto_rule(int r);

/// Node count of the equal-weight rule of degree 2d, 1 <= d <= 7.
int equal_weight_node_count(int d);

/// Equal-weight rule of degree 2d for 1 <= d <= 7.
///
/// Nodes are symmetric about 0 (with a centre node from d = 4 on). The even
/// moment equations are solved by damped minimum-norm Newton from a set of
/// starts; the first start whose result is verified exact wins.
QuadratureRule equal_weight_rule(int d);

/// Checks the moment equations for l = 0..z at 1e-10.
DegreeCheck verify_degree(const QuadratureRule& rule, int z);

/// Structural checks (increasing nodes in [-1, 1], positive weights summing
/// to 1, declared degree verified). Throws std::invalid_argument.
void validate(const QuadratureRule& rule);

}  // namespace sphdesign
