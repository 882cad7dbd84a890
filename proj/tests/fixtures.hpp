#pragma once

// Design families shared by several test binaries.

#include <numbers>
#include <string>
#include <vector>

#include "sphdesign/design.hpp"
#include "sphdesign/quadrature.hpp"

namespace fixtures {

struct NamedRule {
  std::string name;
  sphdesign::QuadratureRule rule;
};

/// Every rule of degree >= 2d with at most 2d nodes from the four orthogonal
/// families, plus the equal-weight rule of degree 2d.
inline std::vector<NamedRule> degree_2d_rules(int d) {
  using namespace sphdesign;
  std::vector<NamedRule> rules;
  for (int r = d + 1; r <= 2 * d; ++r) {
    const std::string suffix = " r=" + std::to_string(r);
    rules.push_back({"gauss" + suffix, gauss_rule(r)});
    rules.push_back({"radau+" + suffix, radau_rule(r, FixedEnd::PlusOne)});
    rules.push_back({"radau-" + suffix, radau_rule(r, FixedEnd::MinusOne)});
    if (2 * r - 3 >= 2 * d) rules.push_back({"lobatto" + suffix, lobatto_rule(r)});
  }
  rules.push_back({"equal-weight", equal_weight_rule(d)});
  return rules;
}

struct NamedDesign {
  std::string name;
  sphdesign::SphereDesign design;
};

/// Product designs of every degree-2d rule with nu(-pi, t).
inline std::vector<NamedDesign> optimal_designs(int d, int t) {
  using namespace sphdesign;
  std::vector<NamedDesign> designs;
  for (const auto& [name, rule] : degree_2d_rules(d)) {
    designs.push_back({name + " t=" + std::to_string(t),
                       product_design(polar_from_rule(rule), azimuthal_design(-std::numbers::pi, t))});
  }
  return designs;
}

}  // namespace fixtures
