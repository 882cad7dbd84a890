#pragma once

// Efficiency comparisons of the grid and equal-height designs against the
// optimal (M = I) designs, laid out as the published comparison tables.

#include <string>
#include <vector>

#include "sphdesign/criteria.hpp"
#include "sphdesign/io.hpp"

namespace sphdesign {

/// Built-in comparison designs, both with n2 azimuths per circle.
enum class BuiltinDesign { Grid, EqualHeight };

SphereDesign builtin_design(BuiltinDesign kind, int n1, int n2);

/// Uniform exact design with 360 points for d = 7: the degree-14 equal-weight
/// rule with 15 azimuths on its first 8 nodes and 16 on the remaining 15.
SphereDesign citrus_banded_design();

/// D, E, A, psi(-1,2), psi(-1,3) for both built-in designs, rows over the
/// given (d, n1) pairs; n2 = 2d + 1.
EfficiencyTable comparison_table(const std::vector<std::pair<int, std::vector<int>>>& rows);

EfficiencyTable table2();  // d = 1 (n1 = 3..7), d = 2 (n1 = 4..8)
EfficiencyTable table3();  // d = 3 (n1 = 5..9), d = 4 (n1 = 6..10)
EfficiencyTable table4();  // d = 7: equal-height (10, 36) and the banded design

}  // namespace sphdesign
