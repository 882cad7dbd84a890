#include "sphdesign/tables.hpp"

namespace sphdesign {

SphereDesign builtin_design(BuiltinDesign kind, int n1, int n2) {
  return kind == BuiltinDesign::Grid ? grid_design(n1, n2) : equal_height_design(n1, n2);
}

SphereDesign citrus_banded_design() {
  const QuadratureRule rule = equal_weight_rule(7);
  std::vector<int> bands(rule.size(), 16);
  for (int i = 0; i < 8; ++i) bands[i] = 15;
  return banded_design(rule, bands);
}

EfficiencyTable comparison_table(const std::vector<std::pair<int, std::vector<int>>>& rows) {
  const std::vector<CriterionSpec> criteria = {
      CriterionSpec::d_optimality(), CriterionSpec::e_optimality(), CriterionSpec::a_optimality(),
      CriterionSpec::psi(-1.0, 2), CriterionSpec::psi(-1.0, 3)};
  EfficiencyTable table;
  table.key_columns = {"d", "n1"};
  for (const char* design : {"grid", "equal_height"}) {
    for (const auto& c : criteria) table.value_columns.push_back(std::string(design) + ":" + c.label());
  }
  for (const auto& [d, n1s] : rows) {
    for (int n1 : n1s) {
      EfficiencyTable::Row row{{std::to_string(d), std::to_string(n1)}, {}};
      for (BuiltinDesign kind : {BuiltinDesign::Grid, BuiltinDesign::EqualHeight}) {
        const InformationMatrix m = information_matrix(builtin_design(kind, n1, 2 * d + 1), d);
        for (const auto& c : criteria) row.values.push_back(efficiency(m, c));
      }
      table.rows.push_back(std::move(row));
    }
  }
  return table;
}

EfficiencyTable table2() { return comparison_table({{1, {3, 4, 5, 6, 7}}, {2, {4, 5, 6, 7, 8}}}); }

EfficiencyTable table3() { return comparison_table({{3, {5, 6, 7, 8, 9}}, {4, {6, 7, 8, 9, 10}}}); }

EfficiencyTable table4() {
  std::vector<CriterionSpec> criteria;
  for (int r = 1; r <= 10; ++r) criteria.push_back(CriterionSpec::psi(-1.0, r));
  criteria.push_back(CriterionSpec::a_optimality());
  criteria.push_back(CriterionSpec::d_optimality());

  EfficiencyTable table;
  table.key_columns = {"design"};
  for (const auto& c : criteria) table.value_columns.push_back(c.label());
  const std::pair<const char*, SphereDesign> designs[] = {
      {"equal_height(10,36)", equal_height_design(10, 36)},
      {"banded(15x8,16x15)", citrus_banded_design()}};
  for (const auto& [name, design] : designs) {
    const InformationMatrix m = information_matrix(design, 7);
    EfficiencyTable::Row row{{name}, {}};
    for (const auto& c : criteria) row.values.push_back(efficiency(m, c));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace sphdesign
