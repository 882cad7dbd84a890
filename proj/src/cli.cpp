#include "sphdesign/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "sphdesign/criteria.hpp"
#include "sphdesign/io.hpp"
#include "sphdesign/regression.hpp"
#include "sphdesign/tables.hpp"

namespace sphdesign {
namespace {

// Bad flag values or violated construction preconditions.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string fixed6(double v) {
  char buffer[32];
  std::snprintf(buffer, sizeof buffer, "%.6f", v);
  return buffer;
}

void require(bool ok, const std::string& inequality) {
  if (!ok) throw UsageError("precondition failed: " + inequality);
}

QuadratureRule make_rule(const std::string& name, int r, int d) {
  if (name == "gauss") return gauss_rule(r);
  if (name == "radau+") return radau_rule(r, FixedEnd::PlusOne);
  if (name == "radau-") return radau_rule(r, FixedEnd::MinusOne);
  if (name == "lobatto") return lobatto_rule(r);
  if (name == "equal-weight") return equal_weight_rule(d);
  throw UsageError("unknown rule: " + name);
}

std::vector<int> parse_bands(const std::string& text) {
  // "15x8,16x15": 8 bands of 15 azimuths, then 15 bands of 16.
  std::vector<int> bands;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto x = item.find('x');
    if (x == std::string::npos) throw UsageError("bad --banded item: " + item);
    try {
      const int t = std::stoi(item.substr(0, x));
      const int count = std::stoi(item.substr(x + 1));
      if (t < 1 || count < 1) throw UsageError("bad --banded item: " + item);
      bands.insert(bands.end(), count, t);
    } catch (const std::logic_error&) {
      throw UsageError("bad --banded item: " + item);
    }
  }
  return bands;
}

double parse_order(const std::string& text) {
  if (text == "-inf") return kMinusInfinity;
  try {
    return parse_angle(text);
  } catch (const ParseError&) {
    throw UsageError("bad order p: " + text);
  }
}

void print_rule_table(const QuadratureRule& rule, std::ostream& out) {
  out << "x\ttheta\tweight\n";
  for (int i = 0; i < rule.size(); ++i) {
    out << fixed6(rule.nodes[i]) << '\t' << fixed6(std::acos(std::clamp(rule.nodes[i], -1.0, 1.0)))
        << '\t' << fixed6(rule.weights[i]) << '\n';
  }
}

// Joins "--alpha -pi" into "--alpha=-pi" so values starting with '-' are not
// mistaken for flags.
std::vector<std::string> join_signed_values(std::vector<std::string> args) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if ((args[i] == "--alpha" || args[i] == "--p") && i + 1 < args.size()) {
      out.push_back(args[i] + "=" + args[i + 1]);
      ++i;
    } else {
      out.push_back(args[i]);
    }
  }
  return out;
}

struct BuildOptions {
  int d = -1;
  std::string rule;
  int r = 0;
  int t = 0;
  std::string alpha = "-pi";
  bool merge = false;
  std::string banded;
  std::string out_path;
};

int cmd_build(const BuildOptions& o, std::ostream& out) {
  require(o.d >= 1, "d >= 1");
  const int t = o.t > 0 ? o.t : 2 * o.d + 1;
  QuadratureRule rule;
  if (o.rule == "equal-weight") {
    require(o.d <= 7, "d <= 7 for equal-weight rules");
    rule = equal_weight_rule(o.d);
  } else {
    const bool lobatto = o.rule == "lobatto";
    const int r = o.r > 0 ? o.r : (lobatto ? o.d + 2 : o.d + 1);
    const int r_min = lobatto ? o.d + 2 : o.d + 1;
    require(r >= r_min, "r >= " + std::string(lobatto ? "d + 2" : "d + 1") + " (r = " +
                            std::to_string(r) + ", d = " + std::to_string(o.d) + ")");
    require(r <= 2 * o.d, "r <= 2d (r = " + std::to_string(r) + ", d = " + std::to_string(o.d) + ")");
    rule = make_rule(o.rule, r, o.d);
  }
  require(rule.degree >= 2 * o.d, "rule degree >= 2d");

  SphereDesign design;
  if (!o.banded.empty()) {
    require(o.rule == "equal-weight", "--banded requires --rule equal-weight");
    const std::vector<int> bands = parse_bands(o.banded);
    require(static_cast<int>(bands.size()) == rule.size(),
            "number of bands == node count (" + std::to_string(bands.size()) +
                " != " + std::to_string(rule.size()) + ")");
    for (int band : bands) {
      require(band >= 2 * o.d + 1, "band size t_i >= 2d + 1 (t_i = " + std::to_string(band) + ")");
    }
    design = banded_design(rule, bands);
  } else {
    require(t >= 2 * o.d + 1, "t >= 2d + 1 (t = " + std::to_string(t) + ", d = " +
                                  std::to_string(o.d) + ")");
    double alpha = 0.0;
    try {
      alpha = parse_angle(o.alpha);
      design = product_design(polar_from_rule(rule), azimuthal_design(alpha, t));
    } catch (const ParseError& e) {
      throw UsageError(e.what());
    } catch (const std::domain_error& e) {
      throw UsageError(e.what());
    }
  }
  if (o.merge) design = merge_poles(design);

  const std::string json = design_to_json(design, o.d);
  if (o.out_path.empty()) {
    out << json;
  } else {
    write_file(o.out_path, json);
    print_rule_table(rule, out);
    out << "points: " << design.size() << '\n';
  }
  return kExitOk;
}

LoadedDesign load_design(const std::string& path) { return design_from_json(read_file(path)); }

int resolve_degree(int flag, const LoadedDesign& loaded) {
  if (flag >= 0) return flag;
  if (loaded.degree) return *loaded.degree;
  throw UsageError("model degree unknown: pass --d or store \"d\" in the design file");
}

int cmd_verify(const std::string& path, int d_flag, const std::string& p_text, std::ostream& out) {
  const LoadedDesign loaded = load_design(path);
  const int d = resolve_degree(d_flag, loaded);
  const double p = parse_order(p_text);
  if (!std::isfinite(p) || !(p < 1.0)) throw UsageError("verify: p must be finite and < 1");
  const InformationMatrix m = information_matrix(loaded.design, d);
  const double deviation = identity_deviation(m.entries);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.entries, Eigen::EigenvaluesOnly);
  out << "design points: " << loaded.design.size() << ", d = " << d << '\n';
  out << "max |M - I|: " << format_real(deviation) << '\n';
  out << "eigenvalues: [" << fixed6(eig.eigenvalues().minCoeff()) << ", "
      << fixed6(eig.eigenvalues().maxCoeff()) << "]\n";
  bool holds = false;
  try {
    const EquivalenceResult eq = equivalence_check(loaded.design, d, LevelSelector::full(d), p);
    holds = eq.holds;
    out << "equivalence (p = " << p_text << ", all levels): " << (eq.holds ? "holds" : "violated")
        << ", max lhs " << fixed6(eq.max_lhs) << " vs bound " << fixed6(eq.bound) << " at theta "
        << fixed6(eq.argmax.theta) << ", phi " << fixed6(eq.argmax.phi) << '\n';
  } catch (const EstimabilityError& e) {
    out << "equivalence: not evaluable (" << e.what() << ")\n";
  }
  const bool pass = deviation < 1e-8 && holds;
  out << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitVerifyFailed;
}

struct EffOptions {
  std::string design_path;
  std::string builtin;
  int d = -1;
  int n1 = 0;
  int n2 = 0;
  std::string criteria = "D,E,A,psi:-1:2,psi:-1:3";
  bool table2 = false, table3 = false, table4 = false;
  std::string format = "markdown";
};

int cmd_eff(const EffOptions& o, std::ostream& out) {
  auto emit = [&](const EfficiencyTable& table) {
    out << (o.format == "csv" ? table.to_csv() : table.to_markdown());
  };
  if (o.table2 || o.table3 || o.table4) {
    if (o.table2) emit(table2());
    if (o.table3) emit(table3());
    if (o.table4) emit(table4());
    return kExitOk;
  }
  std::vector<CriterionSpec> criteria;
  std::stringstream ss(o.criteria);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      criteria.push_back(CriterionSpec::parse(item));
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }
  if (criteria.empty()) throw UsageError("no criteria given");

  EfficiencyTable table;
  SphereDesign design;
  int d = o.d;
  if (!o.design_path.empty()) {
    const LoadedDesign loaded = load_design(o.design_path);
    d = resolve_degree(o.d, loaded);
    design = loaded.design;
    table.key_columns = {"d"};
  } else if (!o.builtin.empty()) {
    require(d >= 0, "--d given with --builtin");
    require(o.n1 >= 1, "n1 >= 1");
    const int n2 = o.n2 > 0 ? o.n2 : 2 * d + 1;
    if (o.builtin == "grid") {
      design = grid_design(o.n1, n2);
    } else if (o.builtin == "equal-height") {
      design = equal_height_design(o.n1, n2);
    } else {
      throw UsageError("unknown builtin design: " + o.builtin);
    }
    table.key_columns = {"d", "n1"};
  } else {
    throw UsageError("eff needs --design, --builtin or a table preset");
  }
  const InformationMatrix m = information_matrix(design, d);
  EfficiencyTable::Row row{{std::to_string(d)}, {}};
  if (table.key_columns.size() == 2) row.keys.push_back(std::to_string(o.n1));
  for (const auto& c : criteria) {
    if (c.kind == CriterionSpec::Kind::PsiPR && c.r > harmonic_count(d)) {
      throw UsageError("psi criterion needs r <= (d+1)^2");
    }
    table.value_columns.push_back(c.label());
    row.values.push_back(efficiency(m, c));
  }
  table.rows.push_back(std::move(row));
  emit(table);
  return kExitOk;
}

int cmd_export(const std::string& path, const std::string& format, const std::string& out_path,
               std::ostream& out) {
  const LoadedDesign loaded = load_design(path);
  std::string text;
  if (format == "csv") {
    text = design_to_csv(loaded.design);
  } else if (format == "json") {
    text = design_to_json(loaded.design, loaded.degree);
  } else if (format == "xyz") {
    text = design_to_xyz(loaded.design);
  } else {
    throw UsageError("unknown export format: " + format);
  }
  if (out_path.empty()) {
    out << text;
  } else {
    write_file(out_path, text);
  }
  return kExitOk;
}

int cmd_quad(const std::string& rule_name, int r, int d, std::ostream& out) {
  QuadratureRule rule;
  if (rule_name == "equal-weight") {
    require(d >= 1 && d <= 7, "1 <= d <= 7 for equal-weight rules");
    rule = equal_weight_rule(d);
  } else {
    require(r >= 1, "--r >= 1");
    try {
      rule = make_rule(rule_name, r, d);
    } catch (const std::domain_error& e) {
      throw UsageError(e.what());
    }
  }
  out << rule_to_json(rule);
  return kExitOk;
}

int cmd_fit(const std::string& samples_path, int d, const std::string& out_path, std::ostream& out) {
  require(d >= 0, "d >= 0");
  const CoefficientVector c = fit(samples_from_csv(read_file(samples_path)), d);
  const std::string json = coefficients_to_json(c);
  if (out_path.empty()) {
    out << json;
  } else {
    write_file(out_path, json);
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal designs for spherical harmonic regression"};
  app.require_subcommand(1, 1);

  BuildOptions build;
  auto* build_cmd = app.add_subcommand("build", "Construct a product design with M = I");
  build_cmd->add_option("--d", build.d, "Model degree")->required();
  build_cmd->add_option("--rule", build.rule, "Polar rule")
      ->required()
      ->check(CLI::IsMember({"gauss", "radau+", "radau-", "lobatto", "equal-weight"}));
  build_cmd->add_option("--r", build.r, "Number of polar nodes");
  build_cmd->add_option("--t", build.t, "Number of azimuths (default 2d + 1)");
  build_cmd->add_option("--alpha", build.alpha, "Azimuthal phase, e.g. -pi");
  build_cmd->add_flag("--merge-poles", build.merge, "Collapse polar points");
  build_cmd->add_option("--banded", build.banded, "Band sizes, e.g. 15x8,16x15");
  build_cmd->add_option("--out", build.out_path, "Output design JSON");

  std::string verify_path, verify_p = "-1";
  int verify_d = -1;
  auto* verify_cmd = app.add_subcommand("verify", "Check M = I and the equivalence inequality");
  verify_cmd->add_option("design", verify_path, "Design JSON")->required();
  verify_cmd->add_option("--d", verify_d, "Model degree (default: from the file)");
  verify_cmd->add_option("--p", verify_p, "Criterion order for the equivalence check");

  EffOptions eff;
  auto* eff_cmd = app.add_subcommand("eff", "Efficiencies of a design");
  eff_cmd->add_option("--design", eff.design_path, "Design JSON");
  eff_cmd->add_option("--builtin", eff.builtin, "grid or equal-height")
      ->check(CLI::IsMember({"grid", "equal-height"}));
  eff_cmd->add_option("--d", eff.d, "Model degree");
  eff_cmd->add_option("--n1", eff.n1, "Number of circles");
  eff_cmd->add_option("--n2", eff.n2, "Azimuths per circle (default 2d + 1)");
  eff_cmd->add_option("--criteria", eff.criteria, "Comma list of D, A, E, psi:p:r");
  eff_cmd->add_flag("--table2", eff.table2, "Degrees 1 and 2 comparison table");
  eff_cmd->add_flag("--table3", eff.table3, "Degrees 3 and 4 comparison table");
  eff_cmd->add_flag("--table4", eff.table4, "Degree 7 comparison table");
  eff_cmd->add_option("--format", eff.format, "markdown or csv")
      ->check(CLI::IsMember({"markdown", "csv"}));

  std::string export_path, export_format = "csv", export_out;
  auto* export_cmd = app.add_subcommand("export", "Export a design");
  export_cmd->add_option("design", export_path, "Design JSON")->required();
  export_cmd->add_option("--format", export_format, "csv, json or xyz")
      ->check(CLI::IsMember({"csv", "json", "xyz"}));
  export_cmd->add_option("--out", export_out, "Output file (default stdout)");

  std::string quad_rule;
  int quad_r = 0, quad_d = 0;
  auto* quad_cmd = app.add_subcommand("quad", "Print a quadrature rule");
  quad_cmd->add_option("--rule", quad_rule, "Rule family")
      ->required()
      ->check(CLI::IsMember({"gauss", "radau+", "radau-", "lobatto", "equal-weight"}));
  quad_cmd->add_option("--r", quad_r, "Number of nodes");
  quad_cmd->add_option("--d", quad_d, "Model degree (equal-weight)");

  int bound_d = 0;
  auto* bound_cmd = app.add_subcommand("bound", "Polar support bound z*");
  bound_cmd->add_option("--d", bound_d, "Model degree")->required()->check(CLI::NonNegativeNumber);

  std::string fit_samples, fit_out;
  int fit_d = -1;
  auto* fit_cmd = app.add_subcommand("fit", "Least-squares coefficients from sampled radii");
  fit_cmd->add_option("samples", fit_samples, "CSV theta,phi,radius")->required();
  fit_cmd->add_option("--d", fit_d, "Model degree")->required();
  fit_cmd->add_option("--out", fit_out, "Output JSON (default stdout)");

  std::vector<std::string> args = join_signed_values(raw_args);
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (build_cmd->parsed()) return cmd_build(build, out);
    if (verify_cmd->parsed()) return cmd_verify(verify_path, verify_d, verify_p, out);
    if (eff_cmd->parsed()) return cmd_eff(eff, out);
    if (export_cmd->parsed()) return cmd_export(export_path, export_format, export_out, out);
    if (quad_cmd->parsed()) return cmd_quad(quad_rule, quad_r, quad_d, out);
    if (bound_cmd->parsed()) {
      out << format_real(support_bound(bound_d)) << '\n';
      return kExitOk;
    }
    if (fit_cmd->parsed()) return cmd_fit(fit_samples, fit_d, fit_out, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const EstimabilityError& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerifyFailed;
  } catch (const RankDeficiencyError& e) {
    err << "error: " << e.what() << '\n';
    return kExitVerifyFailed;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace sphdesign
