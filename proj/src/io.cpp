#include "sphdesign/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>

namespace sphdesign {
namespace {

using nlohmann::json;

double finite_number(const json& value, const char* what) {
  if (!value.is_number()) throw ParseError(std::string("expected a number for ") + what);
  const double v = value.get<double>();
  if (!std::isfinite(v)) throw ParseError(std::string("non-finite value for ") + what);
  return v;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double parse_plain(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::logic_error&) {
    throw ParseError("not a number: '" + text + "'");
  }
  if (used != text.size()) throw ParseError("not a number: '" + text + "'");
  return v;
}

}  // namespace

std::string format_real(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

double parse_angle(const std::string& raw) {
  std::string text = trim(raw);
  const auto pi_pos = text.find("pi");
  if (pi_pos == std::string::npos) return parse_plain(text);

  // [sign][coefficient][*]pi[/denominator]
  std::string head = text.substr(0, pi_pos);
  const std::string tail = text.substr(pi_pos + 2);
  double sign = 1.0;
  if (!head.empty() && (head[0] == '-' || head[0] == '+')) {
    sign = head[0] == '-' ? -1.0 : 1.0;
    head.erase(0, 1);
  }
  if (!head.empty() && head.back() == '*') head.pop_back();
  const double coefficient = head.empty() ? 1.0 : parse_plain(head);
  double denominator = 1.0;
  if (!tail.empty()) {
    if (tail[0] != '/') throw ParseError("bad angle: '" + raw + "'");
    denominator = parse_plain(tail.substr(1));
    if (denominator == 0.0) throw ParseError("bad angle: '" + raw + "'");
  }
  return sign * coefficient * std::numbers::pi / denominator;
}

std::string rule_to_json(const QuadratureRule& rule) {
  std::ostringstream os;
  os << "{\"nodes\": [";
  for (int i = 0; i < rule.size(); ++i) os << (i ? ", " : "") << format_real(rule.nodes[i]);
  os << "], \"weights\": [";
  for (int i = 0; i < rule.size(); ++i) os << (i ? ", " : "") << format_real(rule.weights[i]);
  os << "], \"degree\": " << rule.degree << "}\n";
  return os.str();
}

QuadratureRule rule_from_json(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("weights") ||
      !doc.contains("degree")) {
    throw ParseError("quadrature rule JSON needs nodes, weights and degree");
  }
  const json& nodes = doc["nodes"];
  const json& weights = doc["weights"];
  if (!nodes.is_array() || !weights.is_array() || nodes.size() != weights.size()) {
    throw ParseError("quadrature rule JSON: nodes and weights must be arrays of equal length");
  }
  if (!doc["degree"].is_number_integer()) throw ParseError("quadrature rule JSON: integer degree required");
  QuadratureRule rule;
  rule.nodes.resize(nodes.size());
  rule.weights.resize(weights.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    rule.nodes[i] = finite_number(nodes[i], "node");
    rule.weights[i] = finite_number(weights[i], "weight");
  }
  rule.degree = doc["degree"].get<int>();
  return rule;
}

std::string design_to_json(const SphereDesign& design, std::optional<int> d) {
  std::ostringstream os;
  os << "{\n";
  if (d) os << "  \"d\": " << *d << ",\n";
  os << "  \"points\": [\n";
  for (int i = 0; i < design.size(); ++i) {
    const auto& p = design.support()[i];
    os << "    {\"theta\": " << format_real(p.theta) << ", \"phi\": " << format_real(p.phi)
       << ", \"weight\": " << format_real(p.weight) << "}" << (i + 1 < design.size() ? "," : "")
       << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

LoadedDesign design_from_json(const std::string& text) {
  const json doc = parse_json(text);
  if (!doc.is_object() || !doc.contains("points") || !doc["points"].is_array()) {
    throw ParseError("design JSON needs a \"points\" array");
  }
  std::vector<SupportPoint> support;
  for (const json& p : doc["points"]) {
    if (!p.is_object() || !p.contains("theta") || !p.contains("phi") || !p.contains("weight")) {
      throw ParseError("design point needs theta, phi and weight");
    }
    support.push_back({finite_number(p["theta"], "theta"), finite_number(p["phi"], "phi"),
                       finite_number(p["weight"], "weight")});
  }
  LoadedDesign loaded;
  if (doc.contains("d")) {
    if (!doc["d"].is_number_integer() || doc["d"].get<int>() < 0) {
      throw ParseError("design JSON: d must be a nonnegative integer");
    }
    loaded.degree = doc["d"].get<int>();
  }
  try {
    loaded.design = SphereDesign(std::move(support));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
  return loaded;
}

std::string design_to_csv(const SphereDesign& design) {
  std::ostringstream os;
  os << "theta,phi,weight,x,y,z\n";
  for (const auto& p : design.support()) {
    const double st = std::sin(p.theta);
    os << format_real(p.theta) << ',' << format_real(p.phi) << ',' << format_real(p.weight) << ','
       << format_real(st * std::cos(p.phi)) << ',' << format_real(st * std::sin(p.phi)) << ','
       << format_real(std::cos(p.theta)) << '\n';
  }
  return os.str();
}

std::string design_to_xyz(const SphereDesign& design) {
  std::ostringstream os;
  for (const auto& p : design.support()) {
    const double st = std::sin(p.theta);
    os << format_real(st * std::cos(p.phi)) << ' ' << format_real(st * std::sin(p.phi)) << ' '
       << format_real(std::cos(p.theta)) << '\n';
  }
  return os.str();
}

std::vector<RadiusSample> samples_from_csv(const std::string& text) {
  std::vector<RadiusSample> samples;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (line_no == 1 && line.find("theta") != std::string::npos) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (fields.size() != 3) {
      throw ParseError("samples CSV line " + std::to_string(line_no) + ": expected theta,phi,radius");
    }
    try {
      samples.push_back({SphericalAngle::make(parse_plain(fields[0]), parse_plain(fields[1])),
                         parse_plain(fields[2])});
    } catch (const std::domain_error& e) {
      throw ParseError("samples CSV line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return samples;
}

std::string coefficients_to_json(const CoefficientVector& coefficients) {
  std::ostringstream os;
  os << "{\n  \"d\": " << coefficients.degree << ",\n  \"coefficients\": [\n";
  const int n = static_cast<int>(coefficients.c.size());
  for (int i = 0; i < n; ++i) {
    const HarmonicIndex idx = harmonic_at(i);
    os << "    {\"ell\": " << idx.ell << ", \"m\": " << idx.m
       << ", \"value\": " << format_real(coefficients.c[i]) << "}" << (i + 1 < n ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

std::string EfficiencyTable::to_markdown() const {
  std::ostringstream os;
  os << '|';
  for (const auto& c : key_columns) os << ' ' << c << " |";
  for (const auto& c : value_columns) os << ' ' << c << " |";
  os << "\n|";
  for (std::size_t i = 0; i < key_columns.size() + value_columns.size(); ++i) os << "---|";
  os << '\n';
  char buffer[32];
  for (const auto& row : rows) {
    os << '|';
    for (const auto& k : row.keys) os << ' ' << k << " |";
    for (double v : row.values) {
      std::snprintf(buffer, sizeof buffer, "%.6f", v);
      os << ' ' << buffer << " |";
    }
    os << '\n';
  }
  return os.str();
}

std::string EfficiencyTable::to_csv() const {
  std::ostringstream os;
  bool first = true;
  for (const auto& c : key_columns) os << (first ? "" : ",") << c, first = false;
  for (const auto& c : value_columns) os << (first ? "" : ",") << c, first = false;
  os << '\n';
  for (const auto& row : rows) {
    first = true;
    for (const auto& k : row.keys) os << (first ? "" : ",") << k, first = false;
    for (double v : row.values) os << (first ? "" : ",") << format_real(v), first = false;
    os << '\n';
  }
  return os.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path);
  out << content;
  if (!out) throw ParseError("write failed for " + path);
}

}  // namespace sphdesign
