#pragma once

// File formats.
//
//   Quadrature rule JSON:  {"nodes": [...], "weights": [...], "degree": z}
//   Design JSON:           {"d": int (optional), "points": [{"theta", "phi", "weight"}]}
//   Design CSV:            theta,phi,weight,x,y,z
//   Design xyz:            "x y z" per line, unit-sphere Cartesian
//   Samples CSV:           theta,phi,radius (header optional)
//   Coefficients JSON:     {"d": int, "coefficients": [{"ell", "m", "value"}]}
//
// Floats are written with 17 significant digits so JSON round trips are
// lossless and output is byte-stable.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sphdesign/design.hpp"
#include "sphdesign/quadrature.hpp"
#include "sphdesign/regression.hpp"

namespace sphdesign {

/// Malformed or unreadable input.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "%.17g".
std::string format_real(double value);

/// Parses a real or a rational multiple of pi: "0.5", "pi", "-pi", "pi/3",
/// "2pi/3", "-16*pi/15".
double parse_angle(const std::string& text);

std::string rule_to_json(const QuadratureRule& rule);
QuadratureRule rule_from_json(const std::string& text);

std::string design_to_json(const SphereDesign& design, std::optional<int> d = std::nullopt);

struct LoadedDesign {
  SphereDesign design;
  std::optional<int> degree;
};
LoadedDesign design_from_json(const std::string& text);

std::string design_to_csv(const SphereDesign& design);
std::string design_to_xyz(const SphereDesign& design);

std::vector<RadiusSample> samples_from_csv(const std::string& text);
std::string coefficients_to_json(const CoefficientVector& coefficients);

/// A rectangular table of labelled numeric columns. Key columns (d, n1) are
/// printed as integers, values with 6 decimals (markdown) or full precision
/// (csv).
struct EfficiencyTable {
  std::vector<std::string> key_columns;
  std::vector<std::string> value_columns;
  struct Row {
    std::vector<std::string> keys;
    std::vector<double> values;
  };
  std::vector<Row> rows;

  std::string to_markdown() const;
  std::string to_csv() const;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace sphdesign
