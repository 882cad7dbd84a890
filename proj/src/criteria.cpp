#include "sphdesign/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "sphdesign/orthopoly.hpp"

namespace sphdesign {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEquivalenceSlack = 1e-8;

bool is_minus_infinity(double p) { return std::isinf(p) && p < 0; }

void check_order(double p) {
  if (!(p < 1.0)) throw std::invalid_argument("criterion order p must be < 1");
}

Eigen::VectorXd ascending_eigenvalues(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  return eig.eigenvalues();
}

// Eigen-decomposition of A = K^T M^- K after checking estimability. The
// eigenvalues of A are the reciprocals of those of C = (K^T M^- K)^{-1}.
struct ReducedCovariance {
  Eigen::MatrixXd pseudo_inverse;  // M^-
  Eigen::MatrixXd selector;        // K
  Eigen::VectorXd eigenvalues;     // of A, ascending
  Eigen::MatrixXd eigenvectors;
};

ReducedCovariance reduced_covariance(const InformationMatrix& m, const LevelSelector& sel) {
  if (sel.d != m.degree) throw std::invalid_argument("selector degree does not match the model");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m.entries);
  const Eigen::VectorXd& lambda = eig.eigenvalues();
  const Eigen::MatrixXd& v = eig.eigenvectors();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(lambda.size());
  Eigen::VectorXd in_range = Eigen::VectorXd::Zero(lambda.size());
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda[i] > kRankThreshold) {
      inv[i] = 1.0 / lambda[i];
      in_range[i] = 1.0;
    }
  }
  ReducedCovariance out;
  out.selector = selector_matrix(sel);
  out.pseudo_inverse = v * inv.asDiagonal() * v.transpose();
  const Eigen::MatrixXd projected = v * in_range.asDiagonal() * (v.transpose() * out.selector);
  if ((out.selector - projected).cwiseAbs().maxCoeff() > 1e-8) {
    throw EstimabilityError("K^T c is not estimable: range(K) not contained in range(M)");
  }
  const Eigen::MatrixXd reduced = out.selector.transpose() * out.pseudo_inverse * out.selector;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> reig(0.5 * (reduced + reduced.transpose()));
  out.eigenvalues = reig.eigenvalues();
  out.eigenvectors = reig.eigenvectors();
  return out;
}

std::string format_order(double p) {
  if (is_minus_infinity(p)) return "-inf";
  std::ostringstream os;
  os << p;
  return os.str();
}

}  // namespace

LevelSelector LevelSelector::full(int d) {
  LevelSelector sel{d, {}};
  for (int k = 0; k <= d; ++k) sel.levels.push_back(k);
  return sel;
}

LevelSelector LevelSelector::of(int d, std::vector<int> levels) {
  if (d < 0) throw std::invalid_argument("selector: negative degree");
  if (levels.empty()) throw std::invalid_argument("selector: no levels");
  for (std::size_t i = 0; i < levels.size(); ++i) {
    if (levels[i] < 0 || levels[i] > d) throw std::invalid_argument("selector: level outside 0..d");
    if (i > 0 && levels[i] <= levels[i - 1]) {
      throw std::invalid_argument("selector: levels must be strictly increasing");
    }
  }
  return {d, std::move(levels)};
}

int LevelSelector::size() const {
  int s = 0;
  for (int k : levels) s += 2 * k + 1;
  return s;
}

Eigen::MatrixXd selector_matrix(const LevelSelector& sel) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(harmonic_count(sel.d), sel.size());
  int column = 0;
  for (int level : sel.levels) {
    for (int m = -level; m <= level; ++m) k(harmonic_offset(level, m), column++) = 1.0;
  }
  return k;
}

double identity_deviation(const Eigen::MatrixXd& m) {
  return (m - Eigen::MatrixXd::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff();
}

double phi_p(const InformationMatrix& m, const LevelSelector& sel, double p) {
  check_order(p);
  const ReducedCovariance rc = reduced_covariance(m, sel);
  const Eigen::VectorXd& mu = rc.eigenvalues;
  if (is_minus_infinity(p)) return 1.0 / mu.maxCoeff();
  if (p == 0.0) return 1.0 / mu.prod();
  double sum = 0.0;
  for (double v : mu) sum += std::pow(v, -p);
  return std::pow(sum, 1.0 / p);
}

double psi_pr(const InformationMatrix& m, double p, int r) {
  check_order(p);
  const Eigen::VectorXd lambda = ascending_eigenvalues(m.entries);
  if (r < 1 || r > lambda.size()) throw std::invalid_argument("psi_pr: r outside 1..(d+1)^2");
  if (is_minus_infinity(p)) return lambda[0];
  if (p == 0.0) return lambda.head(r).prod();
  if (p < 0.0 && lambda[0] <= kRankThreshold) return 0.0;
  double sum = 0.0;
  for (int j = 0; j < r; ++j) sum += std::pow(std::max(lambda[j], 0.0), p);
  return std::pow(sum, 1.0 / p);
}

CriterionSpec CriterionSpec::parse(const std::string& text) {
  if (text == "D") return d_optimality();
  if (text == "A") return a_optimality();
  if (text == "E") return e_optimality();
  if (text.rfind("psi:", 0) == 0) {
    const auto colon = text.find(':', 4);
    if (colon == std::string::npos) throw std::invalid_argument("unknown criterion: " + text);
    const std::string p_text = text.substr(4, colon - 4);
    const std::string r_text = text.substr(colon + 1);
    try {
      std::size_t used = 0;
      const double p = p_text == "-inf" ? kMinusInfinity : std::stod(p_text, &used);
      if (p_text != "-inf" && used != p_text.size()) throw std::invalid_argument(p_text);
      const int r = std::stoi(r_text, &used);
      if (used != r_text.size()) throw std::invalid_argument(r_text);
      if (!(p < 1.0) || r < 1) throw std::invalid_argument(text);
      return psi(p, r);
    } catch (const std::logic_error&) {
      throw std::invalid_argument("unknown criterion: " + text);
    }
  }
  throw std::invalid_argument("unknown criterion: " + text);
}

std::string CriterionSpec::label() const {
  if (kind == Kind::PsiPR) return "eff_psi(" + format_order(p) + "," + std::to_string(r) + ")";
  if (levels.empty()) {
    if (p == 0.0) return "eff_D";
    if (p == -1.0) return "eff_A";
    if (is_minus_infinity(p)) return "eff_E";
  }
  std::string out = "eff_phi(" + format_order(p);
  for (int k : levels) out += "," + std::to_string(k);
  return out + ")";
}

double efficiency(const InformationMatrix& m, const CriterionSpec& criterion) {
  check_order(criterion.p);
  if (criterion.kind == CriterionSpec::Kind::PsiPR) {
    const double value = psi_pr(m, criterion.p, criterion.r);
    if (criterion.p == 0.0 || is_minus_infinity(criterion.p)) return value;
    return value / std::pow(static_cast<double>(criterion.r), 1.0 / criterion.p);
  }
  const LevelSelector sel = criterion.levels.empty()
                                ? LevelSelector::full(m.degree)
                                : LevelSelector::of(m.degree, criterion.levels);
  const ReducedCovariance rc = reduced_covariance(m, sel);
  const Eigen::VectorXd& mu = rc.eigenvalues;
  const double s = static_cast<double>(mu.size());
  if (is_minus_infinity(criterion.p)) return 1.0 / mu.maxCoeff();
  if (criterion.p == 0.0) return std::exp(-mu.array().log().sum() / s);
  double sum = 0.0;
  for (double v : mu) sum += std::pow(v, -criterion.p);
  return std::pow(sum / s, 1.0 / criterion.p);
}

double efficiency(const SphereDesign& design, int d, const CriterionSpec& criterion) {
  return efficiency(information_matrix(design, d), criterion);
}

EquivalenceGrid::EquivalenceGrid(int d, int n_theta, int n_phi)
    : d_(d), n_theta_(n_theta), n_phi_(n_phi) {
  if (n_theta < 2 || n_phi < 1) throw std::invalid_argument("equivalence grid too coarse");
  f_.resize(static_cast<Eigen::Index>(n_theta) * n_phi, harmonic_count(d));
  for (int i = 0; i < n_theta; ++i) {
    for (int j = 0; j < n_phi; ++j) {
      const SphericalAngle a = angle(static_cast<Eigen::Index>(i) * n_phi + j);
      regression_vector_into(d, a.theta, a.phi, f_.row(static_cast<Eigen::Index>(i) * n_phi + j).transpose());
    }
  }
}

SphericalAngle EquivalenceGrid::angle(Eigen::Index row) const {
  const int i = static_cast<int>(row / n_phi_);
  const int j = static_cast<int>(row % n_phi_);
  const double theta = i == n_theta_ - 1 ? kPi : i * kPi / (n_theta_ - 1);
  return {theta, -kPi + 2.0 * kPi * (j + 1) / n_phi_};
}

EquivalenceResult equivalence_check(const SphereDesign& design, const LevelSelector& sel, double p,
                                    const EquivalenceGrid& grid) {
  check_order(p);
  if (!std::isfinite(p)) throw std::invalid_argument("equivalence_check: p must be finite");
  if (grid.degree() != sel.d) throw std::invalid_argument("equivalence_check: grid degree mismatch");
  const InformationMatrix m = information_matrix(design, sel.d);
  const ReducedCovariance rc = reduced_covariance(m, sel);

  // C^{p+1} and tr C^p from the eigenvalues mu of A = C^{-1}.
  const Eigen::VectorXd powered = rc.eigenvalues.array().pow(-(p + 1.0));
  const Eigen::MatrixXd c_power = rc.eigenvectors * powered.asDiagonal() * rc.eigenvectors.transpose();
  const Eigen::MatrixXd left = rc.pseudo_inverse * rc.selector;
  const Eigen::MatrixXd g = left * c_power * left.transpose();

  EquivalenceResult result;
  result.bound = rc.eigenvalues.array().pow(-p).sum();
  const Eigen::MatrixXd& f = grid.regressors();
  const Eigen::VectorXd lhs = ((f * g).cwiseProduct(f)).rowwise().sum();
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < lhs.size(); ++i) {
    if (lhs[i] > lhs[best]) best = i;
  }
  result.max_lhs = lhs[best];
  result.argmax = grid.angle(best);
  result.holds = result.max_lhs <= result.bound + kEquivalenceSlack;
  return result;
}

EquivalenceResult equivalence_check(const SphereDesign& design, int d, const LevelSelector& sel,
                                    double p, int n_theta, int n_phi) {
  if (sel.d != d) throw std::invalid_argument("equivalence_check: selector degree mismatch");
  return equivalence_check(design, sel, p, EquivalenceGrid(d, n_theta, n_phi));
}

double support_bound(int d) {
  if (d < 0) throw std::domain_error("support_bound: negative degree");
  const Eigen::VectorXd roots = poly_roots(PolySpec::legendre(d + 1));
  return std::acos(std::abs(roots[0]));
}

BandSearchResult search_inside_support_bound(int d, double margin, long candidates,
                                             std::uint64_t seed) {
  const double lo = support_bound(d) + margin;
  const double hi = kPi - lo;
  if (!(lo < hi)) throw std::invalid_argument("search band is empty");
  const int n = harmonic_count(d);

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::exponential_distribution<double> gamma1(1.0);
  const double x_hi = std::cos(lo);

  struct Candidate {
    Eigen::VectorXd theta, phi, weight;
    double deviation;
  };
  auto evaluate = [&](const Candidate& c) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd f(n);
    for (Eigen::Index k = 0; k < c.theta.size(); ++k) {
      regression_vector_into(d, c.theta[k], c.phi[k], f);
      m.noalias() += c.weight[k] * f * f.transpose();
    }
    return identity_deviation(m);
  };

  BandSearchResult result;
  std::vector<Candidate> elite;
  constexpr std::size_t kElite = 8;
  const long random_budget = candidates - candidates / 5;
  for (long i = 0; i < random_budget; ++i) {
    const int points = n + static_cast<int>(unit(rng) * 12);
    Candidate c{Eigen::VectorXd(points), Eigen::VectorXd(points), Eigen::VectorXd(points), 0.0};
    for (int k = 0; k < points; ++k) {
      // Uniform in cos(theta) over the band, i.e. uniform on the sphere zone.
      c.theta[k] = std::acos(x_hi * (2.0 * unit(rng) - 1.0));
      c.phi[k] = -kPi + 2.0 * kPi * unit(rng);
      c.weight[k] = gamma1(rng);
    }
    c.weight /= c.weight.sum();
    c.deviation = evaluate(c);
    ++result.candidates;
    elite.push_back(std::move(c));
    std::sort(elite.begin(), elite.end(),
              [](const Candidate& a, const Candidate& b) { return a.deviation < b.deviation; });
    if (elite.size() > kElite) elite.pop_back();
  }

  // Local refinement: shrinking random perturbations, kept inside the band.
  const long refine_budget = std::max<long>(candidates - random_budget, 1);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (auto& c : elite) {
    double step = 0.2;
    for (long it = 0; it < refine_budget / static_cast<long>(elite.size()) + 1; ++it) {
      Candidate trial = c;
      for (Eigen::Index k = 0; k < trial.theta.size(); ++k) {
        trial.theta[k] = std::clamp(trial.theta[k] + step * normal(rng), lo, hi);
        trial.phi[k] = normalize_azimuth(trial.phi[k] + step * normal(rng));
        trial.weight[k] = std::max(1e-9, trial.weight[k] * std::exp(step * normal(rng)));
      }
      trial.weight /= trial.weight.sum();
      trial.deviation = evaluate(trial);
      ++result.candidates;
      if (trial.deviation < c.deviation) {
        c = std::move(trial);
      } else {
        step = std::max(step * 0.97, 1e-4);
      }
    }
    result.best_deviation = std::min(result.best_deviation, c.deviation);
  }
  return result;
}

}  // namespace sphdesign
