#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixtures.hpp"
#include "sphdesign/criteria.hpp"

using namespace sphdesign;
using std::numbers::pi;

namespace {

InformationMatrix diag_matrix(std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
  int i = 0;
  for (double x : values) v[i++] = x;
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(v.size())))) - 1;
  return {d, v.asDiagonal()};
}

SphereDesign random_design(std::mt19937& rng, int n) {
  std::uniform_real_distribution<double> z(-1.0, 1.0), ph(-pi, pi), w(0.2, 1.0);
  std::vector<SupportPoint> pts;
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    pts.push_back({std::acos(z(rng)), ph(rng), w(rng)});
    total += pts.back().weight;
  }
  for (auto& p : pts) p.weight /= total;
  return SphereDesign(pts);
}

// Reference efficiencies from a plain inverse and eigen-decomposition.
Eigen::VectorXd reduced_eigenvalues(const Eigen::MatrixXd& m, const Eigen::MatrixXd& k) {
  const Eigen::MatrixXd c = (k.transpose() * m.inverse() * k).inverse();
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c).eigenvalues();
}

}  // namespace

TEST_CASE("selectors") {
  CHECK(selector_matrix(LevelSelector::full(3)) == Eigen::MatrixXd::Identity(16, 16));
  const Eigen::MatrixXd k = selector_matrix(LevelSelector::of(2, {1}));
  REQUIRE(k.rows() == 9);
  REQUIRE(k.cols() == 3);
  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(9, 3);
  expected(1, 0) = expected(2, 1) = expected(3, 2) = 1.0;
  CHECK(k == expected);
  for (const auto& levels : std::vector<std::vector<int>>{{0}, {2}, {0, 3}, {1, 2, 4}, {0, 1, 2, 3, 4}}) {
    const LevelSelector sel = LevelSelector::of(4, levels);
    const Eigen::MatrixXd kk = selector_matrix(sel);
    CHECK(kk.cols() == sel.size());
    CHECK(kk.transpose() * kk == Eigen::MatrixXd::Identity(sel.size(), sel.size()));
  }
  CHECK_THROWS_AS(LevelSelector::of(2, {}), std::invalid_argument);
  CHECK_THROWS_AS(LevelSelector::of(2, {3}), std::invalid_argument);
  CHECK_THROWS_AS(LevelSelector::of(2, {1, 1}), std::invalid_argument);
}

TEST_CASE("phi_p: closed forms") {
  const InformationMatrix id{2, Eigen::MatrixXd::Identity(9, 9)};
  // (tr C^p)^{1/p} at C = I_s: s^{1/p}.
  CHECK(phi_p(id, LevelSelector::full(2), -1.0) == doctest::Approx(1.0 / 9));
  CHECK(phi_p(id, LevelSelector::of(2, {1}), -1.0) == doctest::Approx(1.0 / 3));
  CHECK(phi_p(id, LevelSelector::full(2), 0.0) == doctest::Approx(1.0));
  const InformationMatrix m = diag_matrix({1.0, 1.25, 0.5, 1.25});
  CHECK(phi_p(m, LevelSelector::full(1), kMinusInfinity) == doctest::Approx(0.5));
  CHECK(phi_p(m, LevelSelector::full(1), 0.0) == doctest::Approx(1.0 * 1.25 * 0.5 * 1.25));
  CHECK_THROWS_AS(phi_p(m, LevelSelector::full(1), 1.0), std::invalid_argument);
}

TEST_CASE("phi_p: estimability") {
  const InformationMatrix pole = information_matrix(SphereDesign({{0.0, 0.0, 1.0}}), 1);
  CHECK_THROWS_AS(phi_p(pole, LevelSelector::full(1), -1.0), EstimabilityError);
  // Only Y_0^0 is estimable from one point.
  const InformationMatrix equator = information_matrix(SphereDesign({{pi / 2, 0.3, 1.0}}), 1);
  CHECK_THROWS_AS(phi_p(equator, LevelSelector::of(1, {1}), -1.0), EstimabilityError);
  // A singular M can still estimate a subsystem: poles and equator leave Y_0^0 estimable.
  const SphereDesign partial({{0.0, 0.0, 0.5}, {pi, 0.0, 0.5}});
  const InformationMatrix pm = information_matrix(partial, 1);
  CHECK_NOTHROW(phi_p(pm, LevelSelector::of(1, {0}), -1.0));
  CHECK(phi_p(pm, LevelSelector::of(1, {0}), -1.0) == doctest::Approx(1.0));
}

TEST_CASE("psi_pr: closed forms") {
  const InformationMatrix id{2, Eigen::MatrixXd::Identity(9, 9)};
  for (int r = 1; r <= 9; ++r) CHECK(psi_pr(id, -1.0, r) == doctest::Approx(1.0 / r));
  const InformationMatrix m = diag_matrix({1.0, 1.25, 0.5, 1.25});
  CHECK(psi_pr(m, -1.0, 2) == doctest::Approx(1.0 / 3));
  CHECK(psi_pr(m, kMinusInfinity, 3) == doctest::Approx(0.5));
  CHECK(psi_pr(m, 0.0, 2) == doctest::Approx(0.5));
  CHECK_THROWS_AS(psi_pr(m, -1.0, 5), std::invalid_argument);
  CHECK_THROWS_AS(psi_pr(m, -1.0, 0), std::invalid_argument);
}

TEST_CASE("criterion parsing and labels") {
  CHECK(CriterionSpec::parse("D").label() == "eff_D");
  CHECK(CriterionSpec::parse("A").label() == "eff_A");
  CHECK(CriterionSpec::parse("E").label() == "eff_E");
  const CriterionSpec psi = CriterionSpec::parse("psi:-1:3");
  CHECK(psi.kind == CriterionSpec::Kind::PsiPR);
  CHECK(psi.p == -1.0);
  CHECK(psi.r == 3);
  CHECK(psi.label() == "eff_psi(-1,3)");
  CHECK(std::isinf(CriterionSpec::parse("psi:-inf:2").p));
  CHECK(CriterionSpec::phi(-1.0, {1, 2}).label() == "eff_phi(-1,1,2)");
  for (const char* bad : {"", "X", "psi:", "psi:-1", "psi:1:2", "psi:-1:0", "psi:a:2", "psi:-1:2x"}) {
    CHECK_THROWS_AS(CriterionSpec::parse(bad), std::invalid_argument);
  }
}

TEST_CASE("efficiency: optimal designs score one") {
  const std::vector<CriterionSpec> criteria = {
      CriterionSpec::d_optimality(), CriterionSpec::a_optimality(), CriterionSpec::e_optimality(),
      CriterionSpec::psi(-1.0, 2),   CriterionSpec::psi(-2.0, 3),   CriterionSpec::psi(0.0, 4),
      CriterionSpec::phi(-0.5, {1}), CriterionSpec::phi(0.5, {0, 2})};
  for (int d = 2; d <= 4; ++d) {
    for (const auto& [name, design] : fixtures::optimal_designs(d, 2 * d + 1)) {
      const InformationMatrix m = information_matrix(design, d);
      for (const auto& c : criteria) CHECK(efficiency(m, c) == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("efficiency: hand-computed d = 1 equal-height values") {
  const InformationMatrix m = diag_matrix({1.0, 1.25, 0.5, 1.25});
  CHECK(efficiency(m, CriterionSpec::e_optimality()) == doctest::Approx(0.5));
  CHECK(efficiency(m, CriterionSpec::a_optimality()) == doctest::Approx(4.0 / (1 + 0.8 + 2 + 0.8)));
  CHECK(efficiency(m, CriterionSpec::d_optimality()) == doctest::Approx(std::pow(0.78125, 0.25)));
  CHECK(efficiency(m, CriterionSpec::psi(-1.0, 2)) == doctest::Approx(2.0 / 3));
  CHECK(efficiency(m, CriterionSpec::psi(-1.0, 3)) == doctest::Approx(3.0 / 3.8));
  CHECK(efficiency(equal_height_design(3, 3), 1, CriterionSpec::psi(-1.0, 3)) == doctest::Approx(3.0 / 3.8));
}

TEST_CASE("efficiency: properties on random designs") {
  std::mt19937 rng(51);
  for (int k = 0; k < 20; ++k) {
    const int d = 1 + k % 3;
    const int n = harmonic_count(d) + 3 + k % 7;
    const SphereDesign design = random_design(rng, n);
    const InformationMatrix m = information_matrix(design, d);
    const int big_n = harmonic_count(d);
    const Eigen::VectorXd lambda = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m.entries).eigenvalues();

    // Upper bound 1 for every criterion.
    for (double p : {0.0, -0.5, -1.0, -3.0, kMinusInfinity}) {
      CHECK(efficiency(m, {CriterionSpec::Kind::PhiP, p, 1, {}}) <= 1.0 + 1e-12);
      for (int r = 1; r <= big_n; ++r) CHECK(efficiency(m, CriterionSpec::psi(p, r)) <= 1.0 + 1e-12);
    }
    // Psi with all eigenvalues and Psi at -inf reduce to A and E.
    CHECK(efficiency(m, CriterionSpec::psi(-1.0, big_n)) ==
          doctest::Approx(efficiency(m, CriterionSpec::a_optimality())).epsilon(1e-10));
    CHECK(efficiency(m, CriterionSpec::psi(kMinusInfinity, 3)) ==
          doctest::Approx(efficiency(m, CriterionSpec::e_optimality())).epsilon(1e-10));
    // Direct reference values.
    CHECK(efficiency(m, CriterionSpec::a_optimality()) ==
          doctest::Approx(big_n / m.entries.inverse().trace()).epsilon(1e-10));
    CHECK(efficiency(m, CriterionSpec::d_optimality()) ==
          doctest::Approx(std::pow(m.entries.determinant(), 1.0 / big_n)).epsilon(1e-10));
    CHECK(efficiency(m, CriterionSpec::e_optimality()) == doctest::Approx(lambda[0]).epsilon(1e-10));
    CHECK(efficiency(m, CriterionSpec::psi(-1.0, 2)) ==
          doctest::Approx(2.0 / (1 / lambda[0] + 1 / lambda[1])).epsilon(1e-10));

    // Partial selectors against an explicit inverse.
    const std::vector<int> levels = d == 1 ? std::vector<int>{1} : std::vector<int>{1, d};
    const Eigen::VectorXd mu = reduced_eigenvalues(m.entries, selector_matrix(LevelSelector::of(d, levels)));
    const double s = static_cast<double>(mu.size());
    CHECK(efficiency(m, CriterionSpec::phi(-1.0, levels)) ==
          doctest::Approx(s / mu.cwiseInverse().sum()).epsilon(1e-10));
    CHECK(efficiency(m, CriterionSpec::phi(kMinusInfinity, levels)) == doctest::Approx(mu[0]).epsilon(1e-10));
  }
}

TEST_CASE("efficiency: singular designs") {
  const SphereDesign pole({{0.0, 0.0, 1.0}});
  CHECK_THROWS_AS(efficiency(pole, 1, CriterionSpec::a_optimality()), EstimabilityError);
  CHECK(efficiency(pole, 1, CriterionSpec::psi(-1.0, 2)) == 0.0);
  CHECK(efficiency(pole, 1, CriterionSpec::psi(kMinusInfinity, 2)) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("equivalence_check: optimal designs attain the bound") {
  for (int d = 1; d <= 3; ++d) {
    const EquivalenceGrid grid(d, 60, 120);
    std::vector<LevelSelector> selectors = {LevelSelector::full(d), LevelSelector::of(d, {d})};
    if (d >= 2) selectors.push_back(LevelSelector::of(d, {0, 2}));
    for (const auto& [name, design] : fixtures::optimal_designs(d, 2 * d + 1)) {
      for (const auto& sel : selectors) {
        for (double p : {-1.0, 0.0, -2.5, 0.5}) {
          const EquivalenceResult r = equivalence_check(design, sel, p, grid);
          CAPTURE(name);
          CHECK(r.holds);
          CHECK(r.bound == doctest::Approx(sel.size()).epsilon(1e-10));
          CHECK(std::abs(r.max_lhs - r.bound) < 1e-9);
        }
      }
    }
  }
}

TEST_CASE("equivalence_check: non-optimal designs violate the inequality") {
  const EquivalenceResult r = equivalence_check(equal_height_design(3, 7), 1, LevelSelector::full(1), -1.0);
  CHECK_FALSE(r.holds);
  CHECK(r.max_lhs > r.bound);
  // The violation sits at a pole, where the design is thinnest.
  CHECK((r.argmax.theta == 0.0 || r.argmax.theta == pi));
  CHECK_THROWS_AS(equivalence_check(equal_height_design(3, 7), 1, LevelSelector::full(1), kMinusInfinity),
                  std::invalid_argument);
  CHECK_THROWS_AS(equivalence_check(equal_height_design(3, 7), 2, LevelSelector::full(1), -1.0),
                  std::invalid_argument);
}

TEST_CASE("equivalence grid layout") {
  const EquivalenceGrid grid(1, 3, 4);
  CHECK(grid.regressors().rows() == 12);
  CHECK(grid.angle(0).theta == 0.0);
  CHECK(grid.angle(0).phi == doctest::Approx(-pi / 2));
  CHECK(grid.angle(3).phi == doctest::Approx(pi));
  CHECK(grid.angle(11).theta == pi);
}

TEST_CASE("support_bound") {
  CHECK(support_bound(1) == doctest::Approx(std::acos(1 / std::sqrt(3.0))).epsilon(1e-14));
  CHECK(support_bound(1) == doctest::Approx(0.95532).epsilon(1e-5));
  CHECK(support_bound(2) == doctest::Approx(std::acos(std::sqrt(0.6))).epsilon(1e-14));
  CHECK(support_bound(2) == doctest::Approx(0.68472).epsilon(1e-5));
  for (int d = 1; d < 10; ++d) CHECK(support_bound(d + 1) < support_bound(d));
  // Gauss designs touch the bound.
  for (int d = 1; d <= 7; ++d) {
    const MarginalDesign polar = polar_from_rule(gauss_rule(d + 1));
    CHECK(polar.points[0] == doctest::Approx(support_bound(d)).epsilon(1e-14));
  }
}

TEST_CASE("no identity design strictly inside the bound (small budget)") {
  const BandSearchResult r = search_inside_support_bound(1, 0.02, 2000, 7);
  CHECK(r.candidates >= 2000);
  CHECK(r.best_deviation >= 1e-3);
  // A margin that empties the band is rejected.
  CHECK_THROWS_AS(search_inside_support_bound(1, 1.0, 10, 1), std::invalid_argument);
}
