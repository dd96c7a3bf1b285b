#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "tnfem/basis.hpp"
#include "tnfem/lattice.hpp"
#include "tnfem/quadrature.hpp"

using namespace tnfem;

namespace {

double factorial(int m) {
  double r = 1;
  for (int i = 2; i <= m; ++i) r *= i;
  return r;
}

// Exact reference-normalized moment: integral of lam^a over the unit
// n-simplex divided by its measure equals n! * prod(a_i!) / (|a|+n)!.
double exact_moment(const MultiIndex& a) {
  const int n = static_cast<int>(a.size()) - 1;
  int deg = 0;
  double num = factorial(n);
  for (int v : a) {
    deg += v;
    num *= factorial(v);
  }
  return num / factorial(deg + n);
}

double rule_moment(const QuadratureRule& rule, const MultiIndex& a) {
  double s = 0;
  for (int q = 0; q < rule.size(); ++q) s += rule.weights[q] * bernstein(a, rule.points[q]);
  return s;
}

}  // namespace

TEST_CASE("weights sum to one") {
  for (int dim = 1; dim <= 3; ++dim)
    for (int d = 0; d <= 12; ++d) {
      const auto rule = simplex_rule(dim, d);
      CHECK(rule.degree >= d);
      double s = 0;
      for (double w : rule.weights) s += w;
      CHECK(s == doctest::Approx(1.0).epsilon(1e-13));
      for (const auto& p : rule.points) {
        double ps = 0;
        for (double v : p) ps += v;
        CHECK(ps == doctest::Approx(1.0).epsilon(1e-13));
      }
    }
}

TEST_CASE("all barycentric monomials integrate exactly through degree 10") {
  for (int dim = 1; dim <= 3; ++dim) {
    for (int d = 0; d <= 10; ++d) {
      const auto rule = simplex_rule(dim, d);
      for (int deg = 0; deg <= d; ++deg) {
        for (const auto& a : lattice_points(dim, deg).points) {
          const double got = rule_moment(rule, a);
          const double want = exact_moment(a);
          CHECK(std::abs(got - want) <= 1e-12 * std::abs(want));
        }
      }
    }
  }
}

TEST_CASE("pinned integrals") {
  // Integral of lam0*lam1 over the reference triangle (area 1/2).
  const auto tri = simplex_rule(2, 2);
  CHECK(0.5 * rule_moment(tri, {1, 1, 0}) == doctest::Approx(1.0 / 24).epsilon(1e-13));
  // Integral of x^3 over [0,1] via the interval rule.
  const auto seg = simplex_rule(1, 3);
  double s = 0;
  for (int q = 0; q < seg.size(); ++q) s += seg.weights[q] * std::pow(seg.points[q][1], 3);
  CHECK(s == doctest::Approx(0.25).epsilon(1e-14));
  // Unit-weight rule on the reference tet recovers its volume.
  const auto tet = simplex_rule(3, 1);
  double vol = 0;
  for (double w : tet.weights) vol += w / 6.0;
  CHECK(vol == doctest::Approx(1.0 / 6).epsilon(1e-15));
}

TEST_CASE("negative-weight mass stays bounded") {
  for (int dim = 1; dim <= 3; ++dim)
    for (int d = 0; d <= 12; ++d) {
      const auto rule = simplex_rule(dim, d);
      double mass = 0;
      for (double w : rule.weights) mass += std::abs(w);
      CHECK(mass <= 10.0);
    }
}

TEST_CASE("facet rules are one dimension down") {
  const auto fr = facet_rule(3, 4);
  const auto tr = simplex_rule(2, 4);
  REQUIRE(fr.size() == tr.size());
  CHECK(fr.points == tr.points);
  CHECK(fr.weights == tr.weights);
  CHECK(facet_rule(2, 3).dim == 1);
  CHECK_THROWS_AS(simplex_rule(4, 2), std::invalid_argument);
  CHECK_THROWS_AS(simplex_rule(2, -1), std::invalid_argument);
  CHECK_THROWS_AS(facet_rule(1, 2), std::invalid_argument);
}

TEST_CASE("higher-degree rules stay exact (spot check degree 12)") {
  for (int dim = 2; dim <= 3; ++dim) {
    const auto rule = simplex_rule(dim, 12);
    for (const auto& a : lattice_points(dim, 12).points) {
      const double want = exact_moment(a);
      CHECK(std::abs(rule_moment(rule, a) - want) <= 5e-12 * std::abs(want));
    }
  }
}
