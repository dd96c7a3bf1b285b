#include <doctest.h>

#include <Eigen/Dense>
#include <random>

#include "tnfem/basis.hpp"
#include "tnfem/mesh.hpp"

using namespace tnfem;

namespace {

std::vector<double> random_bary(int n, std::mt19937& rng) {
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  std::vector<double> lam(n + 1);
  double s = 0;
  for (double& v : lam) {
    v = uni(rng);
    s += v;
  }
  for (double& v : lam) v /= s;
  return lam;
}

// Barycentric coordinates of a physical point, from the affine map.
std::vector<double> bary_of_point(const Mesh& mesh, int c, const Eigen::Vector3d& x) {
  const CellGeometry g = cell_geometry(mesh, c);
  std::vector<double> lam(mesh.gdim + 1);
  for (int i = 0; i <= mesh.gdim; ++i)
    lam[i] = (i == 0 ? 1.0 : 0.0) + g.grad_lambda[i].dot(x - mesh.node(mesh.cell_vertex(c, 0)));
  return lam;
}

}  // namespace

TEST_CASE("degree 1 shape functions are the barycentric coordinates") {
  std::mt19937 rng(3);
  const auto lam = random_bary(3, rng);
  for (int i = 0; i <= 3; ++i) {
    MultiIndex a(4, 0);
    a[i] = 1;
    CHECK(eval_lagrange(a, lam, 1) == doctest::Approx(lam[i]).epsilon(1e-14));
  }
}

TEST_CASE("pinned degree 2 values at an edge midpoint") {
  const std::vector<double> lam = {0.5, 0.5, 0.0};
  CHECK(eval_lagrange({1, 1, 0}, lam, 2) == doctest::Approx(1.0));
  CHECK(eval_lagrange({2, 0, 0}, lam, 2) == doctest::Approx(0.0));
}

TEST_CASE("Kronecker property at lattice points") {
  for (int n = 1; n <= 3; ++n) {
    for (int k = 1; k <= 5; ++k) {
      const auto lat = lattice_points(n, k);
      for (int i = 0; i < lat.size(); ++i) {
        const auto lam = lattice_barycentric(lat.points[i], k);
        for (int j = 0; j < lat.size(); ++j) {
          const double v = eval_lagrange(lat.points[j], lam, k);
          CHECK(v == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("partition of unity and in-plane derivative sums") {
  std::mt19937 rng(11);
  for (int n = 2; n <= 3; ++n) {
    for (int k = 1; k <= 4; ++k) {
      const auto lat = lattice_points(n, k);
      for (int trial = 0; trial < 5; ++trial) {
        const auto lam = random_bary(n, rng);
        double sum = 0;
        std::vector<double> dsum(n + 1, 0.0);
        for (const auto& a : lat.points) {
          sum += eval_lagrange(a, lam, k);
          const auto d = grad_lagrange(a, lam, k);
          for (int i = 0; i <= n; ++i) dsum[i] += d[i];
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
        // The sum is constant on the simplex plane, so all tangential
        // (pairwise-difference) derivatives must vanish.
        for (int i = 1; i <= n; ++i) CHECK(dsum[i] - dsum[0] == doctest::Approx(0.0).epsilon(1e-11));
      }
    }
  }
}

TEST_CASE("barycentric gradient matches finite differences of the product formula") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> uni(-0.2, 1.2);
  for (int n = 2; n <= 3; ++n) {
    for (int k = 1; k <= 4; ++k) {
      const auto lat = lattice_points(n, k);
      for (int trial = 0; trial < 3; ++trial) {
        std::vector<double> lam(n + 1);
        for (double& v : lam) v = uni(rng);  // off-plane is fine for this identity
        for (const auto& a : lat.points) {
          const auto d = grad_lagrange(a, lam, k);
          const double h = 1e-6;
          for (int i = 0; i <= n; ++i) {
            auto lp = lam, lm = lam;
            lp[i] += h;
            lm[i] -= h;
            const double fd = (eval_lagrange(a, lp, k) - eval_lagrange(a, lm, k)) / (2 * h);
            CHECK(d[i] == doctest::Approx(fd).epsilon(1e-6));
          }
        }
      }
    }
  }
}

TEST_CASE("interpolation reproduces full degree-k polynomials on a skewed cell") {
  const Mesh mesh =
      build_mesh(3, {0.1, 0.0, 0.2, 1.1, 0.2, 0.1, 0.4, 1.3, -0.1, 0.2, 0.3, 1.2}, {0, 1, 2, 3});
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> uni(-1, 1);
  for (int k = 1; k <= 4; ++k) {
    // Random polynomial of total degree k in (x, y, z).
    std::vector<std::array<int, 3>> expo;
    std::vector<double> coef;
    for (int i = 0; i <= k; ++i)
      for (int j = 0; i + j <= k; ++j)
        for (int l = 0; i + j + l <= k; ++l) {
          expo.push_back({i, j, l});
          coef.push_back(uni(rng));
        }
    auto poly = [&](const Eigen::Vector3d& x) {
      double s = 0;
      for (std::size_t t = 0; t < expo.size(); ++t)
        s += coef[t] * std::pow(x.x(), expo[t][0]) * std::pow(x.y(), expo[t][1]) *
             std::pow(x.z(), expo[t][2]);
      return s;
    };
    const auto lat = lattice_points(3, k);
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<double> lam = {uni(rng), uni(rng), uni(rng), 0};
      lam[0] = std::abs(lam[0]);
      lam[1] = std::abs(lam[1]);
      lam[2] = std::abs(lam[2]);
      double s = lam[0] + lam[1] + lam[2];
      for (double& v : lam) v /= s + 0.3;  // interior point
      lam[3] = 1 - lam[0] - lam[1] - lam[2];
      const Eigen::Vector3d x = cell_point(mesh, 0, lam);
      double interp = 0;
      for (const auto& a : lat.points)
        interp += poly(cell_point(mesh, 0, lattice_barycentric(a, k))) * eval_lagrange(a, lam, k);
      CHECK(interp == doctest::Approx(poly(x)).epsilon(1e-10));
    }
  }
}

TEST_CASE("physical gradients agree with finite differences in space") {
  const Mesh mesh =
      build_mesh(3, {0.0, 0.1, 0.0, 1.2, 0.0, 0.3, 0.1, 1.1, 0.2, 0.3, 0.2, 1.4}, {0, 1, 2, 3});
  const CellGeometry g = cell_geometry(mesh, 0);
  const int k = 3;
  const auto lat = lattice_points(3, k);
  const Eigen::Vector3d x0(0.3, 0.35, 0.4);
  const double h = 1e-6;
  for (const auto& a : lat.points) {
    const auto d = grad_lagrange(a, bary_of_point(mesh, 0, x0), k);
    Eigen::Vector3d grad = Eigen::Vector3d::Zero();
    for (int i = 0; i <= 3; ++i) grad += d[i] * g.grad_lambda[i];
    for (int dir = 0; dir < 3; ++dir) {
      Eigen::Vector3d xp = x0, xm = x0;
      xp[dir] += h;
      xm[dir] -= h;
      const double fd = (eval_lagrange(a, bary_of_point(mesh, 0, xp), k) -
                         eval_lagrange(a, bary_of_point(mesh, 0, xm), k)) /
                        (2 * h);
      CHECK(grad[dir] == doctest::Approx(fd).epsilon(1e-5));
    }
  }
}

TEST_CASE("tabulate matches pointwise evaluation") {
  const auto lat = lattice_points(2, 3);
  std::mt19937 rng(31);
  std::vector<std::vector<double>> pts;
  for (int q = 0; q < 4; ++q) pts.push_back(random_bary(2, rng));
  const Tabulation tab = tabulate(lat, pts);
  REQUIRE(tab.num_fn == 10);
  REQUIRE(tab.num_pts == 4);
  for (int f = 0; f < tab.num_fn; ++f)
    for (int q = 0; q < tab.num_pts; ++q) {
      CHECK(tab.value(f, q) == doctest::Approx(eval_lagrange(lat.points[f], pts[q], 3)));
      const auto d = grad_lagrange(lat.points[f], pts[q], 3);
      for (int i = 0; i <= 2; ++i) CHECK(tab.dvalue(f, q, i) == doctest::Approx(d[i]));
    }
}

TEST_CASE("bernstein monomials and bubbles") {
  const std::vector<double> lam = {0.2, 0.3, 0.5};
  CHECK(bernstein({2, 1, 0}, lam) == doctest::Approx(0.2 * 0.2 * 0.3));
  CHECK(bernstein({0, 0, 0}, lam) == doctest::Approx(1.0));
  CHECK(bubble({0, 1, 2}, lam) == doctest::Approx(0.2 * 0.3 * 0.5));
  CHECK(bubble({1}, lam) == doctest::Approx(0.3));
  // Multinomial expansion of (lam0+lam1+lam2)^k = 1.
  std::mt19937 rng(37);
  for (int k = 1; k <= 5; ++k) {
    const auto lat = lattice_points(2, k);
    const auto rl = random_bary(2, rng);
    double sum = 0;
    for (const auto& a : lat.points) {
      double multinom = 1;
      // k! / a!
      for (int i = 2; i <= k; ++i) multinom *= i;
      for (int v : a)
        for (int i = 2; i <= v; ++i) multinom /= i;
      sum += multinom * bernstein(a, rl);
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-13));
  }
  // Degree-k shape functions expand the kth-degree bubble-extended identity:
  // the bubble of f vanishes wherever any named coordinate vanishes.
  CHECK(bubble({0, 2}, {0.0, 0.7, 0.3}) == doctest::Approx(0.0));
}
