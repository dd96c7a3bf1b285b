#include <doctest.h>

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "tnfem/assembly.hpp"
#include "tnfem/basis.hpp"
#include "tnfem/dofs.hpp"
#include "tnfem/mesh.hpp"
#include "tnfem/quadrature.hpp"

using namespace tnfem;

namespace {

Mesh ref_tet() {
  return build_mesh(3, {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1}, {0, 1, 2, 3});
}

DofMap build_space(const Mesh& mesh, const std::string& space, int k) {
  if (space == "lagrange") return build_lagrange_dofmap(mesh, k, mesh.gdim);
  if (space == "bdm") return build_bdm_dofmap(mesh, k);
  return build_nedelec_dofmap(mesh, k);
}

// Evaluate the global basis function g as seen from cell c at barycentric lam;
// zero when the dof is not in the cell's row.
Eigen::Vector3d basis_from_cell(const Mesh&, const DofMap& dm, int c, int g,
                                const std::vector<double>& lam) {
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  for (int j = 0; j < dm.ldof; ++j) {
    if (dm.dof(c, j) != g) continue;
    const double phi = eval_lagrange(dm.lat.points[dm.point_of(j)], lam, dm.k);
    v += phi * dm.dof_dual[static_cast<size_t>(c) * dm.ldof + j];
  }
  return v;
}

// Max jump of the selected trace across all interior facets, all global basis
// functions live on either side, all facet quadrature points of degree 2k.
double max_conformity_jump(const Mesh& mesh, const DofMap& dm,
                           const std::string& trace) {
  const QuadratureRule rule = facet_rule(mesh.gdim, 2 * dm.k);
  double worst = 0;
  for (int fid = 0; fid < mesh.num_facets(); ++fid) {
    const int c0 = mesh.facet2cell[fid][0];
    const int c1 = mesh.facet2cell[fid][1];
    if (c1 < 0) continue;
    const std::vector<int> fv = mesh.facet_vertices(fid);
    const Eigen::Vector3d n = facet_normal(mesh, fid);

    std::vector<int> dofs;
    for (int j = 0; j < dm.ldof; ++j) {
      dofs.push_back(dm.dof(c0, j));
      dofs.push_back(dm.dof(c1, j));
    }
    std::sort(dofs.begin(), dofs.end());
    dofs.erase(std::unique(dofs.begin(), dofs.end()), dofs.end());

    for (int q = 0; q < rule.size(); ++q) {
      std::vector<double> lam0(mesh.gdim + 1, 0.0), lam1(mesh.gdim + 1, 0.0);
      for (size_t t = 0; t < fv.size(); ++t) {
        lam0[mesh.local_vertex(c0, fv[t])] = rule.points[q][t];
        lam1[mesh.local_vertex(c1, fv[t])] = rule.points[q][t];
      }
      for (int g : dofs) {
        const Eigen::Vector3d jump = basis_from_cell(mesh, dm, c0, g, lam0) -
                                     basis_from_cell(mesh, dm, c1, g, lam1);
        double j = 0;
        if (trace == "normal") {
          j = std::abs(jump.dot(n));
        } else if (trace == "tangential") {
          j = (jump - jump.dot(n) * n).norm();
        } else {
          j = jump.norm();
        }
        worst = std::max(worst, j);
      }
    }
  }
  return worst;
}

// Degree-k polynomial vector field with distinct components.
VectorField poly_field(int k) {
  return [k](const Eigen::Vector3d& x) {
    const double a = 0.3 + x[0] + 0.5 * x[1] - 0.4 * x[2];
    const double b = 0.7 - 0.6 * x[0] + x[1] + 0.2 * x[2];
    const double c = 0.1 + 0.4 * x[0] - 0.3 * x[1] + x[2];
    return Eigen::Vector3d(std::pow(a, k), std::pow(b, k),
                           0.5 * std::pow(c, k) + std::pow(a, k > 0 ? k - 1 : 0));
  };
}

}  // namespace

TEST_CASE("triplet assembly merges duplicates deterministically") {
  std::vector<Triplet> t = {{1, 2, 0.5}, {0, 0, 1.0}, {1, 2, 0.25}, {2, 1, -1.0},
                            {1, 0, 2.0},  {1, 2, 0.25}};
  const CsrMatrix m = CsrMatrix::from_triplets(3, 3, t);
  CHECK(m.nnz() == 4);
  CHECK(m.coeff(1, 2) == 1.0);
  CHECK(m.coeff(0, 0) == 1.0);
  CHECK(m.coeff(1, 0) == 2.0);
  CHECK(m.coeff(2, 1) == -1.0);
  CHECK(m.coeff(0, 1) == 0.0);
  // Sorted, deduplicated columns per row.
  for (int r = 0; r < m.rows; ++r)
    for (int p = m.row_ptr[r] + 1; p < m.row_ptr[r + 1]; ++p)
      CHECK(m.col_idx[p - 1] < m.col_idx[p]);

  const Eigen::VectorXd x = Eigen::Vector3d(1, 2, 3);
  const Eigen::VectorXd y = m.apply(x);
  CHECK(y[0] == doctest::Approx(1.0));
  CHECK(y[1] == doctest::Approx(2.0 + 3.0));
  CHECK(y[2] == doctest::Approx(-2.0));

  CHECK_THROWS_AS(CsrMatrix::from_triplets(2, 2, {{2, 0, 1.0}}),
                  std::invalid_argument);
}

TEST_CASE("barycentric coordinates invert the cell map") {
  const Mesh mesh = structured_cube(3, 2);
  const std::vector<std::vector<double>> pts = {
      {0.1, 0.2, 0.3, 0.4}, {0.7, 0.1, 0.1, 0.1}, {0.25, 0.25, 0.25, 0.25}};
  for (int c = 0; c < mesh.num_cells(); c += 7)
    for (const auto& lam : pts) {
      const Eigen::Vector3d x = cell_point(mesh, c, lam);
      const std::vector<double> back = barycentric_in_cell(mesh, c, x);
      for (int i = 0; i < 4; ++i) CHECK(back[i] == doctest::Approx(lam[i]).epsilon(1e-12));
    }
}

TEST_CASE("interpolation is dual to the point frames") {
  // Evaluating the interpolant at a dof point along the dof direction
  // recovers the coefficient: the frames are biorthogonal by construction.
  const Mesh mesh = structured_cube(3, 1);
  const VectorField u = [](const Eigen::Vector3d& x) {
    return Eigen::Vector3d(std::sin(x[0] + 0.3 * x[1]), std::cos(x[1]) * x[2],
                           x[0] * x[1] + 0.5 * x[2]);
  };
  for (const std::string space : {"lagrange", "bdm", "nedelec"}) {
    for (int k = 1; k <= 3; ++k) {
      CAPTURE(space);
      CAPTURE(k);
      const DofMap dm = build_space(mesh, space, k);
      const Eigen::VectorXd coeff = interpolate(dm, u);
      const DiscreteField f{&mesh, &dm, coeff};
      for (int c = 0; c < mesh.num_cells(); ++c)
        for (int j = 0; j < dm.ldof; ++j) {
          const MultiIndex& a = dm.lat.points[dm.point_of(j)];
          const Eigen::Vector3d v = f.value(c, lattice_barycentric(a, dm.k));
          const double got =
              v.dot(dm.dof_dir[static_cast<size_t>(c) * dm.ldof + j]);
          CHECK(std::abs(got - coeff[dm.dof(c, j)]) <= 1e-11);
        }
    }
  }
}

TEST_CASE("nodal interpolation reproduces polynomial fields") {
  for (int gdim : {2, 3}) {
    const Mesh mesh = structured_cube(gdim, 2);
    for (const std::string space : {"lagrange", "bdm", "nedelec"}) {
      for (int k = 1; k <= 3; ++k) {
        CAPTURE(gdim);
        CAPTURE(space);
        CAPTURE(k);
        const DofMap dm = build_space(mesh, space, k);
        VectorField u = poly_field(k);
        if (gdim == 2) {
          const VectorField u3 = u;
          u = [u3](const Eigen::Vector3d& x) {
            Eigen::Vector3d v = u3(x);
            v[2] = 0;  // in-plane fields only
            return v;
          };
        }
        const Eigen::VectorXd coeff = interpolate(dm, u);
        CHECK(l2_error(mesh, dm, coeff, u) <= 1e-9);
      }
    }
  }
}

TEST_CASE("basis functions are conforming across interior facets") {
  const Mesh mesh = structured_cube(3, 2);
  for (int k = 1; k <= 3; ++k) {
    CAPTURE(k);
    CHECK(max_conformity_jump(mesh, build_bdm_dofmap(mesh, k), "normal") <=
          1e-11);
    CHECK(max_conformity_jump(mesh, build_nedelec_dofmap(mesh, k),
                              "tangential") <= 1e-11);
    CHECK(max_conformity_jump(mesh, build_lagrange_dofmap(mesh, k, 3), "full") <=
          1e-11);
  }
  // 2D: normal continuity for the div space, tangential for the curl space.
  const Mesh tri = structured_cube(2, 2);
  for (int k = 1; k <= 3; ++k) {
    CAPTURE(k);
    CHECK(max_conformity_jump(tri, build_bdm_dofmap(tri, k), "normal") <= 1e-11);
    CHECK(max_conformity_jump(tri, build_nedelec_dofmap(tri, k), "tangential") <=
          1e-11);
  }
}

TEST_CASE("mass matrices are symmetric positive definite and reproducible") {
  const Mesh mesh = structured_cube(3, 1);
  for (const std::string space : {"lagrange", "bdm", "nedelec"}) {
    CAPTURE(space);
    const DofMap dm = build_space(mesh, space, 2);
    const CsrMatrix M = assemble_vector_mass(mesh, dm);
    REQUIRE(M.rows == dm.gdof);

    // Bitwise symmetry.
    for (int r = 0; r < M.rows; ++r)
      for (int p = M.row_ptr[r]; p < M.row_ptr[r + 1]; ++p)
        CHECK(M.vals[p] == M.coeff(M.col_idx[p], r));

    // Positive definite.
    const Eigen::LLT<Eigen::MatrixXd> llt(M.dense());
    CHECK(llt.info() == Eigen::Success);

    // Constant fields integrate to componentwise volumes (|Omega| = 1).
    for (int d = 0; d < 3; ++d) {
      const Eigen::Vector3d ed = Eigen::Vector3d::Unit(d);
      const Eigen::VectorXd cd =
          interpolate(dm, [&](const Eigen::Vector3d&) { return ed; });
      for (int e = 0; e < 3; ++e) {
        const Eigen::Vector3d ee = Eigen::Vector3d::Unit(e);
        const Eigen::VectorXd ce =
            interpolate(dm, [&](const Eigen::Vector3d&) { return ee; });
        const double val = cd.dot(M.apply(ce));
        CHECK(std::abs(val - (d == e ? 1.0 : 0.0)) <= 1e-10);
      }
    }

    // Bit-identical reassembly.
    const CsrMatrix M2 = assemble_vector_mass(mesh, dm);
    CHECK(M.vals == M2.vals);
    CHECK(M.col_idx == M2.col_idx);
    CHECK(M.row_ptr == M2.row_ptr);
  }
}

TEST_CASE("discrete divergence theorem ties the div form to boundary flux") {
  const Mesh mesh = structured_cube(3, 2);
  const VectorField u = [](const Eigen::Vector3d& x) {
    return Eigen::Vector3d(std::sin(x[0] + 0.2 * x[1]), std::cos(x[1]) * x[2],
                           x[0] * x[1] * x[2] + 0.3);
  };
  for (int k = 1; k <= 3; ++k) {
    CAPTURE(k);
    const DofMap flux = build_bdm_dofmap(mesh, k);
    const DofMap p0 = build_discontinuous_dofmap(mesh, 0);
    const Eigen::VectorXd uh = interpolate(flux, u);

    // Row sums of B give minus the per-cell divergence integrals.
    const CsrMatrix B = assemble_mixed_divergence(mesh, flux, p0);
    const double vol_div = -B.apply(uh).sum();

    // Total outward flux of the same discrete field.
    const Eigen::VectorXd Ln = assemble_boundary_normal_flux(
        mesh, flux, [](const Eigen::Vector3d&) { return 1.0; });
    const double surf_flux = Ln.dot(uh);
    CHECK(std::abs(vol_div - surf_flux) <= 1e-11);
  }

  // Orientation pin: flux of e_x through the unit cube weighted by g = x is
  // the area of the x = 1 face.
  const DofMap flux = build_bdm_dofmap(mesh, 1);
  const Eigen::VectorXd ex = interpolate(
      flux, [](const Eigen::Vector3d&) { return Eigen::Vector3d(1, 0, 0); });
  const Eigen::VectorXd Lx = assemble_boundary_normal_flux(
      mesh, flux, [](const Eigen::Vector3d& x) { return x[0]; });
  CHECK(std::abs(Lx.dot(ex) - 1.0) <= 1e-12);
}

TEST_CASE("gradients of continuous fields lie in the curl-curl kernel") {
  const Mesh mesh = structured_cube(3, 1);
  for (int k = 1; k <= 2; ++k) {
    CAPTURE(k);
    const DofMap ned = build_nedelec_dofmap(mesh, k);
    const DofMap lag = build_lagrange_dofmap(mesh, k + 1, 1);

    // Deterministic nontrivial scalar coefficients.
    Eigen::VectorXd p(lag.gdof);
    for (int g = 0; g < lag.gdof; ++g) p[g] = std::sin(1.7 * g + 0.4);
    const DiscreteField pf{&mesh, &lag, p};

    // Slot-wise interpolation of grad p; tangential traces are single-valued
    // so the cell used to evaluate does not matter.
    Eigen::VectorXd u = Eigen::VectorXd::Zero(ned.gdof);
    for (int c = 0; c < mesh.num_cells(); ++c)
      for (int j = 0; j < ned.ldof; ++j) {
        const MultiIndex& a = ned.lat.points[ned.point_of(j)];
        const Eigen::Vector3d g = pf.gradient(c, lattice_barycentric(a, ned.k));
        u[ned.dof(c, j)] =
            g.dot(ned.dof_dir[static_cast<size_t>(c) * ned.ldof + j]);
      }

    const CsrMatrix A = assemble_curl_curl(mesh, ned);
    double frob2 = 0;
    for (double v : A.vals) frob2 += v * v;
    const double rel = A.apply(u).norm() / (std::sqrt(frob2) * u.norm());
    CHECK(rel <= 1e-9);
  }
}

TEST_CASE("essential elimination keeps the system symmetric and pinned") {
  const Mesh mesh = structured_cube(3, 1);
  const DofMap dm = build_nedelec_dofmap(mesh, 1);
  CsrMatrix A = assemble_curl_curl(mesh, dm);
  // Shift by the mass to make it nonsingular before elimination.
  const CsrMatrix M = assemble_vector_mass(mesh, dm);
  {
    std::vector<Triplet> t;
    for (int r = 0; r < A.rows; ++r) {
      for (int p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p)
        t.push_back({r, A.col_idx[p], A.vals[p]});
      for (int p = M.row_ptr[r]; p < M.row_ptr[r + 1]; ++p)
        t.push_back({r, M.col_idx[p], M.vals[p]});
    }
    A = CsrMatrix::from_triplets(A.rows, A.cols, std::move(t));
  }
  Eigen::VectorXd b = Eigen::VectorXd::Constant(dm.gdof, 0.25);
  const Eigen::MatrixXd before = A.dense();
  Eigen::VectorXd vals = Eigen::VectorXd::Zero(dm.gdof);
  for (int g = 0; g < dm.gdof; ++g)
    if (dm.boundary_mask[g]) vals[g] = 0.1 * std::cos(0.9 * g);

  Eigen::VectorXd b2 = b;
  apply_essential_bc(A, b2, dm.boundary_mask, &vals);

  // Masked rows and columns reduce to the identity, values pinned.
  for (int g = 0; g < dm.gdof; ++g) {
    if (!dm.boundary_mask[g]) continue;
    CHECK(b2[g] == vals[g]);
    for (int p = A.row_ptr[g]; p < A.row_ptr[g + 1]; ++p) {
      CHECK(A.col_idx[p] == g);
      CHECK(A.vals[p] == 1.0);
    }
  }
  // Symmetry survives.
  const Eigen::MatrixXd after = A.dense();
  CHECK((after - after.transpose()).cwiseAbs().maxCoeff() == 0.0);

  // Eliminated system solves to the same interior values as the manual
  // Schur-style reduction on the dense matrix.
  const Eigen::VectorXd x = after.ldlt().solve(b2);
  std::vector<int> free;
  for (int g = 0; g < dm.gdof; ++g)
    if (!dm.boundary_mask[g]) free.push_back(g);
  Eigen::MatrixXd Aff(free.size(), free.size());
  Eigen::VectorXd bf(free.size());
  for (size_t i = 0; i < free.size(); ++i) {
    double mod = b[free[i]];
    for (int g = 0; g < dm.gdof; ++g)
      if (dm.boundary_mask[g]) mod -= before(free[i], g) * vals[g];
    bf[i] = mod;
    for (size_t j = 0; j < free.size(); ++j) Aff(i, j) = before(free[i], free[j]);
  }
  const Eigen::VectorXd xf = Aff.ldlt().solve(bf);
  for (size_t i = 0; i < free.size(); ++i)
    CHECK(std::abs(x[free[i]] - xf[i]) <= 1e-9);
  for (int g = 0; g < dm.gdof; ++g)
    if (dm.boundary_mask[g]) CHECK(x[g] == vals[g]);
}

TEST_CASE("saddle block matrix is the symmetric two-by-two layout") {
  const Mesh mesh = structured_cube(3, 1);
  const DofMap flux = build_bdm_dofmap(mesh, 1);
  const DofMap pres = build_discontinuous_dofmap(mesh, 0);
  const CsrMatrix M = assemble_vector_mass(mesh, flux);
  const CsrMatrix B = assemble_mixed_divergence(mesh, flux, pres);
  const CsrMatrix S = block_saddle(M, B);
  REQUIRE(S.rows == M.rows + B.rows);
  const Eigen::MatrixXd d = S.dense();
  CHECK((d - d.transpose()).cwiseAbs().maxCoeff() == 0.0);
  CHECK((d.topLeftCorner(M.rows, M.cols) - M.dense()).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK((d.bottomLeftCorner(B.rows, B.cols) - B.dense()).cwiseAbs().maxCoeff() ==
        0.0);
  CHECK(d.bottomRightCorner(B.rows, B.rows).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("error norms report exact zeros for reproduced data") {
  const Mesh mesh = structured_cube(3, 1);
  const int k = 2;
  const DofMap bdm = build_bdm_dofmap(mesh, k);
  const DofMap ned = build_nedelec_dofmap(mesh, k);

  // u is a degree-2 polynomial: interpolants reproduce it, its divergence,
  // and its curl.
  const VectorField u = [](const Eigen::Vector3d& x) {
    return Eigen::Vector3d(x[1] * x[2] + x[0], x[0] * x[0] - x[2],
                           x[0] * x[1] + 2 * x[2] * x[2]);
  };
  const ScalarField div_u = [](const Eigen::Vector3d& x) {
    return 1 + 4 * x[2];
  };
  const VectorField curl_u = [](const Eigen::Vector3d& x) {
    // curl u = (d2 u3 - d3 u2, d3 u1 - d1 u3, d1 u2 - d2 u1)
    return Eigen::Vector3d(x[0] + 1, x[1] - x[1], 2 * x[0] - x[2]);
  };

  const Eigen::VectorXd ub = interpolate(bdm, u);
  CHECK(l2_error(mesh, bdm, ub, u) <= 1e-12);
  CHECK(div_error(mesh, bdm, ub, div_u) <= 1e-12);

  const Eigen::VectorXd un = interpolate(ned, u);
  CHECK(l2_error(mesh, ned, un, u) <= 1e-12);
  CHECK(curl_error(mesh, ned, un, curl_u) <= 1e-12);

  // And a deliberate mismatch is visible.
  CHECK(l2_error(mesh, bdm, ub, [](const Eigen::Vector3d& x) {
          return Eigen::Vector3d(x[0] + 1, 0, 0);
        }) > 0.1);
}
