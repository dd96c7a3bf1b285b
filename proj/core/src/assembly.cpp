#include "tnfem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tnfem/basis.hpp"
#include "tnfem/quadrature.hpp"

namespace tnfem {

namespace {

int default_matrix_degree(const DofMap& dm) { return 2 * dm.k; }
int default_data_degree(const DofMap& dm) { return 2 * dm.k + 4; }

// Physical gradient of shape function f at quadrature point q.
Eigen::Vector3d phys_grad(const Tabulation& tab, const CellGeometry& geom,
                          int f, int q) {
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  for (int i = 0; i < tab.nbary; ++i)
    g += tab.dvalue(f, q, i) * geom.grad_lambda[i];
  return g;
}

Eigen::Vector3d quad_point(const Mesh& mesh, int c,
                           const std::vector<double>& lam) {
  return cell_point(mesh, c, lam);
}

const Eigen::Vector3d* cell_duals(const DofMap& dm, int c) {
  return dm.vd > 1 ? &dm.dof_dual[static_cast<size_t>(c) * dm.ldof] : nullptr;
}

}  // namespace

CsrMatrix CsrMatrix::from_triplets(int rows, int cols, std::vector<Triplet> t) {
  if (rows < 0 || cols < 0)
    throw std::invalid_argument("from_triplets: negative shape");
  for (const Triplet& e : t)
    if (e.r < 0 || e.r >= rows || e.c < 0 || e.c >= cols)
      throw std::invalid_argument("from_triplets: index out of range");
  std::stable_sort(t.begin(), t.end(), [](const Triplet& a, const Triplet& b) {
    return a.r != b.r ? a.r < b.r : a.c < b.c;
  });

  CsrMatrix m;
  m.rows = rows;
  m.cols = cols;
  m.row_ptr.assign(rows + 1, 0);
  size_t i = 0;
  while (i < t.size()) {
    const int r = t[i].r, c = t[i].c;
    double v = 0;
    while (i < t.size() && t[i].r == r && t[i].c == c) v += t[i++].v;
    m.col_idx.push_back(c);
    m.vals.push_back(v);
    ++m.row_ptr[r + 1];
  }
  for (int r = 0; r < rows; ++r) m.row_ptr[r + 1] += m.row_ptr[r];
  return m;
}

Eigen::VectorXd CsrMatrix::apply(const Eigen::VectorXd& x) const {
  if (x.size() != cols) throw std::invalid_argument("apply: size mismatch");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(rows);
  for (int r = 0; r < rows; ++r) {
    double s = 0;
    for (int p = row_ptr[r]; p < row_ptr[r + 1]; ++p) s += vals[p] * x[col_idx[p]];
    y[r] = s;
  }
  return y;
}

double CsrMatrix::coeff(int r, int c) const {
  const auto b = col_idx.begin() + row_ptr[r];
  const auto e = col_idx.begin() + row_ptr[r + 1];
  const auto it = std::lower_bound(b, e, c);
  if (it == e || *it != c) return 0;
  return vals[it - col_idx.begin()];
}

Eigen::MatrixXd CsrMatrix::dense() const {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int p = row_ptr[r]; p < row_ptr[r + 1]; ++p) m(r, col_idx[p]) = vals[p];
  return m;
}

CsrMatrix block_saddle(const CsrMatrix& M, const CsrMatrix& B) {
  if (M.rows != M.cols || B.cols != M.rows)
    throw std::invalid_argument("block_saddle: incompatible blocks");
  const int n = M.rows, m = B.rows;
  std::vector<Triplet> t;
  t.reserve(M.nnz() + 2 * B.nnz());
  for (int r = 0; r < n; ++r)
    for (int p = M.row_ptr[r]; p < M.row_ptr[r + 1]; ++p)
      t.push_back({r, M.col_idx[p], M.vals[p]});
  for (int r = 0; r < m; ++r)
    for (int p = B.row_ptr[r]; p < B.row_ptr[r + 1]; ++p) {
      t.push_back({n + r, B.col_idx[p], B.vals[p]});
      t.push_back({B.col_idx[p], n + r, B.vals[p]});
    }
  return CsrMatrix::from_triplets(n + m, n + m, std::move(t));
}

Eigen::VectorXd interpolate(const DofMap& dm, const VectorField& u) {
  if (dm.vd <= 1)
    throw std::invalid_argument("interpolate: scalar space, use interpolate_scalar");
  Eigen::VectorXd x(dm.gdof);
  for (int g = 0; g < dm.gdof; ++g)
    x[g] = u(dm.dof2point[g]).dot(dm.dof2vector[g]);
  return x;
}

Eigen::VectorXd interpolate_scalar(const DofMap& dm, const ScalarField& u) {
  if (dm.vd != 1)
    throw std::invalid_argument("interpolate_scalar: vector space, use interpolate");
  Eigen::VectorXd x(dm.gdof);
  for (int g = 0; g < dm.gdof; ++g) x[g] = u(dm.dof2point[g]);
  return x;
}

Eigen::Vector3d DiscreteField::value(int c, const std::vector<double>& lam) const {
  if (dm->vd <= 1) throw std::invalid_argument("value: scalar space");
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  const Eigen::Vector3d* duals = cell_duals(*dm, c);
  for (int p = 0; p < dm->lat.size(); ++p) {
    const double phi = eval_lagrange(dm->lat.points[p], lam, dm->k);
    if (phi == 0) continue;
    for (int i = 0; i < dm->vd; ++i) {
      const int j = p * dm->vd + i;
      v += coeff[dm->dof(c, j)] * phi * duals[j];
    }
  }
  return v;
}

double DiscreteField::scalar_value(int c, const std::vector<double>& lam) const {
  if (dm->vd != 1)
    throw std::invalid_argument("scalar_value: vector-valued space");
  double v = 0;
  for (int p = 0; p < dm->lat.size(); ++p)
    v += coeff[dm->dof(c, p)] * eval_lagrange(dm->lat.points[p], lam, dm->k);
  return v;
}

Eigen::Vector3d DiscreteField::gradient(int c, const std::vector<double>& lam) const {
  if (dm->vd != 1)
    throw std::invalid_argument("gradient: vector-valued space");
  const CellGeometry geom = cell_geometry(*mesh, c);
  Eigen::Vector3d g = Eigen::Vector3d::Zero();
  for (int p = 0; p < dm->lat.size(); ++p) {
    const std::vector<double> d = grad_lagrange(dm->lat.points[p], lam, dm->k);
    Eigen::Vector3d gp = Eigen::Vector3d::Zero();
    for (int i = 0; i <= dm->gd; ++i) gp += d[i] * geom.grad_lambda[i];
    g += coeff[dm->dof(c, p)] * gp;
  }
  return g;
}

double DiscreteField::divergence(int c, const std::vector<double>& lam) const {
  if (dm->vd <= 1) throw std::invalid_argument("divergence: scalar space");
  const CellGeometry geom = cell_geometry(*mesh, c);
  const Eigen::Vector3d* duals = cell_duals(*dm, c);
  double v = 0;
  for (int p = 0; p < dm->lat.size(); ++p) {
    const std::vector<double> d = grad_lagrange(dm->lat.points[p], lam, dm->k);
    Eigen::Vector3d gp = Eigen::Vector3d::Zero();
    for (int i = 0; i <= dm->gd; ++i) gp += d[i] * geom.grad_lambda[i];
    for (int i = 0; i < dm->vd; ++i) {
      const int j = p * dm->vd + i;
      v += coeff[dm->dof(c, j)] * gp.dot(duals[j]);
    }
  }
  return v;
}

Eigen::Vector3d DiscreteField::curl(int c, const std::vector<double>& lam) const {
  if (dm->vd <= 1) throw std::invalid_argument("curl: scalar space");
  const CellGeometry geom = cell_geometry(*mesh, c);
  const Eigen::Vector3d* duals = cell_duals(*dm, c);
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  for (int p = 0; p < dm->lat.size(); ++p) {
    const std::vector<double> d = grad_lagrange(dm->lat.points[p], lam, dm->k);
    Eigen::Vector3d gp = Eigen::Vector3d::Zero();
    for (int i = 0; i <= dm->gd; ++i) gp += d[i] * geom.grad_lambda[i];
    for (int i = 0; i < dm->vd; ++i) {
      const int j = p * dm->vd + i;
      v += coeff[dm->dof(c, j)] * gp.cross(duals[j]);
    }
  }
  return v;
}

std::vector<double> barycentric_in_cell(const Mesh& mesh, int c,
                                        const Eigen::Vector3d& x) {
  const CellGeometry geom = cell_geometry(mesh, c);
  const Eigen::Vector3d v0 = mesh.node(mesh.cell_vertex(c, 0));
  std::vector<double> lam(mesh.gdim + 1);
  for (int i = 0; i <= mesh.gdim; ++i)
    lam[i] = (i == 0 ? 1.0 : 0.0) + geom.grad_lambda[i].dot(x - v0);
  return lam;
}

CsrMatrix assemble_vector_mass(const Mesh& mesh, const DofMap& dm,
                               int quad_degree) {
  const int qd = quad_degree >= 0 ? quad_degree : default_matrix_degree(dm);
  const QuadratureRule rule = simplex_rule(mesh.gdim, qd);
  const Tabulation tab = tabulate(dm.lat, rule.points);
  const int npts = dm.lat.size();

  std::vector<Triplet> t;
  t.reserve(static_cast<size_t>(mesh.num_cells()) * dm.ldof * dm.ldof);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geom = cell_geometry(mesh, c);
    const Eigen::Vector3d* duals = cell_duals(dm, c);
    // Scalar pairing integrals per lattice-point pair, accumulated once per
    // unordered pair so the matrix is symmetric to the last bit.
    Eigen::MatrixXd pp = Eigen::MatrixXd::Zero(npts, npts);
    for (int q = 0; q < rule.size(); ++q) {
      const double w = geom.measure * rule.weights[q];
      for (int pa = 0; pa < npts; ++pa) {
        const double va = tab.value(pa, q);
        if (va == 0) continue;
        const double wva = w * va;
        pp(pa, pa) += wva * va;
        for (int pb = pa + 1; pb < npts; ++pb) {
          const double x = wva * tab.value(pb, q);
          pp(pa, pb) += x;
          pp(pb, pa) += x;
        }
      }
    }
    for (int a = 0; a < dm.ldof; ++a) {
      const int pa = dm.point_of(a);
      for (int b = 0; b < dm.ldof; ++b) {
        const int pb = dm.point_of(b);
        const double pair = duals ? duals[a].dot(duals[b]) : 1.0;
        const double v = pp(pa, pb) * pair;
        if (v != 0) t.push_back({dm.dof(c, a), dm.dof(c, b), v});
      }
    }
  }
  return CsrMatrix::from_triplets(dm.gdof, dm.gdof, std::move(t));
}

CsrMatrix assemble_mixed_divergence(const Mesh& mesh, const DofMap& flux,
                                    const DofMap& pressure, int quad_degree) {
  if (flux.vd <= 1 || pressure.vd != 1)
    throw std::invalid_argument(
        "assemble_mixed_divergence: needs a vector flux and a scalar pressure");
  const int qd = quad_degree >= 0 ? quad_degree : default_matrix_degree(flux);
  const QuadratureRule rule = simplex_rule(mesh.gdim, qd);
  const Tabulation vtab = tabulate(flux.lat, rule.points);
  const Tabulation ptab = tabulate(pressure.lat, rule.points);

  std::vector<Triplet> t;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geom = cell_geometry(mesh, c);
    const Eigen::Vector3d* duals = cell_duals(flux, c);
    for (int q = 0; q < rule.size(); ++q) {
      const double w = geom.measure * rule.weights[q];
      for (int a = 0; a < flux.ldof; ++a) {
        const double dv =
            phys_grad(vtab, geom, flux.point_of(a), q).dot(duals[a]);
        if (dv == 0) continue;
        for (int b = 0; b < pressure.ldof; ++b) {
          const double pv = ptab.value(b, q);
          if (pv == 0) continue;
          t.push_back({pressure.dof(c, b), flux.dof(c, a), -w * dv * pv});
        }
      }
    }
  }
  return CsrMatrix::from_triplets(pressure.gdof, flux.gdof, std::move(t));
}

CsrMatrix assemble_curl_curl(const Mesh& mesh, const DofMap& dm,
                             int quad_degree) {
  if (dm.vd <= 1)
    throw std::invalid_argument("assemble_curl_curl: needs a vector space");
  const int qd = quad_degree >= 0 ? quad_degree : default_matrix_degree(dm);
  const QuadratureRule rule = simplex_rule(mesh.gdim, qd);
  const Tabulation tab = tabulate(dm.lat, rule.points);

  std::vector<Triplet> t;
  std::vector<Eigen::Vector3d> cj(dm.ldof);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geom = cell_geometry(mesh, c);
    const Eigen::Vector3d* duals = cell_duals(dm, c);
    Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dm.ldof, dm.ldof);
    for (int q = 0; q < rule.size(); ++q) {
      const double w = geom.measure * rule.weights[q];
      for (int a = 0; a < dm.ldof; ++a)
        cj[a] = phys_grad(tab, geom, dm.point_of(a), q).cross(duals[a]);
      for (int a = 0; a < dm.ldof; ++a)
        for (int b = 0; b < dm.ldof; ++b) acc(a, b) += w * cj[a].dot(cj[b]);
    }
    for (int a = 0; a < dm.ldof; ++a)
      for (int b = 0; b < dm.ldof; ++b)
        if (acc(a, b) != 0) t.push_back({dm.dof(c, a), dm.dof(c, b), acc(a, b)});
  }
  return CsrMatrix::from_triplets(dm.gdof, dm.gdof, std::move(t));
}

Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dm,
                              const VectorField& f, int quad_degree) {
  if (dm.vd <= 1)
    throw std::invalid_argument("assemble_load: needs a vector space");
  const int qd = quad_degree >= 0 ? quad_degree : default_data_degree(dm);
  const QuadratureRule rule = simplex_rule(mesh.gdim, qd);
  const Tabulation tab = tabulate(dm.lat, rule.points);

  Eigen::VectorXd L = Eigen::VectorXd::Zero(dm.gdof);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geom = cell_geometry(mesh, c);
    const Eigen::Vector3d* duals = cell_duals(dm, c);
    for (int q = 0; q < rule.size(); ++q) {
      const double w = geom.measure * rule.weights[q];
      const Eigen::Vector3d fx = f(quad_point(mesh, c, rule.points[q]));
      for (int a = 0; a < dm.ldof; ++a) {
        const double phi = tab.value(dm.point_of(a), q);
        if (phi == 0) continue;
        L[dm.dof(c, a)] += w * phi * fx.dot(duals[a]);
      }
    }
  }
  return L;
}

Eigen::VectorXd assemble_scalar_load(const Mesh& mesh, const DofMap& dm,
                                     const ScalarField& f, int quad_degree) {
  if (dm.vd != 1)
    throw std::invalid_argument("assemble_scalar_load: needs a scalar space");
  const int qd = quad_degree >= 0 ? quad_degree : default_data_degree(dm);
  const QuadratureRule rule = simplex_rule(mesh.gdim, qd);
  const Tabulation tab = tabulate(dm.lat, rule.points);

  Eigen::VectorXd L = Eigen::VectorXd::Zero(dm.gdof);
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geom = cell_geometry(mesh, c);
    for (int q = 0; q < rule.size(); ++q) {
      const double w = geom.measure * rule.weights[q];
      const double fx = f(quad_point(mesh, c, rule.points[q]));
      for (int a = 0; a < dm.ldof; ++a) {
        const double phi = tab.value(a, q);
        if (phi != 0) L[dm.dof(c, a)] += w * phi * fx;
      }
    }
  }
  return L;
}

Eigen::VectorXd assemble_boundary_normal_flux(const Mesh& mesh, const DofMap& dm,
                                              const ScalarField& g,
                                              int quad_degree) {
  if (dm.vd <= 1)
    throw std::invalid_argument(
        "assemble_boundary_normal_flux: needs a vector space");
  const int qd = quad_degree >= 0 ? quad_degree : default_data_degree(dm);
  const QuadratureRule rule = facet_rule(mesh.gdim, qd);

  Eigen::VectorXd L = Eigen::VectorXd::Zero(dm.gdof);
  for (int fid = 0; fid < mesh.num_facets(); ++fid) {
    if (mesh.facet2cell[fid][1] >= 0) continue;  // interior facet
    const int c = mesh.facet2cell[fid][0];
    int loc = -1;
    for (int i = 0; i <= mesh.gdim; ++i)
      if (mesh.cell_facet(c, i) == fid) loc = i;
    if (loc < 0)
      throw std::logic_error("assemble_boundary_normal_flux: facet not in cell");
    const Eigen::Vector3d n = outward_facet_normal(mesh, c, loc);
    const std::vector<int> fv = mesh.facet_vertices(fid);
    const double area = facet_measure(mesh, fid);

    for (int q = 0; q < rule.size(); ++q) {
      // Embed the facet barycentric point into the cell.
      std::vector<double> lam(mesh.gdim + 1, 0.0);
      Eigen::Vector3d x = Eigen::Vector3d::Zero();
      for (size_t t = 0; t < fv.size(); ++t) {
        lam[mesh.local_vertex(c, fv[t])] = rule.points[q][t];
        x += rule.points[q][t] * mesh.node(fv[t]);
      }
      const double w = area * rule.weights[q] * g(x);
      const Eigen::Vector3d* duals = cell_duals(dm, c);
      for (int a = 0; a < dm.ldof; ++a) {
        const double phi = eval_lagrange(dm.lat.points[dm.point_of(a)], lam, dm.k);
        if (phi == 0) continue;
        L[dm.dof(c, a)] += w * phi * duals[a].dot(n);
      }
    }
  }
  return L;
}

void apply_essential_bc(CsrMatrix& A, Eigen::VectorXd& b,
                        const std::vector<std::uint8_t>& mask,
                        const Eigen::VectorXd* values) {
  if (A.rows != A.cols || static_cast<int>(mask.size()) != A.rows ||
      b.size() != A.rows)
    throw std::invalid_argument("apply_essential_bc: size mismatch");
  if (values && values->size() != A.rows)
    throw std::invalid_argument("apply_essential_bc: bad value vector");

  std::vector<Triplet> keep;
  keep.reserve(A.vals.size() + A.rows);
  for (int r = 0; r < A.rows; ++r) {
    for (int p = A.row_ptr[r]; p < A.row_ptr[r + 1]; ++p) {
      const int c = A.col_idx[p];
      const double v = A.vals[p];
      if (!mask[r] && !mask[c]) {
        keep.push_back({r, c, v});
      } else if (!mask[r] && mask[c]) {
        if (values) b[r] -= v * (*values)[c];
      }
    }
  }
  for (int r = 0; r < A.rows; ++r)
    if (mask[r]) {
      keep.push_back({r, r, 1.0});
      b[r] = values ? (*values)[r] : 0.0;
    }
  A = CsrMatrix::from_triplets(A.rows, A.cols, std::move(keep));
}

namespace {

// Shared quadrature loop for the error norms.
template <typename Local>
double accumulate_error(const Mesh& mesh, const DofMap& dm, int quad_degree,
                        Local&& local) {
  const int qd = quad_degree >= 0 ? quad_degree : default_data_degree(dm);
  const QuadratureRule rule = simplex_rule(mesh.gdim, qd);
  const Tabulation tab = tabulate(dm.lat, rule.points);
  double acc = 0;
  for (int c = 0; c < mesh.num_cells(); ++c) {
    const CellGeometry geom = cell_geometry(mesh, c);
    for (int q = 0; q < rule.size(); ++q)
      acc += geom.measure * rule.weights[q] * local(c, q, rule, tab, geom);
  }
  return std::sqrt(acc);
}

}  // namespace

double l2_error(const Mesh& mesh, const DofMap& dm, const Eigen::VectorXd& coeff,
                const VectorField& exact, int quad_degree) {
  if (dm.vd <= 1) throw std::invalid_argument("l2_error: needs a vector space");
  return accumulate_error(
      mesh, dm, quad_degree,
      [&](int c, int q, const QuadratureRule& rule, const Tabulation& tab,
          const CellGeometry&) {
        const Eigen::Vector3d* duals = cell_duals(dm, c);
        Eigen::Vector3d uh = Eigen::Vector3d::Zero();
        for (int a = 0; a < dm.ldof; ++a) {
          const double phi = tab.value(dm.point_of(a), q);
          if (phi != 0) uh += coeff[dm.dof(c, a)] * phi * duals[a];
        }
        return (uh - exact(quad_point(mesh, c, rule.points[q]))).squaredNorm();
      });
}

double l2_error_scalar(const Mesh& mesh, const DofMap& dm,
                       const Eigen::VectorXd& coeff, const ScalarField& exact,
                       int quad_degree) {
  if (dm.vd != 1)
    throw std::invalid_argument("l2_error_scalar: needs a scalar space");
  return accumulate_error(
      mesh, dm, quad_degree,
      [&](int c, int q, const QuadratureRule& rule, const Tabulation& tab,
          const CellGeometry&) {
        double uh = 0;
        for (int a = 0; a < dm.ldof; ++a)
          uh += coeff[dm.dof(c, a)] * tab.value(a, q);
        const double d = uh - exact(quad_point(mesh, c, rule.points[q]));
        return d * d;
      });
}

double curl_error(const Mesh& mesh, const DofMap& dm,
                  const Eigen::VectorXd& coeff, const VectorField& exact_curl,
                  int quad_degree) {
  if (dm.vd <= 1) throw std::invalid_argument("curl_error: needs a vector space");
  return accumulate_error(
      mesh, dm, quad_degree,
      [&](int c, int q, const QuadratureRule& rule, const Tabulation& tab,
          const CellGeometry& geom) {
        const Eigen::Vector3d* duals = cell_duals(dm, c);
        Eigen::Vector3d ch = Eigen::Vector3d::Zero();
        for (int a = 0; a < dm.ldof; ++a)
          ch += coeff[dm.dof(c, a)] *
                phys_grad(tab, geom, dm.point_of(a), q).cross(duals[a]);
        return (ch - exact_curl(quad_point(mesh, c, rule.points[q])))
            .squaredNorm();
      });
}

double div_error(const Mesh& mesh, const DofMap& dm,
                 const Eigen::VectorXd& coeff, const ScalarField& exact_div,
                 int quad_degree) {
  if (dm.vd <= 1) throw std::invalid_argument("div_error: needs a vector space");
  return accumulate_error(
      mesh, dm, quad_degree,
      [&](int c, int q, const QuadratureRule& rule, const Tabulation& tab,
          const CellGeometry& geom) {
        const Eigen::Vector3d* duals = cell_duals(dm, c);
        double dh = 0;
        for (int a = 0; a < dm.ldof; ++a)
          dh += coeff[dm.dof(c, a)] *
                phys_grad(tab, geom, dm.point_of(a), q).dot(duals[a]);
        const double d = dh - exact_div(quad_point(mesh, c, rule.points[q]));
        return d * d;
      });
}

}  // namespace tnfem
