#include "tnfem/experiments.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "tnfem/assembly.hpp"

namespace tnfem {

namespace {

constexpr double kPi = 3.14159265358979323846;

double max_diameter(const Mesh& mesh) {
  double h = 0;
  for (int c = 0; c < mesh.num_cells(); ++c)
    h = std::max(h, cell_geometry(mesh, c).diameter);
  return h;
}

std::vector<int> resolve_ladder(const StudyOptions& opts, int first_n,
                                int levels, int min_levels) {
  std::vector<int> ladder = opts.ladder;
  if (ladder.empty()) ladder = default_ladder(first_n, levels);
  if (static_cast<int>(ladder.size()) < min_levels)
    throw std::invalid_argument("study needs at least " +
                                std::to_string(min_levels) + " levels");
  for (int n : ladder)
    if (n < 1) throw std::invalid_argument("mesh subdivision must be >= 1");
  return ladder;
}

// err and rate columns appended pairwise; the first-level rate is NaN.
void append_error(std::vector<double>& row, const std::vector<double>& history,
                  double err) {
  row.push_back(err);
  if (history.empty() || history.back() <= 0 || err <= 0)
    row.push_back(std::numeric_limits<double>::quiet_NaN());
  else
    row.push_back(std::log2(history.back() / err));
}

SolverOptions make_solver_options(const StudyOptions& opts) {
  SolverOptions so;
  so.method = opts.solver;
  so.tol = opts.tol;
  return so;
}

// C + alpha * D with matching shapes.
CsrMatrix csr_add(const CsrMatrix& C, const CsrMatrix& D, double alpha) {
  if (C.rows != D.rows || C.cols != D.cols)
    throw std::invalid_argument("csr_add: shape mismatch");
  std::vector<Triplet> t;
  t.reserve(C.vals.size() + D.vals.size());
  for (int r = 0; r < C.rows; ++r)
    for (int s = C.row_ptr[r]; s < C.row_ptr[r + 1]; ++s)
      t.push_back({r, C.col_idx[s], C.vals[s]});
  for (int r = 0; r < D.rows; ++r)
    for (int s = D.row_ptr[r]; s < D.row_ptr[r + 1]; ++s)
      t.push_back({r, D.col_idx[s], alpha * D.vals[s]});
  return CsrMatrix::from_triplets(C.rows, C.cols, std::move(t));
}

// Smooth non-polynomial test fields for the interpolation study.
double interp_scalar_field(const Eigen::Vector3d& x) {
  return std::sin(1.3 * x[0] + 0.3) * std::cos(1.1 * x[1] - 0.2) *
         std::exp(0.2 * x[2]);
}

Eigen::Vector3d interp_vector_field(const Eigen::Vector3d& x, int dim) {
  Eigen::Vector3d u;
  u[0] = std::sin(1.2 * x[0] + 0.1) * std::cos(0.8 * x[1]) * std::exp(0.1 * x[2]);
  u[1] = std::cos(0.9 * x[0]) * std::sin(1.1 * x[1] + 0.2) * std::exp(-0.1 * x[2]);
  u[2] = dim == 3 ? std::sin(0.7 * x[0] + 0.4) * std::cos(1.3 * x[2]) : 0.0;
  return u;
}

}  // namespace

void RateTable::write_csv(std::ostream& os) const {
  for (std::size_t j = 0; j < columns.size(); ++j)
    os << (j ? "," : "") << columns[j];
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j) {
      if (j) os << ",";
      if (!std::isnan(row[j])) {
        std::ostringstream cell;
        cell << std::setprecision(12) << row[j];
        os << cell.str();
      }
    }
    os << "\n";
  }
}

std::vector<int> default_ladder(int first_n, int levels) {
  std::vector<int> ladder;
  for (int l = 0; l < levels; ++l) ladder.push_back(first_n << l);
  return ladder;
}

RateTable run_interp_study(int dim, const std::string& space, int k,
                           int levels, const StudyOptions& opts) {
  if (dim != 2 && dim != 3)
    throw std::invalid_argument("interpolation study: dim must be 2 or 3");
  if (k < 1) throw std::invalid_argument("interpolation study: degree must be >= 1");
  const std::vector<int> ladder = resolve_ladder(opts, 1, levels, 2);

  RateTable table;
  table.columns = {"h", "gdof", "err_l2", "rate_l2"};
  std::vector<double> history;
  for (int n : ladder) {
    const Mesh mesh = structured_cube(dim, n);
    double err = 0;
    int gdof = 0;
    if (space == "lagrange") {
      const DofMap dm = build_lagrange_dofmap(mesh, k, 1);
      const Eigen::VectorXd u = interpolate_scalar(dm, interp_scalar_field);
      err = l2_error_scalar(mesh, dm, u, interp_scalar_field, opts.quad_degree);
      gdof = dm.gdof;
    } else if (space == "bdm" || space == "nedelec") {
      const DofMap dm = space == "bdm" ? build_bdm_dofmap(mesh, k)
                                       : build_nedelec_dofmap(mesh, k);
      const VectorField f = [dim](const Eigen::Vector3d& x) {
        return interp_vector_field(x, dim);
      };
      const Eigen::VectorXd u = interpolate(dm, f);
      err = l2_error(mesh, dm, u, f, opts.quad_degree);
      gdof = dm.gdof;
    } else {
      throw std::invalid_argument("unknown space: " + space);
    }
    std::vector<double> row = {max_diameter(mesh), static_cast<double>(gdof)};
    append_error(row, history, err);
    history.push_back(err);
    table.rows.push_back(std::move(row));
  }
  return table;
}

MixedPoissonProblem mixed_poisson_problem() {
  MixedPoissonProblem prob;
  prob.pressure = [](const Eigen::Vector3d& x) {
    return std::cos(kPi * x[0]) * std::cos(kPi * x[1]) * std::cos(kPi * x[2]);
  };
  prob.flux = [](const Eigen::Vector3d& x) {
    const double cx = std::cos(kPi * x[0]), sx = std::sin(kPi * x[0]);
    const double cy = std::cos(kPi * x[1]), sy = std::sin(kPi * x[1]);
    const double cz = std::cos(kPi * x[2]), sz = std::sin(kPi * x[2]);
    return Eigen::Vector3d(kPi * sx * cy * cz, kPi * cx * sy * cz,
                           kPi * cx * cy * sz);
  };
  prob.source = [p = prob.pressure](const Eigen::Vector3d& x) {
    return 3 * kPi * kPi * p(x);
  };
  return prob;
}

RateTable run_mixed_poisson(int k, int levels, const StudyOptions& opts) {
  if (k < 1) throw std::invalid_argument("mixed study: degree must be >= 1");
  const std::vector<int> ladder = resolve_ladder(opts, k == 1 ? 2 : 1, levels, 1);

  const MixedPoissonProblem prob = mixed_poisson_problem();
  const ScalarField& p_exact = prob.pressure;
  const VectorField& u_exact = prob.flux;
  const ScalarField& f = prob.source;

  RateTable table;
  table.columns = {"h",        "gdof",      "err_flux",     "rate_flux",
                   "err_pressure", "rate_pressure"};
  std::vector<double> hist_u, hist_p;
  for (int n : ladder) {
    const Mesh mesh = structured_cube(3, n);
    const DofMap flux = build_bdm_dofmap(mesh, k);
    const DofMap pres = build_discontinuous_dofmap(mesh, k - 1);
    const CsrMatrix M = assemble_vector_mass(mesh, flux, opts.quad_degree);
    const CsrMatrix B =
        assemble_mixed_divergence(mesh, flux, pres, opts.quad_degree);
    const CsrMatrix S = block_saddle(M, B);

    Eigen::VectorXd rhs(S.rows);
    rhs.head(flux.gdof) =
        -assemble_boundary_normal_flux(mesh, flux, p_exact, opts.quad_degree);
    rhs.tail(pres.gdof) =
        -assemble_scalar_load(mesh, pres, f, opts.quad_degree);

    const Eigen::VectorXd x = solve(S, rhs, make_solver_options(opts));
    const Eigen::VectorXd xu = x.head(flux.gdof);
    const Eigen::VectorXd xp = x.tail(pres.gdof);

    std::vector<double> row = {max_diameter(mesh), static_cast<double>(S.rows)};
    append_error(row, hist_u,
                 l2_error(mesh, flux, xu, u_exact, opts.quad_degree));
    hist_u.push_back(row[2]);
    append_error(row, hist_p,
                 l2_error_scalar(mesh, pres, xp, p_exact, opts.quad_degree));
    hist_p.push_back(row[4]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

namespace {

// Value and first/second partial derivatives of f = (x^2-x)(y^2-y)(z^2-z).
struct BubblePartials {
  double f, fx, fy, fz, fxx, fyy, fzz, fxy, fxz, fyz;
};

BubblePartials bubble_partials(const Eigen::Vector3d& p) {
  const double x = p[0], y = p[1], z = p[2];
  const double X = x * x - x, Y = y * y - y, Z = z * z - z;
  const double Xd = 2 * x - 1, Yd = 2 * y - 1, Zd = 2 * z - 1;
  BubblePartials d;
  d.f = X * Y * Z;
  d.fx = Xd * Y * Z;
  d.fy = X * Yd * Z;
  d.fz = X * Y * Zd;
  d.fxx = 2 * Y * Z;
  d.fyy = 2 * X * Z;
  d.fzz = 2 * X * Y;
  d.fxy = Xd * Yd * Z;
  d.fxz = Xd * Y * Zd;
  d.fyz = X * Yd * Zd;
  return d;
}

}  // namespace

MaxwellProblem maxwell_problem() {
  MaxwellProblem prob;
  prob.solution = [](const Eigen::Vector3d& x) {
    const BubblePartials d = bubble_partials(x);
    return Eigen::Vector3d(d.f, std::sin(x[0]) * d.f, std::sin(x[1]) * d.f);
  };
  prob.curl = [](const Eigen::Vector3d& x) {
    const BubblePartials d = bubble_partials(x);
    const double sx = std::sin(x[0]), cx = std::cos(x[0]);
    const double sy = std::sin(x[1]), cy = std::cos(x[1]);
    return Eigen::Vector3d(cy * d.f + sy * d.fy - sx * d.fz,
                           d.fz - sy * d.fx,
                           cx * d.f + sx * d.fx - d.fy);
  };
  prob.source = [](const Eigen::Vector3d& x) {
    const BubblePartials d = bubble_partials(x);
    const double sx = std::sin(x[0]), cx = std::cos(x[0]);
    const double sy = std::sin(x[1]), cy = std::cos(x[1]);
    return Eigen::Vector3d(
        cx * d.fy + sx * d.fxy + sy * d.fxz - d.fyy - d.fzz - d.f,
        d.fxy + cy * d.fz + sy * d.fyz - 2 * cx * d.fx - sx * (d.fxx + d.fzz),
        d.fxz + sx * d.fyz - 2 * cy * d.fy - sy * (d.fxx + d.fyy));
  };
  return prob;
}

RateTable run_maxwell(int k, int levels, const StudyOptions& opts) {
  if (k < 1) throw std::invalid_argument("curl-curl study: degree must be >= 1");
  const std::vector<int> ladder = resolve_ladder(opts, 1, levels, 1);

  const MaxwellProblem prob = maxwell_problem();
  const VectorField& E_exact = prob.solution;
  const VectorField& curl_exact = prob.curl;
  const VectorField& J = prob.source;

  RateTable table;
  table.columns = {"h",      "gdof",    "err_l2", "rate_l2",
                   "err_curl", "rate_curl"};
  std::vector<double> hist_l2, hist_curl;
  for (int n : ladder) {
    const Mesh mesh = structured_cube(3, n);
    const DofMap dm = build_nedelec_dofmap(mesh, k);
    CsrMatrix A = csr_add(assemble_curl_curl(mesh, dm, opts.quad_degree),
                          assemble_vector_mass(mesh, dm, opts.quad_degree),
                          -1.0);
    Eigen::VectorXd b = assemble_load(mesh, dm, J, opts.quad_degree);
    apply_essential_bc(A, b, dm.boundary_mask);

    SolverOptions so = make_solver_options(opts);
    if (so.method == "auto")
      so.method = dm.gdof <= so.dense_limit ? "lu" : "minres";
    const Eigen::VectorXd x = solve(A, b, so);

    std::vector<double> row = {max_diameter(mesh), static_cast<double>(dm.gdof)};
    append_error(row, hist_l2, l2_error(mesh, dm, x, E_exact, opts.quad_degree));
    hist_l2.push_back(row[2]);
    append_error(row, hist_curl,
                 curl_error(mesh, dm, x, curl_exact, opts.quad_degree));
    hist_curl.push_back(row[4]);
    table.rows.push_back(std::move(row));
  }
  return table;
}

BlockCounts count_blocks(const Mesh& mesh, const std::string& space, int k) {
  BlockCounts bc;
  const long nc = mesh.num_cells();
  if (space == "lagrange") {
    const DofMap dm = build_lagrange_dofmap(mesh, k, 1);
    bc.gdof = dm.gdof;
    bc.ldof = dm.ldof;
    bc.vertex = mesh.num_nodes();
    bc.edge = static_cast<long>(mesh.num_edges()) * dm.per_edge;
    bc.face = mesh.gdim == 3 ? static_cast<long>(mesh.num_faces()) * dm.per_face
                             : 0;
    bc.cell = nc * dm.per_cell;
  } else if (space == "bdm") {
    const DofMap dm = build_bdm_dofmap(mesh, k);
    bc.gdof = dm.gdof;
    bc.ldof = dm.ldof;
    bc.facet = dm.cell_base;
    bc.cell = nc * dm.per_cell;
  } else if (space == "nedelec") {
    const DofMap dm = build_nedelec_dofmap(mesh, k);
    bc.gdof = dm.gdof;
    bc.ldof = dm.ldof;
    bc.edge = static_cast<long>(mesh.num_edges()) * dm.per_edge;
    bc.face = mesh.gdim == 3 ? static_cast<long>(mesh.num_faces()) * dm.per_face
                             : 0;
    bc.cell = nc * dm.per_cell;
  } else {
    throw std::invalid_argument("unknown space: " + space);
  }
  return bc;
}

}  // namespace tnfem
