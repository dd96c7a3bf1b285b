// Command-line driver for lattice dumps, degree-of-freedom reports, and the
// convergence studies.  All tabular output is CSV, written to stdout or to
// --out PATH; the exit code is 0 exactly when every requested computation
// succeeds.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "tnfem/basis.hpp"
#include "tnfem/dofs.hpp"
#include "tnfem/experiments.hpp"
#include "tnfem/lattice.hpp"
#include "tnfem/mesh.hpp"

namespace {

using namespace tnfem;

// Resolves --out: stdout when empty, otherwise a fresh file.
class OutputStream {
 public:
  explicit OutputStream(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw std::runtime_error("cannot open output file: " + path);
    }
  }
  std::ostream& get() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

Mesh reference_simplex(int dim) {
  if (dim == 2) return build_mesh(2, {0, 0, 1, 0, 0, 1}, {0, 1, 2});
  if (dim == 3)
    return build_mesh(3, {0, 0, 0, 1, 0, 0, 0, 1, 0, 0, 0, 1}, {0, 1, 2, 3});
  throw std::invalid_argument("dim must be 2 or 3");
}

// --mesh PATH beats --cube N beats the one-cell reference simplex.
Mesh resolve_mesh(const std::string& mesh_path, int cube_n, int dim) {
  if (!mesh_path.empty()) return read_mesh_file(mesh_path);
  if (cube_n > 0) return structured_cube(dim, cube_n);
  return reference_simplex(dim);
}

DofMap build_space(const Mesh& mesh, const std::string& space, int k) {
  if (space == "lagrange") return build_lagrange_dofmap(mesh, k, 1);
  if (space == "bdm") return build_bdm_dofmap(mesh, k);
  if (space == "nedelec") return build_nedelec_dofmap(mesh, k);
  throw std::invalid_argument("unknown space: " + space);
}

void cmd_lattice_dump(int dim, int k, std::ostream& os) {
  const SimplicialLattice lat = lattice_points(dim, k);
  os << "rank";
  for (int i = 0; i <= dim; ++i) os << ",alpha" << i;
  for (int i = 0; i <= dim; ++i) os << ",lambda" << i;
  os << "\n";
  for (int r = 0; r < lat.size(); ++r) {
    os << r;
    const std::vector<int>& a = lat.points[r];
    for (int i = 0; i <= dim; ++i) os << "," << a[i];
    for (int i = 0; i <= dim; ++i)
      os << "," << (k > 0 ? static_cast<double>(a[i]) / k : 1.0);
    os << "\n";
  }
}

void print_block_counts(const BlockCounts& bc, std::ostream& os) {
  os << "block,count\n";
  if (bc.vertex) os << "vertex," << bc.vertex << "\n";
  if (bc.edge) os << "edge," << bc.edge << "\n";
  if (bc.face) os << "face," << bc.face << "\n";
  if (bc.facet) os << "facet," << bc.facet << "\n";
  if (bc.cell) os << "cell," << bc.cell << "\n";
  os << "total," << bc.gdof << "\n";
  os << "per_cell," << bc.ldof << "\n";
}

void cmd_dofs(const Mesh& mesh, const std::string& space, int k,
              bool with_table, std::ostream& os) {
  print_block_counts(count_blocks(mesh, space, k), os);
  if (!with_table) return;
  const DofMap dm = build_space(mesh, space, k);
  os << "cell";
  for (int j = 0; j < dm.ldof; ++j) os << ",dof" << j;
  os << "\n";
  for (int c = 0; c < mesh.num_cells(); ++c) {
    os << c;
    for (int j = 0; j < dm.ldof; ++j) os << "," << dm.dof(c, j);
    os << "\n";
  }
}

void cmd_dims(const Mesh& mesh, int k, std::ostream& os) {
  os << "space,degree,gdof,vertex,edge,face,facet,cell,per_cell\n";
  for (const char* space : {"lagrange", "bdm", "nedelec"}) {
    const BlockCounts bc = count_blocks(mesh, space, k);
    os << space << "," << k << "," << bc.gdof << "," << bc.vertex << ","
       << bc.edge << "," << bc.face << "," << bc.facet << "," << bc.cell << ","
       << bc.ldof << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simplicial finite element studies"};
  app.require_subcommand(1);

  int degree = 1, levels = 3, dim = 3, quad_degree = -1, cube_n = 0;
  double tol = 1e-10;
  std::string space = "lagrange", solver = "auto", out_path, mesh_path;
  bool with_table = false;

  const auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", out_path, "write CSV to this file instead of stdout");
  };
  const auto add_mesh = [&](CLI::App* cmd) {
    cmd->add_option("--mesh", mesh_path, "mesh file (text format)");
    cmd->add_option("--cube", cube_n, "use a structured cube with N subdivisions");
    cmd->add_option("--dim", dim, "dimension of the default reference simplex")
        ->check(CLI::Range(2, 3));
  };
  const auto add_study = [&](CLI::App* cmd) {
    cmd->add_option("--degree", degree, "polynomial degree")->check(CLI::Range(1, 16));
    cmd->add_option("--levels", levels, "number of refinement levels");
    cmd->add_option("--tol", tol, "iterative solver tolerance");
    cmd->add_option("--solver", solver, "auto | lu | cg | minres")
        ->check(CLI::IsMember({"auto", "lu", "cg", "minres"}));
    cmd->add_option("--quad-degree", quad_degree,
                    "quadrature degree override (-1: per-form default)");
    add_out(cmd);
  };

  CLI::App* lat = app.add_subcommand(
      "lattice-dump", "print the degree-k point lattice of the n-simplex");
  lat->add_option("--dim", dim, "simplex dimension")->check(CLI::Range(0, 8));
  lat->add_option("--degree", degree, "lattice degree")->check(CLI::Range(0, 32));
  add_out(lat);

  CLI::App* dofs = app.add_subcommand(
      "dofs", "per-block degree-of-freedom counts for one space on one mesh");
  dofs->add_option("--space", space, "lagrange | bdm | nedelec")
      ->check(CLI::IsMember({"lagrange", "bdm", "nedelec"}));
  dofs->add_option("--degree", degree, "polynomial degree")->check(CLI::Range(1, 16));
  dofs->add_flag("--cell2dof", with_table, "also print the cell-to-global table");
  add_mesh(dofs);
  add_out(dofs);

  CLI::App* dims = app.add_subcommand(
      "dims", "dimension table of all spaces at one degree on one mesh");
  dims->add_option("--degree", degree, "polynomial degree")->check(CLI::Range(1, 16));
  add_mesh(dims);
  add_out(dims);

  CLI::App* interp = app.add_subcommand(
      "interp", "L2 interpolation error study on refined cube meshes");
  interp->add_option("--space", space, "lagrange | bdm | nedelec")
      ->check(CLI::IsMember({"lagrange", "bdm", "nedelec"}));
  interp->add_option("--dim", dim, "mesh dimension")->check(CLI::Range(2, 3));
  add_study(interp);

  CLI::App* mixed = app.add_subcommand(
      "poisson-mixed", "mixed Poisson convergence study (flux-pressure saddle)");
  add_study(mixed);

  CLI::App* maxw = app.add_subcommand(
      "maxwell", "curl-curl convergence study with essential tangential BC");
  add_study(maxw);

  CLI11_PARSE(app, argc, argv);

  try {
    OutputStream out(out_path);
    StudyOptions opts;
    opts.quad_degree = quad_degree;
    opts.solver = solver;
    opts.tol = tol;

    if (lat->parsed()) {
      cmd_lattice_dump(dim, degree, out.get());
    } else if (dofs->parsed()) {
      cmd_dofs(resolve_mesh(mesh_path, cube_n, dim), space, degree, with_table,
               out.get());
    } else if (dims->parsed()) {
      cmd_dims(resolve_mesh(mesh_path, cube_n, dim), degree, out.get());
    } else if (interp->parsed()) {
      run_interp_study(dim, space, degree, levels, opts).write_csv(out.get());
    } else if (mixed->parsed()) {
      run_mixed_poisson(degree, levels, opts).write_csv(out.get());
    } else if (maxw->parsed()) {
      run_maxwell(degree, levels, opts).write_csv(out.get());
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
