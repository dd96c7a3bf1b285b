#pragma once

// Convergence studies on uniformly refined cube meshes: field interpolation,
// the mixed Poisson saddle system, and the curl-curl Maxwell system.  Each
// study returns a rate table (one row per refinement level) ready for CSV
// output, with observed orders computed from consecutive error ratios.

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "tnfem/assembly.hpp"
#include "tnfem/dofs.hpp"
#include "tnfem/solver.hpp"

namespace tnfem {

// One row per mesh in a refinement ladder; columns[j] names rows[i][j].
// Rows are ordered by decreasing mesh size h.
struct RateTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  // Writes "col0,col1,...\n" then one comma-separated row per line.
  // Rate entries that are undefined on the first level print as empty cells.
  void write_csv(std::ostream& os) const;
};

struct StudyOptions {
  int quad_degree = -1;         // -1: per-assembly defaults
  std::string solver = "auto";  // auto | lu | cg | minres
  double tol = 1e-10;           // iterative solver tolerance
  std::vector<int> ladder;      // subdivisions per level; empty: default
};

// Default mesh ladder: `levels` doublings starting from first_n.
std::vector<int> default_ladder(int first_n, int levels);

// Manufactured data for the mixed Poisson study: pressure
// p = cos(pi x) cos(pi y) cos(pi z), flux u = -grad p, source f = div u,
// natural boundary data g = p.
struct MixedPoissonProblem {
  ScalarField pressure;
  VectorField flux;
  ScalarField source;
};
MixedPoissonProblem mixed_poisson_problem();

// Manufactured data for the curl-curl study: E = (f, sin(x) f, sin(y) f)
// with f = (x^2-x)(y^2-y)(z^2-z), so E vanishes on the unit-cube boundary;
// J = curl curl E - E.
struct MaxwellProblem {
  VectorField solution;
  VectorField curl;
  VectorField source;
};
MaxwellProblem maxwell_problem();

// L2 interpolation error of a fixed smooth field into the chosen space on
// meshes N = 2^0, 2^1, ... (levels >= 2).  Columns: h, gdof, err_l2, rate_l2.
// space: "lagrange" | "bdm" | "nedelec".
RateTable run_interp_study(int dim, const std::string& space, int k,
                           int levels, const StudyOptions& opts = {});

// Mixed formulation of the Poisson problem on the unit cube: flux in the
// degree-k divergence-conforming space, pressure in discontinuous degree
// k-1, natural pressure data on the whole boundary.  Columns:
// h, gdof, err_flux, rate_flux, err_pressure, rate_pressure.
RateTable run_mixed_poisson(int k, int levels, const StudyOptions& opts = {});

// Curl-curl source problem (frequency shift -1) on the unit cube with an
// exact solution vanishing on the boundary, essential tangential conditions
// eliminated.  Columns: h, gdof, err_l2, rate_l2, err_curl, rate_curl.
RateTable run_maxwell(int k, int levels, const StudyOptions& opts = {});

// Per-entity-block degree-of-freedom counts for one space on one mesh.
struct BlockCounts {
  long gdof = 0;
  long vertex = 0;  // vertex-attached dofs (nodal spaces)
  long edge = 0;
  long face = 0;
  long facet = 0;  // facet-attached dofs (divergence-conforming spaces)
  long cell = 0;
  int ldof = 0;  // per-cell count
};

BlockCounts count_blocks(const Mesh& mesh, const std::string& space, int k);

}  // namespace tnfem
