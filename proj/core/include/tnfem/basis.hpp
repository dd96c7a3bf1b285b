#pragma once

#include <vector>

#include "tnfem/lattice.hpp"

namespace tnfem {

// Nodal shape function of the lattice point a on the degree-k lattice,
// evaluated at barycentric coordinates lam:
//
//   phi_a(lam) = (1/a!) * prod_i prod_{j=0..a_i-1} (k*lam_i - j)
//
// It is 1 at a/k and 0 at every other lattice point.  k = 0 gives the
// constant 1.
double eval_lagrange(const MultiIndex& a, const std::vector<double>& lam, int k);

// Partial derivatives of phi_a with respect to each barycentric coordinate,
// treating them as independent variables.  The physical gradient on a cell
// is sum_i d[i] * grad_lambda[i].  Computed with prefix/suffix products, so
// zero factors are handled without division.
std::vector<double> grad_lagrange(const MultiIndex& a, const std::vector<double>& lam, int k);

struct Tabulation {
  int num_fn = 0;
  int num_pts = 0;
  int nbary = 0;
  std::vector<double> values;  // num_fn x num_pts
  std::vector<double> dbary;   // num_fn x num_pts x nbary
  double value(int f, int q) const { return values[f * num_pts + q]; }
  double dvalue(int f, int q, int i) const { return dbary[(f * num_pts + q) * nbary + i]; }
};

// All lattice shape functions (rank order) at the given barycentric points.
Tabulation tabulate(const SimplicialLattice& lat, const std::vector<std::vector<double>>& pts);

// Barycentric monomial lam^a (no multinomial scaling).
double bernstein(const MultiIndex& a, const std::vector<double>& lam);

// Product of the barycentric coordinates named by f; vanishes on the
// boundary sub-simplices that do not contain f.
double bubble(const std::vector<int>& f, const std::vector<double>& lam);

}  // namespace tnfem
