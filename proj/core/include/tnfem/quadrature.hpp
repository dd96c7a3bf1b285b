#pragma once

#include <vector>

namespace tnfem {

// Quadrature on the reference simplex, stored in barycentric coordinates.
// Weights are normalized to sum to 1; integrating f over a physical cell T is
// |T| * sum_q w_q f(x_q).  A few hand-tabulated low-order rules carry one
// negative weight; the total |w| mass stays small (<= 10 at every supported
// degree), so double-precision cancellation is benign.
struct QuadratureRule {
  int dim = 0;
  int degree = 0;  // polynomial exactness actually delivered (>= requested)
  std::vector<double> weights;
  std::vector<std::vector<double>> points;  // npts x (dim+1)
  int size() const { return static_cast<int>(weights.size()); }
};

// Rule exact for polynomials of total degree `degree` on the dim-simplex,
// dim = 1, 2, or 3.  Small hand-tabulated symmetric rules cover degree <= 4
// (<= 3 in 3D); higher degrees use conical product rules (Gauss points
// matched to the collapsed-coordinate Jacobian), which extend to any degree
// with strictly positive weights.
QuadratureRule simplex_rule(int dim, int degree);

// Rule on a codim-1 facet of a dim-simplex.
QuadratureRule facet_rule(int dim, int degree);

}  // namespace tnfem
