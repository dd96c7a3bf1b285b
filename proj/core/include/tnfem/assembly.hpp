#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "tnfem/dofs.hpp"
#include "tnfem/mesh.hpp"

namespace tnfem {

struct Triplet {
  int r = 0, c = 0;
  double v = 0;
};

// Compressed sparse rows with sorted, deduplicated column indices.  Duplicate
// triplets are summed in insertion order after a stable sort by (row, col),
// so assembly is bit-reproducible for a fixed cell loop.
struct CsrMatrix {
  int rows = 0, cols = 0;
  std::vector<int> row_ptr;
  std::vector<int> col_idx;
  std::vector<double> vals;

  static CsrMatrix from_triplets(int rows, int cols, std::vector<Triplet> t);
  int nnz() const { return static_cast<int>(vals.size()); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  double coeff(int r, int c) const;  // zero when the entry is absent
  Eigen::MatrixXd dense() const;
};

// Symmetric saddle block matrix [[M, B^T], [B, 0]].
CsrMatrix block_saddle(const CsrMatrix& M, const CsrMatrix& B);

using ScalarField = std::function<double(const Eigen::Vector3d&)>;
using VectorField = std::function<Eigen::Vector3d(const Eigen::Vector3d&)>;

// Nodal interpolation: coefficient g is u(x_g) . dir_g for vector spaces and
// u(x_g) for scalar ones.
Eigen::VectorXd interpolate(const DofMap& dm, const VectorField& u);
Eigen::VectorXd interpolate_scalar(const DofMap& dm, const ScalarField& u);

// Piecewise evaluation of a coefficient vector.  Basis function j of a cell
// is the scalar shape function of its lattice point times the slot's dual
// vector, so values contract a scalar tabulation with the stored frames.
struct DiscreteField {
  const Mesh* mesh = nullptr;
  const DofMap* dm = nullptr;
  Eigen::VectorXd coeff;

  Eigen::Vector3d value(int c, const std::vector<double>& lam) const;
  double scalar_value(int c, const std::vector<double>& lam) const;
  Eigen::Vector3d gradient(int c, const std::vector<double>& lam) const;
  double divergence(int c, const std::vector<double>& lam) const;
  // 3D curl; in 2D only the z component (the scalar rot) is nonzero.
  Eigen::Vector3d curl(int c, const std::vector<double>& lam) const;
};

// Barycentric coordinates of a physical point with respect to cell c.
std::vector<double> barycentric_in_cell(const Mesh& mesh, int c,
                                        const Eigen::Vector3d& x);

// Bilinear forms.  quad_degree < 0 picks the default for the space degree.
CsrMatrix assemble_vector_mass(const Mesh& mesh, const DofMap& dm,
                               int quad_degree = -1);
// B[q, v] = -int div(phi_v) psi_q over pressure x flux spaces.
CsrMatrix assemble_mixed_divergence(const Mesh& mesh, const DofMap& flux,
                                    const DofMap& pressure,
                                    int quad_degree = -1);
CsrMatrix assemble_curl_curl(const Mesh& mesh, const DofMap& dm,
                             int quad_degree = -1);

// Right-hand sides.
Eigen::VectorXd assemble_load(const Mesh& mesh, const DofMap& dm,
                              const VectorField& f, int quad_degree = -1);
Eigen::VectorXd assemble_scalar_load(const Mesh& mesh, const DofMap& dm,
                                     const ScalarField& f, int quad_degree = -1);
// int_boundary g (v . n) ds with outward unit normals.
Eigen::VectorXd assemble_boundary_normal_flux(const Mesh& mesh, const DofMap& dm,
                                              const ScalarField& g,
                                              int quad_degree = -1);

// Symmetric elimination of constrained dofs: move their columns to the right
// hand side, zero the rows and columns, put 1 on the diagonal, and pin the
// solution values (zero when `values` is null).
void apply_essential_bc(CsrMatrix& A, Eigen::VectorXd& b,
                        const std::vector<std::uint8_t>& mask,
                        const Eigen::VectorXd* values = nullptr);

// L2-type errors against callbacks.
double l2_error(const Mesh& mesh, const DofMap& dm, const Eigen::VectorXd& coeff,
                const VectorField& exact, int quad_degree = -1);
double l2_error_scalar(const Mesh& mesh, const DofMap& dm,
                       const Eigen::VectorXd& coeff, const ScalarField& exact,
                       int quad_degree = -1);
double curl_error(const Mesh& mesh, const DofMap& dm,
                  const Eigen::VectorXd& coeff, const VectorField& exact_curl,
                  int quad_degree = -1);
double div_error(const Mesh& mesh, const DofMap& dm,
                 const Eigen::VectorXd& coeff, const ScalarField& exact_div,
                 int quad_degree = -1);

}  // namespace tnfem
