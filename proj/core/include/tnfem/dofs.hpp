#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tnfem/frames.hpp"
#include "tnfem/lattice.hpp"
#include "tnfem/mesh.hpp"

namespace tnfem {

// Align a sub-simplex multi-index given in `lface` vertex order with the
// `gface` vertex order (both lists hold the same vertex ids).  Entry t of the
// result is the component of m at the vertex gface[t].  Works for any tuple
// length >= 2; throws std::invalid_argument on a vertex-set mismatch.
std::vector<int> reorder_face_index(const std::vector<int>& lface,
                                    const std::vector<int>& gface,
                                    const std::vector<int>& m);

// Rank of a strictly positive face multi-index (m0,m1,m2) among the interior
// points of its face lattice: (m1+m2-2)(m1+m2-1)/2 + m2 - 1.  Agrees with
// interior_rank on three components.
int face_interior_offset(const std::vector<int>& m);

// Global numbering of the scalar continuous Lagrange interpolation points:
// vertices first, then per-edge interior blocks, then per-face (3D), then
// per-cell, each block ordered by the reorder + interior-rank rules so all
// cells sharing an entity agree on the numbering.
struct LagrangePointMap {
  int k = 0;
  int gd = 0;
  int gdof = 0;
  int ldof = 0;                            // lattice points per cell
  std::vector<int> cell2ipoint;            // num_cells x ldof
  std::vector<Eigen::Vector3d> coords;     // per global point
  std::vector<std::uint8_t> on_boundary;   // per global point
  int edge_base = 0, face_base = 0, cell_base = 0;
  int per_edge = 0, per_face = 0, per_cell = 0;
};

LagrangePointMap build_cell2ipoint(const Mesh& mesh, int k);

enum class SpaceKind { Lagrange, BDM, Nedelec, Discontinuous };

// A finite element space over a mesh: the cell-to-global map plus, for vector
// spaces, the measurement direction (the dof functional is value . direction)
// and the dual expansion vector of every local slot.  Local slot j of a cell
// refers to lattice point j / vd with direction index j % vd.
struct DofMap {
  SpaceKind kind = SpaceKind::Lagrange;
  int k = 0;   // polynomial degree
  int gd = 0;  // geometric dimension
  int vd = 1;  // values per point: 1 for scalar spaces, gd for vector spaces
  int gdof = 0;
  int ldof = 0;
  SimplicialLattice lat;  // cell point lattice of degree k

  std::vector<int> cell2dof;               // num_cells x ldof
  std::vector<Eigen::Vector3d> dof_dir;    // num_cells x ldof (vector spaces)
  std::vector<Eigen::Vector3d> dof_dual;   // num_cells x ldof (vector spaces)
  std::vector<Eigen::Vector3d> dof2vector; // per global dof (vector spaces)
  std::vector<Eigen::Vector3d> dof2point;  // per global dof
  std::vector<std::uint8_t> boundary_mask; // per global dof

  // Block layout bookkeeping (meaning depends on the space kind).
  int scalar_gdof = 0;  // Lagrange: dofs per component
  int edge_base = 0, face_base = 0, cell_base = 0;
  int per_edge = 0, per_face = 0, per_cell = 0;

  int dof(int c, int j) const { return cell2dof[c * ldof + j]; }
  int point_of(int j) const { return j / vd; }
  int dir_of(int j) const { return j % vd; }
};

// Continuous Lagrange space with `components` values per point (1 or gd).
// Vector variant is component-major globally: dof = comp * scalar_gdof + id.
DofMap build_lagrange_dofmap(const Mesh& mesh, int k, int components);

// Div-conforming space: per global facet a block of one normal slot per point
// of the closed facet lattice (ordered by facet-lattice rank in sorted-global
// vertex order), then per cell the private slots in (point rank, direction)
// scan order.  boundary_mask marks the facet blocks of boundary facets.
DofMap build_bdm_dofmap(const Mesh& mesh, int k);

// Curl-conforming space: per global edge k+1 tangential slots (closed edge
// lattice); in 3D per global face k^2-1 slots (edge-interior points x in-face
// normal for the three face edges in sorted-global order, then face-interior
// points x the two face tangents); then per cell the private slots (3D:
// face-interior x face normal for local faces 0..3, then interior x axes;
// 2D: edge-interior x edge normal for local edges 0..2, then interior x
// axes).  boundary_mask marks blocks of boundary edges and faces.
DofMap build_nedelec_dofmap(const Mesh& mesh, int k);

// Discontinuous scalar space of degree k >= 0: per-cell blocks in point-rank
// order, no inter-cell coupling.
DofMap build_discontinuous_dofmap(const Mesh& mesh, int k);

}  // namespace tnfem
