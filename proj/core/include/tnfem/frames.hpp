#pragma once

#include <array>

#include <Eigen/Dense>

#include "tnfem/lattice.hpp"
#include "tnfem/mesh.hpp"

namespace tnfem {

// Which mesh entity a directional dof slot lives on.  Slots owned by an edge
// or face are shared by every cell containing that entity; Cell slots are
// private to the cell that created them.
enum class OwnerKind { Cell, Edge, Face };

struct DofOwner {
  OwnerKind kind = OwnerKind::Cell;
  int entity = -1;  // global edge/face id; -1 for Cell

  friend bool operator==(const DofOwner& a, const DofOwner& b) {
    return a.kind == b.kind && a.entity == b.entity;
  }
  friend bool operator!=(const DofOwner& a, const DofOwner& b) { return !(a == b); }
};

// Directional frame attached to one lattice point of a vector-valued element:
// gd unit directions dir[j], their dual vectors dual[i] (dual[i] . dir[j] =
// delta_ij), and the entity owning each slot.  Components beyond gd are unused.
struct PointFrame {
  int gd = 0;
  std::array<Eigen::Vector3d, 3> dir{};
  std::array<Eigen::Vector3d, 3> dual{};
  std::array<DofOwner, 3> owner{};
};

// Computes dual[0..gd-1] as the inverse-transpose of the direction matrix.
// Throws FrameError if the directions are (nearly) linearly dependent.
void fill_duals(PointFrame& frame);

// Identity frame: Cartesian directions, self-dual, all slots cell-private.
PointFrame cartesian_frame(int gd);

// Frame for the normal-continuous (div-conforming) element at the lattice
// point with multi-index `a` (length gd+1) of cell `cell`:
//  - points interior to the cell get the Cartesian frame;
//  - points on a sub-simplex f get the orthonormalized tangents of f
//    (cell-private) followed by the unit normals of the facets containing f,
//    one per cell-local vertex outside the support of `a` in ascending order,
//    each owned by that facet.
PointFrame bdm_point_frame(const Mesh& mesh, int cell, const MultiIndex& a);

// Frame for the tangent-continuous (curl-conforming) element at the lattice
// point with multi-index `a` of cell `cell`:
//  - vertex points: tangents of the adjacent edges in local edge order, each
//    owned by its edge;
//  - edge-interior points: the edge tangent (owned by the edge), then in 3D
//    the in-plane normals of the two incident faces (each owned by its face),
//    or in 2D the edge normal (cell-private);
//  - face-interior points (3D): two in-plane tangents owned by the face and
//    the face normal (cell-private);
//  - cell-interior points: the Cartesian frame.
PointFrame nedelec_point_frame(const Mesh& mesh, int cell, const MultiIndex& a);

}  // namespace tnfem
