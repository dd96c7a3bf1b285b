#include "tnfem/frames.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tnfem/error.hpp"

namespace tnfem {

namespace {

void check_point(const Mesh& mesh, int cell, const MultiIndex& a) {
  if (cell < 0 || cell >= mesh.num_cells())
    throw std::invalid_argument("point frame: cell out of range");
  if (static_cast<int>(a.size()) != mesh.gdim + 1)
    throw std::invalid_argument("point frame: multi-index length must be gdim+1");
  int sum = 0;
  for (int v : a) {
    if (v < 0) throw std::invalid_argument("point frame: negative multi-index entry");
    sum += v;
  }
  if (sum == 0) throw std::invalid_argument("point frame: zero multi-index");
}

int local_edge_index(int gd, int i, int j) {
  const auto& tables = sub_simplex_tables(gd);
  if (i > j) std::swap(i, j);
  for (int le = 0; le < static_cast<int>(tables.edges.size()); ++le)
    if (tables.edges[le][0] == i && tables.edges[le][1] == j) return le;
  throw std::invalid_argument("local_edge_index: vertices do not span an edge");
}

DofOwner cell_owner() { return DofOwner{OwnerKind::Cell, -1}; }

}  // namespace

void fill_duals(PointFrame& frame) {
  const int gd = frame.gd;
  if (gd == 2) {
    Eigen::Matrix2d A;
    for (int j = 0; j < 2; ++j) A.col(j) = frame.dir[j].head<2>();
    const double scale = frame.dir[0].norm() * frame.dir[1].norm();
    if (std::abs(A.determinant()) <= 1e-10 * scale)
      throw FrameError("frame directions are linearly dependent");
    const Eigen::Matrix2d D = A.inverse().transpose().eval();
    for (int i = 0; i < 2; ++i) frame.dual[i] = Eigen::Vector3d(D(0, i), D(1, i), 0.0);
    return;
  }
  if (gd == 3) {
    Eigen::Matrix3d A;
    for (int j = 0; j < 3; ++j) A.col(j) = frame.dir[j];
    const double scale = frame.dir[0].norm() * frame.dir[1].norm() * frame.dir[2].norm();
    if (std::abs(A.determinant()) <= 1e-10 * scale)
      throw FrameError("frame directions are linearly dependent");
    const Eigen::Matrix3d D = A.inverse().transpose().eval();
    for (int i = 0; i < 3; ++i) frame.dual[i] = D.col(i);
    return;
  }
  throw std::invalid_argument("fill_duals: gd must be 2 or 3");
}

PointFrame cartesian_frame(int gd) {
  if (gd != 2 && gd != 3) throw std::invalid_argument("cartesian_frame: gd must be 2 or 3");
  PointFrame frame;
  frame.gd = gd;
  for (int i = 0; i < gd; ++i) {
    frame.dir[i] = Eigen::Vector3d::Unit(i);
    frame.dual[i] = Eigen::Vector3d::Unit(i);
    frame.owner[i] = cell_owner();
  }
  return frame;
}

PointFrame bdm_point_frame(const Mesh& mesh, int cell, const MultiIndex& a) {
  check_point(mesh, cell, a);
  const int gd = mesh.gdim;
  std::vector<int> supp;
  for (int i = 0; i <= gd; ++i)
    if (a[i] > 0) supp.push_back(i);
  if (static_cast<int>(supp.size()) == gd + 1) return cartesian_frame(gd);

  PointFrame frame;
  frame.gd = gd;
  int nd = 0;

  // Tangents of the carrier sub-simplex, taken in ascending global vertex
  // order and orthonormalized, so every cell sharing the sub-simplex builds
  // the same tangent plane.  These slots stay cell-private.
  std::vector<int> gverts;
  for (int i : supp) gverts.push_back(mesh.cell_vertex(cell, i));
  std::sort(gverts.begin(), gverts.end());
  for (std::size_t j = 1; j < gverts.size(); ++j) {
    Eigen::Vector3d t = mesh.node(gverts[j]) - mesh.node(gverts[0]);
    const double raw = t.norm();
    for (int m = 0; m < nd; ++m) t -= t.dot(frame.dir[m]) * frame.dir[m];
    if (t.norm() <= 1e-12 * raw) throw FrameError("degenerate sub-simplex tangents");
    frame.dir[nd] = t.normalized();
    frame.owner[nd] = cell_owner();
    ++nd;
  }

  // One facet normal per cell-local vertex outside the support, ascending;
  // the slot is shared through that facet.
  for (int i = 0; i <= gd; ++i) {
    if (a[i] > 0) continue;
    const int fid = mesh.cell_facet(cell, i);
    frame.dir[nd] = facet_normal(mesh, fid);
    frame.owner[nd] = DofOwner{gd == 3 ? OwnerKind::Face : OwnerKind::Edge, fid};
    ++nd;
  }

  fill_duals(frame);
  return frame;
}

PointFrame nedelec_point_frame(const Mesh& mesh, int cell, const MultiIndex& a) {
  check_point(mesh, cell, a);
  const int gd = mesh.gdim;
  std::vector<int> supp;
  for (int i = 0; i <= gd; ++i)
    if (a[i] > 0) supp.push_back(i);
  const int s = static_cast<int>(supp.size());
  if (s == gd + 1) return cartesian_frame(gd);

  const auto& tables = sub_simplex_tables(gd);
  const int edges_per_cell = static_cast<int>(tables.edges.size());
  PointFrame frame;
  frame.gd = gd;

  if (s == 1) {
    // Vertex point: tangent of each adjacent edge, in local edge order.
    const int v = supp[0];
    int nd = 0;
    for (int le = 0; le < edges_per_cell; ++le) {
      if (tables.edges[le][0] != v && tables.edges[le][1] != v) continue;
      const int eg = mesh.cell2edge[cell * edges_per_cell + le];
      frame.dir[nd] = edge_tangent(mesh, eg);
      frame.owner[nd] = DofOwner{OwnerKind::Edge, eg};
      ++nd;
    }
  } else if (s == 2) {
    // Edge-interior point: the edge tangent first.
    const int le = local_edge_index(gd, supp[0], supp[1]);
    const int eg = mesh.cell2edge[cell * edges_per_cell + le];
    frame.dir[0] = edge_tangent(mesh, eg);
    frame.owner[0] = DofOwner{OwnerKind::Edge, eg};
    if (gd == 2) {
      // The in-plane edge normal completes the frame; only the tangential
      // component is shared, so this slot stays cell-private.
      frame.dir[1] = facet_normal(mesh, eg);
      frame.owner[1] = cell_owner();
    } else {
      // In-plane normals of the two faces containing the edge, in
      // opposite-vertex face order; each is shared through its face.
      const std::vector<int> ev = {mesh.edges[eg][0], mesh.edges[eg][1]};
      int nd = 1;
      for (int j = 0; j <= gd; ++j) {
        if (j == supp[0] || j == supp[1]) continue;
        const int fg = mesh.cell2face[cell * 4 + j];
        const std::vector<int> fv = {mesh.faces[fg][0], mesh.faces[fg][1], mesh.faces[fg][2]};
        frame.dir[nd] = normal_toward_opposite(mesh, ev, fv);
        frame.owner[nd] = DofOwner{OwnerKind::Face, fg};
        ++nd;
      }
    }
  } else {
    // Face-interior point in 3D: two in-plane tangents shared through the
    // face, plus the cell-private face normal.  The triple is orthonormal.
    const int j = 6 - supp[0] - supp[1] - supp[2];
    const int fg = mesh.cell2face[cell * 4 + j];
    const Eigen::Vector3d t1 =
        (mesh.node(mesh.faces[fg][1]) - mesh.node(mesh.faces[fg][0])).normalized();
    const Eigen::Vector3d n = facet_normal(mesh, fg);
    frame.dir[0] = t1;
    frame.dir[1] = t1.cross(n);
    frame.dir[2] = n;
    frame.owner[0] = DofOwner{OwnerKind::Face, fg};
    frame.owner[1] = DofOwner{OwnerKind::Face, fg};
    frame.owner[2] = cell_owner();
  }

  fill_duals(frame);
  return frame;
}

}  // namespace tnfem
