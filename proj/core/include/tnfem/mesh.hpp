#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "tnfem/lattice.hpp"

namespace tnfem {

// Conforming simplicial mesh in dimension 2 or 3.
//
// Vertices are stored row-major; cells are (gdim+1)-tuples of vertex ids and
// must be positively oriented (counterclockwise triangles, positive-volume
// tets).  Edge and face lists are derived from the cells: ascending vertex
// tuples, listed in lexicographic order, so the numbering is reproducible for
// a given cell set.  cell2edge follows the local edge table; cell2face[4c+i]
// is the face opposite local vertex i.
struct Mesh {
  int gdim = 0;
  std::vector<double> coords;  // num_nodes x gdim
  std::vector<int> cells;      // num_cells x (gdim+1)

  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> faces;  // 3D only
  std::vector<int> cell2edge;             // num_cells x (2D: 3, 3D: 6)
  std::vector<int> cell2face;             // 3D: num_cells x 4
  std::vector<std::array<int, 2>> facet2cell;  // codim-1 entity -> cells, -1 = none
  std::vector<std::uint8_t> vertex_on_boundary;
  std::vector<std::uint8_t> edge_on_boundary;
  std::vector<std::uint8_t> face_on_boundary;  // 3D only

  int num_nodes() const { return static_cast<int>(coords.size()) / gdim; }
  int num_cells() const { return static_cast<int>(cells.size()) / (gdim + 1); }
  int num_edges() const { return static_cast<int>(edges.size()); }
  int num_faces() const { return static_cast<int>(faces.size()); }
  // Codim-1 entities: faces in 3D, edges in 2D.
  int num_facets() const { return gdim == 3 ? num_faces() : num_edges(); }

  int cell_vertex(int c, int i) const { return cells[c * (gdim + 1) + i]; }
  // Position of global vertex v within cell c.
  int local_vertex(int c, int v) const;
  Eigen::Vector3d node(int v) const;  // z = 0 in 2D

  // Global id of the facet opposite local vertex i of cell c.
  int cell_facet(int c, int i) const;
  std::vector<int> facet_vertices(int fid) const;  // ascending
};

// Validate raw arrays (range checks, distinct vertices, positive orientation)
// and derive the entity lists.  Throws MeshError / GeometryError.
Mesh build_mesh(int gdim, std::vector<double> coords, std::vector<int> cells);

// Uniform mesh of the unit square/cube.  2D: N x N squares, each split along
// the (i,j)-(i+1,j+1) diagonal.  3D: N^3 subcubes, each split into the six
// tetrahedra around its main diagonal, which makes neighbouring cubes match
// on their shared faces.
Mesh structured_cube(int gdim, int N);

// Text format: first data line "gdim num_nodes num_cells", then node lines,
// then zero-based cell lines.  '#' starts a comment, blank lines are skipped.
Mesh read_mesh(std::istream& in);
Mesh read_mesh_file(const std::string& path);
void write_mesh(const Mesh& mesh, std::ostream& out);

struct CellGeometry {
  double measure = 0;
  double diameter = 0;
  std::array<Eigen::Vector3d, 4> grad_lambda;  // gdim+1 used
};

CellGeometry cell_geometry(const Mesh& mesh, int c);

// Unit tangent of a global edge, directed from the smaller vertex id to the
// larger one.
Eigen::Vector3d edge_tangent(const Mesh& mesh, int e);

// Unit normal of a codim-1 entity, fixed by global vertex order alone:
// 3D faces (a<b<c) use (x_b-x_a) x (x_c-x_a); 2D edges rotate the tangent
// clockwise, (t_y, -t_x).
Eigen::Vector3d facet_normal(const Mesh& mesh, int fid);

// Unit vector tangent to the simplex spanned by f, orthogonal to its
// sub-simplex e, pointing from e toward the one vertex of f not in e.
// e and f are ascending global vertex lists with |f| = |e| + 1.  For a
// vertex inside an edge this is the tangent aimed at the other endpoint.
Eigen::Vector3d normal_toward_opposite(const Mesh& mesh, const std::vector<int>& e,
                                       const std::vector<int>& f);

// Outward unit normal of the facet opposite local vertex i of cell c,
// computed from the outward-oriented local vertex tables.
Eigen::Vector3d outward_facet_normal(const Mesh& mesh, int c, int i);

double facet_measure(const Mesh& mesh, int fid);

// Physical point with barycentric coordinates lam in cell c.
Eigen::Vector3d cell_point(const Mesh& mesh, int c, const std::vector<double>& lam);

}  // namespace tnfem
