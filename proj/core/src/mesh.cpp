#include "tnfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include "tnfem/error.hpp"

namespace tnfem {

int Mesh::local_vertex(int c, int v) const {
  for (int i = 0; i <= gdim; ++i)
    if (cell_vertex(c, i) == v) return i;
  throw MeshError("vertex " + std::to_string(v) + " not in cell " + std::to_string(c));
}

Eigen::Vector3d Mesh::node(int v) const {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  for (int d = 0; d < gdim; ++d) x[d] = coords[v * gdim + d];
  return x;
}

int Mesh::cell_facet(int c, int i) const {
  if (gdim == 3) return cell2face[c * 4 + i];
  // 2D: the edge opposite vertex i in the lexicographic local edge table.
  return cell2edge[c * 3 + (2 - i)];
}

std::vector<int> Mesh::facet_vertices(int fid) const {
  if (gdim == 3) return {faces[fid][0], faces[fid][1], faces[fid][2]};
  return {edges[fid][0], edges[fid][1]};
}

namespace {

double signed_measure(const Mesh& mesh, int c) {
  const int n = mesh.gdim;
  Eigen::Matrix3d A = Eigen::Matrix3d::Identity();
  const Eigen::Vector3d x0 = mesh.node(mesh.cell_vertex(c, 0));
  for (int j = 1; j <= n; ++j) A.col(j - 1).head(n) = (mesh.node(mesh.cell_vertex(c, j)) - x0).head(n);
  double factorial = (n == 2) ? 2.0 : 6.0;
  return A.topLeftCorner(3, 3).determinant() / factorial;
}

void derive_entities(Mesh& mesh) {
  const int n = mesh.gdim;
  const int nc = mesh.num_cells();
  const auto& tables = sub_simplex_tables(n);

  std::map<std::array<int, 2>, int> edge_ids;
  for (int c = 0; c < nc; ++c) {
    for (const auto& le : tables.edges) {
      std::array<int, 2> e = {mesh.cell_vertex(c, le[0]), mesh.cell_vertex(c, le[1])};
      if (e[0] > e[1]) std::swap(e[0], e[1]);
      edge_ids.emplace(e, 0);
    }
  }
  mesh.edges.reserve(edge_ids.size());
  for (auto& [e, id] : edge_ids) {
    id = static_cast<int>(mesh.edges.size());
    mesh.edges.push_back(e);
  }
  mesh.cell2edge.assign(static_cast<std::size_t>(nc) * tables.edges.size(), -1);
  for (int c = 0; c < nc; ++c) {
    for (std::size_t le = 0; le < tables.edges.size(); ++le) {
      std::array<int, 2> e = {mesh.cell_vertex(c, tables.edges[le][0]),
                              mesh.cell_vertex(c, tables.edges[le][1])};
      if (e[0] > e[1]) std::swap(e[0], e[1]);
      mesh.cell2edge[c * tables.edges.size() + le] = edge_ids.at(e);
    }
  }

  if (n == 3) {
    std::map<std::array<int, 3>, int> face_ids;
    for (int c = 0; c < nc; ++c) {
      for (const auto& lf : tables.faces_sorted) {
        std::array<int, 3> f = {mesh.cell_vertex(c, lf[0]), mesh.cell_vertex(c, lf[1]),
                                mesh.cell_vertex(c, lf[2])};
        std::sort(f.begin(), f.end());
        face_ids.emplace(f, 0);
      }
    }
    for (auto& [f, id] : face_ids) {
      id = static_cast<int>(mesh.faces.size());
      mesh.faces.push_back(f);
    }
    mesh.cell2face.assign(static_cast<std::size_t>(nc) * 4, -1);
    for (int c = 0; c < nc; ++c) {
      for (int i = 0; i < 4; ++i) {
        const auto& lf = tables.faces_sorted[i];
        std::array<int, 3> f = {mesh.cell_vertex(c, lf[0]), mesh.cell_vertex(c, lf[1]),
                                mesh.cell_vertex(c, lf[2])};
        std::sort(f.begin(), f.end());
        mesh.cell2face[c * 4 + i] = face_ids.at(f);
      }
    }
  }

  const int nfacet = mesh.num_facets();
  mesh.facet2cell.assign(nfacet, {-1, -1});
  for (int c = 0; c < nc; ++c) {
    for (int i = 0; i <= n; ++i) {
      const int fid = mesh.cell_facet(c, i);
      auto& adj = mesh.facet2cell[fid];
      if (adj[0] == -1) {
        adj[0] = c;
      } else if (adj[1] == -1) {
        adj[1] = c;
      } else {
        throw MeshError("facet " + std::to_string(fid) + " shared by more than two cells");
      }
    }
  }

  mesh.vertex_on_boundary.assign(mesh.num_nodes(), 0);
  mesh.edge_on_boundary.assign(mesh.num_edges(), 0);
  if (n == 3) mesh.face_on_boundary.assign(mesh.num_faces(), 0);
  for (int fid = 0; fid < nfacet; ++fid) {
    if (mesh.facet2cell[fid][1] != -1) continue;
    const auto fv = mesh.facet_vertices(fid);
    for (int v : fv) mesh.vertex_on_boundary[v] = 1;
    if (n == 3) {
      mesh.face_on_boundary[fid] = 1;
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
          std::array<int, 2> e = {fv[a], fv[b]};
          const auto it = std::lower_bound(mesh.edges.begin(), mesh.edges.end(), e);
          mesh.edge_on_boundary[it - mesh.edges.begin()] = 1;
        }
    } else {
      mesh.edge_on_boundary[fid] = 1;
    }
  }
}

}  // namespace

Mesh build_mesh(int gdim, std::vector<double> coords, std::vector<int> cells) {
  if (gdim != 2 && gdim != 3) throw MeshError("only 2D and 3D meshes are supported");
  if (coords.size() % gdim != 0) throw MeshError("coordinate array size not a multiple of gdim");
  if (cells.size() % (gdim + 1) != 0) throw MeshError("cell array size not a multiple of gdim+1");
  Mesh mesh;
  mesh.gdim = gdim;
  mesh.coords = std::move(coords);
  mesh.cells = std::move(cells);

  const int nn = mesh.num_nodes();
  const int nc = mesh.num_cells();
  if (nc == 0) throw MeshError("mesh has no cells");
  for (int c = 0; c < nc; ++c) {
    std::array<int, 4> v = {0, 0, 0, 0};
    for (int i = 0; i <= gdim; ++i) {
      v[i] = mesh.cell_vertex(c, i);
      if (v[i] < 0 || v[i] >= nn)
        throw MeshError("cell " + std::to_string(c) + " references missing vertex " +
                        std::to_string(v[i]));
    }
    for (int i = 0; i <= gdim; ++i)
      for (int j = i + 1; j <= gdim; ++j)
        if (v[i] == v[j])
          throw MeshError("cell " + std::to_string(c) + " has repeated vertex " +
                          std::to_string(v[i]));
    double diam = 0;
    for (int i = 0; i <= gdim; ++i)
      for (int j = i + 1; j <= gdim; ++j)
        diam = std::max(diam, (mesh.node(v[i]) - mesh.node(v[j])).norm());
    const double sm = signed_measure(mesh, c);
    if (std::abs(sm) < 1e-14 * std::pow(diam, gdim))
      throw GeometryError("cell " + std::to_string(c) + " is degenerate");
    if (sm < 0)
      throw MeshError("cell " + std::to_string(c) +
                      " is negatively oriented; reorder its vertices");
  }

  derive_entities(mesh);
  return mesh;
}

Mesh structured_cube(int gdim, int N) {
  if (N < 1) throw MeshError("structured_cube: need N >= 1");
  std::vector<double> coords;
  std::vector<int> cells;
  if (gdim == 2) {
    const int m = N + 1;
    coords.reserve(static_cast<std::size_t>(m) * m * 2);
    for (int j = 0; j < m; ++j)
      for (int i = 0; i < m; ++i) {
        coords.push_back(static_cast<double>(i) / N);
        coords.push_back(static_cast<double>(j) / N);
      }
    auto vid = [m](int i, int j) { return i + j * m; };
    for (int j = 0; j < N; ++j)
      for (int i = 0; i < N; ++i) {
        const int v00 = vid(i, j), v10 = vid(i + 1, j);
        const int v01 = vid(i, j + 1), v11 = vid(i + 1, j + 1);
        cells.insert(cells.end(), {v00, v10, v11});
        cells.insert(cells.end(), {v00, v11, v01});
      }
  } else if (gdim == 3) {
    const int m = N + 1;
    coords.reserve(static_cast<std::size_t>(m) * m * m * 3);
    for (int k = 0; k < m; ++k)
      for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) {
          coords.push_back(static_cast<double>(i) / N);
          coords.push_back(static_cast<double>(j) / N);
          coords.push_back(static_cast<double>(k) / N);
        }
    auto vid = [m](int i, int j, int k) { return i + j * m + k * m * m; };
    // Six tets per subcube, all sharing the main diagonal: walk the unit
    // steps in every axis order.  Odd permutations get two vertices swapped
    // to keep the volume positive.
    int perm[3] = {0, 1, 2};
    std::vector<std::array<int, 3>> perms;
    std::vector<int> sign;
    do {
      perms.push_back({perm[0], perm[1], perm[2]});
      int inv = 0;
      for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b)
          if (perm[a] > perm[b]) ++inv;
      sign.push_back(inv % 2 == 0 ? 1 : -1);
    } while (std::next_permutation(perm, perm + 3));
    for (int k = 0; k < N; ++k)
      for (int j = 0; j < N; ++j)
        for (int i = 0; i < N; ++i) {
          for (std::size_t p = 0; p < perms.size(); ++p) {
            int step[3] = {i, j, k};
            int verts[4];
            verts[0] = vid(step[0], step[1], step[2]);
            for (int a = 0; a < 3; ++a) {
              step[perms[p][a]] += 1;
              verts[a + 1] = vid(step[0], step[1], step[2]);
            }
            if (sign[p] < 0) std::swap(verts[1], verts[2]);
            cells.insert(cells.end(), {verts[0], verts[1], verts[2], verts[3]});
          }
        }
  } else {
    throw MeshError("structured_cube: gdim must be 2 or 3");
  }
  return build_mesh(gdim, std::move(coords), std::move(cells));
}

namespace {

// Pull the next whitespace-separated token, tracking line numbers and
// stripping '#' comments.
struct TokenReader {
  std::istream& in;
  int line = 1;
  bool next(std::string& tok) {
    tok.clear();
    int ch;
    while ((ch = in.get()) != EOF) {
      if (ch == '#') {
        if (!tok.empty()) {
          in.unget();
          return true;
        }
        while ((ch = in.get()) != EOF && ch != '\n') {
        }
        if (ch == '\n') ++line;
        continue;
      }
      if (ch == '\n') {
        if (!tok.empty()) {
          in.unget();  // leave the newline for the next call
          return true;
        }
        ++line;
        continue;
      }
      if (std::isspace(ch)) {
        if (!tok.empty()) return true;
        continue;
      }
      tok.push_back(static_cast<char>(ch));
    }
    return !tok.empty();
  }
  long parse_int(const char* what) {
    std::string tok;
    if (!next(tok)) throw ParseError(line, std::string("unexpected end of file reading ") + what);
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      throw ParseError(line, "expected integer " + std::string(what) + ", got '" + tok + "'");
    }
    if (used != tok.size())
      throw ParseError(line, "expected integer " + std::string(what) + ", got '" + tok + "'");
    return v;
  }
  double parse_real(const char* what) {
    std::string tok;
    if (!next(tok)) throw ParseError(line, std::string("unexpected end of file reading ") + what);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw ParseError(line, "expected number " + std::string(what) + ", got '" + tok + "'");
    }
    if (used != tok.size())
      throw ParseError(line, "expected number " + std::string(what) + ", got '" + tok + "'");
    return v;
  }
};

}  // namespace

Mesh read_mesh(std::istream& in) {
  TokenReader r{in};
  const long gdim = r.parse_int("gdim");
  if (gdim != 2 && gdim != 3) throw ParseError(r.line, "gdim must be 2 or 3");
  const long nn = r.parse_int("node count");
  const long nc = r.parse_int("cell count");
  if (nn < 1 || nc < 1) throw ParseError(r.line, "node and cell counts must be positive");
  std::vector<double> coords;
  coords.reserve(nn * gdim);
  for (long v = 0; v < nn; ++v)
    for (long d = 0; d < gdim; ++d) coords.push_back(r.parse_real("node coordinate"));
  std::vector<int> cells;
  cells.reserve(nc * (gdim + 1));
  for (long c = 0; c < nc; ++c)
    for (long i = 0; i <= gdim; ++i) {
      const long vtx = r.parse_int("cell vertex");
      const int at = r.line;
      if (vtx < 0 || vtx >= nn)
        throw ParseError(at, "cell vertex " + std::to_string(vtx) + " out of range");
      cells.push_back(static_cast<int>(vtx));
    }
  std::string extra;
  if (r.next(extra)) throw ParseError(r.line, "trailing content '" + extra + "'");
  return build_mesh(static_cast<int>(gdim), std::move(coords), std::move(cells));
}

Mesh read_mesh_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open '" + path + "'");
  return read_mesh(in);
}

void write_mesh(const Mesh& mesh, std::ostream& out) {
  out << mesh.gdim << ' ' << mesh.num_nodes() << ' ' << mesh.num_cells() << '\n';
  out.precision(17);
  for (int v = 0; v < mesh.num_nodes(); ++v) {
    for (int d = 0; d < mesh.gdim; ++d) out << (d ? " " : "") << mesh.coords[v * mesh.gdim + d];
    out << '\n';
  }
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int i = 0; i <= mesh.gdim; ++i) out << (i ? " " : "") << mesh.cell_vertex(c, i);
    out << '\n';
  }
}

CellGeometry cell_geometry(const Mesh& mesh, int c) {
  const int n = mesh.gdim;
  CellGeometry g;
  const Eigen::Vector3d x0 = mesh.node(mesh.cell_vertex(c, 0));
  for (int i = 0; i <= n; ++i)
    for (int j = i + 1; j <= n; ++j)
      g.diameter = std::max(g.diameter, (mesh.node(mesh.cell_vertex(c, i)) -
                                         mesh.node(mesh.cell_vertex(c, j)))
                                            .norm());
  if (n == 3) {
    Eigen::Matrix3d A;
    for (int j = 1; j <= 3; ++j) A.col(j - 1) = mesh.node(mesh.cell_vertex(c, j)) - x0;
    const double det = A.determinant();
    if (std::abs(det) < 1e-14 * std::pow(g.diameter, 3))
      throw GeometryError("cell " + std::to_string(c) + " is degenerate");
    g.measure = det / 6.0;
    const Eigen::Matrix3d Ainv = A.inverse();
    g.grad_lambda[0].setZero();
    for (int i = 1; i <= 3; ++i) {
      g.grad_lambda[i] = Ainv.row(i - 1).transpose();
      g.grad_lambda[0] -= g.grad_lambda[i];
    }
  } else {
    Eigen::Matrix2d A;
    for (int j = 1; j <= 2; ++j) A.col(j - 1) = (mesh.node(mesh.cell_vertex(c, j)) - x0).head<2>();
    const double det = A.determinant();
    if (std::abs(det) < 1e-14 * std::pow(g.diameter, 2))
      throw GeometryError("cell " + std::to_string(c) + " is degenerate");
    g.measure = det / 2.0;
    const Eigen::Matrix2d Ainv = A.inverse();
    g.grad_lambda[0].setZero();
    for (int i = 1; i <= 2; ++i) {
      g.grad_lambda[i] = Eigen::Vector3d(Ainv(i - 1, 0), Ainv(i - 1, 1), 0.0);
      g.grad_lambda[0] -= g.grad_lambda[i];
    }
  }
  return g;
}

Eigen::Vector3d edge_tangent(const Mesh& mesh, int e) {
  const auto& ev = mesh.edges[e];
  return (mesh.node(ev[1]) - mesh.node(ev[0])).normalized();
}

Eigen::Vector3d facet_normal(const Mesh& mesh, int fid) {
  if (mesh.gdim == 3) {
    const auto& f = mesh.faces[fid];
    const Eigen::Vector3d a = mesh.node(f[1]) - mesh.node(f[0]);
    const Eigen::Vector3d b = mesh.node(f[2]) - mesh.node(f[0]);
    return a.cross(b).normalized();
  }
  const Eigen::Vector3d t = edge_tangent(mesh, fid);
  return {t.y(), -t.x(), 0.0};
}

Eigen::Vector3d normal_toward_opposite(const Mesh& mesh, const std::vector<int>& e,
                                       const std::vector<int>& f) {
  if (f.size() != e.size() + 1)
    throw GeometryError("normal_toward_opposite: f must have exactly one extra vertex");
  int opp = -1;
  for (int v : f)
    if (std::find(e.begin(), e.end(), v) == e.end()) {
      if (opp != -1) throw GeometryError("normal_toward_opposite: e is not contained in f");
      opp = v;
    }
  if (opp == -1) throw GeometryError("normal_toward_opposite: e is not contained in f");

  Eigen::Vector3d w = mesh.node(opp) - mesh.node(e[0]);
  // Orthogonalize against an orthonormal tangent basis of e.
  std::vector<Eigen::Vector3d> basis;
  for (std::size_t j = 1; j < e.size(); ++j) {
    Eigen::Vector3d t = mesh.node(e[j]) - mesh.node(e[0]);
    for (const auto& b : basis) t -= t.dot(b) * b;
    const double len = t.norm();
    if (len < 1e-14) throw GeometryError("normal_toward_opposite: degenerate sub-simplex");
    basis.push_back(t / len);
  }
  for (const auto& b : basis) w -= w.dot(b) * b;
  const double len = w.norm();
  if (len < 1e-14) throw GeometryError("normal_toward_opposite: opposite vertex lies on e");
  return w / len;
}

Eigen::Vector3d outward_facet_normal(const Mesh& mesh, int c, int i) {
  const auto& tables = sub_simplex_tables(mesh.gdim);
  if (mesh.gdim == 3) {
    const auto& lf = tables.faces_outward[i];
    const Eigen::Vector3d x0 = mesh.node(mesh.cell_vertex(c, lf[0]));
    const Eigen::Vector3d a = mesh.node(mesh.cell_vertex(c, lf[1])) - x0;
    const Eigen::Vector3d b = mesh.node(mesh.cell_vertex(c, lf[2])) - x0;
    return a.cross(b).normalized();
  }
  const auto& le = tables.edges_outward[i];
  const Eigen::Vector3d t =
      (mesh.node(mesh.cell_vertex(c, le[1])) - mesh.node(mesh.cell_vertex(c, le[0]))).normalized();
  return {t.y(), -t.x(), 0.0};
}

double facet_measure(const Mesh& mesh, int fid) {
  if (mesh.gdim == 3) {
    const auto& f = mesh.faces[fid];
    const Eigen::Vector3d a = mesh.node(f[1]) - mesh.node(f[0]);
    const Eigen::Vector3d b = mesh.node(f[2]) - mesh.node(f[0]);
    return 0.5 * a.cross(b).norm();
  }
  const auto& e = mesh.edges[fid];
  return (mesh.node(e[1]) - mesh.node(e[0])).norm();
}

Eigen::Vector3d cell_point(const Mesh& mesh, int c, const std::vector<double>& lam) {
  Eigen::Vector3d x = Eigen::Vector3d::Zero();
  for (int i = 0; i <= mesh.gdim; ++i) x += lam[i] * mesh.node(mesh.cell_vertex(c, i));
  return x;
}

}  // namespace tnfem
