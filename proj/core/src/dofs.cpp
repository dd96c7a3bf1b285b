#include "tnfem/dofs.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tnfem {

namespace {

std::vector<int> argsort(const std::vector<int>& v) {
  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return v[a] < v[b]; });
  return idx;
}

// Support of a multi-index: positions with positive weight, ascending.
std::vector<int> support(const MultiIndex& a) {
  std::vector<int> s;
  for (int i = 0; i < static_cast<int>(a.size()); ++i)
    if (a[i] > 0) s.push_back(i);
  return s;
}

int local_edge_index(const SubSimplexTables& tab, int i0, int i1) {
  for (int e = 0; e < static_cast<int>(tab.edges.size()); ++e)
    if (tab.edges[e][0] == i0 && tab.edges[e][1] == i1) return e;
  throw std::logic_error("dofs: no local edge (" + std::to_string(i0) + "," +
                         std::to_string(i1) + ")");
}

void set_global(std::vector<std::uint8_t>& seen, std::vector<Eigen::Vector3d>& vec,
                std::vector<Eigen::Vector3d>& pt, int g, const Eigen::Vector3d& v,
                const Eigen::Vector3d& x) {
  if (!seen[g]) {
    vec[g] = v;
    pt[g] = x;
    seen[g] = 1;
  }
}

}  // namespace

std::vector<int> reorder_face_index(const std::vector<int>& lface,
                                    const std::vector<int>& gface,
                                    const std::vector<int>& m) {
  const int s = static_cast<int>(lface.size());
  if (static_cast<int>(gface.size()) != s || static_cast<int>(m.size()) != s)
    throw std::invalid_argument("reorder_face_index: length mismatch");
  if (s < 1) throw std::invalid_argument("reorder_face_index: empty tuples");
  {
    std::vector<int> a = lface, b = gface;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b)
      throw std::invalid_argument(
          "reorder_face_index: vertex sets differ between the two orderings");
    if (std::adjacent_find(a.begin(), a.end()) != a.end())
      throw std::invalid_argument("reorder_face_index: repeated vertex id");
  }
  // Entry t of the result is the weight of vertex gface[t]:
  // out[t] = m[position of gface[t] in lface].
  const std::vector<int> sl = argsort(lface);
  const std::vector<int> sg = argsort(gface);
  std::vector<int> out(s);
  for (int r = 0; r < s; ++r) out[sg[r]] = m[sl[r]];
  return out;
}

int face_interior_offset(const std::vector<int>& m) {
  if (m.size() != 3)
    throw std::invalid_argument("face_interior_offset: need three components");
  for (int v : m)
    if (v < 1)
      throw std::invalid_argument(
          "face_interior_offset: index is not interior to the face");
  const int t = m[1] + m[2];
  return (t - 2) * (t - 1) / 2 + m[2] - 1;
}

LagrangePointMap build_cell2ipoint(const Mesh& mesh, int k) {
  const int n = mesh.gdim;
  if (n != 2 && n != 3)
    throw std::invalid_argument("build_cell2ipoint: dimension must be 2 or 3");
  if (k < 1) throw std::invalid_argument("build_cell2ipoint: degree must be >= 1");

  const SubSimplexTables& tab = sub_simplex_tables(n);
  const SimplicialLattice lat = lattice_points(n, k);

  LagrangePointMap pm;
  pm.k = k;
  pm.gd = n;
  pm.ldof = lat.size();
  pm.per_edge = k - 1;
  pm.per_face = n == 3 ? (k - 1) * (k - 2) / 2 : 0;
  pm.per_cell = n == 3 ? (k - 1) * (k - 2) * (k - 3) / 6 : (k - 1) * (k - 2) / 2;
  pm.edge_base = mesh.num_nodes();
  pm.face_base = pm.edge_base + mesh.num_edges() * pm.per_edge;
  pm.cell_base = pm.face_base + (n == 3 ? mesh.num_faces() * pm.per_face : 0);
  pm.gdof = pm.cell_base + mesh.num_cells() * pm.per_cell;

  pm.cell2ipoint.assign(static_cast<size_t>(mesh.num_cells()) * pm.ldof, -1);
  pm.coords.assign(pm.gdof, Eigen::Vector3d::Zero());
  pm.on_boundary.assign(pm.gdof, 0);
  std::vector<std::uint8_t> seen(pm.gdof, 0);

  const int nle = static_cast<int>(tab.edges.size());
  for (int c = 0; c < mesh.num_cells(); ++c) {
    for (int p = 0; p < lat.size(); ++p) {
      const MultiIndex& a = lat.points[p];
      const std::vector<int> supp = support(a);
      const int s = static_cast<int>(supp.size());
      int id = -1;
      bool bnd = false;
      if (s == 1) {
        id = mesh.cell_vertex(c, supp[0]);
        bnd = mesh.vertex_on_boundary[id] != 0;
      } else if (s == 2) {
        const int le = local_edge_index(tab, supp[0], supp[1]);
        const int eg = mesh.cell2edge[c * nle + le];
        const std::vector<int> lv = {mesh.cell_vertex(c, supp[0]),
                                     mesh.cell_vertex(c, supp[1])};
        std::vector<int> gv = lv;
        std::sort(gv.begin(), gv.end());
        const std::vector<int> ms =
            reorder_face_index(lv, gv, {a[supp[0]], a[supp[1]]});
        id = pm.edge_base + eg * pm.per_edge + (ms[1] - 1);
        bnd = mesh.edge_on_boundary[eg] != 0;
      } else if (s == 3 && n == 3) {
        const int lf = complement(supp, n)[0];  // face opposite the absent vertex
        const int fg = mesh.cell2face[c * 4 + lf];
        const std::vector<int> lv = {mesh.cell_vertex(c, supp[0]),
                                     mesh.cell_vertex(c, supp[1]),
                                     mesh.cell_vertex(c, supp[2])};
        std::vector<int> gv = lv;
        std::sort(gv.begin(), gv.end());
        const std::vector<int> ms =
            reorder_face_index(lv, gv, {a[supp[0]], a[supp[1]], a[supp[2]]});
        id = pm.face_base + fg * pm.per_face + face_interior_offset(ms);
        bnd = mesh.face_on_boundary[fg] != 0;
      } else {
        id = pm.cell_base + c * pm.per_cell + interior_rank(a);
      }
      pm.cell2ipoint[static_cast<size_t>(c) * pm.ldof + p] = id;
      if (!seen[id]) {
        seen[id] = 1;
        pm.coords[id] = cell_point(mesh, c, lattice_barycentric(a, k));
        pm.on_boundary[id] = bnd ? 1 : 0;
      }
    }
  }
  if (std::find(seen.begin(), seen.end(), 0) != seen.end())
    throw std::logic_error("build_cell2ipoint: numbering left a gap");
  return pm;
}

DofMap build_lagrange_dofmap(const Mesh& mesh, int k, int components) {
  const int n = mesh.gdim;
  if (components != 1 && components != n)
    throw std::invalid_argument(
        "build_lagrange_dofmap: components must be 1 or the mesh dimension");
  const LagrangePointMap pm = build_cell2ipoint(mesh, k);

  DofMap dm;
  dm.kind = SpaceKind::Lagrange;
  dm.k = k;
  dm.gd = n;
  dm.vd = components;
  dm.lat = lattice_points(n, k);
  dm.scalar_gdof = pm.gdof;
  dm.gdof = components * pm.gdof;
  dm.ldof = components * pm.ldof;
  dm.edge_base = pm.edge_base;
  dm.face_base = pm.face_base;
  dm.cell_base = pm.cell_base;
  dm.per_edge = pm.per_edge;
  dm.per_face = pm.per_face;
  dm.per_cell = pm.per_cell;

  const int nc = mesh.num_cells();
  dm.cell2dof.assign(static_cast<size_t>(nc) * dm.ldof, -1);
  dm.boundary_mask.assign(dm.gdof, 0);
  dm.dof2point.assign(dm.gdof, Eigen::Vector3d::Zero());
  if (components > 1) {
    dm.dof_dir.assign(static_cast<size_t>(nc) * dm.ldof, Eigen::Vector3d::Zero());
    dm.dof_dual.assign(static_cast<size_t>(nc) * dm.ldof, Eigen::Vector3d::Zero());
    dm.dof2vector.assign(dm.gdof, Eigen::Vector3d::Zero());
  }

  for (int g = 0; g < pm.gdof; ++g) {
    for (int i = 0; i < components; ++i) {
      const int gg = i * pm.gdof + g;
      dm.boundary_mask[gg] = pm.on_boundary[g];
      dm.dof2point[gg] = pm.coords[g];
      if (components > 1) dm.dof2vector[gg] = Eigen::Vector3d::Unit(i);
    }
  }
  for (int c = 0; c < nc; ++c) {
    for (int p = 0; p < pm.ldof; ++p) {
      const int id = pm.cell2ipoint[static_cast<size_t>(c) * pm.ldof + p];
      for (int i = 0; i < components; ++i) {
        const size_t j = static_cast<size_t>(c) * dm.ldof + p * components + i;
        dm.cell2dof[j] = i * pm.gdof + id;
        if (components > 1) {
          dm.dof_dir[j] = Eigen::Vector3d::Unit(i);
          dm.dof_dual[j] = Eigen::Vector3d::Unit(i);
        }
      }
    }
  }
  return dm;
}

DofMap build_bdm_dofmap(const Mesh& mesh, int k) {
  const int n = mesh.gdim;
  if (n != 2 && n != 3)
    throw std::invalid_argument("build_bdm_dofmap: dimension must be 2 or 3");
  if (k < 1) throw std::invalid_argument("build_bdm_dofmap: degree must be >= 1");

  const SimplicialLattice lat = lattice_points(n, k);
  const int npts = lat.size();
  const int nfacets = mesh.num_facets();
  const int per_facet = n == 3 ? (k + 1) * (k + 2) / 2 : k + 1;
  const int cb = n == 3
                     ? 3 * static_cast<int>(binomial(k + 3, 3)) - 2 * (k + 1) * (k + 2)
                     : 2 * static_cast<int>(binomial(k + 2, 2)) - 3 * (k + 1);

  DofMap dm;
  dm.kind = SpaceKind::BDM;
  dm.k = k;
  dm.gd = n;
  dm.vd = n;
  dm.lat = lat;
  dm.ldof = npts * n;
  dm.cell_base = nfacets * per_facet;
  dm.per_cell = cb;
  dm.gdof = dm.cell_base + mesh.num_cells() * cb;
  if (n == 3) {
    dm.per_face = per_facet;
  } else {
    dm.per_edge = per_facet;
  }

  const int nc = mesh.num_cells();
  dm.cell2dof.assign(static_cast<size_t>(nc) * dm.ldof, -1);
  dm.dof_dir.assign(static_cast<size_t>(nc) * dm.ldof, Eigen::Vector3d::Zero());
  dm.dof_dual.assign(static_cast<size_t>(nc) * dm.ldof, Eigen::Vector3d::Zero());
  dm.dof2vector.assign(dm.gdof, Eigen::Vector3d::Zero());
  dm.dof2point.assign(dm.gdof, Eigen::Vector3d::Zero());
  dm.boundary_mask.assign(dm.gdof, 0);
  std::vector<std::uint8_t> seen(dm.gdof, 0);

  for (int c = 0; c < nc; ++c) {
    int priv = 0;
    for (int p = 0; p < npts; ++p) {
      const MultiIndex& a = lat.points[p];
      const PointFrame fr = bdm_point_frame(mesh, c, a);
      const Eigen::Vector3d x = cell_point(mesh, c, lattice_barycentric(a, k));
      for (int i = 0; i < n; ++i) {
        int g = -1;
        if (fr.owner[i].kind == OwnerKind::Cell) {
          g = dm.cell_base + c * cb + priv++;
        } else {
          const int fid = fr.owner[i].entity;
          const std::vector<int> fv = mesh.facet_vertices(fid);
          MultiIndex m(fv.size());
          for (size_t t = 0; t < fv.size(); ++t)
            m[t] = a[mesh.local_vertex(c, fv[t])];
          g = fid * per_facet + lattice_rank(m);
        }
        const size_t j = static_cast<size_t>(c) * dm.ldof + p * n + i;
        dm.cell2dof[j] = g;
        dm.dof_dir[j] = fr.dir[i];
        dm.dof_dual[j] = fr.dual[i];
        set_global(seen, dm.dof2vector, dm.dof2point, g, fr.dir[i], x);
      }
    }
    if (priv != cb)
      throw std::logic_error("build_bdm_dofmap: cell block miscount");
  }

  for (int f = 0; f < nfacets; ++f) {
    const bool bnd = n == 3 ? mesh.face_on_boundary[f] != 0
                            : mesh.edge_on_boundary[f] != 0;
    if (bnd)
      for (int s = 0; s < per_facet; ++s) dm.boundary_mask[f * per_facet + s] = 1;
  }
  return dm;
}

DofMap build_nedelec_dofmap(const Mesh& mesh, int k) {
  const int n = mesh.gdim;
  if (n != 2 && n != 3)
    throw std::invalid_argument("build_nedelec_dofmap: dimension must be 2 or 3");
  if (k < 1)
    throw std::invalid_argument("build_nedelec_dofmap: degree must be >= 1");

  const SubSimplexTables& tab = sub_simplex_tables(n);
  const SimplicialLattice lat = lattice_points(n, k);
  const int npts = lat.size();
  const int per_edge = k + 1;
  const int per_face = n == 3 ? k * k - 1 : 0;
  const int cb = n == 3 ? 2 * (k - 1) * (k - 2) + (k - 1) * (k - 2) * (k - 3) / 2
                        : k * k - 1;

  DofMap dm;
  dm.kind = SpaceKind::Nedelec;
  dm.k = k;
  dm.gd = n;
  dm.vd = n;
  dm.lat = lat;
  dm.ldof = npts * n;
  dm.per_edge = per_edge;
  dm.per_face = per_face;
  dm.per_cell = cb;
  dm.edge_base = 0;
  dm.face_base = mesh.num_edges() * per_edge;
  dm.cell_base = dm.face_base + (n == 3 ? mesh.num_faces() * per_face : 0);
  dm.gdof = dm.cell_base + mesh.num_cells() * cb;

  const int nc = mesh.num_cells();
  const int nle = static_cast<int>(tab.edges.size());
  dm.cell2dof.assign(static_cast<size_t>(nc) * dm.ldof, -1);
  dm.dof_dir.assign(static_cast<size_t>(nc) * dm.ldof, Eigen::Vector3d::Zero());
  dm.dof_dual.assign(static_cast<size_t>(nc) * dm.ldof, Eigen::Vector3d::Zero());
  dm.dof2vector.assign(dm.gdof, Eigen::Vector3d::Zero());
  dm.dof2point.assign(dm.gdof, Eigen::Vector3d::Zero());
  dm.boundary_mask.assign(dm.gdof, 0);
  std::vector<std::uint8_t> seen(dm.gdof, 0);

  // Cell-private slot order: in 3D the face-interior points of local faces
  // 0..3 (direction index 2 is the face normal), then the interior points
  // times the Cartesian axes; in 2D the edge-interior points of local edges
  // 0..2 (direction index 1 is the edge normal), then interior times axes.
  std::vector<int> priv(static_cast<size_t>(npts) * n, -1);
  {
    int idx = 0;
    if (n == 3) {
      for (int lf = 0; lf < 4; ++lf) {
        const std::vector<int> fverts(tab.faces_sorted[lf].begin(),
                                      tab.faces_sorted[lf].end());
        for (const MultiIndex& a : interior_lattice(n, k, fverts))
          priv[static_cast<size_t>(lattice_rank(a)) * n + 2] = idx++;
      }
    } else {
      for (int le = 0; le < 3; ++le) {
        const std::vector<int> everts(tab.edges[le].begin(), tab.edges[le].end());
        for (const MultiIndex& a : interior_lattice(n, k, everts))
          priv[static_cast<size_t>(lattice_rank(a)) * n + 1] = idx++;
      }
    }
    for (const MultiIndex& a : interior_lattice(n, k, [&] {
           std::vector<int> all(n + 1);
           std::iota(all.begin(), all.end(), 0);
           return all;
         }()))
      for (int i = 0; i < n; ++i)
        priv[static_cast<size_t>(lattice_rank(a)) * n + i] = idx++;
    if (idx != cb)
      throw std::logic_error("build_nedelec_dofmap: cell block miscount");
  }

  for (int c = 0; c < nc; ++c) {
    for (int p = 0; p < npts; ++p) {
      const MultiIndex& a = lat.points[p];
      const std::vector<int> supp = support(a);
      const int s = static_cast<int>(supp.size());
      const PointFrame fr = nedelec_point_frame(mesh, c, a);
      const Eigen::Vector3d x = cell_point(mesh, c, lattice_barycentric(a, k));
      for (int i = 0; i < n; ++i) {
        int g = -1;
        switch (fr.owner[i].kind) {
          case OwnerKind::Edge: {
            const int eg = fr.owner[i].entity;
            const int hi = mesh.edges[eg][1];  // larger endpoint, pairs ascend
            g = eg * per_edge + a[mesh.local_vertex(c, hi)];
            break;
          }
          case OwnerKind::Face: {
            const int fg = fr.owner[i].entity;
            const std::array<int, 3>& G = mesh.faces[fg];  // ascending
            int slot = -1;
            if (s == 2) {
              // Edge-interior point, in-face normal slot: sub-block of the
              // carrier edge within the face's ascending edge list.
              int ga = mesh.cell_vertex(c, supp[0]);
              int gb = mesh.cell_vertex(c, supp[1]);
              if (ga > gb) std::swap(ga, gb);
              int xi = -1;
              const std::array<std::array<int, 2>, 3> fedges = {
                  {{G[0], G[1]}, {G[0], G[2]}, {G[1], G[2]}}};
              for (int t = 0; t < 3; ++t)
                if (fedges[t][0] == ga && fedges[t][1] == gb) xi = t;
              if (xi < 0)
                throw std::logic_error(
                    "build_nedelec_dofmap: carrier edge not in owner face");
              slot = xi * (k - 1) + (a[mesh.local_vertex(c, gb)] - 1);
            } else {
              // Face-interior point: the two tangent slots, direction index
              // is the within-face ordinal.
              MultiIndex m(3);
              for (int t = 0; t < 3; ++t) m[t] = a[mesh.local_vertex(c, G[t])];
              slot = 3 * (k - 1) + 2 * face_interior_offset(m) + i;
            }
            g = dm.face_base + fg * per_face + slot;
            break;
          }
          case OwnerKind::Cell: {
            const int ps = priv[static_cast<size_t>(p) * n + i];
            if (ps < 0)
              throw std::logic_error(
                  "build_nedelec_dofmap: unplanned cell-private slot");
            g = dm.cell_base + c * cb + ps;
            break;
          }
        }
        const size_t j = static_cast<size_t>(c) * dm.ldof + p * n + i;
        dm.cell2dof[j] = g;
        dm.dof_dir[j] = fr.dir[i];
        dm.dof_dual[j] = fr.dual[i];
        set_global(seen, dm.dof2vector, dm.dof2point, g, fr.dir[i], x);
      }
    }
  }

  for (int e = 0; e < mesh.num_edges(); ++e)
    if (mesh.edge_on_boundary[e])
      for (int s = 0; s < per_edge; ++s) dm.boundary_mask[e * per_edge + s] = 1;
  if (n == 3)
    for (int f = 0; f < mesh.num_faces(); ++f)
      if (mesh.face_on_boundary[f])
        for (int s = 0; s < per_face; ++s)
          dm.boundary_mask[dm.face_base + f * per_face + s] = 1;
  return dm;
}

DofMap build_discontinuous_dofmap(const Mesh& mesh, int k) {
  const int n = mesh.gdim;
  if (n != 2 && n != 3)
    throw std::invalid_argument(
        "build_discontinuous_dofmap: dimension must be 2 or 3");
  if (k < 0)
    throw std::invalid_argument("build_discontinuous_dofmap: degree must be >= 0");

  const SimplicialLattice lat = lattice_points(n, k);
  const int per = lat.size();

  DofMap dm;
  dm.kind = SpaceKind::Discontinuous;
  dm.k = k;
  dm.gd = n;
  dm.vd = 1;
  dm.lat = lat;
  dm.ldof = per;
  dm.per_cell = per;
  dm.gdof = mesh.num_cells() * per;

  const int nc = mesh.num_cells();
  dm.cell2dof.resize(static_cast<size_t>(nc) * per);
  dm.dof2point.assign(dm.gdof, Eigen::Vector3d::Zero());
  dm.boundary_mask.assign(dm.gdof, 0);
  for (int c = 0; c < nc; ++c) {
    for (int p = 0; p < per; ++p) {
      const int g = c * per + p;
      dm.cell2dof[static_cast<size_t>(c) * per + p] = g;
      const std::vector<double> lam =
          k >= 1 ? lattice_barycentric(lat.points[p], k)
                 : std::vector<double>(n + 1, 1.0 / (n + 1));
      dm.dof2point[g] = cell_point(mesh, c, lam);
    }
  }
  return dm;
}

}  // namespace tnfem
