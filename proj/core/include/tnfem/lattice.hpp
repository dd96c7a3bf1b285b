#pragma once

#include <array>
#include <vector>

namespace tnfem {

// A lattice multi-index: length n+1, non-negative entries summing to the
// lattice degree k.  Entry i is the weight on vertex i of the simplex.
using MultiIndex = std::vector<int>;

long long binomial(int n, int k);

// Position of a multi-index in the dictionary order of the degree-k lattice
// on the n-simplex.  Depends only on the trailing n entries, so indices that
// differ only in the leading entry (equivalently, live on lattices of
// different degree) get the same rank.
int lattice_rank(const MultiIndex& a);

struct SimplicialLattice {
  int dim = 0;     // n
  int degree = 0;  // k
  std::vector<MultiIndex> points;  // all indices, sorted by lattice_rank
  int size() const { return static_cast<int>(points.size()); }
};

// All multi-indices of length n+1 summing to k (k >= 0), in rank order.
// Size is binomial(n+k, k).
SimplicialLattice lattice_points(int n, int k);

// Barycentric coordinates a/k of a lattice point (k >= 1).
std::vector<double> lattice_barycentric(const MultiIndex& a, int k);

// Embed a multi-index living on the sub-simplex with ascending local vertex
// list f into the full cell 0..n: entry j of a lands at position f[j], all
// other positions are zero.
MultiIndex extend_to_cell(const MultiIndex& a, const std::vector<int>& f, int n);

// Lattice points of the degree-k cell lattice supported exactly on f
// (positive at every vertex of f, zero elsewhere), in rank order.  Count is
// binomial(k-1, dim f); for a vertex this is the single point k*e_v.
std::vector<MultiIndex> interior_lattice(int n, int k, const std::vector<int>& f);

// Rank of a strictly positive multi-index among the interior points of its
// own lattice (all entries >= 1).  Equals lattice_rank(a - 1).
int interior_rank(const MultiIndex& a);

// Local sub-simplex tables for the reference n-simplex (n = 2 or 3).
//
// edges:          ascending pairs in lexicographic order.
// faces_sorted:   (3D) ascending triple of the face opposite vertex i.
// faces_outward:  (3D) same faces, vertex order chosen so the cross product
//                 of the two edge vectors points out of a positively
//                 oriented cell.
// edges_outward:  (2D) edge opposite vertex i, oriented along the
//                 counterclockwise boundary cycle, so rotating the tangent
//                 clockwise gives the outward normal.
struct SubSimplexTables {
  int dim = 0;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 3>> faces_sorted;
  std::vector<std::array<int, 3>> faces_outward;
  std::vector<std::array<int, 2>> edges_outward;
};

const SubSimplexTables& sub_simplex_tables(int n);

// All local sub-simplices of dimension ell as ascending vertex lists.
// Dimension n-1 in 3D follows the opposite-vertex face order; edges are
// lexicographic; vertices and the cell itself are the obvious lists.
std::vector<std::vector<int>> sub_simplices(int n, int ell);

// Ascending complement {0..n} \ f.
std::vector<int> complement(const std::vector<int>& f, int n);

}  // namespace tnfem
