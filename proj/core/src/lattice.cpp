#include "tnfem/lattice.hpp"

#include <algorithm>
#include <stdexcept>

namespace tnfem {

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

int lattice_rank(const MultiIndex& a) {
  const int n = static_cast<int>(a.size()) - 1;
  if (n < 0) throw std::invalid_argument("lattice_rank: empty multi-index");
  long long r = 0;
  int suffix = 0;
  for (int i = n; i >= 1; --i) {
    suffix += a[i];
    r += binomial(suffix + n - i, n + 1 - i);
  }
  return static_cast<int>(r);
}

SimplicialLattice lattice_points(int n, int k) {
  if (n < 0 || k < 0) throw std::invalid_argument("lattice_points: need n >= 0, k >= 0");
  SimplicialLattice lat;
  lat.dim = n;
  lat.degree = k;
  MultiIndex a(n + 1, 0);
  // Generate all compositions of k into n+1 parts, then order by rank.
  auto rec = [&](auto&& self, int pos, int rem) -> void {
    if (pos == n) {
      a[pos] = rem;
      lat.points.push_back(a);
      return;
    }
    for (int v = 0; v <= rem; ++v) {
      a[pos] = v;
      self(self, pos + 1, rem - v);
    }
  };
  rec(rec, 0, k);
  std::sort(lat.points.begin(), lat.points.end(),
            [](const MultiIndex& x, const MultiIndex& y) { return lattice_rank(x) < lattice_rank(y); });
  return lat;
}

std::vector<double> lattice_barycentric(const MultiIndex& a, int k) {
  if (k < 1) throw std::invalid_argument("lattice_barycentric: need k >= 1");
  std::vector<double> lam(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) lam[i] = static_cast<double>(a[i]) / k;
  return lam;
}

MultiIndex extend_to_cell(const MultiIndex& a, const std::vector<int>& f, int n) {
  if (a.size() != f.size())
    throw std::invalid_argument("extend_to_cell: index length does not match vertex list");
  if (!std::is_sorted(f.begin(), f.end()) ||
      std::adjacent_find(f.begin(), f.end()) != f.end())
    throw std::invalid_argument("extend_to_cell: vertex list must be strictly ascending");
  if (!f.empty() && (f.front() < 0 || f.back() > n))
    throw std::invalid_argument("extend_to_cell: vertex out of range");
  MultiIndex e(n + 1, 0);
  for (std::size_t j = 0; j < f.size(); ++j) e[f[j]] = a[j];
  return e;
}

std::vector<MultiIndex> interior_lattice(int n, int k, const std::vector<int>& f) {
  const int ell = static_cast<int>(f.size()) - 1;
  if (ell < 0 || ell > n) throw std::invalid_argument("interior_lattice: bad sub-simplex");
  std::vector<MultiIndex> out;
  for (const MultiIndex& a : lattice_points(ell, k).points) {
    if (std::all_of(a.begin(), a.end(), [](int v) { return v > 0; }))
      out.push_back(extend_to_cell(a, f, n));
  }
  std::sort(out.begin(), out.end(),
            [](const MultiIndex& x, const MultiIndex& y) { return lattice_rank(x) < lattice_rank(y); });
  return out;
}

int interior_rank(const MultiIndex& a) {
  MultiIndex shifted(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 1) throw std::invalid_argument("interior_rank: index not interior");
    shifted[i] = a[i] - 1;
  }
  return lattice_rank(shifted);
}

namespace {

SubSimplexTables make_tables(int n) {
  SubSimplexTables t;
  t.dim = n;
  if (n == 2) {
    t.edges = {{{0, 1}}, {{0, 2}}, {{1, 2}}};
    t.edges_outward = {{{1, 2}}, {{2, 0}}, {{0, 1}}};
  } else if (n == 3) {
    t.edges = {{{0, 1}}, {{0, 2}}, {{0, 3}}, {{1, 2}}, {{1, 3}}, {{2, 3}}};
    t.faces_sorted = {{{1, 2, 3}}, {{0, 2, 3}}, {{0, 1, 3}}, {{0, 1, 2}}};
    t.faces_outward = {{{1, 2, 3}}, {{0, 3, 2}}, {{0, 1, 3}}, {{0, 2, 1}}};
  } else {
    throw std::invalid_argument("sub_simplex_tables: only n = 2 or 3");
  }
  return t;
}

}  // namespace

const SubSimplexTables& sub_simplex_tables(int n) {
  static const SubSimplexTables tri = make_tables(2);
  static const SubSimplexTables tet = make_tables(3);
  if (n == 2) return tri;
  if (n == 3) return tet;
  throw std::invalid_argument("sub_simplex_tables: only n = 2 or 3");
}

std::vector<std::vector<int>> sub_simplices(int n, int ell) {
  if (ell < 0 || ell > n) throw std::invalid_argument("sub_simplices: bad dimension");
  std::vector<std::vector<int>> out;
  if (ell == 0) {
    for (int v = 0; v <= n; ++v) out.push_back({v});
  } else if (ell == n) {
    std::vector<int> all(n + 1);
    for (int v = 0; v <= n; ++v) all[v] = v;
    out.push_back(all);
  } else if (ell == 1) {
    for (const auto& e : sub_simplex_tables(n).edges) out.push_back({e[0], e[1]});
  } else if (ell == 2 && n == 3) {
    for (const auto& f : sub_simplex_tables(n).faces_sorted) out.push_back({f[0], f[1], f[2]});
  } else {
    throw std::invalid_argument("sub_simplices: only n <= 3 supported");
  }
  return out;
}

std::vector<int> complement(const std::vector<int>& f, int n) {
  std::vector<int> out;
  for (int v = 0; v <= n; ++v)
    if (std::find(f.begin(), f.end(), v) == f.end()) out.push_back(v);
  return out;
}

}  // namespace tnfem
