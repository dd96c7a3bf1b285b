#include "tnfem/basis.hpp"

#include <stdexcept>

namespace tnfem {

namespace {

double factorial(int m) {
  double r = 1;
  for (int i = 2; i <= m; ++i) r *= i;
  return r;
}

void check_args(const MultiIndex& a, const std::vector<double>& lam, int k) {
  if (a.size() != lam.size())
    throw std::invalid_argument("lagrange basis: index/coordinate length mismatch");
  int sum = 0;
  for (int v : a) {
    if (v < 0) throw std::invalid_argument("lagrange basis: negative multi-index entry");
    sum += v;
  }
  if (sum != k) throw std::invalid_argument("lagrange basis: multi-index does not sum to degree");
}

}  // namespace

double eval_lagrange(const MultiIndex& a, const std::vector<double>& lam, int k) {
  check_args(a, lam, k);
  double prod = 1;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (int j = 0; j < a[i]; ++j) prod *= k * lam[i] - j;
    prod /= factorial(a[i]);
  }
  return prod;
}

std::vector<double> grad_lagrange(const MultiIndex& a, const std::vector<double>& lam, int k) {
  check_args(a, lam, k);
  const int nb = static_cast<int>(a.size());
  // Flatten the k linear factors; factor m belongs to coordinate owner[m].
  std::vector<double> fac(k);
  std::vector<int> owner(k);
  int m = 0;
  double scale = 1;
  for (int i = 0; i < nb; ++i) {
    scale /= factorial(a[i]);
    for (int j = 0; j < a[i]; ++j, ++m) {
      fac[m] = k * lam[i] - j;
      owner[m] = i;
    }
  }
  std::vector<double> prefix(k + 1, 1.0), suffix(k + 1, 1.0);
  for (int t = 0; t < k; ++t) prefix[t + 1] = prefix[t] * fac[t];
  for (int t = k - 1; t >= 0; --t) suffix[t] = suffix[t + 1] * fac[t];
  std::vector<double> d(nb, 0.0);
  for (int t = 0; t < k; ++t) d[owner[t]] += prefix[t] * suffix[t + 1];
  for (int i = 0; i < nb; ++i) d[i] *= k * scale;
  return d;
}

Tabulation tabulate(const SimplicialLattice& lat, const std::vector<std::vector<double>>& pts) {
  Tabulation tab;
  tab.num_fn = lat.size();
  tab.num_pts = static_cast<int>(pts.size());
  tab.nbary = lat.dim + 1;
  tab.values.resize(static_cast<std::size_t>(tab.num_fn) * tab.num_pts);
  tab.dbary.resize(static_cast<std::size_t>(tab.num_fn) * tab.num_pts * tab.nbary);
  for (int f = 0; f < tab.num_fn; ++f) {
    const MultiIndex& a = lat.points[f];
    for (int q = 0; q < tab.num_pts; ++q) {
      tab.values[f * tab.num_pts + q] = eval_lagrange(a, pts[q], lat.degree);
      const auto d = grad_lagrange(a, pts[q], lat.degree);
      for (int i = 0; i < tab.nbary; ++i) tab.dbary[(f * tab.num_pts + q) * tab.nbary + i] = d[i];
    }
  }
  return tab;
}

double bernstein(const MultiIndex& a, const std::vector<double>& lam) {
  if (a.size() != lam.size())
    throw std::invalid_argument("bernstein: index/coordinate length mismatch");
  double p = 1;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (int j = 0; j < a[i]; ++j) p *= lam[i];
  return p;
}

double bubble(const std::vector<int>& f, const std::vector<double>& lam) {
  double p = 1;
  for (int v : f) {
    if (v < 0 || v >= static_cast<int>(lam.size()))
      throw std::invalid_argument("bubble: vertex out of range");
    p *= lam[v];
  }
  return p;
}

}  // namespace tnfem
