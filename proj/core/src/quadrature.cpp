#include "tnfem/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace tnfem {

namespace {

double factorial(int m) {
  double r = 1;
  for (int i = 2; i <= m; ++i) r *= i;
  return r;
}

void push_symmetric(QuadratureRule& rule, const std::vector<double>& bary, double w) {
  // All distinct permutations of the barycentric pattern share the weight.
  std::vector<double> p(bary);
  std::sort(p.begin(), p.end());
  std::vector<std::vector<double>> seen;
  do {
    seen.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  for (const auto& q : seen) {
    rule.points.push_back(q);
    rule.weights.push_back(w);
  }
}

// Gauss rule with m points on [0,1] for the weight (1-x)^alpha, from the
// symmetric tridiagonal eigenproblem of the Jacobi recurrence coefficients.
// Nodes ascend; all weights are positive and sum to 1/(alpha+1).
void gauss_jacobi01(int m, int alpha, std::vector<double>& x, std::vector<double>& w) {
  const double a = alpha;
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(m, m);
  for (int k = 0; k < m; ++k)
    J(k, k) = (k == 0) ? -a / (a + 2.0) : -a * a / ((2 * k + a) * (2 * k + a + 2));
  for (int k = 1; k < m; ++k) {
    const double num = 4.0 * k * k * (k + a) * (k + a);
    const double den = (2 * k + a) * (2 * k + a) * ((2 * k + a) * (2 * k + a) - 1.0);
    J(k, k - 1) = J(k - 1, k) = std::sqrt(num / den);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  const double mu0 = std::pow(2.0, a + 1.0) / (a + 1.0);  // total weight on [-1,1]
  x.resize(m);
  w.resize(m);
  for (int i = 0; i < m; ++i) {
    x[i] = (es.eigenvalues()[i] + 1.0) / 2.0;
    const double v0 = es.eigenvectors()(0, i);
    w[i] = mu0 * v0 * v0 / std::pow(2.0, a + 1.0);
  }
}

// Conical product rule: collapse the simplex to a box and take the Gauss
// rule matched to each direction's Jacobian weight.  m points per direction
// give exactness 2m-1 at any degree, with all weights positive, so the
// |w| mass stays 1 no matter how high the degree.
QuadratureRule conical_rule(int n, int degree) {
  const int m = (degree + 2) / 2;  // 2m-1 >= degree
  QuadratureRule rule;
  rule.dim = n;
  rule.degree = 2 * m - 1;
  std::vector<std::vector<double>> xs(n), ws(n);
  for (int j = 0; j < n; ++j) gauss_jacobi01(m, n - 1 - j, xs[j], ws[j]);
  std::vector<int> idx(n, 0);
  const double norm = factorial(n);
  while (true) {
    double w = norm;
    std::vector<double> lam(n + 1);
    double shrink = 1.0;
    double interior = 0.0;
    for (int j = 0; j < n; ++j) {
      w *= ws[j][idx[j]];
      const double coord = xs[j][idx[j]] * shrink;
      lam[j + 1] = coord;
      shrink -= coord;
      interior += coord;
    }
    lam[0] = 1.0 - interior;
    rule.points.push_back(lam);
    rule.weights.push_back(w);
    int j = 0;
    for (; j < n; ++j) {
      if (++idx[j] < m) break;
      idx[j] = 0;
    }
    if (j == n) break;
  }
  return rule;
}

}  // namespace

QuadratureRule simplex_rule(int dim, int degree) {
  if (dim < 1 || dim > 3) throw std::invalid_argument("simplex_rule: dim must be 1, 2, or 3");
  if (degree < 0) throw std::invalid_argument("simplex_rule: degree must be non-negative");
  QuadratureRule rule;
  rule.dim = dim;

  if (dim == 1) {
    if (degree <= 1) {
      rule.degree = 1;
      rule.points = {{0.5, 0.5}};
      rule.weights = {1.0};
      return rule;
    }
    if (degree <= 3) {
      rule.degree = 3;
      const double a = 0.5 / std::sqrt(3.0);
      rule.points = {{0.5 + a, 0.5 - a}, {0.5 - a, 0.5 + a}};
      rule.weights = {0.5, 0.5};
      return rule;
    }
    if (degree <= 5) {
      rule.degree = 5;
      const double a = 0.5 * std::sqrt(0.6);
      rule.points = {{0.5 + a, 0.5 - a}, {0.5, 0.5}, {0.5 - a, 0.5 + a}};
      rule.weights = {5.0 / 18.0, 8.0 / 18.0, 5.0 / 18.0};
      return rule;
    }
    return conical_rule(1, degree);
  }

  if (dim == 2) {
    if (degree <= 1) {
      rule.degree = 1;
      rule.points = {{1.0 / 3, 1.0 / 3, 1.0 / 3}};
      rule.weights = {1.0};
      return rule;
    }
    if (degree == 2) {
      rule.degree = 2;
      push_symmetric(rule, {2.0 / 3, 1.0 / 6, 1.0 / 6}, 1.0 / 3);
      return rule;
    }
    if (degree == 3) {
      rule.degree = 3;
      rule.points = {{1.0 / 3, 1.0 / 3, 1.0 / 3}};
      rule.weights = {-27.0 / 48.0};
      push_symmetric(rule, {0.6, 0.2, 0.2}, 25.0 / 48.0);
      return rule;
    }
    if (degree == 4) {
      rule.degree = 4;
      push_symmetric(rule, {0.108103018168070, 0.445948490915965, 0.445948490915965},
                     0.223381589678011);
      push_symmetric(rule, {0.816847572980459, 0.091576213509771, 0.091576213509771},
                     0.109951743655322);
      return rule;
    }
    return conical_rule(2, degree);
  }

  // dim == 3
  if (degree <= 1) {
    rule.degree = 1;
    rule.points = {{0.25, 0.25, 0.25, 0.25}};
    rule.weights = {1.0};
    return rule;
  }
  if (degree == 2) {
    rule.degree = 2;
    const double a = (5.0 - std::sqrt(5.0)) / 20.0;
    push_symmetric(rule, {1.0 - 3 * a, a, a, a}, 0.25);
    return rule;
  }
  if (degree == 3) {
    rule.degree = 3;
    rule.points = {{0.25, 0.25, 0.25, 0.25}};
    rule.weights = {-0.8};
    push_symmetric(rule, {0.5, 1.0 / 6, 1.0 / 6, 1.0 / 6}, 0.45);
    return rule;
  }
  return conical_rule(3, degree);
}

QuadratureRule facet_rule(int dim, int degree) {
  if (dim < 2 || dim > 3) throw std::invalid_argument("facet_rule: dim must be 2 or 3");
  return simplex_rule(dim - 1, degree);
}

}  // namespace tnfem
