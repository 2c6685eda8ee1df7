#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the code paths it is used to check.

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <random>
#include <vector>

#include "symnet/matrix.hpp"

namespace oracle {

using symnet::Matrix;

// Burnside: number of orbits of G on index pairs = mean over s of fix(s)^2.
inline std::size_t burnside_pair_orbits(const std::vector<std::vector<std::size_t>>& group) {
  std::size_t total = 0;
  for (const auto& s : group) {
    std::size_t fix = 0;
    for (std::size_t i = 0; i < s.size(); ++i) fix += s[i] == i;
    total += fix * fix;
  }
  return total / group.size();
}

// Central differences of f around w, one entry at a time.
inline Matrix finite_difference_gradient(const std::function<double(const Matrix&)>& f, const Matrix& w,
                                         double h = 1e-6) {
  Matrix g(w.rows(), w.cols());
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j) {
      Matrix p = w, m = w;
      p(i, j) += h;
      m(i, j) -= h;
      g(i, j) = (f(p) - f(m)) / (2.0 * h);
    }
  return g;
}

// lambda^3 + c2 lambda^2 + c1 lambda + c0 from trace, principal minors, det.
struct Cubic {
  double c2, c1, c0;
};

inline Cubic char_poly_3x3(const Matrix& a) {
  const double tr = a(0, 0) + a(1, 1) + a(2, 2);
  const double minors = a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0) + a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0) +
                        a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1);
  const double det = a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
                     a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
                     a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
  return {-tr, minors, -det};
}

// Coefficients of prod (lambda - v_k) from the roots.
inline Cubic cubic_from_roots(const std::vector<std::complex<double>>& v) {
  const auto e1 = v[0] + v[1] + v[2];
  const auto e2 = v[0] * v[1] + v[0] * v[2] + v[1] * v[2];
  const auto e3 = v[0] * v[1] * v[2];
  return {-e1.real(), e2.real(), -e3.real()};
}

// A (A^T A)^{-1} A^T for a full-column-rank A given as columns, via
// Gauss-Jordan on the small Gram matrix.
inline Matrix projector_normal_equations(const std::vector<std::vector<double>>& columns) {
  const std::size_t m = columns.size();
  const std::size_t n = columns.front().size();
  std::vector<std::vector<double>> g(m, std::vector<double>(2 * m, 0.0));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t i = 0; i < n; ++i) g[a][b] += columns[a][i] * columns[b][i];
    g[a][m + a] = 1.0;
  }
  for (std::size_t c = 0; c < m; ++c) {
    std::size_t piv = c;
    for (std::size_t r = c + 1; r < m; ++r)
      if (std::abs(g[r][c]) > std::abs(g[piv][c])) piv = r;
    std::swap(g[c], g[piv]);
    const double d = g[c][c];
    for (auto& v : g[c]) v /= d;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == c) continue;
      const double f = g[r][c];
      for (std::size_t k = 0; k < 2 * m; ++k) g[r][k] -= f * g[c][k];
    }
  }
  Matrix p(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) p(i, j) += columns[a][i] * g[a][m + b] * columns[b][j];
  return p;
}

inline Matrix random_matrix(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Matrix w(n, n);
  for (double& v : w.data()) v = u(rng);
  return w;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

} // namespace oracle
