#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "symnet/error.hpp"
#include "symnet/matrix.hpp"

namespace symnet {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

/// Eigenpairs of a real square matrix, sorted by descending modulus (ties:
/// larger real part, then larger imaginary part first).
struct Spectrum {
  std::vector<Complex> values;
  std::vector<ComplexVector> vectors;  // unit 2-norm, vectors[k] pairs with values[k]

  std::size_t size() const noexcept { return values.size(); }

  double spectral_radius() const {
    double r = 0.0;
    for (const auto& v : values) r = std::max(r, std::abs(v));
    return r;
  }
};

inline constexpr std::size_t kMaxQrSweeps = 10000;

namespace detail {

// Householder reduction to upper Hessenberg form, in place.
inline void to_hessenberg(Matrix& a) {
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha += a(i, k) * a(i, k);
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    if (a(k + 1, k) > 0.0) alpha = -alpha;
    std::vector<double> v(n, 0.0);
    for (std::size_t i = k + 1; i < n; ++i) v[i] = a(i, k);
    v[k + 1] -= alpha;
    double vn = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vn += v[i] * v[i];
    if (vn == 0.0) continue;
    // A <- H A H with H = I - 2 v v^T / (v^T v)
    for (std::size_t j = 0; j < n; ++j) {
      double s = 0.0;
      for (std::size_t i = k + 1; i < n; ++i) s += v[i] * a(i, j);
      s *= 2.0 / vn;
      for (std::size_t i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
      double s = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) s += a(i, j) * v[j];
      s *= 2.0 / vn;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= s * v[j];
    }
    for (std::size_t i = k + 2; i < n; ++i) a(i, k) = 0.0;
  }
}

inline double signed_mag(double a, double b) { return b >= 0.0 ? std::abs(a) : -std::abs(a); }

// Francis double-shift QR on an upper Hessenberg matrix (eigenvalues only).
inline std::vector<Complex> hessenberg_eigenvalues(Matrix a) {
  const int n = static_cast<int>(a.rows());
  const double eps = std::numeric_limits<double>::epsilon();
  std::vector<Complex> out(static_cast<std::size_t>(n));
  auto A = [&](int i, int j) -> double& { return a(static_cast<std::size_t>(i), static_cast<std::size_t>(j)); };

  double anorm = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = std::max(i - 1, 0); j < n; ++j) anorm += std::abs(A(i, j));

  int nn = n - 1;
  double t = 0.0;
  std::size_t sweeps = 0;
  while (nn >= 0) {
    int its = 0;
    int l = 0;
    do {
      for (l = nn; l > 0; --l) {
        double s = std::abs(A(l - 1, l - 1)) + std::abs(A(l, l));
        if (s == 0.0) s = anorm;
        if (std::abs(A(l, l - 1)) <= eps * s) {
          A(l, l - 1) = 0.0;
          break;
        }
      }
      double x = A(nn, nn);
      if (l == nn) {
        out[static_cast<std::size_t>(nn--)] = Complex(x + t, 0.0);
      } else {
        double y = A(nn - 1, nn - 1);
        double w = A(nn, nn - 1) * A(nn - 1, nn);
        if (l == nn - 1) {
          const double p = 0.5 * (y - x);
          const double q = p * p + w;
          double z = std::sqrt(std::abs(q));
          x += t;
          if (q >= 0.0) {
            z = p + signed_mag(z, p);
            const double hi = x + z;
            const double lo = z != 0.0 ? x - w / z : hi;
            out[static_cast<std::size_t>(nn - 1)] = Complex(hi, 0.0);
            out[static_cast<std::size_t>(nn)] = Complex(lo, 0.0);
          } else {
            out[static_cast<std::size_t>(nn - 1)] = Complex(x + p, z);
            out[static_cast<std::size_t>(nn)] = Complex(x + p, -z);
          }
          nn -= 2;
        } else {
          if (++sweeps > kMaxQrSweeps) throw NumericError("QR iteration did not converge");
          if (its > 0 && its % 10 == 0) {
            // exceptional shift
            t += x;
            for (int i = 0; i <= nn; ++i) A(i, i) -= x;
            const double s = std::abs(A(nn, nn - 1)) + std::abs(A(nn - 1, nn - 2));
            y = x = 0.75 * s;
            w = -0.4375 * s * s;
          }
          ++its;
          int m = nn - 2;
          double p = 0.0, q = 0.0, r = 0.0, z = 0.0;
          for (; m >= l; --m) {
            z = A(m, m);
            r = x - z;
            const double s0 = y - z;
            p = (r * s0 - w) / A(m + 1, m) + A(m, m + 1);
            q = A(m + 1, m + 1) - z - r - s0;
            r = A(m + 2, m + 1);
            const double s = std::abs(p) + std::abs(q) + std::abs(r);
            p /= s;
            q /= s;
            r /= s;
            if (m == l) break;
            const double u = std::abs(A(m, m - 1)) * (std::abs(q) + std::abs(r));
            const double v = std::abs(p) * (std::abs(A(m - 1, m - 1)) + std::abs(z) + std::abs(A(m + 1, m + 1)));
            if (u <= eps * v) break;
          }
          for (int i = m; i < nn - 1; ++i) {
            A(i + 2, i) = 0.0;
            if (i != m) A(i + 2, i - 1) = 0.0;
          }
          for (int k = m; k < nn; ++k) {
            if (k != m) {
              p = A(k, k - 1);
              q = A(k + 1, k - 1);
              r = 0.0;
              if (k + 1 != nn) r = A(k + 2, k - 1);
              x = std::abs(p) + std::abs(q) + std::abs(r);
              if (x != 0.0) {
                p /= x;
                q /= x;
                r /= x;
              }
            }
            const double s = signed_mag(std::sqrt(p * p + q * q + r * r), p);
            if (s == 0.0) continue;
            if (k == m) {
              if (l != m) A(k, k - 1) = -A(k, k - 1);
            } else {
              A(k, k - 1) = -s * x;
            }
            p += s;
            x = p / s;
            y = q / s;
            z = r / s;
            q /= p;
            r /= p;
            for (int j = k; j <= nn; ++j) {
              p = A(k, j) + q * A(k + 1, j);
              if (k + 1 != nn) {
                p += r * A(k + 2, j);
                A(k + 2, j) -= p * z;
              }
              A(k + 1, j) -= p * y;
              A(k, j) -= p * x;
            }
            const int mmin = nn < k + 3 ? nn : k + 3;
            for (int i = l; i <= mmin; ++i) {
              p = x * A(i, k) + y * A(i, k + 1);
              if (k + 1 != nn) {
                p += z * A(i, k + 2);
                A(i, k + 2) -= p * r;
              }
              A(i, k + 1) -= p * q;
              A(i, k) -= p;
            }
          }
        }
      }
    } while (l + 1 < nn);
  }
  return out;
}

// Solves (A - mu I) z = b by Gaussian elimination with partial pivoting;
// exact zero pivots are nudged so nearly singular shifts still work.
inline ComplexVector shifted_solve(const Matrix& a, Complex mu, ComplexVector b) {
  const std::size_t n = a.rows();
  std::vector<ComplexVector> m(n, ComplexVector(n));
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      m[i][j] = a(i, j) - (i == j ? mu : Complex(0.0));
      scale = std::max(scale, std::abs(m[i][j]));
    }
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(scale, 1.0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m[i][k]) > std::abs(m[piv][k])) piv = i;
    std::swap(m[k], m[piv]);
    std::swap(b[k], b[piv]);
    if (std::abs(m[k][k]) < tiny) m[k][k] = tiny;
    for (std::size_t i = k + 1; i < n; ++i) {
      const Complex f = m[i][k] / m[k][k];
      if (f == Complex(0.0)) continue;
      for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
      b[i] -= f * b[k];
    }
  }
  for (std::size_t k = n; k-- > 0;) {
    Complex s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= m[k][j] * b[j];
    b[k] = s / m[k][k];
  }
  return b;
}

inline double cnorm(const ComplexVector& v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return std::sqrt(s);
}

inline void cnormalize(ComplexVector& v) {
  const double nv = cnorm(v);
  if (nv > 0.0)
    for (auto& c : v) c /= nv;
}

inline double eigen_residual(const Matrix& a, Complex lambda, const ComplexVector& v) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    Complex r = -lambda * v[i];
    for (std::size_t j = 0; j < a.cols(); ++j) r += a(i, j) * v[j];
    s += std::norm(r);
  }
  return std::sqrt(s);
}

} // namespace detail

/// Eigenvalues by Hessenberg reduction and shifted QR; eigenvectors by
/// inverse iteration. Clustered eigenvalues get vectors from independent
/// starts, orthonormalised within the cluster. A defective cluster cannot
/// supply a full set, so its missing vectors repeat the first one.
inline Spectrum spectrum(const Matrix& w) {
  detail::require_dim(w.square(), "spectrum of a non-square matrix");
  if (!w.all_finite()) throw NumericError("spectrum of a matrix with non-finite entries");
  const std::size_t n = w.rows();
  Spectrum sp;
  if (n == 0) return sp;

  Matrix h = w;
  detail::to_hessenberg(h);
  sp.values = detail::hessenberg_eigenvalues(std::move(h));
  std::sort(sp.values.begin(), sp.values.end(), [](Complex a, Complex b) {
    const double ma = std::abs(a), mb = std::abs(b);
    if (std::abs(ma - mb) > 1e-12 * std::max(1.0, ma)) return ma > mb;
    if (a.real() != b.real()) return a.real() > b.real();
    return a.imag() > b.imag();
  });

  const double scale = std::max(1.0, w.max_abs());
  const double cluster_tol = 1e-6 * scale;
  sp.vectors.assign(n, ComplexVector(n));
  std::vector<bool> done(n, false);
  for (std::size_t k = 0; k < n; ++k) {
    if (done[k]) continue;
    std::vector<std::size_t> cluster;
    for (std::size_t j = k; j < n; ++j)
      if (!done[j] && std::abs(sp.values[j] - sp.values[k]) <= cluster_tol) cluster.push_back(j);

    Complex centre(0.0);
    for (auto j : cluster) centre += sp.values[j];
    centre /= static_cast<double>(cluster.size());
    const Complex mu = centre + Complex(1e-10 * scale, 0.0);

    std::vector<ComplexVector> basis;
    for (std::size_t c = 0; c < cluster.size(); ++c) {
      ComplexVector v(n);
      // deterministic, distinct starting vectors
      for (std::size_t i = 0; i < n; ++i)
        v[i] = Complex(1.0 + 0.37 * static_cast<double>((i * 7 + c * 13) % 11), 0.11 * static_cast<double>(i + c));
      for (int it = 0; it < 3; ++it) {
        v = detail::shifted_solve(w, mu, std::move(v));
        detail::cnormalize(v);
      }
      for (const auto& q : basis) {
        Complex d(0.0);
        for (std::size_t i = 0; i < n; ++i) d += std::conj(q[i]) * v[i];
        for (std::size_t i = 0; i < n; ++i) v[i] -= d * q[i];
      }
      const double nv = detail::cnorm(v);
      if (nv < 1e-6 || detail::eigen_residual(w, sp.values[cluster[c]], ComplexVector(v.begin(), v.end())) / nv > 1e-6)
        v = basis.empty() ? v : basis.front();
      detail::cnormalize(v);
      basis.push_back(v);
    }
    for (std::size_t c = 0; c < cluster.size(); ++c) {
      sp.vectors[cluster[c]] = basis[c];
      done[cluster[c]] = true;
    }
  }
  return sp;
}

/// Largest |W v - lambda v| over the returned pairs.
inline double max_eigen_residual(const Matrix& w, const Spectrum& sp) {
  double r = 0.0;
  for (std::size_t k = 0; k < sp.size(); ++k) r = std::max(r, detail::eigen_residual(w, sp.values[k], sp.vectors[k]));
  return r;
}

} // namespace symnet
