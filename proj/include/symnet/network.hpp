#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "symnet/activation.hpp"
#include "symnet/group.hpp"
#include "symnet/matrix.hpp"
#include "symnet/pattern.hpp"

namespace symnet {

/// Coupling matrix W. Always square; N is small (<= 8 for anything that
/// enumerates groups or binary patterns).
using WeightMatrix = Matrix;

inline constexpr double kConstructedTolerance = 1e-12;
inline constexpr double kTrainedTolerance = 1e-3;

/// phi(W x), entrywise.
inline Pattern forward(const WeightMatrix& w, const Activation& phi, const Pattern& x) {
  detail::require_dim(w.square() && w.cols() == x.size(), "forward: W is not N x N for the pattern length");
  Pattern y = w * x;
  for (double& v : y) v = phi(v);
  return y;
}

/// x, phi_W(x), phi_W(phi_W(x)), ... (n + 1 entries).
inline std::vector<Pattern> iterate(const WeightMatrix& w, const Activation& phi, const Pattern& x, std::size_t n) {
  std::vector<Pattern> traj;
  traj.reserve(n + 1);
  traj.push_back(x);
  for (std::size_t k = 0; k < n; ++k) traj.push_back(forward(w, phi, traj.back()));
  return traj;
}

struct Deviation {
  bool ok = false;
  double deviation = 0.0;

  explicit operator bool() const noexcept { return ok; }
};

/// Largest entry of |W - s.W| over the group.
inline double symmetry_deviation(const WeightMatrix& w, const SymmetryGroup& g) {
  detail::require_dim(w.square() && w.rows() == g.degree(), "matrix size differs from group degree");
  double dev = 0.0;
  for (const auto& s : g) dev = std::max(dev, max_abs_diff(w, act(s, w)));
  return dev;
}

/// W = s.W for all s in G, within tol.
inline Deviation is_compatible(const WeightMatrix& w, const SymmetryGroup& g, double tol = kConstructedTolerance) {
  const double dev = symmetry_deviation(w, g);
  return {dev <= tol, dev};
}

struct AutoassociationReport {
  bool ok = false;
  std::vector<double> residuals;  // max-entry |phi_W(x) - x| per item
  double max_residual = 0.0;

  explicit operator bool() const noexcept { return ok; }
};

inline AutoassociationReport is_autoassociator(const WeightMatrix& w, const Activation& phi, const PatternSet& x,
                                               double tol = kConstructedTolerance) {
  AutoassociationReport r;
  for (const auto& item : x) {
    const double res = max_abs_diff(forward(w, phi, item), item);
    r.residuals.push_back(res);
    r.max_residual = std::max(r.max_residual, res);
  }
  r.ok = r.max_residual <= tol;
  return r;
}

struct EquivarianceReport {
  bool ok = false;
  double deviation = 0.0;
  std::size_t worst_element = 0;  // index into the group
  std::size_t worst_sample = 0;

  explicit operator bool() const noexcept { return ok; }
};

/// max |phi_W(s.x) - s.phi_W(x)| over s in G and the given samples.
inline EquivarianceReport equivariance_check(const WeightMatrix& w, const Activation& phi, const SymmetryGroup& g,
                                             const std::vector<Pattern>& samples, double tol = 1e-10) {
  EquivarianceReport r;
  for (std::size_t k = 0; k < g.order(); ++k) {
    const auto& s = g.elements()[k];
    for (std::size_t m = 0; m < samples.size(); ++m) {
      const double d = max_abs_diff(forward(w, phi, act(s, samples[m])), act(s, forward(w, phi, samples[m])));
      if (d > r.deviation) {
        r.deviation = d;
        r.worst_element = k;
        r.worst_sample = m;
      }
    }
  }
  r.ok = r.deviation <= tol;
  return r;
}

/// Standard basis e_1..e_N, the cheapest probes for a broken W.
inline std::vector<Pattern> basis_vectors(std::size_t n) {
  std::vector<Pattern> out(n, Pattern(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) out[i][i] = 1.0;
  return out;
}

} // namespace symnet
