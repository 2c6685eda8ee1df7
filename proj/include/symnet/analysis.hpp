#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symnet/analytic.hpp"
#include "symnet/network.hpp"
#include "symnet/spectrum.hpp"
#include "symnet/train.hpp"

namespace symnet {

// ---------------------------------------------------------------------------
// Family membership

struct FamilyFit {
  std::vector<double> params;
  double residual = 0.0;  // Frobenius norm of W - member(params)
};

/// Least-squares projection of W onto the affine family (Frobenius metric).
inline FamilyFit fit_family(const WeightMatrix& w, const LinearFamily& f) {
  detail::require_dim(w.rows() == f.particular.rows() && w.cols() == f.particular.cols(),
                      "matrix size differs from family");
  const auto entries = static_cast<Eigen::Index>(w.data().size());
  const auto k = static_cast<Eigen::Index>(f.basis.size());
  Eigen::MatrixXd b(entries, k);
  Eigen::VectorXd rhs(entries);
  for (Eigen::Index e = 0; e < entries; ++e) {
    rhs(e) = w.data()[static_cast<std::size_t>(e)] - f.particular.data()[static_cast<std::size_t>(e)];
    for (Eigen::Index c = 0; c < k; ++c) b(e, c) = f.basis[static_cast<std::size_t>(c)].data()[static_cast<std::size_t>(e)];
  }
  FamilyFit fit;
  if (k > 0) {
    const Eigen::VectorXd p = b.completeOrthogonalDecomposition().solve(rhs);
    fit.params.assign(p.data(), p.data() + p.size());
  }
  fit.residual = (w - family_member(f, fit.params)).frobenius();
  return fit;
}

/// Row-constrained fixed-point family without symmetry constraints:
/// the solutions of W x = x for x in X (the trivial-group family).
inline LinearFamily unconstrained_family(const PatternSet& x, FamilyBasis basis = FamilyBasis::free_entries) {
  return solve_linear_family(x, SymmetryGroup::trivial(x.dimension()), basis);
}

/// X X^+ with X holding the items as columns: the orthogonal projector onto
/// span(X), which is the minimum-norm solution of W X = X. Computed through
/// a complete orthogonal decomposition, independently of training.
inline WeightMatrix span_projector(const PatternSet& x) {
  const auto n = static_cast<Eigen::Index>(x.dimension());
  const auto m = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd a(n, m);
  for (Eigen::Index c = 0; c < m; ++c)
    for (Eigen::Index i = 0; i < n; ++i) a(i, c) = x[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)];
  const Eigen::MatrixXd p = a * a.completeOrthogonalDecomposition().pseudoInverse();
  WeightMatrix w(x.dimension(), x.dimension());
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) w(static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = p(i, j);
  return w;
}

// ---------------------------------------------------------------------------
// Generalization

struct GeneralizationRow {
  Pattern pattern;
  double loss = 0.0;
  bool training = false;
};

/// Row order used for N = 3 tables.
inline std::vector<Pattern> table_order_n3() {
  return {{0, 1, 0}, {0, 0, 1}, {0, 0, 0}, {0, 1, 1}, {1, 1, 0}, {1, 0, 1}, {1, 1, 1}, {1, 0, 0}};
}

/// Per-pattern mean squared error of phi_W(y) against y over all 2^N binary y.
inline std::vector<GeneralizationRow> generalization_table(const WeightMatrix& w, const Activation& phi,
                                                           const PatternSet* training = nullptr) {
  detail::require_dim(w.square(), "generalization table needs a square W");
  const std::size_t n = w.rows();
  if (n > kMaxBruteForceN) throw CapabilityError("generalization table limited to N <= 8");
  const auto patterns = n == 3 ? table_order_n3() : all_binary_patterns(n);
  std::vector<GeneralizationRow> rows;
  for (const auto& y : patterns) {
    const auto out = forward(w, phi, y);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += (out[i] - y[i]) * (out[i] - y[i]);
    rows.push_back({y, s / static_cast<double>(n), training != nullptr && training->contains(y)});
  }
  return rows;
}

inline double table_loss(const std::vector<GeneralizationRow>& rows, const Pattern& y) {
  for (const auto& r : rows)
    if (r.pattern == y) return r.loss;
  throw InvalidArgument("pattern " + to_string(y) + " not in table");
}

// ---------------------------------------------------------------------------
// Flow fields and fixed points

inline constexpr std::size_t kMaxMeshPoints = 100000;

/// Hypercube grid, `points` per axis between lo and hi inclusive.
struct Mesh {
  double lo = 0.0;
  double hi = 1.0;
  std::size_t points = 5;

  std::size_t count(std::size_t n) const {
    std::size_t c = 1;
    for (std::size_t d = 0; d < n; ++d) {
      c *= points;
      if (c > kMaxMeshPoints) throw CapabilityError("mesh exceeds " + std::to_string(kMaxMeshPoints) + " points");
    }
    return c;
  }

  /// Grid points in lexicographic order, first coordinate slowest.
  std::vector<Pattern> grid(std::size_t n) const {
    if (points == 0) throw InvalidArgument("mesh needs at least one point per axis");
    if (!(lo <= hi)) throw InvalidArgument("mesh bounds must satisfy lo <= hi");
    const std::size_t total = count(n);
    std::vector<Pattern> out;
    out.reserve(total);
    for (std::size_t id = 0; id < total; ++id) {
      Pattern p(n);
      std::size_t rest = id;
      for (std::size_t d = n; d-- > 0;) {
        const std::size_t k = rest % points;
        rest /= points;
        p[d] = points == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
      }
      out.push_back(std::move(p));
    }
    return out;
  }
};

struct FlowField {
  Mesh mesh;
  std::size_t steps = 0;
  std::vector<std::vector<Pattern>> trajectories;  // per start point, steps + 1 states
};

inline FlowField flow_field(const WeightMatrix& w, const Activation& phi, const Mesh& mesh = {},
                            std::size_t steps = 6) {
  detail::require_dim(w.square(), "flow field needs a square W");
  FlowField f{mesh, steps, {}};
  for (const auto& start : mesh.grid(w.rows())) f.trajectories.push_back(iterate(w, phi, start, steps));
  return f;
}

/// Jacobian diag(phi'(W p)) W of the map x -> phi(W x) at p.
inline Matrix jacobian_at(const WeightMatrix& w, const Activation& phi, const Pattern& p) {
  const auto u = w * p;
  Matrix j = w;
  for (std::size_t i = 0; i < w.rows(); ++i) {
    const double d = phi.derivative(u[i]);
    for (std::size_t k = 0; k < w.cols(); ++k) j(i, k) *= d;
  }
  return j;
}

inline Spectrum linearized_spectrum_at(const WeightMatrix& w, const Activation& phi, const Pattern& p) {
  detail::require_dim(w.square() && w.cols() == p.size(), "linearisation point has wrong length");
  return spectrum(jacobian_at(w, phi, p));
}

struct FixedPoint {
  Pattern point;            // mean of the endpoints in the cluster
  std::size_t basin = 0;    // mesh starts ending in the cluster
  double residual = 0.0;    // max-entry |phi_W(p) - p|
  double spectral_radius = 0.0;
  bool attractive = false;  // spectral radius of the linearisation < 1
};

struct FixedPointSet {
  std::vector<FixedPoint> points;
  std::size_t starts = 0;
  std::size_t unassigned = 0;  // starts whose cluster failed the residual test

  std::vector<FixedPoint> attractors() const {
    std::vector<FixedPoint> a;
    for (const auto& p : points)
      if (p.attractive) a.push_back(p);
    return a;
  }

  std::size_t attracted_starts() const {
    std::size_t s = 0;
    for (const auto& p : points)
      if (p.attractive) s += p.basin;
    return s;
  }
};

struct FixedPointOptions {
  Mesh mesh{};
  std::size_t steps = 25;
  double cluster_radius = 1e-2;
  double fp_tolerance = 1e-4;
};

/// Iterates every mesh start, clusters the endpoints greedily within
/// cluster_radius, and keeps clusters whose mean is a fixed point to
/// fp_tolerance.
inline FixedPointSet fixed_points(const WeightMatrix& w, const Activation& phi, const FixedPointOptions& opt = {}) {
  detail::require_dim(w.square(), "fixed points need a square W");
  const auto starts = opt.mesh.grid(w.rows());
  std::vector<Pattern> ends;
  ends.reserve(starts.size());
  for (const auto& s : starts) ends.push_back(iterate(w, phi, s, opt.steps).back());

  struct Cluster {
    Pattern seed;
    Pattern sum;
    std::size_t count = 0;
  };
  std::vector<Cluster> clusters;
  for (const auto& e : ends) {
    auto it = std::find_if(clusters.begin(), clusters.end(), [&](const Cluster& c) {
      Vector d(e.size());
      for (std::size_t i = 0; i < e.size(); ++i) d[i] = e[i] - c.seed[i];
      return norm2(d) <= opt.cluster_radius;
    });
    if (it == clusters.end()) {
      clusters.push_back({e, Pattern(e.size(), 0.0), 0});
      it = std::prev(clusters.end());
    }
    for (std::size_t i = 0; i < e.size(); ++i) it->sum[i] += e[i];
    ++it->count;
  }

  FixedPointSet out;
  out.starts = starts.size();
  for (const auto& c : clusters) {
    Pattern p = c.sum;
    for (double& v : p) v /= static_cast<double>(c.count);
    const double res = max_abs_diff(forward(w, phi, p), p);
    if (res > opt.fp_tolerance) {
      out.unassigned += c.count;
      continue;
    }
    const double rho = linearized_spectrum_at(w, phi, p).spectral_radius();
    out.points.push_back({p, c.count, res, rho, rho < 1.0});
  }
  return out;
}

enum class AttractorShape { points, plane, other };

inline std::string to_string(AttractorShape s) {
  switch (s) {
  case AttractorShape::points: return "points";
  case AttractorShape::plane: return "plane";
  case AttractorShape::other: return "other";
  }
  return "?";
}

struct AttractorClassification {
  AttractorShape shape = AttractorShape::other;
  double plane_residual = 0.0;  // RMS distance of endpoints to the best 2-D affine plane
  std::size_t clusters = 0;
};

/// Plane if the endpoints fit a 2-D affine plane to 1e-4 RMS and are not all
/// within cluster_radius of at most 3 points; points if they collapse onto
/// at most 3 clusters.
inline AttractorClassification classify_attractor(const std::vector<Pattern>& endpoints, double cluster_radius = 1e-2) {
  AttractorClassification c;
  if (endpoints.empty()) return c;
  const std::size_t n = endpoints.front().size();

  std::vector<Pattern> seeds;
  for (const auto& e : endpoints) {
    const bool near = std::any_of(seeds.begin(), seeds.end(), [&](const Pattern& s) {
      Vector d(n);
      for (std::size_t i = 0; i < n; ++i) d[i] = e[i] - s[i];
      return norm2(d) <= cluster_radius;
    });
    if (!near) seeds.push_back(e);
  }
  c.clusters = seeds.size();

  Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
  for (const auto& e : endpoints) mean += Eigen::Map<const Eigen::VectorXd>(e.data(), static_cast<Eigen::Index>(n));
  mean /= static_cast<double>(endpoints.size());
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (const auto& e : endpoints) {
    const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(e.data(), static_cast<Eigen::Index>(n)) - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(endpoints.size());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov);
  double off_plane = 0.0;  // eigenvalues ascending; all but the top two are off-plane variance
  for (Eigen::Index k = 0; k + 2 < static_cast<Eigen::Index>(n); ++k) off_plane += std::max(0.0, es.eigenvalues()(k));
  c.plane_residual = std::sqrt(off_plane);

  if (c.clusters <= 3) c.shape = AttractorShape::points;
  else if (c.plane_residual <= 1e-4) c.shape = AttractorShape::plane;
  return c;
}

} // namespace symnet
