#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "symnet/activation.hpp"
#include "symnet/group.hpp"
#include "symnet/network.hpp"
#include "symnet/weight_template.hpp"

namespace symnet {

inline constexpr double kRankTolerance = 1e-10;

/// Affine set of matrices particular + sum_k p_k basis[k].
struct LinearFamily {
  Template tmpl;
  WeightMatrix particular;
  std::vector<WeightMatrix> basis;
  std::vector<std::string> names;

  std::size_t dimension() const noexcept { return basis.size(); }
};

/// How solve_linear_family parameterises the solution set.
enum class FamilyBasis {
  /// Minimum-Frobenius-norm particular solution, Frobenius-orthonormal basis.
  min_norm,
  /// Reduced row echelon form over template classes: pivots on the earliest
  /// classes, the remaining classes are the free parameters and keep their
  /// template names. Reproduces the hand-derived W_{a,b} families.
  free_entries,
};

namespace detail {

// Row per (item, output index): sum_k p_k * (sum_{j in class k, row i} x_j) = x_i.
inline void fixed_point_constraints(const PatternSet& x, const Template& t, Eigen::MatrixXd& a, Eigen::VectorXd& b) {
  const std::size_t n = t.n();
  a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(x.size() * n), static_cast<Eigen::Index>(t.parameter_count()));
  b = Eigen::VectorXd::Zero(a.rows());
  Eigen::Index r = 0;
  for (const auto& item : x)
    for (std::size_t i = 0; i < n; ++i, ++r) {
      for (std::size_t j = 0; j < n; ++j) a(r, static_cast<Eigen::Index>(t.classes(i, j))) += item[j];
      b(r) = item[i];
    }
}

inline WeightMatrix matrix_from_params(const Template& t, const Eigen::VectorXd& p) {
  return instantiate(t, std::vector<double>(p.data(), p.data() + p.size()));
}

inline LinearFamily min_norm_family(const Template& t, const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  // Scale each parameter by sqrt(class size) so the Euclidean norm in
  // parameter space is the Frobenius norm of the matrix.
  const auto k = static_cast<Eigen::Index>(t.parameter_count());
  Eigen::VectorXd scale(k);
  for (Eigen::Index c = 0; c < k; ++c)
    scale(c) = std::sqrt(static_cast<double>(t.classes.classes[static_cast<std::size_t>(c)].size()));
  const Eigen::MatrixXd as = a * scale.cwiseInverse().asDiagonal();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(as, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double cutoff = kRankTolerance * std::max(1.0, sv.size() ? sv(0) : 0.0);
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > cutoff) ++rank;

  Eigen::VectorXd q = Eigen::VectorXd::Zero(k);
  for (Eigen::Index r = 0; r < rank; ++r) q += svd.matrixV().col(r) * (svd.matrixU().col(r).dot(b) / sv(r));
  if ((as * q - b).norm() > 1e-9 * std::max(1.0, b.norm()))
    throw NumericError("fixed-point constraints are inconsistent; the identity should always solve them");

  LinearFamily f{t, matrix_from_params(t, q.cwiseQuotient(scale)), {}, {}};
  for (Eigen::Index c = rank; c < k; ++c) {
    f.basis.push_back(matrix_from_params(t, svd.matrixV().col(c).cwiseQuotient(scale)));
    f.names.push_back("t" + std::to_string(c - rank + 1));
  }
  return f;
}

inline LinearFamily free_entry_family(const Template& t, Eigen::MatrixXd a, Eigen::VectorXd b) {
  const Eigen::Index rows = a.rows();
  const Eigen::Index cols = a.cols();
  std::vector<Eigen::Index> pivots;
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  Eigen::Index r = 0;
  for (Eigen::Index c = 0; c < cols && r < rows; ++c) {
    Eigen::Index best = r;
    for (Eigen::Index i = r + 1; i < rows; ++i)
      if (std::abs(a(i, c)) > std::abs(a(best, c))) best = i;
    if (std::abs(a(best, c)) <= kRankTolerance) continue;
    a.row(r).swap(a.row(best));
    std::swap(b(r), b(best));
    const double piv = a(r, c);
    a.row(r) /= piv;
    b(r) /= piv;
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i == r || a(i, c) == 0.0) continue;
      const double f = a(i, c);
      a.row(i) -= f * a.row(r);
      b(i) -= f * b(r);
    }
    pivots.push_back(c);
    is_pivot[static_cast<std::size_t>(c)] = true;
    ++r;
  }
  for (Eigen::Index i = r; i < rows; ++i)
    if (std::abs(b(i)) > 1e-9) throw NumericError("fixed-point constraints are inconsistent");

  Eigen::VectorXd p0 = Eigen::VectorXd::Zero(cols);
  for (std::size_t k = 0; k < pivots.size(); ++k) p0(pivots[k]) = b(static_cast<Eigen::Index>(k));

  LinearFamily f{t, matrix_from_params(t, p0), {}, {}};
  for (Eigen::Index c = 0; c < cols; ++c) {
    if (is_pivot[static_cast<std::size_t>(c)]) continue;
    Eigen::VectorXd dir = Eigen::VectorXd::Zero(cols);
    dir(c) = 1.0;
    for (std::size_t k = 0; k < pivots.size(); ++k) dir(pivots[k]) = -a(static_cast<Eigen::Index>(k), c);
    f.basis.push_back(matrix_from_params(t, dir));
    f.names.push_back(t.names[static_cast<std::size_t>(c)]);
  }
  return f;
}

} // namespace detail

/// All linear auto-associators on X that are compatible with G:
/// {W : W x = x for x in X, W = s.W for s in G}.
inline LinearFamily solve_linear_family(const PatternSet& x, const SymmetryGroup& g,
                                        FamilyBasis basis = FamilyBasis::min_norm) {
  detail::require_dim(g.degree() == x.dimension(), "group degree differs from pattern length");
  const Template t = build_template(x.dimension(), g);
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
  detail::fixed_point_constraints(x, t, a, b);
  return basis == FamilyBasis::min_norm ? detail::min_norm_family(t, a, b) : detail::free_entry_family(t, a, b);
}

/// Same, with G = symmetry_group(X).
inline LinearFamily solve_linear_family(const PatternSet& x, FamilyBasis basis = FamilyBasis::min_norm) {
  return solve_linear_family(x, symmetry_group(x), basis);
}

inline WeightMatrix family_member(const LinearFamily& f, const std::vector<double>& params) {
  if (params.size() != f.basis.size())
    throw DimensionError("family has " + std::to_string(f.basis.size()) + " parameters, got " +
                         std::to_string(params.size()));
  WeightMatrix w = f.particular;
  for (std::size_t k = 0; k < params.size(); ++k) w += params[k] * f.basis[k];
  return w;
}

/// Which form of the nonlinear correction matrices to return.
enum class Transcription {
  /// Sigmoid (2,2) entry made equal to (3,3) so the matrix has the template
  /// structure it is claimed to have.
  corrected,
  /// Entries exactly as originally printed; the sigmoid form is then not
  /// invariant under (32).
  verbatim,
};

/// Correction term W_c with W_abc = W_ab + W_c for the N=3 training sets.
inline WeightMatrix nonlinear_correction(ActivationKind kind, double c,
                                         Transcription form = Transcription::corrected) {
  switch (kind) {
  case ActivationKind::tanh: {
    const double t1 = std::tanh(1.0 + c);
    const double t0 = std::tanh(c);
    const double diag = t0 - t1 + 1.0;
    return WeightMatrix{{t1 - 1.0, 0.0, 0.0}, {t0, diag, 0.0}, {t0, 0.0, diag}};
  }
  case ActivationKind::sigmoid: {
    const double em = std::exp(-c);
    const double d33 = 0.5 * (1.0 - em) / (1.0 + em) - 1.0;
    const double d22 = form == Transcription::verbatim ? std::tanh(c) - std::tanh(1.0 + c) + 1.0 : d33;
    return WeightMatrix{{-em / (1.0 + em), 0.0, 0.0}, {0.5, d22, 0.0}, {0.5, 0.0, d33}};
  }
  case ActivationKind::identity: break;
  }
  throw InvalidArgument("no nonlinear correction for activation '" + to_string(kind) + "'");
}

/// Orthonormal basis of span(X) by modified Gram-Schmidt.
inline std::vector<Vector> plane_span(const PatternSet& x, double tol = kRankTolerance) {
  std::vector<Vector> q;
  for (const auto& item : x) {
    Vector v = item;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& e : q) {
        const double d = dot(v, e);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= d * e[i];
      }
    const double nv = norm2(v);
    if (nv <= tol * std::max(1.0, norm2(item))) continue;
    for (double& vi : v) vi /= nv;
    q.push_back(std::move(v));
  }
  return q;
}

/// Euclidean distance from y to the subspace with orthonormal basis q.
inline double distance_to_span(const Vector& y, const std::vector<Vector>& q) {
  Vector r = y;
  for (const auto& e : q) {
    const double d = dot(y, e);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= d * e[i];
  }
  return norm2(r);
}

} // namespace symnet
