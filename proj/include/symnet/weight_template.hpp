#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "symnet/group.hpp"
#include "symnet/network.hpp"

namespace symnet {

/// Weight-sharing structure induced by a group: one free parameter per pair
/// orbit. For N=3 and {e,(32)} this is
///     a b b
///     c d e
///     c e d
struct Template {
  PairPartition classes;
  std::vector<std::string> names;

  std::size_t n() const noexcept { return classes.n; }
  std::size_t parameter_count() const noexcept { return classes.class_count(); }

  /// Template parameters read back from a matrix (first entry of each class).
  std::vector<double> parameters_of(const WeightMatrix& w) const {
    detail::require_dim(w.rows() == n() && w.cols() == n(), "matrix size differs from template");
    std::vector<double> p;
    for (const auto& cls : classes.classes) p.push_back(w(cls.front().first, cls.front().second));
    return p;
  }

  /// Human-readable grid of parameter names.
  std::string layout() const {
    std::string s;
    for (std::size_t i = 0; i < n(); ++i) {
      for (std::size_t j = 0; j < n(); ++j) {
        if (j) s += ' ';
        s += names[classes(i, j)];
      }
      s += '\n';
    }
    return s;
  }
};

inline std::string template_parameter_name(std::size_t k) {
  if (k < 26) return std::string(1, static_cast<char>('a' + k));
  return "p" + std::to_string(k + 1);
}

inline Template build_template(std::size_t n, const SymmetryGroup& g) {
  Template t{pair_orbits(n, g), {}};
  for (std::size_t k = 0; k < t.parameter_count(); ++k) t.names.push_back(template_parameter_name(k));
  return t;
}

inline WeightMatrix instantiate(const Template& t, const std::vector<double>& params) {
  if (params.size() != t.parameter_count())
    throw DimensionError("template has " + std::to_string(t.parameter_count()) + " parameters, got " +
                         std::to_string(params.size()));
  WeightMatrix w(t.n(), t.n());
  for (std::size_t i = 0; i < t.n(); ++i)
    for (std::size_t j = 0; j < t.n(); ++j) w(i, j) = params[t.classes(i, j)];
  return w;
}

} // namespace symnet
