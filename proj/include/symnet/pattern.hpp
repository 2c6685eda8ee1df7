#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "symnet/error.hpp"
#include "symnet/matrix.hpp"

namespace symnet {

/// An activation vector of length N. Training items are binary.
using Pattern = Vector;

inline constexpr double kPatternTolerance = 1e-12;

inline bool is_binary(const Pattern& x) {
  return std::all_of(x.begin(), x.end(), [](double v) { return v == 0.0 || v == 1.0; });
}

/// Equality used for set membership: exact on binary patterns, 1e-12 otherwise.
inline bool same_pattern(const Pattern& a, const Pattern& b) {
  if (a.size() != b.size()) return false;
  if (is_binary(a) && is_binary(b)) return a == b;
  return max_abs_diff(a, b) <= kPatternTolerance;
}

inline std::string to_string(const Pattern& x) {
  std::string s = "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) s += ",";
    const double v = x[i];
    if (v == static_cast<long long>(v)) s += std::to_string(static_cast<long long>(v));
    else s += std::to_string(v);
  }
  return s + ")";
}

/// Nonempty set of equal-length patterns without duplicates. Item order is
/// kept as given; it only affects display and orbit ordering.
class PatternSet {
public:
  explicit PatternSet(std::vector<Pattern> items) : items_(std::move(items)) {
    if (items_.empty()) throw InvalidArgument("pattern set must be nonempty");
    n_ = items_.front().size();
    if (n_ == 0) throw InvalidArgument("patterns must have length >= 1");
    for (std::size_t k = 0; k < items_.size(); ++k) {
      detail::require_dim(items_[k].size() == n_, "pattern set has items of different length");
      for (std::size_t j = 0; j < k; ++j)
        if (same_pattern(items_[j], items_[k]))
          throw InvalidArgument("duplicate pattern " + to_string(items_[k]) + " in set");
    }
  }

  std::size_t dimension() const noexcept { return n_; }
  std::size_t size() const noexcept { return items_.size(); }
  const std::vector<Pattern>& items() const noexcept { return items_; }
  const Pattern& operator[](std::size_t k) const { return items_[k]; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  bool binary() const {
    return std::all_of(items_.begin(), items_.end(), [](const Pattern& x) { return is_binary(x); });
  }

  /// Index of the matching item, or size() when absent.
  std::size_t find(const Pattern& x) const {
    for (std::size_t k = 0; k < items_.size(); ++k)
      if (same_pattern(items_[k], x)) return k;
    return items_.size();
  }

  bool contains(const Pattern& x) const { return find(x) != items_.size(); }

private:
  std::vector<Pattern> items_;
  std::size_t n_ = 0;
};

/// All 2^N binary patterns in counting order (x_1 most significant).
inline std::vector<Pattern> all_binary_patterns(std::size_t n) {
  if (n > 20) throw CapabilityError("refusing to enumerate 2^" + std::to_string(n) + " patterns");
  std::vector<Pattern> out;
  out.reserve(std::size_t{1} << n);
  for (std::size_t code = 0; code < (std::size_t{1} << n); ++code) {
    Pattern x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = static_cast<double>((code >> (n - 1 - i)) & 1u);
    out.push_back(std::move(x));
  }
  return out;
}

namespace sets {

/// The two training sets used throughout: X = {(1,0,1),(1,1,0)}.
inline PatternSet x() { return PatternSet({{1, 0, 1}, {1, 1, 0}}); }

/// X' = {(0,1,0),(0,0,1)}, also the ARC triangle training set.
inline PatternSet x_prime() { return PatternSet({{0, 1, 0}, {0, 0, 1}}); }

} // namespace sets
} // namespace symnet
