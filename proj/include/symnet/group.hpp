#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "symnet/error.hpp"
#include "symnet/matrix.hpp"
#include "symnet/pattern.hpp"
#include "symnet/permutation.hpp"

namespace symnet {

/// Brute-force enumeration limit: 8! = 40320 candidate permutations.
inline constexpr std::size_t kMaxBruteForceN = 8;

/// A finite permutation group, elements kept sorted with the identity first.
class SymmetryGroup {
public:
  explicit SymmetryGroup(std::vector<Permutation> elements) : elements_(std::move(elements)) {
    if (elements_.empty()) throw InvalidArgument("a group needs at least the identity");
    n_ = elements_.front().size();
    for (const auto& s : elements_) detail::require_dim(s.size() == n_, "group elements of different degree");
    std::sort(elements_.begin(), elements_.end());
    elements_.erase(std::unique(elements_.begin(), elements_.end()), elements_.end());
  }

  static SymmetryGroup trivial(std::size_t n) { return SymmetryGroup({Permutation::identity(n)}); }

  /// All n! permutations.
  static SymmetryGroup symmetric(std::size_t n) {
    if (n > kMaxBruteForceN) throw CapabilityError("S_" + std::to_string(n) + " is too large to enumerate");
    std::vector<Permutation> all;
    auto m = Permutation::identity(n).map();
    do all.emplace_back(m);
    while (std::next_permutation(m.begin(), m.end()));
    return SymmetryGroup(std::move(all));
  }

  std::size_t degree() const noexcept { return n_; }
  std::size_t order() const noexcept { return elements_.size(); }
  const std::vector<Permutation>& elements() const noexcept { return elements_; }
  auto begin() const { return elements_.begin(); }
  auto end() const { return elements_.end(); }

  bool contains(const Permutation& s) const { return std::binary_search(elements_.begin(), elements_.end(), s); }

  /// Identity, closure and inverses, checked by enumeration.
  bool satisfies_group_axioms() const {
    if (!contains(Permutation::identity(n_))) return false;
    for (const auto& s : elements_) {
      if (!contains(s.inverse())) return false;
      for (const auto& t : elements_)
        if (!contains(compose(s, t))) return false;
    }
    return true;
  }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t k = 0; k < elements_.size(); ++k) {
      if (k) s += ", ";
      s += elements_[k].cycles();
    }
    return s + "}";
  }

  friend bool operator==(const SymmetryGroup&, const SymmetryGroup&) = default;

private:
  std::vector<Permutation> elements_;
  std::size_t n_ = 0;
};

inline bool stabilizes(const Permutation& s, const PatternSet& x) {
  return std::all_of(x.begin(), x.end(), [&](const Pattern& p) { return x.contains(act(s, p)); });
}

/// Every s in S_N with s.x in X for all x in X, found by enumerating S_N.
inline SymmetryGroup symmetry_group(const PatternSet& x, std::size_t cap = kMaxBruteForceN) {
  const std::size_t n = x.dimension();
  if (n > cap)
    throw CapabilityError("symmetry search over S_" + std::to_string(n) + " exceeds the brute-force cap N <= " +
                          std::to_string(cap));
  std::vector<Permutation> found;
  auto m = Permutation::identity(n).map();
  do {
    Permutation s(m);
    if (stabilizes(s, x)) found.push_back(std::move(s));
  } while (std::next_permutation(m.begin(), m.end()));
  return SymmetryGroup(std::move(found));
}

/// Partition of a pattern set into orbits under a group.
struct OrbitPartition {
  std::vector<PatternSet> orbits;

  std::size_t size() const noexcept { return orbits.size(); }
};

/// Orbits ordered by first appearance in X; items within an orbit keep X's order.
inline OrbitPartition orbits(const PatternSet& x, const SymmetryGroup& g) {
  detail::require_dim(g.degree() == x.dimension(), "group degree differs from pattern length");
  for (const auto& s : g)
    if (!stabilizes(s, x)) throw InvalidArgument("group element " + s.cycles() + " does not stabilise the set");

  std::vector<std::size_t> block(x.size(), x.size());
  std::size_t next = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (block[k] != x.size()) continue;
    for (const auto& s : g) block[x.find(act(s, x[k]))] = next;
    ++next;
  }
  OrbitPartition out;
  for (std::size_t b = 0; b < next; ++b) {
    std::vector<Pattern> items;
    for (std::size_t k = 0; k < x.size(); ++k)
      if (block[k] == b) items.push_back(x[k]);
    out.orbits.emplace_back(std::move(items));
  }
  return out;
}

/// Equivalence classes of index pairs (i,j) under (i,j) -> (s(i),s(j)).
/// Classes are numbered by first appearance in a row-major scan, which makes
/// the N=3, {e,(32)} case come out as a,b,b / c,d,e / c,e,d.
struct PairPartition {
  std::size_t n = 0;
  std::vector<std::size_t> class_of;                                 // n*n, row-major
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> classes;

  std::size_t class_count() const noexcept { return classes.size(); }
  std::size_t operator()(std::size_t i, std::size_t j) const { return class_of[i * n + j]; }
};

inline PairPartition pair_orbits(std::size_t n, const SymmetryGroup& g) {
  if (n == 0) throw InvalidArgument("pair orbits need N >= 1");
  detail::require_dim(g.degree() == n, "group degree differs from N");
  PairPartition p;
  p.n = n;
  const std::size_t unset = n * n;
  p.class_of.assign(n * n, unset);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (p.class_of[i * n + j] != unset) continue;
      const std::size_t c = p.classes.size();
      p.classes.emplace_back();
      for (const auto& s : g) {
        auto& slot = p.class_of[s(i) * n + s(j)];
        if (slot == unset) {
          slot = c;
          p.classes[c].emplace_back(s(i), s(j));
        }
      }
      std::sort(p.classes[c].begin(), p.classes[c].end());
    }
  return p;
}

} // namespace symnet
