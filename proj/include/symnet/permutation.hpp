#pragma once

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "symnet/error.hpp"
#include "symnet/matrix.hpp"
#include "symnet/pattern.hpp"

namespace symnet {

/// Bijection of {0,...,N-1}. Stored 0-based; displayed 1-based in cycle
/// notation, e.g. the swap of the second and third entries prints as "(32)".
class Permutation {
public:
  explicit Permutation(std::vector<std::size_t> map) : map_(std::move(map)) {
    if (map_.empty()) throw InvalidArgument("permutation of an empty set");
    std::vector<bool> seen(map_.size(), false);
    for (std::size_t v : map_) {
      if (v >= map_.size() || seen[v]) throw InvalidArgument("index map is not a bijection");
      seen[v] = true;
    }
  }

  static Permutation identity(std::size_t n) {
    std::vector<std::size_t> m(n);
    std::iota(m.begin(), m.end(), std::size_t{0});
    return Permutation(std::move(m));
  }

  /// Transposition of two 0-based indices.
  static Permutation swap(std::size_t n, std::size_t i, std::size_t j) {
    auto p = identity(n).map_;
    detail::require_dim(i < n && j < n, "transposition index out of range");
    std::swap(p[i], p[j]);
    return Permutation(std::move(p));
  }

  /// Parses 1-based cycle notation: "e", "(32)", "(12)(34)", "(1 3 2)".
  /// Digits are single indices unless separated by spaces or commas.
  static Permutation parse_cycles(std::size_t n, const std::string& text) {
    auto map = identity(n).map_;
    std::vector<bool> used(n, false);
    std::size_t pos = text.find_first_not_of(" \t");
    if (pos == std::string::npos || text.substr(pos, 1) == "e") return Permutation(std::move(map));
    while (pos < text.size()) {
      if (std::isspace(static_cast<unsigned char>(text[pos]))) {
        ++pos;
        continue;
      }
      if (text[pos] != '(') throw ParseError("bad cycle notation: " + text);
      const auto close = text.find(')', pos);
      if (close == std::string::npos) throw ParseError("unterminated cycle: " + text);
      const std::string body = text.substr(pos + 1, close - pos - 1);
      const bool separated = body.find_first_of(" ,") != std::string::npos;
      std::vector<std::size_t> cyc;
      std::string tok;
      auto flush = [&] {
        if (tok.empty()) return;
        const auto v = std::stoul(tok);
        if (v < 1 || v > n) throw ParseError("cycle index out of range: " + text);
        if (used[v - 1]) throw ParseError("index repeated in cycle notation: " + text);
        used[v - 1] = true;
        cyc.push_back(v - 1);
        tok.clear();
      };
      for (char c : body) {
        if (std::isdigit(static_cast<unsigned char>(c))) {
          tok += c;
          if (!separated) flush();
        } else if (c == ' ' || c == ',') {
          flush();
        } else {
          throw ParseError("bad character in cycle notation: " + text);
        }
      }
      flush();
      for (std::size_t k = 0; k < cyc.size(); ++k) map[cyc[k]] = cyc[(k + 1) % cyc.size()];
      pos = close + 1;
    }
    return Permutation(std::move(map));
  }

  std::size_t size() const noexcept { return map_.size(); }
  std::size_t operator()(std::size_t i) const { return map_[i]; }
  const std::vector<std::size_t>& map() const noexcept { return map_; }

  bool is_identity() const {
    for (std::size_t i = 0; i < map_.size(); ++i)
      if (map_[i] != i) return false;
    return true;
  }

  Permutation inverse() const {
    std::vector<std::size_t> inv(map_.size());
    for (std::size_t i = 0; i < map_.size(); ++i) inv[map_[i]] = i;
    return Permutation(std::move(inv));
  }

  /// 1-based cycle notation; each cycle starts at its largest element and
  /// fixed points are omitted. The identity prints as "e".
  std::string cycles() const {
    const bool wide = map_.size() > 9;
    std::vector<bool> done(map_.size(), false);
    std::vector<std::vector<std::size_t>> out;
    for (std::size_t i = map_.size(); i-- > 0;) {
      if (done[i] || map_[i] == i) continue;
      std::vector<std::size_t> cyc;
      for (std::size_t j = i; !done[j]; j = map_[j]) {
        done[j] = true;
        cyc.push_back(j);
      }
      out.push_back(std::move(cyc));
    }
    if (out.empty()) return "e";
    std::string s;
    for (const auto& cyc : out) {
      s += "(";
      for (std::size_t k = 0; k < cyc.size(); ++k) {
        if (wide && k) s += " ";
        s += std::to_string(cyc[k] + 1);
      }
      s += ")";
    }
    return s;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;
  friend auto operator<=>(const Permutation& a, const Permutation& b) { return a.map_ <=> b.map_; }

private:
  std::vector<std::size_t> map_;
};

/// u(i) = s(t(i)).
inline Permutation compose(const Permutation& s, const Permutation& t) {
  detail::require_dim(s.size() == t.size(), "composing permutations of different length");
  std::vector<std::size_t> u(s.size());
  for (std::size_t i = 0; i < u.size(); ++i) u[i] = s(t(i));
  return Permutation(std::move(u));
}

/// (s.x)_i = x_{s(i)}. With compose() above this gives
/// act(compose(s,t), x) == act(t, act(s, x)).
inline Pattern act(const Permutation& s, const Pattern& x) {
  detail::require_dim(s.size() == x.size(), "permutation and pattern length differ");
  Pattern y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[s(i)];
  return y;
}

/// (s.W)_ij = W_{s(i)s(j)}.
inline Matrix act(const Permutation& s, const Matrix& w) {
  detail::require_dim(w.rows() == s.size() && w.cols() == s.size(), "permutation and matrix size differ");
  Matrix m(w.rows(), w.cols());
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j) m(i, j) = w(s(i), s(j));
  return m;
}

} // namespace symnet
