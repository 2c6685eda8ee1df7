#pragma once

#include <cmath>
#include <sstream>
#include <string>

#include "symnet/error.hpp"

namespace symnet {

enum class ActivationKind { identity, tanh, sigmoid };

inline std::string to_string(ActivationKind k) {
  switch (k) {
  case ActivationKind::identity: return "identity";
  case ActivationKind::tanh: return "tanh";
  case ActivationKind::sigmoid: return "sigmoid";
  }
  return "?";
}

inline ActivationKind parse_activation_kind(const std::string& s) {
  if (s == "identity" || s == "id" || s == "linear") return ActivationKind::identity;
  if (s == "tanh") return ActivationKind::tanh;
  if (s == "sigmoid") return ActivationKind::sigmoid;
  throw ParseError("unknown activation '" + s + "'");
}

/// Strictly increasing scalar nonlinearity.
///   identity: u
///   tanh:     tanh(u - c)          c is a shift, default 0
///   sigmoid:  1 / (1 + exp(-c u))  c is a gain, default 1, must be > 0
struct Activation {
  ActivationKind kind = ActivationKind::identity;
  double c = 0.0;

  static Activation identity() { return {ActivationKind::identity, 0.0}; }
  static Activation tanh(double shift = 0.0) { return {ActivationKind::tanh, shift}; }
  static Activation sigmoid(double gain = 1.0) {
    if (!(gain > 0.0)) throw InvalidArgument("sigmoid gain must be > 0");
    return {ActivationKind::sigmoid, gain};
  }

  static Activation make(ActivationKind k) {
    switch (k) {
    case ActivationKind::identity: return identity();
    case ActivationKind::tanh: return tanh();
    case ActivationKind::sigmoid: return sigmoid();
    }
    return identity();
  }

  static Activation make(ActivationKind k, double c) {
    switch (k) {
    case ActivationKind::identity: return identity();
    case ActivationKind::tanh: return tanh(c);
    case ActivationKind::sigmoid: return sigmoid(c);
    }
    return identity();
  }

  bool linear() const noexcept { return kind == ActivationKind::identity; }

  double operator()(double u) const {
    switch (kind) {
    case ActivationKind::identity: return u;
    case ActivationKind::tanh: return std::tanh(u - c);
    case ActivationKind::sigmoid: return 1.0 / (1.0 + std::exp(-c * u));
    }
    return u;
  }

  double derivative(double u) const {
    switch (kind) {
    case ActivationKind::identity: return 1.0;
    case ActivationKind::tanh: {
      const double t = std::tanh(u - c);
      return 1.0 - t * t;
    }
    case ActivationKind::sigmoid: {
      const double s = 1.0 / (1.0 + std::exp(-c * u));
      return c * s * (1.0 - s);
    }
    }
    return 1.0;
  }

  std::string to_string() const {
    if (linear()) return symnet::to_string(kind);
    std::ostringstream os;
    os << symnet::to_string(kind) << "(c=" << c << ")";
    return os.str();
  }

  friend bool operator==(const Activation&, const Activation&) = default;
};

} // namespace symnet
