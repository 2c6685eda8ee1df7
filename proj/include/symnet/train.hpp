#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "symnet/activation.hpp"
#include "symnet/network.hpp"
#include "symnet/random.hpp"

namespace symnet {

enum class Optimizer { sgd, adam };

inline std::string to_string(Optimizer o) { return o == Optimizer::sgd ? "sgd" : "adam"; }

inline Optimizer parse_optimizer(const std::string& s) {
  if (s == "sgd") return Optimizer::sgd;
  if (s == "adam") return Optimizer::adam;
  throw ParseError("unknown optimizer '" + s + "'");
}

enum class InitKind { zeros, ones, uniform01, gaussian };

inline std::string to_string(InitKind k) {
  switch (k) {
  case InitKind::zeros: return "zeros";
  case InitKind::ones: return "ones";
  case InitKind::uniform01: return "uniform";
  case InitKind::gaussian: return "gaussian";
  }
  return "?";
}

inline InitKind parse_init_kind(const std::string& s) {
  if (s == "zeros" || s == "zero") return InitKind::zeros;
  if (s == "ones" || s == "one") return InitKind::ones;
  if (s == "uniform" || s == "uniform01") return InitKind::uniform01;
  if (s == "gaussian" || s == "normal") return InitKind::gaussian;
  throw ParseError("unknown init scheme '" + s + "'");
}

struct InitScheme {
  InitKind kind = InitKind::zeros;
  double mean = 0.0;
  double sigma = 0.05;

  static InitScheme zeros() { return {InitKind::zeros}; }
  static InitScheme ones() { return {InitKind::ones}; }
  static InitScheme uniform01() { return {InitKind::uniform01}; }
  static InitScheme gaussian(double mean = 0.0, double sigma = 0.05) { return {InitKind::gaussian, mean, sigma}; }

  friend bool operator==(const InitScheme&, const InitScheme&) = default;
};

inline WeightMatrix init_weights(const InitScheme& scheme, std::uint64_t seed, std::size_t n) {
  switch (scheme.kind) {
  case InitKind::zeros: return WeightMatrix(n, n, 0.0);
  case InitKind::ones: return WeightMatrix(n, n, 1.0);
  case InitKind::uniform01: {
    Rng rng(seed);
    WeightMatrix w(n, n);
    for (double& v : w.data()) v = rng.uniform();
    return w;
  }
  case InitKind::gaussian: {
    if (!(scheme.sigma > 0.0) || !std::isfinite(scheme.sigma)) throw InvalidArgument("gaussian init needs sigma > 0");
    Rng rng(seed);
    WeightMatrix w(n, n);
    for (double& v : w.data()) v = rng.normal(scheme.mean, scheme.sigma);
    return w;
  }
  }
  throw InvalidArgument("unknown init scheme");
}

inline constexpr double kLinearThreshold = 1e-13;
inline constexpr double kNonlinearThreshold = 1e-7;
inline constexpr double kDivergenceLoss = 1e6;

struct TrainConfig {
  Optimizer optimizer = Optimizer::sgd;
  double learning_rate = 0.1;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::size_t max_epochs = 200000;
  /// Stop when the (unpenalised) loss reaches this. Unset means 1e-13 for the
  /// identity activation and 1e-7 otherwise.
  std::optional<double> threshold;
  InitScheme init = InitScheme::zeros();
  std::uint64_t seed = 0;
  double l2 = 0.0;

  /// Defaults per optimizer: SGD lr 0.1, ADAM lr 0.01.
  static TrainConfig defaults(Optimizer o) {
    TrainConfig c;
    c.optimizer = o;
    c.learning_rate = o == Optimizer::sgd ? 0.1 : 0.01;
    return c;
  }

  double threshold_for(const Activation& phi) const {
    return threshold.value_or(phi.linear() ? kLinearThreshold : kNonlinearThreshold);
  }

  void validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!(learning_rate > 0.0) || !finite(learning_rate)) throw InvalidArgument("learning rate must be > 0");
    if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0))
      throw InvalidArgument("adam betas must lie in (0,1)");
    if (!(epsilon > 0.0) || !finite(epsilon)) throw InvalidArgument("adam epsilon must be > 0");
    if (threshold && (!(*threshold >= 0.0) || !finite(*threshold))) throw InvalidArgument("threshold must be >= 0");
    if (!(l2 >= 0.0) || !finite(l2)) throw InvalidArgument("l2 weight must be >= 0");
    if (!finite(init.mean) || !finite(init.sigma)) throw InvalidArgument("init parameters must be finite");
  }

  friend bool operator==(const TrainConfig&, const TrainConfig&) = default;
};

struct TrainResult {
  WeightMatrix weights;
  std::vector<double> loss_curve;  // loss before each update, then the final loss
  std::size_t epochs = 0;          // number of updates applied
  bool converged = false;
  double final_loss = 0.0;
  TrainConfig config;
  Activation activation;
};

/// Mean over items and components of (phi_W(x)_i - x_i)^2.
inline double mse_loss(const WeightMatrix& w, const Activation& phi, const PatternSet& x) {
  double s = 0.0;
  for (const auto& item : x) {
    const auto y = forward(w, phi, item);
    for (std::size_t i = 0; i < y.size(); ++i) s += (y[i] - item[i]) * (y[i] - item[i]);
  }
  return s / static_cast<double>(x.size() * x.dimension());
}

/// Loss actually minimised: mse_loss + l2 * ||W||_F^2.
inline double objective(const WeightMatrix& w, const Activation& phi, const PatternSet& x, double l2 = 0.0) {
  const double f = w.frobenius();
  return mse_loss(w, phi, x) + l2 * f * f;
}

/// d objective / d W_ij = (2 / (M N)) sum_x r_i phi'(u_i) x_j + 2 l2 W_ij,
/// with u = W x and r = phi(u) - x.
inline WeightMatrix loss_gradient(const WeightMatrix& w, const Activation& phi, const PatternSet& x, double l2 = 0.0) {
  const std::size_t n = x.dimension();
  detail::require_dim(w.rows() == n && w.cols() == n, "gradient: W is not N x N");
  WeightMatrix g(n, n);
  const double scale = 2.0 / static_cast<double>(x.size() * n);
  for (const auto& item : x) {
    const auto u = w * item;
    for (std::size_t i = 0; i < n; ++i) {
      const double delta = scale * (phi(u[i]) - item[i]) * phi.derivative(u[i]);
      if (delta == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) g(i, j) += delta * item[j];
    }
  }
  if (l2 != 0.0) g += (2.0 * l2) * w;
  return g;
}

/// Full-batch gradient descent (plain or ADAM) from init_weights(config).
/// Deterministic for a given config.
inline TrainResult train(const TrainConfig& config, const PatternSet& x, const Activation& phi) {
  config.validate();
  const std::size_t n = x.dimension();
  const double threshold = config.threshold_for(phi);

  TrainResult r;
  r.config = config;
  r.activation = phi;
  WeightMatrix w = init_weights(config.init, config.seed, n);
  WeightMatrix m(n, n), v(n, n);
  double b1t = 1.0, b2t = 1.0;

  for (std::size_t epoch = 0;; ++epoch) {
    const double loss = mse_loss(w, phi, x);
    r.loss_curve.push_back(loss);
    if (!std::isfinite(loss) || loss > kDivergenceLoss || !w.all_finite()) throw DivergenceError(epoch, loss);
    if (loss <= threshold) {
      r.converged = true;
      break;
    }
    if (epoch == config.max_epochs) break;

    const WeightMatrix g = loss_gradient(w, phi, x, config.l2);
    if (config.optimizer == Optimizer::sgd) {
      for (std::size_t k = 0; k < g.data().size(); ++k) w.data()[k] -= config.learning_rate * g.data()[k];
    } else {
      b1t *= config.beta1;
      b2t *= config.beta2;
      for (std::size_t k = 0; k < g.data().size(); ++k) {
        const double gk = g.data()[k];
        double& mk = m.data()[k];
        double& vk = v.data()[k];
        mk = config.beta1 * mk + (1.0 - config.beta1) * gk;
        vk = config.beta2 * vk + (1.0 - config.beta2) * gk * gk;
        const double mhat = mk / (1.0 - b1t);
        const double vhat = vk / (1.0 - b2t);
        w.data()[k] -= config.learning_rate * mhat / (std::sqrt(vhat) + config.epsilon);
      }
    }
    r.epochs = epoch + 1;
  }
  r.weights = std::move(w);
  r.final_loss = r.loss_curve.back();
  return r;
}

struct EnsembleResult {
  std::vector<TrainResult> runs;
  WeightMatrix mean;
};

/// n_seeds independent runs with seeds config.seed + k. Runs execute on
/// worker threads; results are ordered by k, so the output does not depend
/// on scheduling.
inline EnsembleResult ensemble_train(const TrainConfig& config, const PatternSet& x, const Activation& phi,
                                     std::size_t n_seeds, std::size_t workers = 0) {
  if (n_seeds == 0) throw InvalidArgument("ensemble needs at least one seed");
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n_seeds);

  EnsembleResult out;
  out.runs.resize(n_seeds);
  auto work = [&](std::size_t first) {
    for (std::size_t k = first; k < n_seeds; k += workers) {
      TrainConfig c = config;
      c.seed = config.seed + k;
      out.runs[k] = train(c, x, phi);
    }
  };
  std::vector<std::future<void>> jobs;
  for (std::size_t t = 0; t < workers; ++t) jobs.push_back(std::async(std::launch::async, work, t));
  for (auto& j : jobs) j.get();

  const std::size_t n = x.dimension();
  out.mean = WeightMatrix(n, n);
  for (const auto& run : out.runs) out.mean += run.weights;
  out.mean *= 1.0 / static_cast<double>(n_seeds);
  return out;
}

} // namespace symnet
