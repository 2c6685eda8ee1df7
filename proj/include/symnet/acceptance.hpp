#pragma once

#include <cstdint>
#include <functional>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "symnet/arc.hpp"
#include "symnet/symnet.hpp"

namespace symnet::acceptance {

struct Check {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct Options {
  std::uint64_t seed = 0;
  bool quick = false;       // fewer ensemble seeds, looser ensemble tolerance
  std::size_t workers = 0;  // 0: hardware concurrency
};

struct NamedMatrix {
  std::string name;
  WeightMatrix w;
};

struct NamedFlow {
  std::string name;
  FlowField flow;
};

/// Everything the checks computed, kept for export.
struct Artifacts {
  std::vector<NamedMatrix> matrices;
  std::vector<std::pair<std::string, std::vector<GeneralizationRow>>> table;
  std::vector<NamedFlow> flows;
};

struct Report {
  std::vector<Check> checks;
  std::vector<std::string> notes;
  Artifacts artifacts;

  bool all_passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
  }
};

inline constexpr std::size_t kEnsembleSeeds = 200;
inline constexpr std::size_t kQuickEnsembleSeeds = 40;
inline constexpr double kEnsembleTolerance = 0.02;
inline constexpr double kQuickEnsembleTolerance = 0.05;
inline constexpr std::size_t kFlowSteps = 6;

inline const Matrix& w0_sgd_reference() {
  static const Matrix m{{2.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 2.0 / 3, -1.0 / 3}, {1.0 / 3, -1.0 / 3, 2.0 / 3}};
  return m;
}

inline const Matrix& w1_sgd_reference() {
  static const Matrix m{{1.0 / 3, 2.0 / 3, 2.0 / 3}, {0, 1, 0}, {0, 0, 1}};
  return m;
}

inline SymmetryGroup swap23() { return SymmetryGroup({Permutation::identity(3), Permutation::parse_cycles(3, "(32)")}); }

inline std::string fmt(double v, int prec = 3) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

namespace detail {

inline std::vector<Complex> sorted_values(std::vector<Complex> v) {
  std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return v;
}

inline double spectrum_gap(const WeightMatrix& w, std::vector<Complex> expected) {
  const auto got = sorted_values(spectrum(w).values);
  expected = sorted_values(std::move(expected));
  double m = 0.0;
  for (std::size_t k = 0; k < got.size(); ++k) m = std::max(m, std::abs(got[k] - expected[k]));
  return m;
}

inline TrainConfig config(Optimizer o, InitScheme init, std::uint64_t seed) {
  auto c = TrainConfig::defaults(o);
  c.init = init;
  c.seed = seed;
  return c;
}

// Central differences of the objective, one entry at a time.
inline Matrix numeric_gradient(const WeightMatrix& w, const Activation& phi, const PatternSet& x, double h = 1e-6) {
  Matrix g(w.rows(), w.cols());
  for (std::size_t i = 0; i < w.rows(); ++i)
    for (std::size_t j = 0; j < w.cols(); ++j) {
      auto up = w, dn = w;
      up(i, j) += h;
      dn(i, j) -= h;
      g(i, j) = (objective(up, phi, x) - objective(dn, phi, x)) / (2 * h);
    }
  return g;
}

inline WeightMatrix random_matrix(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  WeightMatrix w(n, n);
  for (double& v : w.data()) v = lo + (hi - lo) * rng.uniform();
  return w;
}

inline Pattern random_pattern(Rng& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  Pattern p(n);
  for (double& v : p) v = lo + (hi - lo) * rng.uniform();
  return p;
}

} // namespace detail

/// The trained networks shared by several checks.
struct Networks {
  TrainResult w0_sgd, w1_sgd, w0_adam, w1_adam;  // linear, trained on X
  TrainResult linear_xp;                         // linear, zero-init SGD on X'
  TrainResult sigmoid, tanh;                     // ADAM, gaussian init on X'
};

inline Networks train_networks(const Options& opt) {
  const auto x = sets::x(), xp = sets::x_prime();
  const auto id = Activation::identity();
  Networks n;
  n.w0_sgd = train(detail::config(Optimizer::sgd, InitScheme::zeros(), opt.seed), x, id);
  n.w1_sgd = train(detail::config(Optimizer::sgd, InitScheme::ones(), opt.seed), x, id);
  n.w0_adam = train(detail::config(Optimizer::adam, InitScheme::zeros(), opt.seed), x, id);
  n.w1_adam = train(detail::config(Optimizer::adam, InitScheme::ones(), opt.seed), x, id);
  n.linear_xp = train(detail::config(Optimizer::sgd, InitScheme::zeros(), opt.seed), xp, id);
  n.sigmoid = train(detail::config(Optimizer::adam, InitScheme::gaussian(), opt.seed), xp, Activation::sigmoid());
  n.tanh = train(detail::config(Optimizer::adam, InitScheme::gaussian(), opt.seed), xp, Activation::tanh());
  return n;
}

inline Check check_symmetry_recovery() {
  const auto g = swap23();
  const auto gx = symmetry_group(sets::x());
  const auto gxp = symmetry_group(sets::x_prime());
  const auto t = build_template(3, gx);
  const bool ok = gx == g && gxp == g && t.parameter_count() == 5 && t.layout() == "a b b\nc d e\nc e d\n";
  return {1, "symmetry recovery", ok,
          "G(X) = " + gx.to_string() + ", G(X') = " + gxp.to_string() + ", " +
              std::to_string(t.parameter_count()) + " template classes"};
}

inline Check check_zero_init_sgd(const Networks& n) {
  const auto p = span_projector(sets::x());
  const double to_ref = max_abs_diff(n.w0_sgd.weights, w0_sgd_reference());
  const double to_oracle = max_abs_diff(n.w0_sgd.weights, p);
  return {2, "zero-init SGD equals X X^+", n.w0_sgd.converged && to_ref <= 1e-3 && to_oracle <= 1e-3,
          "max|W - ref| = " + fmt(to_ref) + ", max|W - X X^+| = " + fmt(to_oracle)};
}

inline Check check_ones_init_sgd(const Networks& n) {
  const auto fam = solve_linear_family(sets::x(), FamilyBasis::free_entries);
  const auto fit = fit_family(n.w1_sgd.weights, fam);
  const double dev = max_abs_diff(n.w1_sgd.weights, w1_sgd_reference());
  const bool ok = n.w1_sgd.converged && dev <= 1e-3 && std::abs(fit.params[0] - 2.0 / 3) <= 1e-3 &&
                  std::abs(fit.params[1]) <= 1e-3;
  return {3, "ones-init SGD", ok,
          "max|W - ref| = " + fmt(dev) + ", (a,b) = (" + fmt(fit.params[0], 6) + ", " + fmt(fit.params[1], 6) + ")"};
}

inline Check check_adam(const Networks& n) {
  const auto fam = solve_linear_family(sets::x(), FamilyBasis::free_entries);
  bool ok = true;
  std::string detail;
  for (const auto* r : {&n.w0_adam, &n.w1_adam}) {
    const auto fit = fit_family(r->weights, fam);
    ok = ok && r->final_loss <= 1e-10 && fit.residual <= 1e-3;
    detail += (detail.empty() ? "" : "; ") + to_string(r->config.init.kind) + ": loss " + fmt(r->final_loss) +
              ", residual " + fmt(fit.residual) + ", (a,b) = (" + fmt(fit.params[0], 4) + ", " +
              fmt(fit.params[1], 4) + ")";
  }
  return {4, "ADAM fits the family", ok, detail};
}

inline Check check_ensemble(const Options& opt, Artifacts& art) {
  const std::size_t seeds = opt.quick ? kQuickEnsembleSeeds : kEnsembleSeeds;
  const double tol = opt.quick ? kQuickEnsembleTolerance : kEnsembleTolerance;
  const auto x = sets::x();
  const auto e = ensemble_train(detail::config(Optimizer::sgd, InitScheme::gaussian(), opt.seed + 1000), x,
                                Activation::identity(), seeds, opt.workers);
  double worst_fp = 0.0;
  for (const auto& r : e.runs)
    worst_fp = std::max(worst_fp, is_autoassociator(r.weights, Activation::identity(), x, 1e-4).max_residual);
  const double dev = max_abs_diff(e.mean, w0_sgd_reference());
  art.matrices.push_back({"ensemble_mean_sgd", e.mean});
  return {5, "ensemble mean", dev <= tol && worst_fp <= 1e-4,
          std::to_string(seeds) + " runs, max|mean - ref| = " + fmt(dev) + " (tol " + fmt(tol) +
              "), worst |Wx - x| = " + fmt(worst_fp)};
}

inline Check check_spectrum_identities(const Options& opt, std::vector<std::string>& notes) {
  const auto fx = solve_linear_family(sets::x(), FamilyBasis::free_entries);
  const auto fxp = solve_linear_family(sets::x_prime(), FamilyBasis::free_entries);
  Rng rng(opt.seed + 6);
  double worst_x = 0.0, worst_xp = 0.0, worst_alt = 0.0;
  for (int k = 0; k < 100; ++k) {
    const double a = -1.0 + 2.0 * rng.uniform(), b = -1.0 + 2.0 * rng.uniform();
    const auto w = family_member(fx, {a, b});
    worst_x = std::max(worst_x, detail::spectrum_gap(w, {1.0 - a - 2.0 * b, 1.0, 1.0}));
    worst_alt = std::max(worst_alt, detail::spectrum_gap(w, {1.0 - a + 2.0 * b, 1.0, 1.0}));
    worst_xp = std::max(worst_xp, detail::spectrum_gap(family_member(fxp, {a, b}), {a, 1.0, 1.0}));
  }
  notes.push_back("criterion 6: X-family members have spectrum {1-a+2b, 1, 1} (max deviation " + fmt(worst_alt) +
                  "); the stated {1-a-2b, 1, 1} deviates by up to " + fmt(worst_x));
  return {6, "spectrum identities", worst_x <= 1e-9 && worst_xp <= 1e-9,
          "X: max deviation from {1-a-2b,1,1} = " + fmt(worst_x) + "; X': max deviation from {a,1,1} = " +
              fmt(worst_xp)};
}

inline Check check_linear_eigenstructure(const Networks& n) {
  bool ok = true;
  double worst_one = 0.0, worst_span = 0.0, worst_l3 = 0.0;
  const std::pair<const TrainResult*, PatternSet> nets[] = {{&n.w0_sgd, sets::x()},
                                                            {&n.w1_sgd, sets::x()},
                                                            {&n.w0_adam, sets::x()},
                                                            {&n.w1_adam, sets::x()},
                                                            {&n.linear_xp, sets::x_prime()}};
  for (const auto& [r, x] : nets) {
    const auto sp = spectrum(r->weights);
    std::vector<std::size_t> unit, rest;
    for (std::size_t k = 0; k < sp.size(); ++k) (std::abs(sp.values[k] - 1.0) <= 1e-6 ? unit : rest).push_back(k);
    if (unit.size() != 2) {
      ok = false;
      continue;
    }
    for (auto k : unit) worst_one = std::max(worst_one, std::abs(sp.values[k] - 1.0));
    std::vector<Pattern> vecs;
    for (auto k : unit) {
      Pattern v;
      for (const auto& c : sp.vectors[k]) v.push_back(c.real());
      vecs.push_back(v);
    }
    const auto q = plane_span(PatternSet(vecs));
    for (const auto& item : x) worst_span = std::max(worst_span, distance_to_span(item, q));
    for (auto k : rest) worst_l3 = std::max(worst_l3, std::abs(sp.values[k]));
    ok = ok && q.size() == 2;
  }
  ok = ok && worst_span <= 1e-6 && worst_l3 < 1.0;
  return {7, "trained linear eigenstructure", ok,
          "5 nets; max|lambda - 1| = " + fmt(worst_one) + ", max item distance to eigenplane = " + fmt(worst_span) +
              ", max|lambda3| = " + fmt(worst_l3)};
}

inline Check check_linear_generalization(const Networks& n, Artifacts& art) {
  const auto xp = sets::x_prime();
  const auto rows = generalization_table(n.linear_xp.weights, Activation::identity(), &xp);
  bool ok = true;
  double worst_in = 0.0, least_out = 1e300;
  for (const auto& p : std::vector<Pattern>{{0, 1, 0}, {0, 0, 1}, {0, 0, 0}, {0, 1, 1}})
    worst_in = std::max(worst_in, table_loss(rows, p));
  for (const auto& p : std::vector<Pattern>{{1, 1, 0}, {1, 0, 1}, {1, 1, 1}, {1, 0, 0}})
    least_out = std::min(least_out, table_loss(rows, p));
  ok = worst_in <= 1e-6 && least_out >= 0.05;
  art.table.emplace_back("linear", rows);
  return {8, "linear generalization pattern", ok,
          "max loss on span patterns = " + fmt(worst_in) + ", min loss elsewhere = " + fmt(least_out)};
}

inline Check check_sigmoid_origin(const Networks& n) {
  const double loss = mse_loss(n.sigmoid.weights, Activation::sigmoid(), PatternSet({{0, 0, 0}}));
  return {9, "sigmoid loss at origin", loss == 0.25, "loss(0,0,0) = " + fmt(loss, 17)};
}

inline Check check_sigmoid_memory(const Networks& n) {
  const auto fp = fixed_points(n.sigmoid.weights, Activation::sigmoid());
  const auto att = fp.attractors();
  bool near_items = att.size() == 2;
  std::vector<bool> used(2, false);
  const auto xp = sets::x_prime();
  for (const auto& a : att) {
    bool hit = false;
    for (std::size_t k = 0; k < xp.size(); ++k)
      if (!used[k] && max_abs_diff(a.point, xp.items()[k]) <= 0.05) used[k] = hit = true;
    near_items = near_items && hit;
  }
  const double frac = static_cast<double>(fp.attracted_starts()) / static_cast<double>(fp.starts);
  std::string where;
  for (const auto& a : att) where += " " + to_string(a.point) + "[" + std::to_string(a.basin) + "]";
  return {10, "sigmoid associative memory", near_items && frac >= 0.95,
          std::to_string(att.size()) + " attractors:" + where + ", converged fraction " + fmt(frac)};
}

inline Check check_tanh_partial(const Networks& n, Artifacts& art) {
  const auto xp = sets::x_prime();
  const auto tanh_rows = generalization_table(n.tanh.weights, Activation::tanh(), &xp);
  const auto sig_rows = generalization_table(n.sigmoid.weights, Activation::sigmoid(), &xp);
  art.table.emplace_back("sigmoid", sig_rows);
  art.table.emplace_back("tanh", tanh_rows);
  bool ok = true;
  std::string detail;
  for (const Pattern& p : {Pattern{0, 0, 0}, Pattern{0, 1, 1}}) {
    const double t = table_loss(tanh_rows, p), s = table_loss(sig_rows, p);
    ok = ok && t <= 0.01 && t < s;
    detail += (detail.empty() ? "" : "; ") + to_string(p) + ": tanh " + fmt(t) + " vs sigmoid " + fmt(s);
  }
  return {11, "tanh partial generalization", ok, detail};
}

inline Check check_tanh_origin(const Networks& n) {
  const auto sp = linearized_spectrum_at(n.tanh.weights, Activation::tanh(), {0, 0, 0});
  std::size_t unstable = 0;
  std::string vals;
  for (const auto& v : sp.values) {
    unstable += std::abs(v) > 1.0;
    vals += (vals.empty() ? "" : ", ") + fmt(std::abs(v));
  }
  return {12, "tanh unstable at origin", unstable >= 2, "|lambda| = {" + vals + "}"};
}

inline Check check_gradient(const Options& opt) {
  Rng rng(opt.seed + 13);
  double worst = 0.0;
  for (const auto& phi : {Activation::identity(), Activation::tanh(), Activation::sigmoid()})
    for (int k = 0; k < 20; ++k) {
      const std::size_t n = 2 + static_cast<std::size_t>(rng.uniform() * 3);
      auto all = all_binary_patterns(n);
      const std::size_t m = 1 + static_cast<std::size_t>(rng.uniform() * 3);
      std::vector<Pattern> items;
      while (items.size() < m) {
        const auto& p = all[static_cast<std::size_t>(rng.uniform() * static_cast<double>(all.size()))];
        if (std::find(items.begin(), items.end(), p) == items.end()) items.push_back(p);
      }
      const PatternSet x(items);
      const auto w = detail::random_matrix(rng, n);
      const auto g = loss_gradient(w, phi, x);
      const auto fd = detail::numeric_gradient(w, phi, x);
      worst = std::max(worst, (g - fd).frobenius() / std::max({g.frobenius(), fd.frobenius(), 1e-8}));
    }
  return {13, "gradient oracle", worst <= 1e-5, "60 instances, max relative error " + fmt(worst)};
}

inline Check check_equivariance(const Options& opt) {
  const auto g = swap23();
  const auto t = build_template(3, g);
  const Activation acts[] = {Activation::identity(), Activation::tanh(), Activation::sigmoid()};
  Rng rng(opt.seed + 14);
  double worst_ok = 0.0;
  for (int k = 0; k < 500; ++k) {
    std::vector<double> params(t.parameter_count());
    for (double& p : params) p = -1.0 + 2.0 * rng.uniform();
    const auto w = instantiate(t, params);
    worst_ok = std::max(worst_ok, equivariance_check(w, acts[k % 3], g, {detail::random_pattern(rng, 3)}).deviation);
  }
  double weakest_break = 1e300;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> params(t.parameter_count());
    for (double& p : params) p = -1.0 + 2.0 * rng.uniform();
    auto w = instantiate(t, params);
    // perturb one entry whose (32)-image is a different entry
    std::size_t i, j;
    do {
      i = static_cast<std::size_t>(rng.uniform() * 3);
      j = static_cast<std::size_t>(rng.uniform() * 3);
    } while (i == 0 && j == 0);
    const double delta = (0.1 + 0.4 * rng.uniform()) * (rng.uniform() < 0.5 ? -1.0 : 1.0);
    w(i, j) += delta;
    auto probes = basis_vectors(3);
    for (int p = 0; p < 4; ++p) probes.push_back(detail::random_pattern(rng, 3));
    weakest_break = std::min(weakest_break, equivariance_check(w, acts[k % 3], g, probes).deviation);
  }
  return {14, "equivariance theorem", worst_ok <= 1e-10 && weakest_break > 1e-3,
          "compatible max deviation " + fmt(worst_ok) + ", broken min deviation " + fmt(weakest_break)};
}

inline Check check_arc() {
  const auto r = arc_predict(sets::x_prime(), {1, 1, 0});
  const bool ok = r.predictions.size() == 1 && r.predictions[0] == Pattern{1, 0, 1};
  std::string got;
  for (const auto& p : r.predictions) got += (got.empty() ? "" : " ") + to_string(p);
  return {15, "ARC demo", ok, "test (1,1,0) -> " + got};
}

inline Check check_correction_structure(std::vector<std::string>& notes) {
  const auto g = swap23();
  double worst = 0.0, verbatim = 0.0;
  for (int k = 0; k < 20; ++k) {
    const double c = -2.0 + 4.0 * k / 19.0;
    for (auto kind : {ActivationKind::tanh, ActivationKind::sigmoid})
      worst = std::max(worst, is_compatible(nonlinear_correction(kind, c), g, 0.0).deviation);
    verbatim = std::max(
        verbatim, symmetry_deviation(nonlinear_correction(ActivationKind::sigmoid, c, Transcription::verbatim), g));
  }
  notes.push_back("criterion 16: verbatim sigmoid W_c deviates from (32)-invariance by up to " + fmt(verbatim) +
                  "; the check uses the corrected form");
  return {16, "W_c structure", worst == 0.0, "20 values of c x 2 kinds, max deviation " + fmt(worst)};
}

/// Runs criteria 1-16 in order.
inline Report run(const Options& opt = {}) {
  Report rep;
  rep.checks.push_back(check_symmetry_recovery());
  const auto nets = train_networks(opt);
  auto& art = rep.artifacts;
  art.matrices = {{"W0_sgd", nets.w0_sgd.weights},      {"W1_sgd", nets.w1_sgd.weights},
                  {"W0_adam", nets.w0_adam.weights},    {"W1_adam", nets.w1_adam.weights},
                  {"linear_xprime", nets.linear_xp.weights}, {"sigmoid_xprime", nets.sigmoid.weights},
                  {"tanh_xprime", nets.tanh.weights}};
  rep.checks.push_back(check_zero_init_sgd(nets));
  rep.checks.push_back(check_ones_init_sgd(nets));
  rep.checks.push_back(check_adam(nets));
  rep.checks.push_back(check_ensemble(opt, art));
  rep.checks.push_back(check_spectrum_identities(opt, rep.notes));
  rep.checks.push_back(check_linear_eigenstructure(nets));
  rep.checks.push_back(check_linear_generalization(nets, art));
  rep.checks.push_back(check_sigmoid_origin(nets));
  rep.checks.push_back(check_sigmoid_memory(nets));
  rep.checks.push_back(check_tanh_partial(nets, art));
  rep.checks.push_back(check_tanh_origin(nets));
  rep.checks.push_back(check_gradient(opt));
  rep.checks.push_back(check_equivariance(opt));
  rep.checks.push_back(check_arc());
  rep.checks.push_back(check_correction_structure(rep.notes));
  art.flows = {{"linear", flow_field(nets.linear_xp.weights, Activation::identity(), Mesh{}, kFlowSteps)},
               {"sigmoid", flow_field(nets.sigmoid.weights, Activation::sigmoid(), Mesh{}, kFlowSteps)},
               {"tanh", flow_field(nets.tanh.weights, Activation::tanh(), Mesh{}, kFlowSteps)}};
  return rep;
}

inline std::string format_line(const Check& c) {
  std::ostringstream os;
  os << (c.passed ? "PASS" : "FAIL") << ' ' << std::setw(2) << c.id << ' ' << c.name << ": " << c.detail;
  return os.str();
}

} // namespace symnet::acceptance
