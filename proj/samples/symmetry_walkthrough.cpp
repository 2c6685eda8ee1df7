// Walk through the symmetry pipeline for the two 3-bit training sets:
// group -> template -> fixed-point family -> training -> dynamics.
#include <iomanip>
#include <iostream>

#include "symnet/arc.hpp"
#include "symnet/symnet.hpp"

using namespace symnet;

namespace {

void print_matrix(const Matrix& w) {
  const auto old = std::cout.precision();
  for (std::size_t i = 0; i < w.rows(); ++i) {
    std::cout << "   ";
    for (std::size_t j = 0; j < w.cols(); ++j)
      std::cout << ' ' << std::setw(9) << std::fixed << std::setprecision(4) << w(i, j);
    std::cout << '\n';
  }
  std::cout.unsetf(std::ios::fixed);
  std::cout.precision(old);
}

void walk(const std::string& name, const PatternSet& x) {
  std::cout << "== " << name << " ==\n";
  const auto g = symmetry_group(x);
  std::cout << "symmetry group: " << g.to_string() << '\n';
  const auto t = build_template(x.dimension(), g);
  std::cout << "weight template:\n" << t.layout();

  const auto fam = solve_linear_family(x, g, FamilyBasis::free_entries);
  std::cout << "fixed-point family: particular solution plus";
  for (const auto& n : fam.names) std::cout << ' ' << n;
  std::cout << " times a basis matrix\n";

  auto cfg = TrainConfig::defaults(Optimizer::sgd);
  const auto r = train(cfg, x, Activation::identity());
  std::cout << "zero-init SGD after " << r.epochs << " epochs:\n";
  print_matrix(r.weights);
  const auto fit = fit_family(r.weights, fam);
  std::cout << "family coordinates:";
  for (double p : fit.params) std::cout << ' ' << p;
  std::cout << "  (residual " << fit.residual << ")\n";
  std::cout << "spectrum:";
  for (const auto& v : spectrum(r.weights).values) std::cout << ' ' << v.real();
  std::cout << "\n\n";
}

} // namespace

int main() {
  walk("X", sets::x());
  walk("X'", sets::x_prime());

  std::cout << "== sigmoid memory on X' ==\n";
  auto cfg = TrainConfig::defaults(Optimizer::adam);
  cfg.init = InitScheme::gaussian();
  const auto r = train(cfg, sets::x_prime(), Activation::sigmoid());
  for (const auto& fp : fixed_points(r.weights, Activation::sigmoid()).points)
    std::cout << "fixed point " << to_string(fp.point) << "  basin " << fp.basin << "/125  "
              << (fp.attractive ? "attractive" : "unstable") << '\n';

  std::cout << "\n== ARC ==\n";
  const auto arc = arc_predict(sets::x_prime(), {1, 1, 0});
  std::cout << "test (1,1,0) -> " << to_string(arc.predictions.front()) << '\n';
}
