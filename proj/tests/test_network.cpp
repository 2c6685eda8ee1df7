#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "symnet/analytic.hpp"
#include "symnet/network.hpp"
#include "symnet/weight_template.hpp"

using namespace symnet;

namespace {

const SymmetryGroup g32({Permutation::identity(3), Permutation::parse_cycles(3, "(32)")});

const Matrix w0_sgd{{2.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 2.0 / 3, -1.0 / 3}, {1.0 / 3, -1.0 / 3, 2.0 / 3}};

Matrix w_ab(double a, double b) { return {{1 - a, a, a}, {-b, 1 + b, b}, {-b, b, 1 + b}}; }

const Activation kAll[] = {Activation::identity(), Activation::tanh(), Activation::sigmoid()};

} // namespace

TEST(Forward, Examples) {
  EXPECT_EQ(forward(Matrix::identity(3), Activation::identity(), {1, 0, 1}), (Pattern{1, 0, 1}));
  const auto y = forward(w0_sgd, Activation::identity(), {1, 0, 1});
  EXPECT_LE(max_abs_diff(y, Pattern{1, 0, 1}), 1e-15);
  EXPECT_EQ(forward(Matrix(3, 3), Activation::tanh(), {0.3, -1, 4}), (Pattern{0, 0, 0}));
  EXPECT_THROW(forward(Matrix::identity(3), Activation::identity(), {1, 0}), DimensionError);
}

TEST(Activation, Forms) {
  EXPECT_DOUBLE_EQ(Activation::tanh(0.5)(1.5), std::tanh(1.0));
  EXPECT_DOUBLE_EQ(Activation::sigmoid(2.0)(0.5), 1.0 / (1.0 + std::exp(-1.0)));
  EXPECT_DOUBLE_EQ(Activation::sigmoid()(0.0), 0.5);
  EXPECT_THROW(Activation::sigmoid(0.0), InvalidArgument);
  EXPECT_THROW(parse_activation_kind("relu"), ParseError);
}

TEST(Activation, StrictlyIncreasingOnGrid) {
  const Activation acts[] = {Activation::identity(), Activation::tanh(),       Activation::sigmoid(),
                             Activation::tanh(0.7),  Activation::sigmoid(3.0), Activation::sigmoid(0.2)};
  for (const auto& phi : acts) {
    // grid stays inside the range where the outputs are not rounded to 0 or 1
    double prev = phi(-5.0);
    for (double u = -4.99; u <= 5.0; u += 0.01) {
      const double v = phi(u);
      ASSERT_LT(prev, v) << phi.to_string() << " at " << u;
      prev = v;
      ASSERT_GT(phi.derivative(u), 0.0);
    }
  }
}

TEST(Iterate, Examples) {
  const auto one = iterate(w0_sgd, Activation::identity(), {1, 0, 1}, 0);
  ASSERT_EQ(one.size(), 1u);
  const Matrix half{{0.5, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  const auto t = iterate(half, Activation::identity(), {1, 0, 0}, 3);
  ASSERT_EQ(t.size(), 4u);
  EXPECT_EQ(t[1][0], 0.5);
  EXPECT_EQ(t[2][0], 0.25);
  EXPECT_EQ(t[3][0], 0.125);

  // a point on the span of X stays put under the min-norm member
  const Pattern y{0.7 + 0.2, 0.2, 0.7};  // 0.7*(1,0,1) + 0.2*(1,1,0)
  for (const auto& p : iterate(w0_sgd, Activation::identity(), y, 10)) EXPECT_LE(max_abs_diff(p, y), 1e-14);
}

TEST(Iterate, StepsAreForwardExactly) {
  std::mt19937_64 rng(5);
  for (const auto& phi : kAll) {
    const auto w = oracle::random_matrix(rng, 4);
    const auto traj = iterate(w, phi, oracle::random_vector(rng, 4), 12);
    for (std::size_t k = 0; k + 1 < traj.size(); ++k) ASSERT_EQ(traj[k + 1], forward(w, phi, traj[k]));
  }
}

TEST(IsCompatible, Examples) {
  const Matrix tmpl{{1, 2, 2}, {3, 4, 5}, {3, 5, 4}};
  const auto r = is_compatible(tmpl, g32);
  EXPECT_TRUE(r.ok);
  EXPECT_EQ(r.deviation, 0.0);
  EXPECT_TRUE(is_compatible(Matrix::identity(3), SymmetryGroup::symmetric(3)).ok);

  Matrix broken = tmpl;
  broken(0, 1) = 2.5;
  const auto b = is_compatible(broken, g32);
  EXPECT_FALSE(b.ok);
  EXPECT_DOUBLE_EQ(b.deviation, 0.5);
}

TEST(Template, PaperLayout) {
  const auto t = build_template(3, g32);
  EXPECT_EQ(t.parameter_count(), 5u);
  EXPECT_EQ(t.layout(), "a b b\nc d e\nc e d\n");
  EXPECT_EQ(instantiate(t, {1, 0, 0, 1, 0}), Matrix::identity(3));
  EXPECT_LE(max_abs_diff(instantiate(t, {2.0 / 3, 1.0 / 3, 1.0 / 3, 2.0 / 3, -1.0 / 3}), w0_sgd), 0.0);
  EXPECT_EQ(instantiate(t, {1, 1, 1, 1, 1}), Matrix(3, 3, 1.0));
  EXPECT_THROW(instantiate(t, {1, 2}), DimensionError);
}

TEST(Template, TrivialAndFullGroup) {
  EXPECT_EQ(build_template(3, SymmetryGroup::trivial(3)).parameter_count(), 9u);
  const auto t = build_template(3, SymmetryGroup::symmetric(3));
  ASSERT_EQ(t.parameter_count(), 2u);
  const double alpha = 0.3, beta = -1.25;
  EXPECT_EQ(instantiate(t, {alpha, beta}), alpha * Matrix::identity(3) + beta * (Matrix(3, 3, 1.0) - Matrix::identity(3)));
}

TEST(Template, InstancesAreAlwaysCompatible) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng() % 4;
    auto all = all_binary_patterns(n);
    std::shuffle(all.begin(), all.end(), rng);
    const PatternSet x(std::vector<Pattern>(all.begin(), all.begin() + 1 + static_cast<std::ptrdiff_t>(rng() % 3)));
    const auto g = symmetry_group(x);
    const auto t = build_template(n, g);
    const auto w = instantiate(t, oracle::random_vector(rng, t.parameter_count(), -5, 5));
    const auto r = is_compatible(w, g);
    ASSERT_TRUE(r.ok);
    ASSERT_EQ(r.deviation, 0.0);
  }
}

TEST(IsAutoassociator, Examples) {
  const auto x = sets::x();
  const auto id = is_autoassociator(Matrix::identity(3), Activation::identity(), x);
  EXPECT_TRUE(id.ok);
  EXPECT_EQ(id.max_residual, 0.0);

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int k = 0; k < 20; ++k) EXPECT_TRUE(is_autoassociator(w_ab(u(rng), u(rng)), Activation::identity(), x, 1e-12).ok);

  const auto zero = is_autoassociator(Matrix(3, 3), Activation::identity(), x);
  EXPECT_FALSE(zero.ok);
  EXPECT_EQ(zero.max_residual, 1.0);
  EXPECT_EQ(zero.residuals.size(), 2u);
}

TEST(Equivariance, TemplateInstancesPassRandomSamples) {
  std::mt19937_64 rng(17);
  const auto t = build_template(3, g32);
  for (const auto& phi : kAll) {
    const auto w = instantiate(t, oracle::random_vector(rng, 5, -2, 2));
    std::vector<Pattern> samples;
    for (int k = 0; k < 100; ++k) samples.push_back(oracle::random_vector(rng, 3));
    const auto r = equivariance_check(w, phi, g32, samples);
    EXPECT_TRUE(r.ok) << phi.to_string() << " deviation " << r.deviation;
  }
  EXPECT_TRUE(equivariance_check(Matrix::identity(3), Activation::tanh(), SymmetryGroup::symmetric(3),
                                 basis_vectors(3)).ok);
}

TEST(Equivariance, BrokenMatrixFailsOnBasisVector) {
  Matrix w{{1, 0.2, 0.7}, {0, 1, 0}, {0, 0, 1}};  // W_12 != W_13
  const auto r = equivariance_check(w, Activation::identity(), g32, {{0, 1, 0}});
  EXPECT_FALSE(r.ok);
  EXPECT_GT(r.deviation, 0.0);
  EXPECT_DOUBLE_EQ(r.deviation, 0.5);
}

TEST(Equivariance, IffCompatibleProperty) {
  // failing compatibility by more than 10*tol implies some basis vector breaks equivariance
  std::mt19937_64 rng(23);
  const double tol = 1e-10;
  for (int trial = 0; trial < 200; ++trial) {
    const auto& phi = kAll[trial % 3];
    auto w = oracle::random_matrix(rng, 3);
    const bool compatible = is_compatible(w, g32, 10 * tol).ok;
    const auto r = equivariance_check(w, phi, g32, basis_vectors(3), tol);
    if (!compatible) {
      ASSERT_FALSE(r.ok);
    }
  }
}

TEST(Compatibility, NonlinearCorrectionIsSymmetricWhenCorrected) {
  for (double c : {-2.0, -0.5, 0.0, 0.3, 1.0, 4.0}) {
    EXPECT_EQ(symmetry_deviation(nonlinear_correction(ActivationKind::tanh, c), g32), 0.0);
    EXPECT_EQ(symmetry_deviation(nonlinear_correction(ActivationKind::sigmoid, c), g32), 0.0);
  }
}
