#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "symnet/analysis.hpp"
#include "symnet/train.hpp"

using namespace symnet;

namespace {

const SymmetryGroup g32({Permutation::identity(3), Permutation::parse_cycles(3, "(32)")});
const Matrix w1_sgd{{1.0 / 3, 2.0 / 3, 2.0 / 3}, {0, 1, 0}, {0, 0, 1}};
const Activation kAll[] = {Activation::identity(), Activation::tanh(), Activation::sigmoid()};

TrainConfig sgd(InitScheme init, std::uint64_t seed = 0) {
  auto c = TrainConfig::defaults(Optimizer::sgd);
  c.init = init;
  c.seed = seed;
  return c;
}

} // namespace

TEST(MseLoss, Examples) {
  EXPECT_EQ(mse_loss(Matrix::identity(3), Activation::identity(), sets::x()), 0.0);
  EXPECT_DOUBLE_EQ(mse_loss(Matrix(3, 3), Activation::identity(), PatternSet({{1, 0, 1}})), 2.0 / 3.0);
  // sigmoid of 0 is 1/2 in every component
  EXPECT_DOUBLE_EQ(mse_loss(Matrix(3, 3), Activation::sigmoid(), PatternSet({{0, 0, 0}})), 0.25);
}

TEST(MseLoss, PenaltyOnlyInObjective) {
  const auto w = Matrix::identity(3);
  EXPECT_EQ(mse_loss(w, Activation::identity(), sets::x()), 0.0);
  EXPECT_DOUBLE_EQ(objective(w, Activation::identity(), sets::x(), 0.5), 1.5);
}

TEST(LossGradient, ClosedFormAtZero) {
  const auto g = loss_gradient(Matrix(3, 3), Activation::identity(), PatternSet({{1, 0, 1}}));
  const Matrix expected = (-2.0 / 3.0) * Matrix{{1, 0, 1}, {0, 0, 0}, {1, 0, 1}};
  EXPECT_LE(max_abs_diff(g, expected), 1e-15);
}

TEST(LossGradient, ZeroAtAMinimum) {
  EXPECT_EQ(loss_gradient(Matrix::identity(3), Activation::identity(), sets::x()).max_abs(), 0.0);
  const auto p = span_projector(sets::x());
  EXPECT_LE(loss_gradient(p, Activation::identity(), sets::x()).max_abs(), 1e-15);
}

TEST(LossGradient, MatchesCentralDifferences) {
  std::mt19937_64 rng(31);
  for (const auto& phi : kAll)
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 2 + rng() % 3;
      auto all = all_binary_patterns(n);
      std::shuffle(all.begin(), all.end(), rng);
      const PatternSet x(std::vector<Pattern>(all.begin(), all.begin() + 1 + static_cast<std::ptrdiff_t>(rng() % 3)));
      const auto w = oracle::random_matrix(rng, n);
      const double l2 = trial % 2 ? 0.05 : 0.0;
      const auto g = loss_gradient(w, phi, x, l2);
      const auto fd = oracle::finite_difference_gradient([&](const Matrix& m) { return objective(m, phi, x, l2); }, w);
      const double scale = std::max({g.frobenius(), fd.frobenius(), 1e-8});
      ASSERT_LE((g - fd).frobenius() / scale, 1e-5) << phi.to_string();
    }
}

TEST(InitWeights, Schemes) {
  EXPECT_EQ(init_weights(InitScheme::zeros(), 1, 3), Matrix(3, 3));
  EXPECT_EQ(init_weights(InitScheme::ones(), 1, 3), Matrix(3, 3, 1.0));
  EXPECT_EQ(init_weights(InitScheme::gaussian(), 42, 3), init_weights(InitScheme::gaussian(), 42, 3));
  EXPECT_NE(init_weights(InitScheme::gaussian(), 42, 3), init_weights(InitScheme::gaussian(), 43, 3));
  const auto u = init_weights(InitScheme::uniform01(), 5, 4);
  for (double v : u.data()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
  EXPECT_THROW(init_weights(InitScheme::gaussian(0.0, 0.0), 1, 3), InvalidArgument);
  EXPECT_THROW(init_weights(InitScheme::gaussian(0.0, -1.0), 1, 3), InvalidArgument);
}

TEST(InitWeights, GaussianMoments) {
  // 10^4 draws (100 x 100 matrix), default sigma 0.05
  const auto w = init_weights(InitScheme::gaussian(), 2024, 100);
  double mean = 0.0, sq = 0.0;
  for (double v : w.data()) mean += v;
  mean /= 1e4;
  for (double v : w.data()) sq += (v - mean) * (v - mean);
  const double sd = std::sqrt(sq / (1e4 - 1));
  EXPECT_LT(std::abs(mean), 0.01);
  EXPECT_NEAR(sd, 0.05, 0.0025);
}

TEST(Train, ZeroInitSgdReachesPseudoinverseSolution) {
  const auto x = sets::x();
  const auto r = train(sgd(InitScheme::zeros()), x, Activation::identity());
  ASSERT_TRUE(r.converged);
  EXPECT_LE(r.final_loss, 1e-13);
  std::vector<std::vector<double>> cols(x.items().begin(), x.items().end());
  EXPECT_LE(max_abs_diff(r.weights, oracle::projector_normal_equations(cols)), 1e-6);
  const Matrix expected{{2.0 / 3, 1.0 / 3, 1.0 / 3}, {1.0 / 3, 2.0 / 3, -1.0 / 3}, {1.0 / 3, -1.0 / 3, 2.0 / 3}};
  EXPECT_LE(max_abs_diff(r.weights, expected), 1e-3);
}

TEST(Train, OnesInitSgd) {
  const auto r = train(sgd(InitScheme::ones()), sets::x(), Activation::identity());
  ASSERT_TRUE(r.converged);
  EXPECT_LE(max_abs_diff(r.weights, w1_sgd), 1e-3);
}

TEST(Train, NullSpaceComponentIsConserved) {
  // SGD updates lie in span(X) row-wise, so W (I - P) never changes.
  const auto x = sets::x();
  const auto p = span_projector(x);
  const auto comp = Matrix::identity(3) - p;
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    auto c = sgd(InitScheme::gaussian(), seed);
    const auto w0 = init_weights(c.init, seed, 3);
    const auto r = train(c, x, Activation::identity());
    EXPECT_LE(max_abs_diff(r.weights * comp, w0 * comp), 1e-12);
    EXPECT_LE(max_abs_diff(r.weights, w0 * comp + p), 1e-6);
  }
}

TEST(Train, AdamConvergesIntoTheSymmetricFamily) {
  const auto fam = solve_linear_family(sets::x(), FamilyBasis::free_entries);
  for (auto init : {InitScheme::zeros(), InitScheme::ones()}) {
    auto c = TrainConfig::defaults(Optimizer::adam);
    c.init = init;
    c.threshold = 1e-12;
    const auto r = train(c, sets::x(), Activation::identity());
    ASSERT_TRUE(r.converged);
    EXPECT_LE(fit_family(r.weights, fam).residual, 1e-3);
    EXPECT_LE(symmetry_deviation(r.weights, g32), 1e-3);
  }
}

TEST(Train, ConvergedLinearRunsFitTheRowFamily) {
  const auto row = unconstrained_family(sets::x());
  const auto sym = solve_linear_family(sets::x());
  for (auto init : {InitScheme::zeros(), InitScheme::ones(), InitScheme::uniform01(), InitScheme::gaussian()})
    for (auto opt : {Optimizer::sgd, Optimizer::adam}) {
      auto c = TrainConfig::defaults(opt);
      c.init = init;
      c.seed = 77;
      const auto r = train(c, sets::x(), Activation::identity());
      ASSERT_TRUE(r.converged) << to_string(init.kind) << " " << to_string(opt);
      EXPECT_LE(fit_family(r.weights, row).residual, 1e-3);
      if (init.kind == InitKind::zeros || init.kind == InitKind::ones) {
        EXPECT_LE(fit_family(r.weights, sym).residual, 1e-3);
      }
    }
}

TEST(Train, IsDeterministic) {
  auto c = TrainConfig::defaults(Optimizer::adam);
  c.init = InitScheme::gaussian();
  c.seed = 99;
  c.max_epochs = 3000;
  const auto a = train(c, sets::x_prime(), Activation::sigmoid());
  const auto b = train(c, sets::x_prime(), Activation::sigmoid());
  EXPECT_EQ(a.weights, b.weights);
  EXPECT_EQ(a.loss_curve, b.loss_curve);
  EXPECT_EQ(a.epochs, b.epochs);
}

TEST(Train, StopsAtMaxEpochs) {
  auto c = sgd(InitScheme::zeros());
  c.max_epochs = 10;
  const auto r = train(c, sets::x(), Activation::identity());
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.epochs, 10u);
  EXPECT_EQ(r.loss_curve.size(), 11u);
}

TEST(Train, DivergenceIsReportedWithEpoch) {
  auto c = sgd(InitScheme::zeros());
  c.learning_rate = 50.0;
  try {
    train(c, sets::x(), Activation::identity());
    FAIL() << "expected divergence";
  } catch (const DivergenceError& e) {
    EXPECT_GT(e.epoch(), 0u);
    EXPECT_GT(e.loss(), 1e6);
  }
}

TEST(Train, RejectsBadConfig) {
  auto c = sgd(InitScheme::zeros());
  c.learning_rate = -1;
  EXPECT_THROW(train(c, sets::x(), Activation::identity()), InvalidArgument);
  c = TrainConfig::defaults(Optimizer::adam);
  c.beta2 = 1.0;
  EXPECT_THROW(train(c, sets::x(), Activation::identity()), InvalidArgument);
}

TEST(Train, L2PenaltyShrinksWeights) {
  auto c = sgd(InitScheme::zeros());
  c.l2 = 0.01;
  c.max_epochs = 20000;
  const auto r = train(c, sets::x(), Activation::identity());
  const auto plain = train(sgd(InitScheme::zeros()), sets::x(), Activation::identity());
  EXPECT_LT(r.weights.frobenius(), plain.weights.frobenius());
}

TEST(EnsembleTrain, SingleSeedMeanIsTheRun) {
  const auto e = ensemble_train(sgd(InitScheme::gaussian(), 10), sets::x(), Activation::identity(), 1);
  ASSERT_EQ(e.runs.size(), 1u);
  EXPECT_EQ(e.mean, e.runs.front().weights);
  EXPECT_EQ(e.runs.front().weights, train(sgd(InitScheme::gaussian(), 10), sets::x(), Activation::identity()).weights);
}

TEST(EnsembleTrain, IndependentOfWorkerCount) {
  const auto c = sgd(InitScheme::gaussian(), 500);
  const auto a = ensemble_train(c, sets::x(), Activation::identity(), 12, 1);
  const auto b = ensemble_train(c, sets::x(), Activation::identity(), 12, 5);
  EXPECT_EQ(a.mean, b.mean);
}

TEST(EnsembleTrain, MeanRecoversSymmetricSolution) {
  const auto e = ensemble_train(sgd(InitScheme::gaussian(), 1000), sets::x(), Activation::identity(), 200);
  const Matrix target{{0.667, 0.333, 0.333}, {0.333, 0.667, -0.333}, {0.333, -0.333, 0.667}};
  EXPECT_LE(max_abs_diff(e.mean, target), 0.02);
  EXPECT_LE(symmetry_deviation(e.mean, g32), 0.02);
  std::size_t broken = 0;
  for (const auto& r : e.runs) {
    EXPECT_TRUE(is_autoassociator(r.weights, Activation::identity(), sets::x(), 1e-4).ok);
    broken += symmetry_deviation(r.weights, g32) > 1e-3;
  }
  EXPECT_GT(broken, 150u);  // individual realisations are typically not symmetric
  EXPECT_THROW(ensemble_train(sgd(InitScheme::zeros()), sets::x(), Activation::identity(), 0), InvalidArgument);
}
