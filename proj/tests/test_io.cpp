#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "symnet/io.hpp"

using namespace symnet;
using io::json;

namespace {

// Serialise to text and parse back, as a file round trip would.
json through_text(const json& j) { return json::parse(j.dump()); }

Matrix awkward_matrix() {
  std::mt19937_64 rng(3);
  auto w = oracle::random_matrix(rng, 4, -1e3, 1e3);
  w(0, 0) = 1.0 / 3.0;
  w(1, 1) = 5e-324;
  w(2, 2) = -0.1;
  w(3, 3) = 1e300;
  return w;
}

} // namespace

TEST(Io, FormatDoubleRoundTrips) {
  for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23, 5e-324}) EXPECT_EQ(io::detail::parse_double(io::format_double(v)), v);
}

TEST(Io, PatternSetRoundTrip) {
  const PatternSet x({{0.1, 1.0 / 3, 0}, {1, 1, 0}});
  EXPECT_EQ(io::pattern_set_from_json(through_text(io::to_json(x))).items(), x.items());
}

TEST(Io, PatternSetErrors) {
  EXPECT_THROW(io::pattern_set_from_json(json::parse(R"({"n": 2, "items": [[1, 0, 1]]})")), ParseError);
  EXPECT_THROW(io::pattern_set_from_json(json::parse(R"({"items": [[1, 0]]})")), ParseError);
  EXPECT_THROW(io::pattern_set_from_json(json::parse(R"({"n": 2, "items": [[1, "x"]]})")), ParseError);
  EXPECT_THROW(io::pattern_set_from_json(json::parse(R"({"n": 2, "items": []})")), InvalidArgument);
}

TEST(Io, GroupRoundTrip) {
  const auto g = SymmetryGroup::symmetric(4);
  EXPECT_EQ(io::group_from_json(through_text(io::to_json(g))), g);
  EXPECT_THROW(io::permutation_from_json(json::parse("[0, 0, 1]")), InvalidArgument);
}

TEST(Io, MatrixRoundTripIsExact) {
  const auto w = awkward_matrix();
  EXPECT_EQ(io::matrix_from_json(through_text(io::to_json(w))), w);
}

TEST(Io, MatrixErrors) {
  EXPECT_THROW(io::matrix_from_json(json::parse(R"({"n": 2, "rows": [[1, 0]]})")), ParseError);
  EXPECT_THROW(io::matrix_from_json(json::parse(R"({"n": 2, "rows": [[1, 0], [1]]})")), ParseError);
  EXPECT_THROW(io::matrix_from_json(json::parse(R"({"rows": [[1]]})")), ParseError);
}

TEST(Io, ActivationRoundTrip) {
  for (const auto& a : {Activation::identity(), Activation::tanh(-0.25), Activation::sigmoid(3.5)}) {
    const auto b = io::activation_from_json(through_text(io::to_json(a)));
    EXPECT_EQ(b.kind, a.kind);
    EXPECT_EQ(b.c, a.c);
  }
  EXPECT_THROW(io::activation_from_json(json::parse(R"({"kind": "relu"})")), ParseError);
  EXPECT_THROW(io::activation_from_json(json::parse(R"({"kind": "sigmoid", "c": 0})")), InvalidArgument);
}

TEST(Io, FamilyRoundTrip) {
  const auto f = solve_linear_family(sets::x());
  const auto g = io::family_from_json(through_text(io::to_json(f)));
  EXPECT_EQ(g.particular, f.particular);
  ASSERT_EQ(g.basis.size(), f.basis.size());
  for (std::size_t k = 0; k < f.basis.size(); ++k) EXPECT_EQ(g.basis[k], f.basis[k]);
  EXPECT_EQ(g.names, f.names);
}

TEST(Io, TrainResultRoundTrip) {
  auto c = TrainConfig::defaults(Optimizer::adam);
  c.init = InitScheme::gaussian(0.0, 0.2);
  c.seed = 1234567890123ull;
  c.max_epochs = 500;
  c.threshold = 1e-9;
  c.l2 = 1e-4;
  const auto r = train(c, sets::x_prime(), Activation::tanh(0.5));
  const auto back = io::train_result_from_json(through_text(io::to_json(r)));
  EXPECT_EQ(back.weights, r.weights);
  EXPECT_EQ(back.loss_curve, r.loss_curve);
  EXPECT_EQ(back.epochs, r.epochs);
  EXPECT_EQ(back.converged, r.converged);
  EXPECT_EQ(back.final_loss, r.final_loss);
  EXPECT_EQ(back.config, r.config);
  EXPECT_EQ(back.activation.c, r.activation.c);
}

TEST(Io, TrainConfigRejectsInvalid) {
  auto j = io::to_json(TrainConfig::defaults(Optimizer::sgd));
  j["learning_rate"] = -1.0;
  EXPECT_THROW(io::train_config_from_json(j), InvalidArgument);
  j = io::to_json(TrainConfig::defaults(Optimizer::sgd));
  j["optimizer"] = "rmsprop";
  EXPECT_THROW(io::train_config_from_json(j), ParseError);
  j.erase("optimizer");
  EXPECT_THROW(io::train_config_from_json(j), ParseError);
}

TEST(Io, SpectrumJsonKeepsComplexValues) {
  const auto s = spectrum(Matrix{{0, -2, 0}, {1, 0, 0}, {0, 0, 0.5}});
  const auto j = through_text(io::to_json(s));
  ASSERT_EQ(j.at("values").size(), 3u);
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(j["values"][k][0].get<double>(), s.values[k].real());
    EXPECT_EQ(j["values"][k][1].get<double>(), s.values[k].imag());
  }
}

TEST(Io, FlowCsvRoundTrip) {
  const auto f = flow_field(awkward_matrix() * 1e-3, Activation::tanh(0.1), Mesh{-1, 1, 3}, 4);
  std::stringstream ss;
  io::write_flow_csv(ss, f);
  const auto back = io::read_flow_csv(ss);
  EXPECT_EQ(back.steps, 4u);
  ASSERT_EQ(back.trajectories.size(), f.trajectories.size());
  for (std::size_t s = 0; s < f.trajectories.size(); ++s) EXPECT_EQ(back.trajectories[s], f.trajectories[s]);
}

TEST(Io, FlowCsvErrors) {
  std::stringstream bad("id,step,x1\n0,0,1\n");
  EXPECT_THROW(io::read_flow_csv(bad), ParseError);
  std::stringstream short_row("start_id,step,x1,x2\n0,0,1\n");
  EXPECT_THROW(io::read_flow_csv(short_row), ParseError);
  std::stringstream not_number("start_id,step,x1\n0,0,abc\n");
  EXPECT_THROW(io::read_flow_csv(not_number), ParseError);
}

TEST(Io, LossCsvRoundTrip) {
  const std::vector<double> curve{1.0 / 3, 1e-300, 0.1, 7.25e-14};
  std::stringstream ss;
  io::write_loss_csv(ss, curve);
  EXPECT_EQ(io::read_loss_csv(ss), curve);
  std::stringstream huge("epoch,loss\n0,1e999\n");
  EXPECT_THROW(io::read_loss_csv(huge), ParseError);
  std::stringstream bad("epoch;loss\n");
  EXPECT_THROW(io::read_loss_csv(bad), ParseError);
}

TEST(Io, GeneralizationCsvRoundTrip) {
  const auto x = sets::x();
  const auto lin = generalization_table(span_projector(x), Activation::identity(), &x);
  const auto sig = generalization_table(span_projector(x), Activation::sigmoid(), &x);
  std::stringstream ss;
  io::write_generalization_csv(ss, {{"linear", lin}, {"sigmoid", sig}});
  const auto back = io::read_generalization_csv(ss);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].name, "linear");
  for (std::size_t r = 0; r < lin.size(); ++r) {
    EXPECT_EQ(back[0].rows[r].pattern, lin[r].pattern);
    EXPECT_EQ(back[0].rows[r].training, lin[r].training);
    EXPECT_EQ(back[0].rows[r].loss, lin[r].loss);
    EXPECT_EQ(back[1].rows[r].loss, sig[r].loss);
  }
}

TEST(Io, Files) {
  const auto dir = std::filesystem::temp_directory_path() / "symnet_io_test";
  std::filesystem::remove_all(dir);
  io::write_json_file(dir / "sub" / "w.json", io::to_json(awkward_matrix()));
  EXPECT_EQ(io::matrix_from_json(io::read_json_file(dir / "sub" / "w.json")), awkward_matrix());
  io::write_text_file(dir / "broken.json", "{\"n\": ");
  EXPECT_THROW(io::read_json_file(dir / "broken.json"), ParseError);
  EXPECT_THROW(io::read_json_file(dir / "missing.json"), ParseError);
  std::filesystem::remove_all(dir);
}
