#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "symnet/commands.hpp"

namespace {

using symnet::cli::Options;

void add_input(CLI::App* app, Options& o) {
  app->add_option("--input", o.input, "pattern set JSON {\"n\": N, \"items\": [[...], ...]}")->required();
}

void add_activation(CLI::App* app, Options& o) {
  app->add_option("--activation", o.activation, "identity, tanh or sigmoid")
      ->check(CLI::IsMember({"identity", "linear", "tanh", "sigmoid"}));
  app->add_option("--c", o.c, "activation shift (tanh) or gain (sigmoid)");
}

void add_seed(CLI::App* app, Options& o) {
  app->add_option("--seed", o.seed, std::string("random seed (default: $") + symnet::cli::kSeedEnv + " or 0)");
}

void add_out(CLI::App* app, Options& o, const std::string& what) {
  app->add_option("--out", o.out, what);
}

void add_mesh(CLI::App* app, Options& o) {
  app->add_option("--points", o.points, "mesh points per axis")->capture_default_str();
  app->add_option_function<std::vector<double>>(
         "--bounds",
         [&o](const std::vector<double>& b) {
           o.lo = b[0];
           o.hi = b[1];
         },
         "mesh bounds lo hi (default 0 1)")
      ->expected(2);
  app->add_option("--n", o.n, "iterations per trajectory (default 6)");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"symnet: symmetry-constrained autoassociative networks"};
  app.set_version_flag("--version", std::string(SYMNET_VERSION));
  app.require_subcommand(1);
  Options o;

  auto* sym = app.add_subcommand("symmetry", "symmetry group, orbits and weight template of a pattern set");
  add_input(sym, o);
  add_out(sym, o, "also write symmetry.json and a manifest here");

  auto* tr = app.add_subcommand("train", "train a one-layer network on a pattern set");
  add_input(tr, o);
  add_activation(tr, o);
  tr->add_option("--optimizer", o.optimizer, "sgd or adam")->check(CLI::IsMember({"sgd", "adam"}))->capture_default_str();
  tr->add_option("--init", o.init, "zeros, ones, uniform or gaussian")
      ->check(CLI::IsMember({"zeros", "ones", "uniform", "gaussian"}))
      ->capture_default_str();
  tr->add_option("--sigma", o.sigma, "standard deviation of gaussian init (default 0.05)");
  add_seed(tr, o);
  tr->add_option("--lr", o.lr, "learning rate (default 0.1 sgd, 0.01 adam)");
  tr->add_option("--epochs", o.epochs, "maximum epochs (default 200000)");
  tr->add_option("--tol", o.tol, "stop when the loss falls below this");
  tr->add_option("--l2", o.l2, "L2 penalty on W")->capture_default_str();
  add_out(tr, o, "output directory (default symnet-out)");

  auto* rep = app.add_subcommand("reproduce", "run every acceptance experiment and export the results");
  rep->add_flag("--quick", o.quick, "fewer ensemble seeds, looser ensemble tolerance");
  add_seed(rep, o);
  add_out(rep, o, "output directory (default symnet-out)");

  auto* arc = app.add_subcommand("arc", "predict the symmetric counterpart of a test item");
  add_input(arc, o);
  arc->add_option("--test", o.test, "test item, comma separated, e.g. 1,1,0")->required();
  add_out(arc, o, "also write arc.json and a manifest here");

  auto* flow = app.add_subcommand("flowfield", "iterate a network from every point of a mesh");
  flow->add_option("--weights", o.weights, "weight matrix JSON or train_result.json")->required();
  add_activation(flow, o);
  add_mesh(flow, o);
  add_out(flow, o, "output directory (default symnet-out)");

  auto* replay = app.add_subcommand("replay", "re-run a command from its manifest");
  replay->add_option("--manifest", o.manifest, "manifest.json written by an earlier run")->required();
  add_out(replay, o, "output directory (default: the recorded one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return symnet::cli::kExitUsage;
  }
  const auto* sub = app.get_subcommands().front();
  return symnet::cli::run_command(sub->get_name(), o, std::cout, std::cerr);
}
