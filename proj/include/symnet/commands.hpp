#pragma once

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "symnet/acceptance.hpp"
#include "symnet/arc.hpp"
#include "symnet/io.hpp"
#include "symnet/symnet.hpp"

#ifndef SYMNET_VERSION
#define SYMNET_VERSION "0.0.0"
#endif

namespace symnet::cli {

using io::json;
namespace fs = std::filesystem;

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumeric = 3;

inline constexpr const char* kSeedEnv = "SYMNET_SEED";
inline constexpr const char* kManifestName = "manifest.json";
inline constexpr std::size_t kDefaultFlowSteps = 6;

/// Union of every subcommand's flags; each command reads the ones it needs.
struct Options {
  std::string input;
  std::string weights;
  std::string test;
  std::string out;
  std::optional<std::string> activation;
  std::optional<double> c;
  std::string optimizer = "sgd";
  std::string init = "zeros";
  std::optional<double> sigma;
  std::optional<std::uint64_t> seed;
  std::optional<double> lr;
  std::optional<std::size_t> epochs;
  std::optional<double> tol;
  double l2 = 0.0;
  std::size_t points = 5;
  double lo = 0.0;
  double hi = 1.0;
  std::optional<std::size_t> n;
  bool quick = false;
  std::string manifest;
};

template <class T>
json optional_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <class T>
std::optional<T> optional_from(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

inline json to_json(const Options& o) {
  return {{"input", o.input},     {"weights", o.weights},   {"test", o.test},
          {"out", o.out},         {"activation", optional_json(o.activation)},
          {"c", optional_json(o.c)}, {"optimizer", o.optimizer}, {"init", o.init},
          {"sigma", optional_json(o.sigma)}, {"seed", optional_json(o.seed)}, {"lr", optional_json(o.lr)},
          {"epochs", optional_json(o.epochs)}, {"tol", optional_json(o.tol)}, {"l2", o.l2},
          {"points", o.points},   {"bounds", {o.lo, o.hi}}, {"n", optional_json(o.n)},
          {"quick", o.quick}};
}

inline Options options_from_json(const json& j) {
  return io::guarded("manifest options", [&] {
    Options o;
    o.input = j.at("input").get<std::string>();
    o.weights = j.at("weights").get<std::string>();
    o.test = j.at("test").get<std::string>();
    o.out = j.at("out").get<std::string>();
    o.activation = optional_from<std::string>(j, "activation");
    o.c = optional_from<double>(j, "c");
    o.optimizer = j.at("optimizer").get<std::string>();
    o.init = j.at("init").get<std::string>();
    o.sigma = optional_from<double>(j, "sigma");
    o.seed = optional_from<std::uint64_t>(j, "seed");
    o.lr = optional_from<double>(j, "lr");
    o.epochs = optional_from<std::size_t>(j, "epochs");
    o.tol = optional_from<double>(j, "tol");
    o.l2 = j.at("l2").get<double>();
    o.points = j.at("points").get<std::size_t>();
    o.lo = j.at("bounds").at(0).get<double>();
    o.hi = j.at("bounds").at(1).get<double>();
    o.n = optional_from<std::size_t>(j, "n");
    o.quick = j.at("quick").get<bool>();
    return o;
  });
}

/// Explicit --seed, else $SYMNET_SEED, else 0.
inline std::uint64_t resolve_seed(const Options& o) {
  if (o.seed) return *o.seed;
  const char* env = std::getenv(kSeedEnv);
  if (!env || !*env) return 0;
  char* end = nullptr;
  errno = 0;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (errno != 0 || *end != '\0' || env[0] == '-') throw ParseError(std::string(kSeedEnv) + " is not a seed: " + env);
  return v;
}

inline Activation resolve_activation(const Options& o, const std::string& fallback = "identity") {
  const auto kind = parse_activation_kind(o.activation.value_or(fallback));
  return o.c ? Activation::make(kind, *o.c) : Activation::make(kind);
}

inline Pattern parse_pattern(const std::string& text) {
  Pattern p;
  std::string cell;
  std::istringstream is(text);
  while (std::getline(is, cell, ',')) {
    std::size_t used = 0;
    try {
      p.push_back(std::stod(cell, &used));
    } catch (const std::exception&) {
      throw ParseError("bad pattern entry '" + cell + "' in '" + text + "'");
    }
    while (used < cell.size() && std::isspace(static_cast<unsigned char>(cell[used]))) ++used;
    if (used != cell.size()) throw ParseError("bad pattern entry '" + cell + "' in '" + text + "'");
  }
  if (p.empty()) throw ParseError("empty pattern");
  return p;
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

struct RunManifest {
  std::string command;
  Options options;
  json config = json::object();
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> artifacts;  // relative to options.out
  std::string version = SYMNET_VERSION;
  std::string timestamp;
};

inline json to_json(const RunManifest& m) {
  return {{"command", m.command},   {"options", to_json(m.options)}, {"config", m.config},
          {"seeds", m.seeds},       {"artifacts", m.artifacts},      {"version", m.version},
          {"timestamp", m.timestamp}, {"generator", kGeneratorName}};
}

inline RunManifest manifest_from_json(const json& j) {
  return io::guarded("manifest", [&] {
    RunManifest m;
    m.command = j.at("command").get<std::string>();
    m.options = options_from_json(j.at("options"));
    m.config = j.at("config");
    m.seeds = j.at("seeds").get<std::vector<std::uint64_t>>();
    m.artifacts = j.at("artifacts").get<std::vector<std::string>>();
    m.version = j.at("version").get<std::string>();
    m.timestamp = j.at("timestamp").get<std::string>();
    return m;
  });
}

namespace detail {

inline std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

inline std::string fmt(Complex v, int prec = 6) {
  if (v.imag() == 0.0) return fmt(v.real(), prec);
  return fmt(v.real(), prec) + (v.imag() < 0 ? "-" : "+") + fmt(std::abs(v.imag()), prec) + "i";
}

inline fs::path out_dir(const Options& o) { return o.out.empty() ? fs::path("symnet-out") : fs::path(o.out); }

class ArtifactWriter {
public:
  ArtifactWriter(std::string command, const Options& o)
      : m_{std::move(command), o, json::object(), {}, {}, SYMNET_VERSION, {}} {
    m_.options.out = out_dir(o).string();
  }

  const fs::path dir() const { return m_.options.out; }
  RunManifest& manifest() { return m_; }

  void text(const std::string& name, const std::string& body) {
    io::write_text_file(dir() / name, body);
    m_.artifacts.push_back(name);
  }
  void json_file(const std::string& name, const json& j) { text(name, j.dump(2) + "\n"); }

  fs::path finish(std::ostream& out) {
    m_.timestamp = utc_timestamp();
    io::write_json_file(dir() / kManifestName, to_json(m_));
    for (const auto& a : m_.artifacts) out << "wrote " << (dir() / a).string() << '\n';
    out << "wrote " << (dir() / kManifestName).string() << '\n';
    return dir() / kManifestName;
  }

private:
  RunManifest m_;
};

inline PatternSet read_patterns(const Options& o) {
  if (o.input.empty()) throw ParseError("--input is required");
  return io::pattern_set_from_json(io::read_json_file(o.input));
}

inline json cycles_json(const SymmetryGroup& g) {
  json a = json::array();
  for (const auto& s : g) a.push_back(s.cycles());
  return a;
}

inline void print_table(std::ostream& out, const std::vector<GeneralizationRow>& rows) {
  out << "  pattern   training  loss\n";
  for (const auto& r : rows)
    out << "  " << std::left << std::setw(9) << to_string(r.pattern) << "   " << std::setw(8)
        << (r.training ? "yes" : "no") << "  " << fmt(r.loss) << std::right << '\n';
}

} // namespace detail

// --- symmetry -----------------------------------------------------------------

inline int cmd_symmetry(const Options& o, std::ostream& out, std::ostream& /*err*/) {
  const auto x = detail::read_patterns(o);
  const auto g = symmetry_group(x);
  const auto orb = orbits(x, g);
  const auto t = build_template(x.dimension(), g);
  out << "group: " << g.to_string() << " (order " << g.order() << ")\n";
  out << "orbits:\n";
  for (std::size_t k = 0; k < orb.orbits.size(); ++k) {
    out << "  " << (k + 1) << ":";
    for (const auto& p : orb.orbits[k]) out << ' ' << to_string(p);
    out << '\n';
  }
  out << "template (" << t.parameter_count() << " classes):\n";
  std::istringstream layout(t.layout());
  for (std::string line; std::getline(layout, line);) out << "  " << line << '\n';
  if (!o.out.empty()) {
    detail::ArtifactWriter w("symmetry", o);
    w.json_file("symmetry.json", {{"group", io::to_json(g)},
                                  {"cycles", detail::cycles_json(g)},
                                  {"orbits", io::to_json(orb)},
                                  {"template", io::to_json(t)}});
    w.finish(out);
  }
  return kExitOk;
}

// --- train ----------------------------------------------------------------------

inline TrainConfig train_config(const Options& o) {
  auto c = TrainConfig::defaults(parse_optimizer(o.optimizer));
  c.init = InitScheme{parse_init_kind(o.init)};
  if (o.sigma) c.init.sigma = *o.sigma;
  c.seed = resolve_seed(o);
  if (o.lr) c.learning_rate = *o.lr;
  if (o.epochs) c.max_epochs = *o.epochs;
  if (o.tol) c.threshold = *o.tol;
  c.l2 = o.l2;
  c.validate();
  return c;
}

inline int cmd_train(const Options& o, std::ostream& out, std::ostream& /*err*/) {
  const auto x = detail::read_patterns(o);
  const auto phi = resolve_activation(o);
  const auto config = train_config(o);
  const auto r = train(config, x, phi);

  out << "trained " << phi.to_string() << " network with " << to_string(config.optimizer) << " ("
      << to_string(config.init.kind) << " init, seed " << config.seed << "): " << r.epochs << " epochs, "
      << (r.converged ? "converged" : "not converged") << ", loss " << detail::fmt(r.final_loss) << '\n';

  json summary = {{"final_loss", r.final_loss}, {"epochs", r.epochs}, {"converged", r.converged}};
  json items = json::array();
  out << "item losses:\n";
  for (const auto& p : x) {
    const double l = mse_loss(r.weights, phi, PatternSet({p}));
    items.push_back({{"pattern", p}, {"loss", l}});
    out << "  " << to_string(p) << "  " << detail::fmt(l) << '\n';
  }
  summary["item_losses"] = items;

  if (x.dimension() <= kMaxBruteForceN) {
    const auto g = symmetry_group(x);
    const auto fam = solve_linear_family(x, g, FamilyBasis::free_entries);
    const auto fit = fit_family(r.weights, fam);
    const double dev = symmetry_deviation(r.weights, g);
    out << (phi.kind == ActivationKind::identity ? "family fit (" : "linear family fit (");
    for (std::size_t k = 0; k < fam.names.size(); ++k) out << (k ? ", " : "") << fam.names[k];
    out << ") = (";
    for (std::size_t k = 0; k < fit.params.size(); ++k) out << (k ? ", " : "") << detail::fmt(fit.params[k]);
    out << "), residual " << detail::fmt(fit.residual) << '\n';
    out << "symmetry deviation: " << detail::fmt(dev) << " under " << g.to_string() << '\n';
    summary["group"] = detail::cycles_json(g);
    summary["family_fit"] = {{"names", fam.names}, {"params", fit.params}, {"residual", fit.residual}};
    summary["symmetry_deviation"] = dev;
  }
  const auto sp = spectrum(r.weights);
  out << "spectrum:";
  for (const auto& v : sp.values) out << ' ' << detail::fmt(v);
  out << '\n';
  summary["spectrum"] = io::to_json(sp);

  detail::ArtifactWriter w("train", o);
  if (x.dimension() <= kMaxBruteForceN) {
    const auto rows = generalization_table(r.weights, phi, &x);
    if (x.dimension() <= 4) {
      out << "generalization:\n";
      detail::print_table(out, rows);
    }
    std::ostringstream csv;
    io::write_generalization_csv(csv, {{phi.to_string(), rows}});
    w.text("generalization.csv", csv.str());
  }
  w.json_file("train_result.json", io::to_json(r));
  std::ostringstream loss;
  io::write_loss_csv(loss, r.loss_curve);
  w.text("loss.csv", loss.str());
  w.json_file("summary.json", summary);
  w.manifest().config = {{"train", io::to_json(config)}, {"activation", io::to_json(phi)}, {"items", io::to_json(x)}};
  w.manifest().seeds = {config.seed};
  w.finish(out);
  return kExitOk;
}

// --- reproduce ----------------------------------------------------------------

inline int cmd_reproduce(const Options& o, std::ostream& out, std::ostream& err) {
  acceptance::Options ao;
  ao.seed = resolve_seed(o);
  ao.quick = o.quick;
  const auto rep = acceptance::run(ao);

  std::ostringstream lines;
  for (const auto& c : rep.checks) lines << acceptance::format_line(c) << '\n';
  for (const auto& n : rep.notes) lines << "info: " << n << '\n';
  out << lines.str();

  detail::ArtifactWriter w("reproduce", o);
  w.text("acceptance.txt", lines.str());
  json mats = json::object();
  for (const auto& m : rep.artifacts.matrices) mats[m.name] = io::to_json(m.w);
  w.json_file("matrices.json", mats);
  std::vector<io::TableColumn> cols;
  for (const auto& [name, rows] : rep.artifacts.table) cols.push_back({name, rows});
  std::ostringstream table;
  io::write_generalization_csv(table, cols);
  w.text("generalization_table.csv", table.str());
  for (const auto& f : rep.artifacts.flows) {
    std::ostringstream csv;
    io::write_flow_csv(csv, f.flow);
    w.text("flow_" + f.name + ".csv", csv.str());
  }
  w.manifest().config = {{"seed", ao.seed},
                         {"quick", ao.quick},
                         {"ensemble_seeds", ao.quick ? acceptance::kQuickEnsembleSeeds : acceptance::kEnsembleSeeds}};
  w.manifest().seeds = {ao.seed};
  w.finish(out);

  std::size_t failed = 0;
  for (const auto& c : rep.checks)
    if (!c.passed) {
      ++failed;
      err << "failed: criterion " << c.id << " (" << c.name << ")\n";
    }
  out << (rep.checks.size() - failed) << "/" << rep.checks.size() << " criteria passed\n";
  return failed ? kExitCheckFailed : kExitOk;
}

// --- arc --------------------------------------------------------------------------

inline int cmd_arc(const Options& o, std::ostream& out, std::ostream& err) {
  const auto x = detail::read_patterns(o);
  if (o.test.empty()) throw ParseError("--test is required");
  const auto r = arc_predict(x, parse_pattern(o.test));
  out << "group: " << r.group.to_string() << '\n';
  out << "orbit:";
  for (const auto& p : r.orbit) out << ' ' << to_string(p);
  out << '\n';
  if (r.identity_only) err << "warning: identity-only group; the test item is returned unchanged\n";
  for (const auto& p : r.predictions) out << "prediction: " << to_string(p) << '\n';
  if (!o.out.empty()) {
    json preds = json::array();
    for (const auto& p : r.predictions) preds.push_back(p);
    json orbit = json::array();
    for (const auto& p : r.orbit) orbit.push_back(p);
    detail::ArtifactWriter w("arc", o);
    w.json_file("arc.json", {{"group", detail::cycles_json(r.group)},
                             {"test", r.test},
                             {"orbit", orbit},
                             {"predictions", preds},
                             {"identity_only", r.identity_only}});
    w.finish(out);
  }
  return kExitOk;
}

// --- flowfield ----------------------------------------------------------------

inline int cmd_flowfield(const Options& o, std::ostream& out, std::ostream& /*err*/) {
  if (o.weights.empty()) throw ParseError("--weights is required");
  const auto j = io::read_json_file(o.weights);
  // accepts a bare matrix or a train_result.json
  const bool is_result = j.is_object() && j.contains("weights");
  const auto w = io::matrix_from_json(is_result ? j.at("weights") : j);
  auto opt = o;
  if (!opt.activation && is_result) {
    const auto a = io::activation_from_json(j.at("activation"));
    opt.activation = to_string(a.kind);
    if (!opt.c) opt.c = a.c;
  }
  const auto phi = resolve_activation(opt);
  const Mesh mesh{o.lo, o.hi, o.points};
  const std::size_t steps = o.n.value_or(kDefaultFlowSteps);
  const auto f = flow_field(w, phi, mesh, steps);

  std::vector<Pattern> ends;
  for (const auto& t : f.trajectories) ends.push_back(t.back());
  const auto shape = classify_attractor(ends);
  out << f.trajectories.size() << " trajectories of " << (steps + 1) << " points (" << phi.to_string() << ")\n";
  out << "endpoints: " << shape.clusters << " clusters, shape " << to_string(shape.shape) << '\n';

  detail::ArtifactWriter aw("flowfield", o);
  std::ostringstream csv;
  io::write_flow_csv(csv, f);
  aw.text("flow.csv", csv.str());
  aw.manifest().config = {{"weights", io::to_json(w)},
                          {"activation", io::to_json(phi)},
                          {"mesh", {{"lo", mesh.lo}, {"hi", mesh.hi}, {"points", mesh.points}}},
                          {"steps", steps}};
  aw.finish(out);
  return kExitOk;
}

// --- dispatch -----------------------------------------------------------------

inline int run_command(const std::string& command, const Options& o, std::ostream& out, std::ostream& err);

inline int cmd_replay(const Options& o, std::ostream& out, std::ostream& err) {
  if (o.manifest.empty()) throw ParseError("--manifest is required");
  const auto m = manifest_from_json(io::read_json_file(o.manifest));
  if (m.command == "replay") throw InvalidArgument("cannot replay a replay manifest");
  auto opt = m.options;
  if (!o.out.empty()) opt.out = o.out;
  if (!opt.seed && !m.seeds.empty()) opt.seed = m.seeds.front();
  out << "replaying " << m.command << " (recorded " << m.timestamp << ", version " << m.version << ")\n";
  return run_command(m.command, opt, out, err);
}

inline const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"symmetry", "train", "reproduce", "arc", "flowfield", "replay"};
  return names;
}

/// Runs one subcommand and maps failures onto exit codes.
inline int run_command(const std::string& command, const Options& o, std::ostream& out, std::ostream& err) {
  try {
    if (command == "symmetry") return cmd_symmetry(o, out, err);
    if (command == "train") return cmd_train(o, out, err);
    if (command == "reproduce") return cmd_reproduce(o, out, err);
    if (command == "arc") return cmd_arc(o, out, err);
    if (command == "flowfield") return cmd_flowfield(o, out, err);
    if (command == "replay") return cmd_replay(o, out, err);
    err << "error: unknown command '" << command << "'\n";
    return kExitUsage;
  } catch (const DivergenceError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
}

} // namespace symnet::cli
