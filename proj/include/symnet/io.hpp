#pragma once

#include <cctype>
#include <cerrno>
#include <cmath>
#include <cstddef>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "symnet/analysis.hpp"
#include "symnet/analytic.hpp"
#include "symnet/group.hpp"
#include "symnet/spectrum.hpp"
#include "symnet/train.hpp"

namespace symnet::io {

using json = nlohmann::json;

// Doubles go through nlohmann's shortest round-trip formatting in JSON and
// through 17 significant digits in CSV; both reproduce the value exactly.

inline std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

template <class F>
auto guarded(const std::string& what, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw ParseError(what + ": " + e.what());
  }
}

// --- patterns and groups ----------------------------------------------------

inline json to_json(const PatternSet& x) {
  json items = json::array();
  for (const auto& p : x) items.push_back(p);
  return {{"n", x.dimension()}, {"items", items}};
}

inline PatternSet pattern_set_from_json(const json& j) {
  return guarded("pattern set", [&] {
    const auto n = j.at("n").get<std::size_t>();
    auto items = j.at("items").get<std::vector<Pattern>>();
    for (const auto& p : items)
      if (p.size() != n) throw ParseError("pattern set: item length differs from n");
    return PatternSet(std::move(items));
  });
}

inline json to_json(const Permutation& s) { return s.map(); }

inline Permutation permutation_from_json(const json& j) {
  return guarded("permutation", [&] { return Permutation(j.get<std::vector<std::size_t>>()); });
}

inline json to_json(const SymmetryGroup& g) {
  json a = json::array();
  for (const auto& s : g) a.push_back(to_json(s));
  return a;
}

inline SymmetryGroup group_from_json(const json& j) {
  return guarded("group", [&] {
    std::vector<Permutation> el;
    for (const auto& e : j) el.push_back(permutation_from_json(e));
    return SymmetryGroup(std::move(el));
  });
}

inline json to_json(const OrbitPartition& o) {
  json a = json::array();
  for (const auto& block : o.orbits) a.push_back(to_json(block).at("items"));
  return a;
}

inline json to_json(const Template& t) {
  json classes = json::array();
  for (std::size_t k = 0; k < t.parameter_count(); ++k) {
    json pairs = json::array();
    for (const auto& [i, j] : t.classes.classes[k]) pairs.push_back({i, j});
    classes.push_back({{"name", t.names[k]}, {"pairs", pairs}});
  }
  json grid = json::array();
  for (std::size_t i = 0; i < t.n(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < t.n(); ++j) row.push_back(t.names[t.classes(i, j)]);
    grid.push_back(row);
  }
  return {{"n", t.n()}, {"classes", classes}, {"layout", grid}};
}

// --- matrices and activations ----------------------------------------------

inline json to_json(const Matrix& w) {
  json rows = json::array();
  for (std::size_t i = 0; i < w.rows(); ++i) rows.push_back(w.row_vector(i));
  return {{"n", w.rows()}, {"rows", rows}};
}

inline WeightMatrix matrix_from_json(const json& j) {
  return guarded("weight matrix", [&] {
    const auto n = j.at("n").get<std::size_t>();
    const auto rows = j.at("rows").get<std::vector<Vector>>();
    if (rows.size() != n) throw ParseError("weight matrix: expected " + std::to_string(n) + " rows");
    for (const auto& r : rows)
      if (r.size() != n) throw ParseError("weight matrix: rows must have n entries");
    auto w = Matrix::from_rows(rows);
    if (!w.all_finite()) throw ParseError("weight matrix: non-finite entry");
    return w;
  });
}

inline json to_json(const Activation& a) { return {{"kind", to_string(a.kind)}, {"c", a.c}}; }

inline Activation activation_from_json(const json& j) {
  return guarded("activation", [&] {
    const auto kind = parse_activation_kind(j.at("kind").get<std::string>());
    return j.contains("c") ? Activation::make(kind, j.at("c").get<double>()) : Activation::make(kind);
  });
}

// --- analytic ---------------------------------------------------------------

inline json to_json(const LinearFamily& f) {
  json basis = json::array();
  for (const auto& b : f.basis) basis.push_back(to_json(b));
  return {{"particular", to_json(f.particular)}, {"basis", basis}, {"names", f.names}, {"template", to_json(f.tmpl)}};
}

/// The template is informational in the file; it is rebuilt as the trivial
/// N x N template when reading.
inline LinearFamily family_from_json(const json& j) {
  return guarded("linear family", [&] {
    LinearFamily f;
    f.particular = matrix_from_json(j.at("particular"));
    for (const auto& b : j.at("basis")) f.basis.push_back(matrix_from_json(b));
    f.names = j.at("names").get<std::vector<std::string>>();
    if (f.names.size() != f.basis.size()) throw ParseError("linear family: names and basis differ in length");
    for (const auto& b : f.basis)
      if (b.rows() != f.particular.rows()) throw ParseError("linear family: basis size mismatch");
    f.tmpl = build_template(f.particular.rows(), SymmetryGroup::trivial(f.particular.rows()));
    return f;
  });
}

inline json to_json(const FamilyFit& f) { return {{"params", f.params}, {"residual", f.residual}}; }

// --- training ---------------------------------------------------------------

inline json to_json(const InitScheme& s) {
  return {{"kind", to_string(s.kind)}, {"mean", s.mean}, {"sigma", s.sigma}};
}

inline json to_json(const TrainConfig& c) {
  json j = {{"optimizer", to_string(c.optimizer)},
            {"learning_rate", c.learning_rate},
            {"beta1", c.beta1},
            {"beta2", c.beta2},
            {"epsilon", c.epsilon},
            {"max_epochs", c.max_epochs},
            {"init", to_json(c.init)},
            {"seed", c.seed},
            {"l2", c.l2},
            {"generator", kGeneratorName}};
  j["threshold"] = c.threshold ? json(*c.threshold) : json(nullptr);
  return j;
}

inline TrainConfig train_config_from_json(const json& j) {
  return guarded("train config", [&] {
    TrainConfig c;
    c.optimizer = parse_optimizer(j.at("optimizer").get<std::string>());
    c.learning_rate = j.at("learning_rate").get<double>();
    c.beta1 = j.at("beta1").get<double>();
    c.beta2 = j.at("beta2").get<double>();
    c.epsilon = j.at("epsilon").get<double>();
    c.max_epochs = j.at("max_epochs").get<std::size_t>();
    const auto& init = j.at("init");
    c.init = {parse_init_kind(init.at("kind").get<std::string>()), init.at("mean").get<double>(),
              init.at("sigma").get<double>()};
    c.seed = j.at("seed").get<std::uint64_t>();
    c.l2 = j.at("l2").get<double>();
    if (j.contains("threshold") && !j.at("threshold").is_null()) c.threshold = j.at("threshold").get<double>();
    c.validate();
    return c;
  });
}

inline json to_json(const TrainResult& r) {
  return {{"weights", to_json(r.weights)}, {"loss_curve", r.loss_curve},   {"epochs", r.epochs},
          {"converged", r.converged},     {"final_loss", r.final_loss},   {"config", to_json(r.config)},
          {"activation", to_json(r.activation)}};
}

inline TrainResult train_result_from_json(const json& j) {
  return guarded("train result", [&] {
    TrainResult r;
    r.weights = matrix_from_json(j.at("weights"));
    r.loss_curve = j.at("loss_curve").get<std::vector<double>>();
    r.epochs = j.at("epochs").get<std::size_t>();
    r.converged = j.at("converged").get<bool>();
    r.final_loss = j.at("final_loss").get<double>();
    r.config = train_config_from_json(j.at("config"));
    r.activation = activation_from_json(j.at("activation"));
    return r;
  });
}

// --- analysis ---------------------------------------------------------------

inline json complex_json(Complex c) { return json::array({c.real(), c.imag()}); }

inline json to_json(const Spectrum& s) {
  json values = json::array(), vectors = json::array();
  for (const auto& v : s.values) values.push_back(complex_json(v));
  for (const auto& vec : s.vectors) {
    json a = json::array();
    for (const auto& c : vec) a.push_back(complex_json(c));
    vectors.push_back(a);
  }
  return {{"values", values}, {"vectors", vectors}};
}

inline json to_json(const FixedPointSet& f) {
  json pts = json::array();
  for (const auto& p : f.points)
    pts.push_back({{"point", p.point},
                   {"basin", p.basin},
                   {"residual", p.residual},
                   {"spectral_radius", p.spectral_radius},
                   {"attractive", p.attractive}});
  return {{"points", pts}, {"starts", f.starts}, {"unassigned", f.unassigned}};
}

// --- CSV --------------------------------------------------------------------

inline void write_flow_csv(std::ostream& os, const FlowField& f) {
  const std::size_t n = f.trajectories.empty() ? 0 : f.trajectories.front().front().size();
  os << "start_id,step";
  for (std::size_t i = 0; i < n; ++i) os << ",x" << (i + 1);
  os << '\n';
  for (std::size_t s = 0; s < f.trajectories.size(); ++s)
    for (std::size_t k = 0; k < f.trajectories[s].size(); ++k) {
      os << s << ',' << k;
      for (double v : f.trajectories[s][k]) os << ',' << format_double(v);
      os << '\n';
    }
}

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream is(line);
  while (std::getline(is, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_double(const std::string& s) {
  // strtod rather than stod: subnormals set ERANGE but are valid values
  if (s.empty() || std::isspace(static_cast<unsigned char>(s.front()))) throw ParseError("not a number: '" + s + "'");
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str()) throw ParseError("not a number: '" + s + "'");
  if (*end != '\0') throw ParseError("trailing characters in number '" + s + "'");
  if (errno == ERANGE && std::isinf(v)) throw ParseError("number out of range: '" + s + "'");
  return v;
}

} // namespace detail

/// Reads trajectories back; mesh metadata is not part of the CSV.
inline FlowField read_flow_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("flow CSV: empty input");
  const auto header = detail::split_csv(line);
  if (header.size() < 3 || header[0] != "start_id" || header[1] != "step") throw ParseError("flow CSV: bad header");
  FlowField f;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != header.size()) throw ParseError("flow CSV: wrong column count");
    const auto sid = static_cast<std::size_t>(detail::parse_double(cells[0]));
    const auto step = static_cast<std::size_t>(detail::parse_double(cells[1]));
    if (sid == f.trajectories.size()) f.trajectories.emplace_back();
    if (sid + 1 != f.trajectories.size() || step != f.trajectories.back().size())
      throw ParseError("flow CSV: rows out of order");
    Pattern p;
    for (std::size_t c = 2; c < cells.size(); ++c) p.push_back(detail::parse_double(cells[c]));
    f.trajectories.back().push_back(std::move(p));
  }
  f.steps = f.trajectories.empty() ? 0 : f.trajectories.front().size() - 1;
  return f;
}

inline void write_loss_csv(std::ostream& os, const std::vector<double>& curve) {
  os << "epoch,loss\n";
  for (std::size_t e = 0; e < curve.size(); ++e) os << e << ',' << format_double(curve[e]) << '\n';
}

inline std::vector<double> read_loss_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "epoch,loss") throw ParseError("loss CSV: bad header");
  std::vector<double> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != 2) throw ParseError("loss CSV: wrong column count");
    out.push_back(detail::parse_double(cells[1]));
  }
  return out;
}

inline std::string slash_pattern(const Pattern& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += '/';
    s += format_double(p[i]);
  }
  return s;
}

/// One column per activation, as in a multi-network comparison table.
struct TableColumn {
  std::string name;
  std::vector<GeneralizationRow> rows;
};

inline void write_generalization_csv(std::ostream& os, const std::vector<TableColumn>& cols) {
  if (cols.empty()) return;
  os << "pattern,training";
  for (const auto& c : cols) os << ',' << c.name;
  os << '\n';
  for (std::size_t r = 0; r < cols.front().rows.size(); ++r) {
    os << slash_pattern(cols.front().rows[r].pattern) << ',' << (cols.front().rows[r].training ? 1 : 0);
    for (const auto& c : cols) os << ',' << format_double(c.rows[r].loss);
    os << '\n';
  }
}

inline std::vector<TableColumn> read_generalization_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ParseError("generalization CSV: empty input");
  const auto header = detail::split_csv(line);
  if (header.size() < 3 || header[0] != "pattern" || header[1] != "training")
    throw ParseError("generalization CSV: bad header");
  std::vector<TableColumn> cols;
  for (std::size_t c = 2; c < header.size(); ++c) cols.push_back({header[c], {}});
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != header.size()) throw ParseError("generalization CSV: wrong column count");
    Pattern p;
    std::istringstream ps(cells[0]);
    std::string v;
    while (std::getline(ps, v, '/')) p.push_back(detail::parse_double(v));
    for (std::size_t c = 2; c < cells.size(); ++c)
      cols[c - 2].rows.push_back({p, detail::parse_double(cells[c]), cells[1] == "1"});
  }
  return cols;
}

// --- files ------------------------------------------------------------------

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
}

inline void write_json_file(const std::filesystem::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

} // namespace symnet::io
