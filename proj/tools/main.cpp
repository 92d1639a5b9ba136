// cuboid-spectra: command-line front end for the cuboid spectra toolkit.
//
// Commands: eig, count, riesz, sum, optimize, sweep, verify, fit, decompose.
// Outputs are CSV or JSON with a reproducibility header (tool version,
// config hash, seed); identical argv + seed produce byte-identical output
// regardless of the worker count.  Exit codes: 0 success, 1 verification
// violations, 2 invalid input, 3 resource/budget limits.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cuboid_spectra/asymptotics.hpp"
#include "cuboid_spectra/bounds.hpp"
#include "cuboid_spectra/core.hpp"
#include "cuboid_spectra/lattice.hpp"
#include "cuboid_spectra/optimize.hpp"
#include "cuboid_spectra/parallel.hpp"
#include "cuboid_spectra/spectrum.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace cuboidspec;

constexpr const char* kToolName = "cuboid-spectra";
constexpr const char* kToolVersion = "1.0.0";

struct RunConfig {
  std::string command;

  int dim = 0;  // 0 = unset (inferred from --sides where possible)
  std::string sides_text;
  std::string bc = "dirichlet";
  std::int64_t k = 1;
  double lambda = 0.0;
  double gamma = 1.0;
  double b = 0.0;
  std::uint64_t seed = 0xC0FFEE;
  std::string workers;  // integer text or "auto"; empty falls back to env
  std::string out;      // empty = stdout
  std::string format;   // csv | json; empty = per-command default

  std::string target = "lambda_k";
  std::int64_t k_min = 1;
  std::int64_t k_max = 1;
  std::int64_t k_step = 1;
  std::string suite;
  int grid_size = 0;
  std::string input;
  std::string series;
  std::string checkpoint;
  std::string config_path;
};

// Options registered under their config-file key, plus the set of keys the
// user actually provided (via flag or config file).
struct Wiring {
  std::map<std::string, CLI::Option*> options;
  std::set<std::string> provided;

  bool has(const std::string& key) const { return provided.count(key) != 0; }
};

std::string sig12(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string full_precision(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> parse_sides(const std::string& text) {
  std::vector<double> sides;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const double v = std::stod(item, &used);
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) {
        ++used;
      }
      if (used != item.size()) throw std::invalid_argument(item);
      sides.push_back(v);
    } catch (const std::exception&) {
      throw invalid_input("cannot parse side length '" + item + "'");
    }
  }
  if (sides.empty()) throw invalid_input("--sides needs a comma-separated list");
  return sides;
}

// ----------------------------------------------------------------------
// Config file merge: same keys as flags, flags win.

void apply_config_value(RunConfig& cfg, const std::string& key, const json& v) {
  const auto as_text = [&]() -> std::string {
    if (v.is_string()) return v.get<std::string>();
    throw invalid_input("config key '" + key + "' must be a string");
  };
  const auto as_int = [&]() -> std::int64_t {
    if (v.is_number_integer()) return v.get<std::int64_t>();
    throw invalid_input("config key '" + key + "' must be an integer");
  };
  const auto as_double = [&]() -> double {
    if (v.is_number()) return v.get<double>();
    throw invalid_input("config key '" + key + "' must be a number");
  };

  if (key == "dim") {
    cfg.dim = static_cast<int>(as_int());
  } else if (key == "sides") {
    if (v.is_array()) {
      std::string joined;
      for (const auto& x : v) {
        if (!x.is_number()) throw invalid_input("config 'sides' must hold numbers");
        if (!joined.empty()) joined += ',';
        joined += full_precision(x.get<double>());
      }
      cfg.sides_text = joined;
    } else {
      cfg.sides_text = as_text();
    }
  } else if (key == "bc") {
    cfg.bc = as_text();
  } else if (key == "k") {
    cfg.k = as_int();
  } else if (key == "lambda") {
    cfg.lambda = as_double();
  } else if (key == "gamma") {
    cfg.gamma = as_double();
  } else if (key == "b") {
    cfg.b = as_double();
  } else if (key == "seed") {
    cfg.seed = static_cast<std::uint64_t>(as_int());
  } else if (key == "workers") {
    cfg.workers = v.is_number_integer() ? std::to_string(as_int()) : as_text();
  } else if (key == "out") {
    cfg.out = as_text();
  } else if (key == "format") {
    cfg.format = as_text();
  } else if (key == "target") {
    cfg.target = as_text();
  } else if (key == "k-min") {
    cfg.k_min = as_int();
  } else if (key == "k-max") {
    cfg.k_max = as_int();
  } else if (key == "k-step") {
    cfg.k_step = as_int();
  } else if (key == "suite") {
    cfg.suite = as_text();
  } else if (key == "grid-size") {
    cfg.grid_size = static_cast<int>(as_int());
  } else if (key == "input") {
    cfg.input = as_text();
  } else if (key == "series") {
    cfg.series = as_text();
  } else if (key == "checkpoint") {
    cfg.checkpoint = as_text();
  } else {
    throw invalid_input("config key '" + key + "' is not a flag of this command");
  }
}

void merge_config_file(RunConfig& cfg, Wiring& wiring) {
  for (const auto& [key, opt] : wiring.options) {
    if (opt->count() > 0) wiring.provided.insert(key);
  }
  if (cfg.config_path.empty()) return;

  std::ifstream in(cfg.config_path);
  if (!in) throw invalid_input("cannot open config file: " + cfg.config_path);
  json parsed;
  try {
    in >> parsed;
  } catch (const json::exception& e) {
    throw invalid_input("config file is not valid JSON: " + std::string(e.what()));
  }
  if (!parsed.is_object()) throw invalid_input("config file must hold a JSON object");

  for (const auto& [key, value] : parsed.items()) {
    if (key == "config") throw invalid_input("config files cannot nest 'config'");
    if (wiring.options.count(key) == 0) {
      throw invalid_input("config key '" + key + "' is not a flag of this command");
    }
    if (wiring.has(key)) continue;  // flags win
    apply_config_value(cfg, key, value);
    wiring.provided.insert(key);
  }
}

// ----------------------------------------------------------------------
// Config hash: FNV-1a over the canonical "key=value" listing of the
// semantic fields (workers, out, format, checkpoint and the config path do
// not change what is computed, so they stay out of the hash).

std::string canonical_value(const RunConfig& cfg, const std::string& key) {
  if (key == "dim") return std::to_string(cfg.dim);
  if (key == "sides") {
    if (cfg.sides_text.empty()) return {};
    try {
      std::string joined;
      for (const double s : parse_sides(cfg.sides_text)) {
        if (!joined.empty()) joined += ',';
        joined += full_precision(s);
      }
      return joined;
    } catch (const invalid_input&) {
      return cfg.sides_text;  // let the command report the parse error
    }
  }
  if (key == "bc") return cfg.bc;
  if (key == "k") return std::to_string(cfg.k);
  if (key == "lambda") return full_precision(cfg.lambda);
  if (key == "gamma") return full_precision(cfg.gamma);
  if (key == "b") return full_precision(cfg.b);
  if (key == "seed") return std::to_string(cfg.seed);
  if (key == "target") return cfg.target;
  if (key == "k-min") return std::to_string(cfg.k_min);
  if (key == "k-max") return std::to_string(cfg.k_max);
  if (key == "k-step") return std::to_string(cfg.k_step);
  if (key == "suite") return cfg.suite;
  if (key == "grid-size") return std::to_string(cfg.grid_size);
  if (key == "input") return cfg.input;
  if (key == "series") return cfg.series;
  return {};
}

std::string config_hash(const RunConfig& cfg, const Wiring& wiring) {
  static const std::set<std::string> excluded = {"workers", "out", "format",
                                                "checkpoint", "config"};
  std::string canon = cfg.command;
  for (const auto& [key, opt] : wiring.options) {
    (void)opt;
    if (excluded.count(key) != 0) continue;
    canon += '\n';
    canon += key;
    canon += '=';
    canon += canonical_value(cfg, key);
  }
  std::uint64_t h = 1469598103934665603ull;
  for (const char c : canon) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// ----------------------------------------------------------------------
// Output plumbing.

struct Sink {
  std::ofstream file;
  std::ostream* os = nullptr;

  std::ostream& stream() { return *os; }
};

Sink open_sink(const RunConfig& cfg, std::ios::openmode extra = std::ios::trunc) {
  Sink sink;
  if (cfg.out.empty()) {
    sink.os = &std::cout;
    return sink;
  }
  sink.file.open(cfg.out, std::ios::out | extra);
  if (!sink.file) throw invalid_input("cannot open output file: " + cfg.out);
  sink.os = &sink.file;
  return sink;
}

std::string resolve_format(const RunConfig& cfg, const std::string& fallback) {
  const std::string f = cfg.format.empty() ? fallback : cfg.format;
  if (f != "csv" && f != "json") {
    throw invalid_input("--format must be csv or json, got '" + f + "'");
  }
  return f;
}

void csv_header(std::ostream& os, const std::string& hash, std::uint64_t seed) {
  os << "# " << kToolName << ' ' << kToolVersion << '\n';
  os << "# config " << hash << '\n';
  os << "# seed " << seed << '\n';
}

json json_header(const std::string& hash, std::uint64_t seed) {
  json h;
  h["tool"] = std::string(kToolName) + ' ' + kToolVersion;
  h["config"] = hash;
  h["seed"] = seed;
  return h;
}

void emit_json(std::ostream& os, const json& j) { os << j.dump(2) << '\n'; }

// Key/value CSV for report-like payloads (order preserved).
void emit_kv_csv(std::ostream& os, const std::vector<std::pair<std::string, std::string>>& rows) {
  os << "quantity,value\n";
  for (const auto& [k, v] : rows) os << k << ',' << v << '\n';
}

// ----------------------------------------------------------------------
// Shared argument handling.

BoundaryCondition parse_bc(const RunConfig& cfg) {
  return boundary_condition_from_string(cfg.bc);
}

Cuboid cuboid_from_config(const RunConfig& cfg, const Wiring& wiring) {
  if (!wiring.has("sides")) {
    throw invalid_input(cfg.command + " requires --sides");
  }
  const std::vector<double> sides = parse_sides(cfg.sides_text);
  if (cfg.dim != 0 && cfg.dim != static_cast<int>(sides.size())) {
    throw invalid_input("--dim disagrees with the number of --sides entries");
  }
  return Cuboid(sides);
}

void require_key(const RunConfig& cfg, const Wiring& wiring, const std::string& key) {
  if (!wiring.has(key)) {
    throw invalid_input(cfg.command + " requires --" + key);
  }
}

int resolve_workers(const RunConfig& cfg) {
  std::string text = cfg.workers;
  if (text.empty()) {
    if (const char* env = std::getenv("CUBOID_SPECTRA_WORKERS")) text = env;
  }
  if (text.empty() || text == "auto") return par::hardware_workers();
  try {
    std::size_t used = 0;
    const int workers = std::stoi(text, &used);
    if (used != text.size() || workers < 1) throw std::invalid_argument(text);
    return workers;
  } catch (const std::exception&) {
    throw invalid_input("--workers must be a positive integer or 'auto'");
  }
}

// ----------------------------------------------------------------------
// Commands.

int run_eig(const RunConfig& cfg, const Wiring& wiring, const std::string& hash) {
  const Cuboid r = cuboid_from_config(cfg, wiring);
  const BoundaryCondition bc = parse_bc(cfg);
  const double value = spectrum::eigenvalue(r, bc, cfg.k);
  const std::string format = resolve_format(cfg, "csv");
  Sink sink = open_sink(cfg);
  if (format == "csv") {
    csv_header(sink.stream(), hash, cfg.seed);
    sink.stream() << "value\n" << sig12(value) << '\n';
  } else {
    json j;
    j["_header"] = json_header(hash, cfg.seed);
    j["command"] = "eig";
    j["sides"] = r.sides();
    j["bc"] = to_string(bc);
    j["k"] = cfg.k;
    j["value"] = value;
    emit_json(sink.stream(), j);
  }
  return 0;
}

int run_count(const RunConfig& cfg, const Wiring& wiring, const std::string& hash) {
  const Cuboid r = cuboid_from_config(cfg, wiring);
  const BoundaryCondition bc = parse_bc(cfg);
  require_key(cfg, wiring, "lambda");
  if (!(cfg.lambda >= 0.0)) throw invalid_input("--lambda must be >= 0");
  const std::uint64_t count = spectrum::counting_function(r, bc, cfg.lambda);
  const std::string format = resolve_format(cfg, "csv");
  Sink sink = open_sink(cfg);
  if (format == "csv") {
    csv_header(sink.stream(), hash, cfg.seed);
    sink.stream() << "count\n" << count << '\n';
  } else {
    json j;
    j["_header"] = json_header(hash, cfg.seed);
    j["command"] = "count";
    j["sides"] = r.sides();
    j["bc"] = to_string(bc);
    j["lambda"] = cfg.lambda;
    j["count"] = count;
    emit_json(sink.stream(), j);
  }
  return 0;
}

int run_riesz(const RunConfig& cfg, const Wiring& wiring, const std::string& hash) {
  const Cuboid r = cuboid_from_config(cfg, wiring);
  const BoundaryCondition bc = parse_bc(cfg);
  require_key(cfg, wiring, "lambda");
  const double value = spectrum::riesz_mean(r, {cfg.gamma, cfg.lambda, bc});
  const std::string format = resolve_format(cfg, "csv");
  Sink sink = open_sink(cfg);
  if (format == "csv") {
    csv_header(sink.stream(), hash, cfg.seed);
    sink.stream() << "value\n" << sig12(value) << '\n';
  } else {
    json j;
    j["_header"] = json_header(hash, cfg.seed);
    j["command"] = "riesz";
    j["sides"] = r.sides();
    j["bc"] = to_string(bc);
    j["gamma"] = cfg.gamma;
    j["lambda"] = cfg.lambda;
    j["value"] = value;
    emit_json(sink.stream(), j);
  }
  return 0;
}

int run_sum(const RunConfig& cfg, const Wiring& wiring, const std::string& hash) {
  const Cuboid r = cuboid_from_config(cfg, wiring);
  const BoundaryCondition bc = parse_bc(cfg);
  const spectrum::SumResult s = spectrum::eigenvalue_sum(r, bc, cfg.k);
  const std::string format = resolve_format(cfg, "csv");
  Sink sink = open_sink(cfg);
  if (format == "csv") {
    csv_header(sink.stream(), hash, cfg.seed);
    sink.stream() << "sum,average\n" << sig12(s.sum) << ',' << sig12(s.average) << '\n';
  } else {
    json j;
    j["_header"] = json_header(hash, cfg.seed);
    j["command"] = "sum";
    j["sides"] = r.sides();
    j["bc"] = to_string(bc);
    j["k"] = cfg.k;
    j["sum"] = s.sum;
    j["average"] = s.average;
    emit_json(sink.stream(), j);
  }
  return 0;
}

int run_decompose(const RunConfig& cfg, const Wiring& wiring, const std::string& hash) {
  const Cuboid r = cuboid_from_config(cfg, wiring);
  require_key(cfg, wiring, "lambda");
  if (!(cfg.lambda >= 0.0)) throw invalid_input("--lambda must be >= 0");
  const double t = std::sqrt(cfg.lambda) / M_PI;
  const lattice::DecompositionReport rep = lattice::symmetric_decomposition_check(r, t);
  const std::string format = resolve_format(cfg, "csv");
  Sink sink = open_sink(cfg);
  if (format == "csv") {
    csv_header(sink.stream(), hash, cfg.seed);
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("full", std::to_string(rep.full_count));
    rows.emplace_back("reconstructed", std::to_string(rep.reconstructed));
    rows.emplace_back("consistent", rep.consistent ? "1" : "0");
    for (const auto& [codim, count] : rep.facet_counts) {
      rows.emplace_back("sections_codim_" + std::to_string(codim), std::to_string(count));
    }
    emit_kv_csv(sink.stream(), rows);
  } else {
    json j;
    j["_header"] = json_header(hash, cfg.seed);
    j["command"] = "decompose";
    j["sides"] = r.sides();
    j["lambda"] = cfg.lambda;
    j["full"] = rep.full_count;
    j["reconstructed"] = rep.reconstructed;
    j["consistent"] = rep.consistent;
    json sections = json::object();
    for (const auto& [codim, count] : rep.facet_counts) {
      sections[std::to_string(codim)] = count;
    }
    j["sections"] = sections;
    emit_json(sink.stream(), j);
  }
  return 0;
}

// Resolve the boundary condition for optimisation targets: explicit --bc
// wins, otherwise the target implies it (mu_k is Neumann, the rest default
// to Dirichlet).
BoundaryCondition bc_for_target(const RunConfig& cfg, const Wiring& wiring,
                                optimize::Target target) {
  if (wiring.has("bc")) return parse_bc(cfg);
  return target == optimize::Target::mu_k ? BoundaryCondition::neumann
                                          : BoundaryCondition::dirichlet;
}

void sweep_columns(std::ostream& os, int dim) {
  os << "k,n,bc,target";
  for (int i = 1; i <= dim; ++i) os << ",a_" << i;
  os << ",value,value_at_cube,delta,perimeter_defect,evaluations,multistart_spread\n";
}

void sweep_row(std::ostream& os, const optimize::OptimizationResult& r, int dim) {
  os << r.k << ',' << dim << ',' << to_string(r.bc) << ',' << to_string(r.target);
  for (int i = 0; i < dim; ++i) os << ',' << sig12(r.optimal_cuboid.side(i));
  os << ',' << sig12(r.optimal_value) << ',' << sig12(r.value_at_cube) << ','
     << sig12(r.delta) << ',' << sig12(r.perimeter_defect) << ',' << r.evaluations
     << ',' << sig12(r.multistart_spread) << '\n';
}

json result_json(const optimize::OptimizationResult& r, int dim) {
  json j;
  j["target"] = to_string(r.target);
  j["bc"] = to_string(r.bc);
  j["n"] = dim;
  j["k"] = r.k;
  if (r.target == optimize::Target::riesz) {
    j["gamma"] = r.gamma;
    j["threshold"] = r.threshold;
  }
  j["sides"] = r.optimal_cuboid.sides();
  j["value"] = r.optimal_value;
  j["value_at_cube"] = r.value_at_cube;
  j["delta"] = r.delta;
  j["perimeter_defect"] = r.perimeter_defect;
  j["evaluations"] = r.evaluations;
  j["multistart_spread"] = r.multistart_spread;
  j["budget_exhausted"] = r.budget_exhausted;
  j["flat_objective"] = r.flat_objective;
  j["exploratory"] = r.exploratory;
  return j;
}

int run_optimize(const RunConfig& cfg, const Wiring& wiring, const std::string& hash) {
  if (cfg.dim < 2) throw invalid_input("optimize requires --dim >= 2");
  const optimize::Target target = optimize::target_from_string(cfg.target);
  const BoundaryCondition bc = bc_for_target(cfg, wiring, target);

  optimize::Options opts;
  opts.seed = cfg.seed;

  optimize::OptimizationResult result;
  switch (target) {
    case optimize::Target::lambda_k:
    case optimize::Target::mu_k: {
      if (target == optimize::Target::lambda_k && bc != BoundaryCondition::dirichlet) {
        throw invalid_input("target lambda_k is a Dirichlet problem");
      }
      if (target == optimize::Target::mu_k && bc != BoundaryCondition::neumann) {
        throw invalid_input("target mu_k is a Neumann problem");
      }
      result = optimize::optimize_eigenvalue(cfg.dim, bc, cfg.k, opts);
      break;
    }
    case optimize::Target::riesz:
      require_key(cfg, wiring, "lambda");
      result = optimize::optimize_riesz(cfg.dim, bc, cfg.gamma, cfg.lambda, opts);
      break;
    case optimize::Target::average:
      result = optimize::optimize_average(cfg.dim, cfg.k, opts, bc);
      break;
  }

  const std::string format = resolve_format(cfg, "csv");
  Sink sink = open_sink(cfg);
  if (format == "csv") {
    csv_header(sink.stream(), hash, cfg.seed);
    if (target == optimize::Target::riesz) {
      sink.stream() << "# gamma " << sig12(cfg.gamma) << '\n';
      sink.stream() << "# threshold " << sig12(cfg.lambda) << '\n';
    }
    if (result.exploratory) sink.stream() << "# exploratory 1\n";
    sweep_columns(sink.stream(), cfg.dim);
    sweep_row(sink.stream(), result, cfg.dim);
  } else {
    json j;
    j["_header"] = json_header(hash, cfg.seed);
    j["command"] = "optimize";
    j.update(result_json(result, cfg.dim));
    emit_json(sink.stream(), j);
  }
  return 0;
}

int run_sweep(const RunConfig& cfg, const Wiring& wiring, const std::string& hash) {
  if (cfg.dim < 2) throw invalid_input("sweep requires --dim >= 2");
  optimize::SweepSpec spec;
  spec.target = optimize::target_from_string(cfg.target);
  if (spec.target == optimize::Target::riesz) {
    throw invalid_input("riesz sweeps need a threshold grid; use the library API");
  }
  spec.bc = bc_for_target(cfg, wiring, spec.target);
  spec.dim = cfg.dim;
  spec.k_min = cfg.k_min;
  spec.k_max = cfg.k_max;
  spec.k_step = cfg.k_step;
  spec.options.seed = cfg.seed;

  // Checkpointed resume: refuse on config mismatch, skip finished points,
  // warm-start from the recorded optimum.
  bool resuming = false;
  if (!cfg.checkpoint.empty() && std::filesystem::exists(cfg.checkpoint)) {
    std::ifstream in(cfg.checkpoint);
    json cp;
    try {
      in >> cp;
    } catch (const json::exception& e) {
      throw invalid_input("checkpoint is not valid JSON: " + std::string(e.what()));
    }
    if (cp.value("config_hash", std::string{}) != hash) {
      throw invalid_input("checkpoint config hash mismatch; refusing to resume");
    }
    spec.resume_from_k = cp.at("last_k").get<std::int64_t>() + 1;
    spec.resume_warm = cp.at("last_optimum").get<std::vector<double>>();
    resuming = spec.resume_from_k > spec.k_min;
  }

  const std::string format = resolve_format(cfg, "csv");
  const auto write_checkpoint = [&](const optimize::OptimizationResult& r) {
    if (cfg.checkpoint.empty()) return;
    json cp;
    cp["config_hash"] = hash;
    cp["last_k"] = r.k;
    cp["last_optimum"] = r.optimal_cuboid.sides();
    std::ofstream out(cfg.checkpoint, std::ios::trunc);
    if (!out) throw invalid_input("cannot write checkpoint: " + cfg.checkpoint);
    out << cp.dump(2) << '\n';
  };

  if (format == "csv") {
    // Streaming rows; resumed runs append to the existing file.
    Sink sink = open_sink(cfg, resuming ? std::ios::app : std::ios::trunc);
    if (!resuming) {
      csv_header(sink.stream(), hash, cfg.seed);
      sweep_columns(sink.stream(), cfg.dim);
    }
    optimize::sweep(spec, [&](const optimize::OptimizationResult& r) {
      sweep_row(sink.stream(), r, cfg.dim);
      sink.stream().flush();
      write_checkpoint(r);
    });
  } else {
    Sink sink = open_sink(cfg);
    json rows = json::array();
    optimize::sweep(spec, [&](const optimize::OptimizationResult& r) {
      rows.push_back(result_json(r, cfg.dim));
      write_checkpoint(r);
    });
    json j;
    j["_header"] = json_header(hash, cfg.seed);
    j["command"] = "sweep";
    j["rows"] = rows;
    emit_json(sink.stream(), j);
  }
  return 0;
}

int run_verify(const RunConfig& cfg, const Wiring& wiring, const std::string& hash) {
  require_key(cfg, wiring, "suite");
  bounds::VerifySpec spec;
  spec.suite = cfg.suite;
  spec.seed = cfg.seed;
  if (cfg.grid_size > 0) spec.grid_points = cfg.grid_size;
  if (wiring.has("dim")) spec.dims = {cfg.dim};
  if (wiring.has("k")) spec.k_max = cfg.k;
  if (wiring.has("lambda")) spec.threshold_max = cfg.lambda;
  if (wiring.has("gamma")) spec.gammas = {cfg.gamma};
  if (wiring.has("b")) spec.b_fractions = {cfg.b};

  const bounds::BoundReport report = bounds::verify_bound(spec);

  const std::string format = resolve_format(cfg, "json");
  Sink sink = open_sink(cfg);
  if (format == "json") {
    json j;
    j["_header"] = json_header(hash, cfg.seed);
    j["command"] = "verify";
    j["suite"] = report.bound_id;
    j["grid"] = report.grid;
    j["checks"] = report.checks;
    j["max_slack_used"] = report.max_slack_used;
    j["violation_count"] = report.violations.size();
    json violations = json::array();
    for (const auto& v : report.violations) {
      json e;
      e["dim"] = v.dim;
      e["sides"] = v.sides;
      e["check"] = v.check;
      e["parameter"] = v.parameter;
      e["gamma"] = v.gamma;
      e["b"] = v.b;
      e["lhs"] = v.lhs;
      e["rhs"] = v.rhs;
      e["margin"] = v.margin;
      violations.push_back(e);
    }
    j["violations"] = violations;
    emit_json(sink.stream(), j);
  } else {
    csv_header(sink.stream(), hash, cfg.seed);
    sink.stream() << "# suite " << report.bound_id << '\n';
    sink.stream() << "# checks " << report.checks << '\n';
    sink.stream() << "dim,sides,check,parameter,gamma,b,lhs,rhs,margin\n";
    for (const auto& v : report.violations) {
      std::string sides;
      for (double s : v.sides) {
        if (!sides.empty()) sides += ';';
        sides += sig12(s);
      }
      sink.stream() << v.dim << ',' << sides << ',' << v.check << ','
                    << sig12(v.parameter) << ',' << sig12(v.gamma) << ','
                    << sig12(v.b) << ',' << sig12(v.lhs) << ',' << sig12(v.rhs)
                    << ',' << sig12(v.margin) << '\n';
    }
  }
  return report.violations.empty() ? 0 : 1;
}

// ----------------------------------------------------------------------
// fit: consume the sweep CSV (delta / stability) or a t-grid CSV
// (remainder) and emit the FitReport.

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw invalid_input("cannot open input file: " + path);
  CsvTable table;
  std::string line;
  const auto split = [](const std::string& text) {
    std::vector<std::string> cells;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.front()))) {
        cell.erase(cell.begin());
      }
      while (!cell.empty() && std::isspace(static_cast<unsigned char>(cell.back()))) {
        cell.pop_back();
      }
      cells.push_back(cell);
    }
    return cells;
  };
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (table.columns.empty()) {
      table.columns = split(line);
    } else {
      table.rows.push_back(split(line));
    }
  }
  if (table.columns.empty()) throw invalid_input("input CSV has no data: " + path);
  return table;
}

std::size_t column_index(const CsvTable& table, const std::string& name) {
  for (std::size_t i = 0; i < table.columns.size(); ++i) {
    if (table.columns[i] == name) return i;
  }
  throw invalid_input("input CSV lacks the '" + name + "' column");
}

double cell_number(const std::vector<std::string>& row, std::size_t index) {
  if (index >= row.size()) throw invalid_input("input CSV row is too short");
  try {
    return std::stod(row[index]);
  } catch (const std::exception&) {
    throw invalid_input("cannot parse CSV number '" + row[index] + "'");
  }
}

void emit_fit_report(const RunConfig& cfg, const std::string& hash,
                     const asymptotics::FitReport& report) {
  const std::string format = resolve_format(cfg, "json");
  Sink sink = open_sink(cfg);
  if (format == "json") {
    json j;
    j["_header"] = json_header(hash, cfg.seed);
    j["command"] = "fit";
    j["series_id"] = report.series_id;
    j["sample_count"] = report.sample_count;
    j["fitted_exponent"] = report.fitted_exponent;
    j["fitted_constant"] = report.fitted_constant;
    j["r_squared"] = report.r_squared;
    j["reference_exponent"] = report.reference_exponent;
    j["window"] = report.window;
    j["degenerate"] = report.degenerate;
    j["zeros_dropped"] = report.zeros_dropped;
    j["note"] = report.note;
    emit_json(sink.stream(), j);
  } else {
    csv_header(sink.stream(), hash, cfg.seed);
    std::vector<std::pair<std::string, std::string>> rows;
    rows.emplace_back("series_id", report.series_id);
    rows.emplace_back("sample_count", std::to_string(report.sample_count));
    rows.emplace_back("fitted_exponent", sig12(report.fitted_exponent));
    rows.emplace_back("fitted_constant", sig12(report.fitted_constant));
    rows.emplace_back("r_squared", sig12(report.r_squared));
    rows.emplace_back("reference_exponent", sig12(report.reference_exponent));
    rows.emplace_back("window", report.window);
    rows.emplace_back("degenerate", report.degenerate ? "1" : "0");
    rows.emplace_back("zeros_dropped", std::to_string(report.zeros_dropped));
    rows.emplace_back("note", report.note);
    emit_kv_csv(sink.stream(), rows);
  }
}

int run_fit(const RunConfig& cfg, const Wiring& wiring, const std::string& hash) {
  require_key(cfg, wiring, "input");
  require_key(cfg, wiring, "series");

  if (cfg.series == "delta" || cfg.series == "stability") {
    const CsvTable table = read_csv(cfg.input);
    const std::size_t k_col = column_index(table, "k");
    const std::size_t n_col = column_index(table, "n");
    std::vector<std::pair<double, double>> series;
    int dim = 0;
    if (cfg.series == "delta") {
      const std::size_t delta_col = column_index(table, "delta");
      for (const auto& row : table.rows) {
        series.emplace_back(cell_number(row, k_col), cell_number(row, delta_col));
        dim = static_cast<int>(cell_number(row, n_col));
      }
    } else {
      const std::size_t value_col = column_index(table, "value");
      const std::size_t cube_col = column_index(table, "value_at_cube");
      for (const auto& row : table.rows) {
        const double gap =
            std::abs(cell_number(row, cube_col) - cell_number(row, value_col));
        series.emplace_back(cell_number(row, k_col), gap);
        dim = static_cast<int>(cell_number(row, n_col));
      }
    }
    const auto kind = cfg.series == "delta" ? asymptotics::SeriesKind::delta
                                            : asymptotics::SeriesKind::stability;
    emit_fit_report(cfg, hash, asymptotics::fit_convergence_rate(series, kind, dim));
    return 0;
  }

  if (cfg.series == "remainder") {
    // The input supplies the t grid; the cuboid comes from --sides and the
    // mode from --bc (omit --bc for the full-lattice remainder).
    const Cuboid r = cuboid_from_config(cfg, wiring);
    const CsvTable table = read_csv(cfg.input);
    const std::size_t t_col = column_index(table, "t");
    std::vector<double> t_grid;
    for (const auto& row : table.rows) t_grid.push_back(cell_number(row, t_col));
    asymptotics::RemainderMode mode = asymptotics::RemainderMode::full_lattice;
    if (wiring.has("bc")) {
      mode = parse_bc(cfg) == BoundaryCondition::dirichlet
                 ? asymptotics::RemainderMode::counting_dirichlet
                 : asymptotics::RemainderMode::counting_neumann;
    }
    emit_fit_report(cfg, hash, asymptotics::fit_remainder_exponent(r, mode, t_grid));
    return 0;
  }

  throw invalid_input("--series must be delta, stability or remainder");
}

// ----------------------------------------------------------------------
// Wiring.

void add_shared_flags(CLI::App* cmd, RunConfig& cfg, Wiring& wiring) {
  wiring.options["dim"] = cmd->add_option("--dim", cfg.dim, "dimension n");
  wiring.options["sides"] =
      cmd->add_option("--sides", cfg.sides_text, "comma-separated side lengths");
  wiring.options["bc"] =
      cmd->add_option("--bc", cfg.bc, "boundary condition: dirichlet | neumann");
  wiring.options["k"] = cmd->add_option("--k", cfg.k, "eigenvalue index");
  wiring.options["lambda"] =
      cmd->add_option("--lambda", cfg.lambda, "spectral threshold (absolute units)");
  wiring.options["gamma"] = cmd->add_option("--gamma", cfg.gamma, "Riesz order");
  wiring.options["b"] = cmd->add_option("--b", cfg.b, "bound shift parameter");
  wiring.options["seed"] = cmd->add_option("--seed", cfg.seed, "random seed");
  wiring.options["workers"] =
      cmd->add_option("--workers", cfg.workers, "worker threads or 'auto'");
  wiring.options["out"] = cmd->add_option("--out", cfg.out, "output path (default stdout)");
  wiring.options["format"] = cmd->add_option("--format", cfg.format, "csv | json");
  wiring.options["config"] =
      cmd->add_option("--config", cfg.config_path, "JSON config with the same keys");
}

struct Cli {
  RunConfig cfg;
  std::map<std::string, Wiring> wirings;
  std::map<std::string, int (*)(const RunConfig&, const Wiring&, const std::string&)>
      handlers;
};

void add_command(Cli& cli, CLI::App& app, const std::string& name,
                 const std::string& help,
                 int (*handler)(const RunConfig&, const Wiring&, const std::string&)) {
  CLI::App* cmd = app.add_subcommand(name, help);
  add_shared_flags(cmd, cli.cfg, cli.wirings[name]);
  cli.handlers[name] = handler;
  cmd->callback([&cli, name] { cli.cfg.command = name; });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laplacian spectra of cuboids: eigenvalues, counting functions, "
               "Riesz means, shape optimisation and bound verification"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolName) + ' ' + kToolVersion);

  Cli cli;
  add_command(cli, app, "eig", "k-th eigenvalue of a cuboid", run_eig);
  add_command(cli, app, "count", "counting function at a threshold", run_count);
  add_command(cli, app, "riesz", "Riesz mean at a threshold", run_riesz);
  add_command(cli, app, "sum", "sum and average of the lowest eigenvalues", run_sum);
  add_command(cli, app, "optimize", "extremal cuboid for a spectral target",
              run_optimize);
  add_command(cli, app, "sweep", "optimisation sweep over an index range", run_sweep);
  add_command(cli, app, "verify", "run a bound verification suite", run_verify);
  add_command(cli, app, "fit", "power-law fits for sweep or remainder series", run_fit);
  add_command(cli, app, "decompose", "lattice count inclusion-exclusion check",
              run_decompose);

  // Command-specific flags.
  CLI::App* optimize_cmd = app.get_subcommand("optimize");
  cli.wirings["optimize"].options["target"] = optimize_cmd->add_option(
      "--target", cli.cfg.target, "lambda_k | mu_k | riesz | average");
  CLI::App* sweep_cmd = app.get_subcommand("sweep");
  cli.wirings["sweep"].options["target"] = sweep_cmd->add_option(
      "--target", cli.cfg.target, "lambda_k | mu_k | average");
  cli.wirings["sweep"].options["k-min"] =
      sweep_cmd->add_option("--k-min", cli.cfg.k_min, "first index");
  cli.wirings["sweep"].options["k-max"] =
      sweep_cmd->add_option("--k-max", cli.cfg.k_max, "last index");
  cli.wirings["sweep"].options["k-step"] =
      sweep_cmd->add_option("--k-step", cli.cfg.k_step, "index stride");
  cli.wirings["sweep"].options["checkpoint"] = sweep_cmd->add_option(
      "--checkpoint", cli.cfg.checkpoint, "resume checkpoint path");
  CLI::App* verify_cmd = app.get_subcommand("verify");
  cli.wirings["verify"].options["suite"] =
      verify_cmd->add_option("--suite", cli.cfg.suite, "verification suite id");
  cli.wirings["verify"].options["grid-size"] = verify_cmd->add_option(
      "--grid-size", cli.cfg.grid_size, "points per threshold grid");
  CLI::App* fit_cmd = app.get_subcommand("fit");
  cli.wirings["fit"].options["input"] =
      fit_cmd->add_option("--input", cli.cfg.input, "input CSV path");
  cli.wirings["fit"].options["series"] = fit_cmd->add_option(
      "--series", cli.cfg.series, "delta | stability | remainder");

  const auto diagnostic = [](const char* kind, const std::string& message) {
    json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << '\n';
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    diagnostic("invalid_input", e.what());
    return 2;
  }

  try {
    RunConfig& cfg = cli.cfg;
    Wiring& wiring = cli.wirings.at(cfg.command);
    merge_config_file(cfg, wiring);
    par::set_worker_count(resolve_workers(cfg));
    const std::string hash = config_hash(cfg, wiring);
    return cli.handlers.at(cfg.command)(cfg, wiring, hash);
  } catch (const invalid_input& e) {
    diagnostic("invalid_input", e.what());
    return 2;
  } catch (const resource_limit& e) {
    diagnostic("resource_limit", e.what());
    return 3;
  } catch (const numeric_error& e) {
    diagnostic("numeric_error", e.what());
    return 3;
  } catch (const std::exception& e) {
    diagnostic("error", e.what());
    return 2;
  }
}
