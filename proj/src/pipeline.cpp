// Copyright (c) 2026 the boxmor authors
// SPDX-License-Identifier: Apache-2.0

#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "matrix_market.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace boxmor {

namespace {

// ---- error tagging -------------------------------------------------------

template <class Fn>
auto run_stage(const char* stage, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(stage) + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(std::string(stage) + ": " + e.what());
  }
}

// ---- JSON plumbing -------------------------------------------------------

const json& require(const json& j, const char* key, const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + " must be an object");
  const auto it = j.find(key);
  if (it == j.end())
    throw ConfigError(ctx + " is missing \"" + key + "\"");
  return *it;
}

void allow_keys(const json& j, std::initializer_list<const char*> keys,
                const std::string& ctx) {
  if (!j.is_object()) throw ConfigError(ctx + " must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known)
      throw ConfigError(ctx + " has an unknown key \"" + it.key() + "\"");
  }
}

double as_number(const json& j, const std::string& ctx) {
  if (!j.is_number()) throw ConfigError(ctx + " must be a number");
  return j.get<double>();
}

int as_int(const json& j, const std::string& ctx) {
  if (!j.is_number_integer())
    throw ConfigError(ctx + " must be an integer");
  return j.get<int>();
}

std::string as_string(const json& j, const std::string& ctx) {
  if (!j.is_string()) throw ConfigError(ctx + " must be a string");
  return j.get<std::string>();
}

double number_or(const json& j, const char* key, double fallback,
                 const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  return as_number(j.at(key), ctx + "." + key);
}

int int_or(const json& j, const char* key, int fallback,
           const std::string& ctx) {
  if (!j.contains(key)) return fallback;
  return as_int(j.at(key), ctx + "." + key);
}

std::vector<double> as_number_list(const json& j, const std::string& ctx) {
  if (!j.is_array() || j.empty())
    throw ConfigError(ctx + " must be a non-empty array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(as_number(v, ctx + " entry"));
  return out;
}

json read_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) throw ConfigError("failed while writing " + path.string());
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string zero_pad(int v) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", v);
  return buf;
}

// ---- enum names ----------------------------------------------------------

struct NameError {
  std::string allowed;
};

template <class T>
T name_lookup(const std::vector<std::pair<const char*, T>>& table,
              const std::string& name, const std::string& ctx) {
  std::string allowed;
  for (const auto& [n, v] : table) {
    if (name == n) return v;
    allowed += allowed.empty() ? n : std::string(", ") + n;
  }
  throw ConfigError(ctx + ": unknown value \"" + name + "\" (expected one of " +
                    allowed + ")");
}

template <class T>
const char* name_of(const std::vector<std::pair<const char*, T>>& table, T v) {
  for (const auto& [n, t] : table)
    if (t == v) return n;
  throw ConfigError("unnamed enum value");
}

const std::vector<std::pair<const char*, FomConfig::Kind>> kFomNames = {
    {"beam", FomConfig::Kind::Beam},
    {"lattice", FomConfig::Kind::Lattice},
    {"import", FomConfig::Kind::Import}};

const std::vector<std::pair<const char*, Strategy::Kind>> kStrategyNames = {
    {"classical", Strategy::Kind::Classical},
    {"box_interpolation", Strategy::Kind::BoxInterpolation},
    {"box_reduction", Strategy::Kind::BoxReduction}};

const std::vector<std::pair<const char*, WeightFunction>> kWeightNames = {
    {"tensor_product", WeightFunction::TensorProduct},
    {"euclidean", WeightFunction::Euclidean}};

const std::vector<std::pair<const char*, Clustering>> kClusteringNames = {
    {"all", Clustering::All},
    {"box", Clustering::Box},
    {"knn", Clustering::NearestNeighbors}};

const std::vector<std::pair<const char*, Normalization>> kNormalizationNames =
    {{"none", Normalization::None},
     {"min_max", Normalization::MinMax},
     {"z_score", Normalization::ZScore}};

const std::vector<std::pair<const char*, LoadSignal::Kind>> kSignalNames = {
    {"step", LoadSignal::Kind::Step},
    {"ramp", LoadSignal::Kind::Ramp},
    {"sine", LoadSignal::Kind::Sine}};

const std::vector<std::pair<const char*, ValidationConfig::Kind>>
    kValidationNames = {{"grid", ValidationConfig::Kind::Grid},
                        {"lhs", ValidationConfig::Kind::Lhs}};

const std::vector<std::pair<const char*, MetricConfig::Kind>> kMetricNames = {
    {"nrmse", MetricConfig::Kind::Nrmse},
    {"msre", MetricConfig::Kind::Msre}};

const std::vector<std::pair<const char*, SystemKind>> kSystemKindNames = {
    {"first_order", SystemKind::FirstOrder},
    {"second_order", SystemKind::SecondOrder}};

// ---- parameter bindings --------------------------------------------------

double* beam_field(BeamSpec& spec, const std::string& binding) {
  if (binding == "length") return &spec.length;
  if (binding == "thickness") return &spec.thickness;
  if (binding == "height") return &spec.height;
  if (binding == "density") return &spec.density;
  if (binding == "youngs_modulus") return &spec.youngs_modulus;
  if (binding == "poisson") return &spec.poisson;
  return nullptr;
}

double* lattice_field(LatticeSpec& spec, const std::string& binding) {
  if (binding == "convection") return &spec.convection;
  const auto colon = binding.find(':');
  if (colon != std::string::npos) {
    const std::string field = binding.substr(0, colon);
    int body = -1;
    try {
      body = std::stoi(binding.substr(colon + 1));
    } catch (const std::exception&) {
      return nullptr;
    }
    if (body < 0) return nullptr;
    if (field == "conductivity" &&
        body < static_cast<int>(spec.conductivity.size()))
      return &spec.conductivity[body];
    if (field == "capacity" && body < static_cast<int>(spec.capacity.size()))
      return &spec.capacity[body];
  }
  return nullptr;
}

void apply_bindings(FomConfig& fom, const std::vector<std::string>& bindings,
                    const ParameterPoint& mu) {
  for (int d = 0; d < static_cast<int>(bindings.size()); ++d) {
    double* field = fom.kind == FomConfig::Kind::Beam
                        ? beam_field(fom.beam, bindings[d])
                        : lattice_field(fom.lattice, bindings[d]);
    if (!field)
      throw ConfigError("axis " + std::to_string(d + 1) +
                        " binds unknown model field \"" + bindings[d] + "\"");
    *field = mu[d];
  }
}

// ---- config sections -----------------------------------------------------

BeamSpec parse_beam(const json& j) {
  allow_keys(j,
             {"length", "thickness", "height", "density", "youngs_modulus",
              "poisson", "elements"},
             "fom.beam");
  BeamSpec s;
  s.length = number_or(j, "length", s.length, "fom.beam");
  s.thickness = number_or(j, "thickness", s.thickness, "fom.beam");
  s.height = number_or(j, "height", s.height, "fom.beam");
  s.density = number_or(j, "density", s.density, "fom.beam");
  s.youngs_modulus = number_or(j, "youngs_modulus", s.youngs_modulus, "fom.beam");
  s.poisson = number_or(j, "poisson", s.poisson, "fom.beam");
  s.elements = int_or(j, "elements", s.elements, "fom.beam");
  return s;
}

LatticeSpec parse_lattice(const json& j) {
  allow_keys(j,
             {"nx", "ny", "nz", "cell_size", "conductivity", "capacity",
              "convection", "heated_body", "bodies"},
             "fom.lattice");
  LatticeSpec s;
  s.nx = int_or(j, "nx", s.nx, "fom.lattice");
  s.ny = int_or(j, "ny", s.ny, "fom.lattice");
  s.nz = int_or(j, "nz", s.nz, "fom.lattice");
  s.cell_size = number_or(j, "cell_size", s.cell_size, "fom.lattice");
  if (j.contains("conductivity"))
    s.conductivity = as_number_list(j.at("conductivity"), "fom.lattice.conductivity");
  if (j.contains("capacity"))
    s.capacity = as_number_list(j.at("capacity"), "fom.lattice.capacity");
  s.convection = number_or(j, "convection", s.convection, "fom.lattice");
  s.heated_body = int_or(j, "heated_body", s.heated_body, "fom.lattice");
  if (j.contains("bodies")) {
    const json& jb = j.at("bodies");
    if (!jb.is_array()) throw ConfigError("fom.lattice.bodies must be an array");
    s.bodies.clear();
    for (const auto& b : jb) {
      allow_keys(b, {"id", "from", "to"}, "fom.lattice.bodies entry");
      LatticeBody body;
      body.id = as_int(require(b, "id", "lattice body"), "lattice body id");
      const auto from = as_number_list(require(b, "from", "lattice body"),
                                       "lattice body from");
      const auto to = as_number_list(require(b, "to", "lattice body"),
                                     "lattice body to");
      if (from.size() != 3 || to.size() != 3)
        throw ConfigError("lattice body from/to must have three entries");
      for (int d = 0; d < 3; ++d) {
        body.from[d] = static_cast<int>(from[d]);
        body.to[d] = static_cast<int>(to[d]);
      }
      s.bodies.push_back(body);
    }
  }
  return s;
}

LoadSignal parse_signal(const json& j) {
  allow_keys(j, {"type", "amplitude", "rise_time", "frequency"},
             "integration.signal");
  LoadSignal sig;
  if (j.contains("type"))
    sig.kind = name_lookup(kSignalNames, as_string(j.at("type"), "signal type"),
                           "integration.signal.type");
  sig.amplitude = number_or(j, "amplitude", sig.amplitude, "integration.signal");
  sig.rise_time = number_or(j, "rise_time", sig.rise_time, "integration.signal");
  sig.frequency = number_or(j, "frequency", sig.frequency, "integration.signal");
  if (sig.kind == LoadSignal::Kind::Ramp && !(sig.rise_time > 0.0))
    throw ConfigError("a ramp signal needs a positive rise_time");
  if (sig.kind == LoadSignal::Kind::Sine && !(sig.frequency > 0.0))
    throw ConfigError("a sine signal needs a positive frequency");
  return sig;
}

PipelineConfig parse_config(const json& j) {
  allow_keys(j,
             {"fom", "parameters", "reduction", "strategy", "integration",
              "validation", "metric", "output_dir"},
             "config");
  PipelineConfig cfg;

  // Full-order model.
  const json& jf = require(j, "fom", "config");
  allow_keys(jf, {"type", "beam", "lattice", "path"}, "fom");
  cfg.fom.kind = name_lookup(kFomNames, as_string(require(jf, "type", "fom"),
                                                  "fom.type"),
                             "fom.type");
  switch (cfg.fom.kind) {
    case FomConfig::Kind::Beam:
      cfg.fom.beam = jf.contains("beam") ? parse_beam(jf.at("beam")) : BeamSpec{};
      break;
    case FomConfig::Kind::Lattice:
      cfg.fom.lattice =
          jf.contains("lattice") ? parse_lattice(jf.at("lattice")) : LatticeSpec{};
      break;
    case FomConfig::Kind::Import:
      cfg.fom.import_dir = as_string(require(jf, "path", "fom"), "fom.path");
      break;
  }

  // Parameter axes and bindings.
  const json& jp = require(j, "parameters", "config");
  allow_keys(jp, {"axes"}, "parameters");
  const json& ja = require(jp, "axes", "parameters");
  if (!ja.is_array() || ja.empty())
    throw ConfigError("parameters.axes must be a non-empty array");
  int d = 0;
  for (const auto& axis : ja) {
    ++d;
    const std::string ctx = "parameters.axes[" + std::to_string(d) + "]";
    allow_keys(axis, {"name", "binds", "values"}, ctx);
    cfg.axis_names.push_back(axis.contains("name")
                                 ? as_string(axis.at("name"), ctx + ".name")
                                 : "x" + std::to_string(d));
    cfg.axes.push_back(as_number_list(require(axis, "values", ctx), ctx + ".values"));
    if (cfg.fom.kind == FomConfig::Kind::Import) {
      if (axis.contains("binds"))
        throw ConfigError(ctx + ": imported systems take no parameter bindings");
      if (cfg.axes.back().size() != 1)
        throw ConfigError(ctx +
                          ": imported systems are fixed; use a single-value axis");
    } else {
      cfg.bindings.push_back(
          as_string(require(axis, "binds", ctx), ctx + ".binds"));
    }
  }
  cfg.grid();  // validates monotone axes and name count
  if (cfg.fom.kind != FomConfig::Kind::Import) {
    // Validate the binding names against the model once, up front.
    FomConfig probe = cfg.fom;
    ParameterPoint first(cfg.axes.size());
    for (std::size_t i = 0; i < cfg.axes.size(); ++i) first[i] = cfg.axes[i][0];
    apply_bindings(probe, cfg.bindings, first);
  }

  // Reduction.
  const json& jr = require(j, "reduction", "config");
  allow_keys(jr, {"r", "s0"}, "reduction");
  cfg.r = as_int(require(jr, "r", "reduction"), "reduction.r");
  if (cfg.r < 1) throw ConfigError("reduction.r must be at least 1");
  cfg.s0 = number_or(jr, "s0", 0.0, "reduction");

  // Strategy.
  if (j.contains("strategy")) {
    const json& js = j.at("strategy");
    allow_keys(js,
               {"kind", "weights", "clustering", "knn_count",
                "knn_normalization", "weight_normalization"},
               "strategy");
    if (js.contains("kind"))
      cfg.strategy.kind =
          name_lookup(kStrategyNames, as_string(js.at("kind"), "strategy.kind"),
                      "strategy.kind");
    if (js.contains("weights"))
      cfg.strategy.weight_fn = name_lookup(
          kWeightNames, as_string(js.at("weights"), "strategy.weights"),
          "strategy.weights");
    if (js.contains("clustering"))
      cfg.strategy.clustering = name_lookup(
          kClusteringNames, as_string(js.at("clustering"), "strategy.clustering"),
          "strategy.clustering");
    else if (cfg.strategy.kind != Strategy::Kind::Classical)
      cfg.strategy.clustering = Clustering::Box;
    cfg.strategy.knn_count =
        int_or(js, "knn_count", cfg.strategy.knn_count, "strategy");
    if (js.contains("knn_normalization"))
      cfg.strategy.knn_normalization =
          name_lookup(kNormalizationNames,
                      as_string(js.at("knn_normalization"), "strategy"),
                      "strategy.knn_normalization");
    if (js.contains("weight_normalization"))
      cfg.strategy.weight_normalization =
          name_lookup(kNormalizationNames,
                      as_string(js.at("weight_normalization"), "strategy"),
                      "strategy.weight_normalization");
  }

  // Integration.
  const json& ji = require(j, "integration", "config");
  allow_keys(ji, {"dt", "t_end", "signal"}, "integration");
  cfg.integration.dt = as_number(require(ji, "dt", "integration"), "integration.dt");
  cfg.integration.t_end =
      as_number(require(ji, "t_end", "integration"), "integration.t_end");
  if (!(cfg.integration.dt > 0.0))
    throw ConfigError("integration.dt must be positive");
  if (!(cfg.integration.t_end > 0.0))
    throw ConfigError("integration.t_end must be positive");
  if (ji.contains("signal")) cfg.integration.signal = parse_signal(ji.at("signal"));

  // Validation sweep.
  if (j.contains("validation")) {
    const json& jv = j.at("validation");
    allow_keys(jv, {"type", "axes", "count", "seed"}, "validation");
    cfg.validation.kind = name_lookup(
        kValidationNames, as_string(require(jv, "type", "validation"),
                                    "validation.type"),
        "validation.type");
    if (cfg.validation.kind == ValidationConfig::Kind::Grid) {
      const json& jva = require(jv, "axes", "validation");
      if (!jva.is_array() || jva.size() != cfg.axes.size())
        throw ConfigError("validation.axes needs one value list per parameter");
      cfg.validation.axes.clear();
      for (const auto& axis : jva)
        cfg.validation.axes.push_back(as_number_list(axis, "validation axis"));
    } else {
      cfg.validation.count = int_or(jv, "count", cfg.validation.count, "validation");
      if (cfg.validation.count < 1)
        throw ConfigError("validation.count must be at least 1");
      if (jv.contains("seed")) {
        const json& seed = jv.at("seed");
        if (!seed.is_number_integer() && !seed.is_number_unsigned())
          throw ConfigError("validation.seed must be an integer");
        cfg.validation.seed = seed.get<std::uint64_t>();
      }
    }
  }

  // Error metric.
  cfg.metric.kind = cfg.fom.kind == FomConfig::Kind::Lattice
                        ? MetricConfig::Kind::Msre
                        : MetricConfig::Kind::Nrmse;
  if (j.contains("metric")) {
    const json& jm = j.at("metric");
    allow_keys(jm, {"type", "dof", "mask_body"}, "metric");
    if (jm.contains("type"))
      cfg.metric.kind = name_lookup(kMetricNames,
                                    as_string(jm.at("type"), "metric.type"),
                                    "metric.type");
    cfg.metric.dof = int_or(jm, "dof", -1, "metric");
    cfg.metric.mask_body = int_or(jm, "mask_body", -1, "metric");
  }
  if (cfg.metric.kind == MetricConfig::Kind::Nrmse && cfg.metric.dof < 0 &&
      cfg.fom.kind != FomConfig::Kind::Beam)
    throw ConfigError("the nrmse metric needs an explicit \"dof\" for this model");
  if (cfg.metric.mask_body >= 0 && cfg.fom.kind != FomConfig::Kind::Lattice)
    throw ConfigError("metric.mask_body applies to lattice models only");

  if (j.contains("output_dir"))
    cfg.output_dir = as_string(j.at("output_dir"), "output_dir");
  return cfg;
}

json canonical_json(const PipelineConfig& cfg) {
  json j;

  json jf;
  jf["type"] = name_of(kFomNames, cfg.fom.kind);
  switch (cfg.fom.kind) {
    case FomConfig::Kind::Beam: {
      const BeamSpec& s = cfg.fom.beam;
      jf["beam"] = {{"length", s.length},
                    {"thickness", s.thickness},
                    {"height", s.height},
                    {"density", s.density},
                    {"youngs_modulus", s.youngs_modulus},
                    {"poisson", s.poisson},
                    {"elements", s.elements}};
      break;
    }
    case FomConfig::Kind::Lattice: {
      const LatticeSpec& s = cfg.fom.lattice;
      json bodies = json::array();
      for (const auto& b : s.bodies)
        bodies.push_back({{"id", b.id},
                          {"from", {b.from[0], b.from[1], b.from[2]}},
                          {"to", {b.to[0], b.to[1], b.to[2]}}});
      jf["lattice"] = {{"nx", s.nx},
                       {"ny", s.ny},
                       {"nz", s.nz},
                       {"cell_size", s.cell_size},
                       {"conductivity", s.conductivity},
                       {"capacity", s.capacity},
                       {"convection", s.convection},
                       {"heated_body", s.heated_body},
                       {"bodies", bodies}};
      break;
    }
    case FomConfig::Kind::Import:
      jf["path"] = cfg.fom.import_dir;
      break;
  }
  j["fom"] = jf;

  json axes = json::array();
  for (std::size_t d = 0; d < cfg.axes.size(); ++d) {
    json axis;
    axis["name"] = cfg.axis_names[d];
    if (d < cfg.bindings.size()) axis["binds"] = cfg.bindings[d];
    axis["values"] = cfg.axes[d];
    axes.push_back(axis);
  }
  j["parameters"] = {{"axes", axes}};

  j["reduction"] = {{"r", cfg.r}, {"s0", cfg.s0}};

  j["strategy"] = {
      {"kind", name_of(kStrategyNames, cfg.strategy.kind)},
      {"weights", name_of(kWeightNames, cfg.strategy.weight_fn)},
      {"clustering", name_of(kClusteringNames, cfg.strategy.clustering)},
      {"knn_count", cfg.strategy.knn_count},
      {"knn_normalization",
       name_of(kNormalizationNames, cfg.strategy.knn_normalization)},
      {"weight_normalization",
       name_of(kNormalizationNames, cfg.strategy.weight_normalization)}};

  j["integration"] = {
      {"dt", cfg.integration.dt},
      {"t_end", cfg.integration.t_end},
      {"signal", {{"type", name_of(kSignalNames, cfg.integration.signal.kind)},
                  {"amplitude", cfg.integration.signal.amplitude},
                  {"rise_time", cfg.integration.signal.rise_time},
                  {"frequency", cfg.integration.signal.frequency}}}};

  if (cfg.validation.kind == ValidationConfig::Kind::Grid)
    j["validation"] = {{"type", "grid"}, {"axes", cfg.validation.axes}};
  else
    j["validation"] = {{"type", "lhs"},
                       {"count", cfg.validation.count},
                       {"seed", cfg.validation.seed}};

  json jm;
  jm["type"] = name_of(kMetricNames, cfg.metric.kind);
  if (cfg.metric.kind == MetricConfig::Kind::Nrmse)
    jm["dof"] = cfg.metric.dof;
  else
    jm["mask_body"] = cfg.metric.mask_body;
  j["metric"] = jm;

  return j;
}

// ---- artifact files ------------------------------------------------------

constexpr int kArtifactVersion = 1;

void write_local_rom(const fs::path& dir, const LocalRom& rom) {
  fs::create_directories(dir);
  write_matrix_market((dir / "V.mtx").string(), rom.basis.V);
  write_matrix_market((dir / "E.mtx").string(), rom.sys.E);
  write_matrix_market((dir / "A.mtx").string(), rom.sys.A);
  write_matrix_market((dir / "f.mtx").string(), rom.sys.f);
  write_matrix_market((dir / "D.mtx").string(), rom.sys.D);
}

LocalRom read_local_rom(const fs::path& dir, int index, SystemKind kind,
                        double s0) {
  LocalRom rom;
  rom.point_index = index;
  rom.basis.expansion_point = s0;
  rom.basis.V = read_dense_matrix_market((dir / "V.mtx").string());
  rom.sys.kind = kind;
  rom.sys.E = read_dense_matrix_market((dir / "E.mtx").string());
  rom.sys.A = read_dense_matrix_market((dir / "A.mtx").string());
  rom.sys.f = read_vector_matrix_market((dir / "f.mtx").string());
  rom.sys.D = read_dense_matrix_market((dir / "D.mtx").string());
  return rom;
}

void write_set(const fs::path& dir, const GlobalRomSet& set) {
  fs::create_directories(dir);
  write_matrix_market((dir / "R.mtx").string(), set.basis);
  write_json_file(dir / "scope.json", json{{"scope", set.scope}});
  for (const TransformedMember& member : set.members) {
    const std::string stem = "m" + zero_pad(member.point_index);
    write_matrix_market((dir / (stem + "_E.mtx")).string(), member.sys.E);
    write_matrix_market((dir / (stem + "_A.mtx")).string(), member.sys.A);
    write_matrix_market((dir / (stem + "_f.mtx")).string(), member.sys.f);
    write_matrix_market((dir / (stem + "_D.mtx")).string(), member.sys.D);
  }
}

GlobalRomSet read_set(const fs::path& dir, SystemKind kind) {
  GlobalRomSet set;
  set.basis = read_dense_matrix_market((dir / "R.mtx").string());
  const json js = read_json_file(dir / "scope.json");
  const json& scope = require(js, "scope", dir.string());
  if (!scope.is_array()) throw ConfigError(dir.string() + ": bad scope");
  for (const auto& v : scope)
    set.scope.push_back(as_int(v, dir.string() + " scope entry"));
  for (int idx : set.scope) {
    TransformedMember member;
    member.point_index = idx;
    member.sys.kind = kind;
    const std::string stem = "m" + zero_pad(idx);
    member.sys.E = read_dense_matrix_market((dir / (stem + "_E.mtx")).string());
    member.sys.A = read_dense_matrix_market((dir / (stem + "_A.mtx")).string());
    member.sys.f = read_vector_matrix_market((dir / (stem + "_f.mtx")).string());
    member.sys.D = read_dense_matrix_market((dir / (stem + "_D.mtx")).string());
    set.members.push_back(std::move(member));
  }
  return set;
}

void write_trajectory_csv(const fs::path& path, const TransientSolution& sol) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "t";
  for (Eigen::Index r = 0; r < sol.outputs.rows(); ++r) out << ",y" << (r + 1);
  out << '\n';
  for (Eigen::Index k = 0; k < sol.times.size(); ++k) {
    out << fmt17(sol.times[k]);
    for (Eigen::Index r = 0; r < sol.outputs.rows(); ++r)
      out << ',' << fmt17(sol.outputs(r, k));
    out << '\n';
  }
}

void write_series_csv(const fs::path& path, const ErrorSeries& series) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << "t,error\n";
  for (Eigen::Index k = 0; k < series.times.size(); ++k)
    out << fmt17(series.times[k]) << ',' << fmt17(series.values[k]) << '\n';
}

ErrorSeries configured_series(const PipelineConfig& cfg, int n,
                              const TransientSolution& reference,
                              const TransientSolution& predicted) {
  if (cfg.metric.kind == MetricConfig::Kind::Nrmse)
    return nrmse(reference, predicted, cfg.metric_dof(n));
  return msre(reference, predicted, cfg.metric_mask());
}

}  // namespace

// ---- PipelineConfig ------------------------------------------------------

PipelineConfig PipelineConfig::from_file(const std::string& path) {
  return parse_config(read_json_file(path));
}

PipelineConfig PipelineConfig::from_json_text(const std::string& text) {
  try {
    return parse_config(json::parse(text));
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
}

TrainingGrid PipelineConfig::grid() const { return TrainingGrid(axes, axis_names); }

FomFactory PipelineConfig::factory() const {
  const int dims = static_cast<int>(axes.size());
  if (fom.kind == FomConfig::Kind::Import) {
    auto system = std::make_shared<const SparseSystem>(import_system(fom.import_dir));
    return [system, dims](const ParameterPoint& mu) {
      if (static_cast<int>(mu.size()) != dims)
        throw ConfigError("parameter point has " + std::to_string(mu.size()) +
                          " coordinates, the model takes " + std::to_string(dims));
      return *system;
    };
  }
  const FomConfig base = fom;
  const std::vector<std::string> binds = bindings;
  return [base, binds, dims](const ParameterPoint& mu) {
    if (static_cast<int>(mu.size()) != dims)
      throw ConfigError("parameter point has " + std::to_string(mu.size()) +
                        " coordinates, the model takes " + std::to_string(dims));
    FomConfig bound = base;
    apply_bindings(bound, binds, mu);
    return bound.kind == FomConfig::Kind::Beam
               ? build_timoshenko_beam(bound.beam)
               : build_heat_lattice(bound.lattice);
  };
}

std::string PipelineConfig::canonical() const {
  return canonical_json(*this).dump();
}

std::string PipelineConfig::fingerprint() const {
  const std::string text = canonical();
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<ParameterPoint> PipelineConfig::validation_points(
    std::uint64_t seed_override) const {
  if (validation.kind == ValidationConfig::Kind::Grid)
    return TrainingGrid(validation.axes).points();
  const auto [lo, hi] = grid().hull();
  return sample_lhs(lo, hi, validation.count,
                    seed_override ? seed_override : validation.seed);
}

int PipelineConfig::metric_dof(int n) const {
  int dof = metric.dof;
  if (dof < 0) {
    if (fom.kind != FomConfig::Kind::Beam)
      throw ConfigError("the nrmse metric needs an explicit \"dof\" for this model");
    dof = beam_tip_transverse_dof(fom.beam);
  }
  if (dof >= n)
    throw ConfigError("metric dof " + std::to_string(dof) +
                      " is outside the model's " + std::to_string(n) + " DoFs");
  return dof;
}

std::vector<int> PipelineConfig::metric_mask() const {
  if (metric.mask_body < 0) return {};
  if (fom.kind != FomConfig::Kind::Lattice)
    throw ConfigError("metric.mask_body applies to lattice models only");
  return lattice_body_cells(fom.lattice, metric.mask_body);
}

// ---- train ----------------------------------------------------------------

TrainSummary train(const PipelineConfig& config, int workers) {
  const TrainingGrid grid = config.grid();
  const FomFactory factory = config.factory();

  Stopwatch watch;
  std::vector<LocalRom> roms = run_stage("reduction", [&] {
    return reduce_training_set(factory, grid.points(), config.r, config.s0,
                               workers);
  });
  const double reduction_s = watch.seconds();

  watch.reset();
  std::optional<InterpolationEngine> engine;
  run_stage("basis change", [&] {
    engine.emplace(grid, std::move(roms), config.strategy);
    engine->precompute_boxes(workers);
    return 0;
  });
  const double basis_change_s = watch.seconds();

  // Persist: points, sets, timings, manifest last (a directory without a
  // manifest is not a valid artifact, so failed runs cannot be opened).
  const fs::path dir = config.output_dir;
  run_stage("persist", [&] {
    fs::create_directories(dir);
    const auto& trained = engine->roms();
    for (int i = 0; i < static_cast<int>(trained.size()); ++i)
      write_local_rom(dir / "points" / ("p" + zero_pad(i)), trained[i]);

    std::vector<std::pair<std::string, std::shared_ptr<const GlobalRomSet>>> sets;
    if (engine->all_points_set())
      sets.emplace_back("all", engine->all_points_set());
    int box = 0;
    for (const auto& [scope, set] : engine->cached_sets())
      sets.emplace_back("box" + zero_pad(box++), set);
    for (const auto& [name, set] : sets) write_set(dir / "sets" / name, *set);

    write_json_file(dir / "timings.json",
                    json{{"reduction_s", reduction_s},
                         {"basis_change_s", basis_change_s},
                         {"offline_total_s", reduction_s + basis_change_s},
                         {"workers", workers}});

    const LocalRom& first = engine->roms().front();
    json manifest;
    manifest["artifact"] = "boxmor";
    manifest["version"] = kArtifactVersion;
    manifest["fingerprint"] = config.fingerprint();
    manifest["config"] = canonical_json(config);
    manifest["system"] = {{"kind", name_of(kSystemKindNames, first.sys.kind)},
                          {"n", first.basis.V.rows()},
                          {"m", first.sys.D.rows()}};
    manifest["reduced_order"] = engine->reduced_order();
    manifest["points"] = grid.size();
    json set_names = json::array();
    for (const auto& [name, set] : sets) set_names.push_back(name);
    manifest["sets"] = set_names;
    write_json_file(dir / "manifest.json", manifest);
    return 0;
  });

  TrainSummary summary;
  summary.dir = dir.string();
  summary.fingerprint = config.fingerprint();
  summary.points = grid.size();
  summary.sets = (engine->all_points_set() ? 1 : 0) + engine->cached_box_sets();
  summary.reduction_s = reduction_s;
  summary.basis_change_s = basis_change_s;
  return summary;
}

// ---- Artifact --------------------------------------------------------------

Artifact Artifact::open(const std::string& dir) {
  const fs::path root(dir);
  if (!fs::exists(root / "manifest.json"))
    throw ConfigError(dir + " holds no trained model (run train first)");
  const json manifest = read_json_file(root / "manifest.json");
  if (!manifest.is_object() ||
      manifest.value("artifact", std::string()) != "boxmor")
    throw ConfigError(dir + ": not a recognized artifact");
  if (manifest.value("version", 0) != kArtifactVersion)
    throw ConfigError(dir + ": unsupported artifact version");

  Artifact artifact;
  artifact.dir_ = dir;
  artifact.fingerprint_ =
      as_string(require(manifest, "fingerprint", "manifest"), "fingerprint");
  artifact.config_ = parse_config(require(manifest, "config", "manifest"));
  artifact.config_.output_dir = dir;

  const json& system = require(manifest, "system", "manifest");
  artifact.kind_ = name_lookup(
      kSystemKindNames, as_string(require(system, "kind", "manifest.system"),
                                  "system kind"),
      "manifest.system.kind");
  artifact.n_ = as_int(require(system, "n", "manifest.system"), "system n");
  artifact.m_ = as_int(require(system, "m", "manifest.system"), "system m");
  const int r =
      as_int(require(manifest, "reduced_order", "manifest"), "reduced_order");
  const int points = as_int(require(manifest, "points", "manifest"), "points");

  TrainingGrid grid = artifact.config_.grid();
  if (grid.size() != points)
    throw ConfigError(dir + ": manifest point count disagrees with its config");

  std::vector<LocalRom> roms;
  if (fs::exists(root / "points")) {
    roms.reserve(points);
    for (int i = 0; i < points; ++i) {
      const fs::path pd = root / "points" / ("p" + zero_pad(i));
      if (!fs::exists(pd / "V.mtx"))
        throw ConfigError(dir + ": incomplete artifact, missing " +
                          pd.string());
      roms.push_back(read_local_rom(pd, i, artifact.kind_, artifact.config_.s0));
    }
  }

  std::shared_ptr<const GlobalRomSet> all;
  std::map<std::vector<int>, std::shared_ptr<const GlobalRomSet>> boxes;
  const json& set_names = require(manifest, "sets", "manifest");
  if (!set_names.is_array()) throw ConfigError(dir + ": bad set list");
  for (const auto& name : set_names) {
    const std::string set_name = as_string(name, "set name");
    auto set = std::make_shared<const GlobalRomSet>(
        read_set(root / "sets" / set_name, artifact.kind_));
    if (set_name == "all")
      all = std::move(set);
    else
      boxes[set->scope] = std::move(set);
  }

  artifact.engine_ = std::make_unique<InterpolationEngine>(
      std::move(grid), std::move(roms), artifact.config_.strategy, r,
      std::move(all), std::move(boxes));
  return artifact;
}

double Artifact::aggregate_error(const TransientSolution& reference,
                                 const TransientSolution& full_predicted) const {
  return configured_series(config_, n_, reference, full_predicted).aggregate;
}

EvaluateResult Artifact::evaluate(const ParameterPoint& query,
                                  const std::string& out_dir,
                                  bool with_reference, double dt_override,
                                  double t_end_override) {
  IntegrationConfig integ = config_.integration;
  if (dt_override > 0.0) integ.dt = dt_override;
  if (t_end_override > 0.0) integ.t_end = t_end_override;

  const InterpolationEngine::Result interp =
      run_stage("interpolation", [&] { return engine_->evaluate(query); });

  EvaluateResult result;
  result.reduced = run_stage("reduced solve", [&] {
    return solve_transient(interp.sys, integ.signal, integ.dt, integ.t_end);
  });

  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  write_trajectory_csv(out / "trajectory.csv", result.reduced);

  json summary;
  summary["fingerprint"] = fingerprint_;
  summary["query"] = std::vector<double>(query.data(), query.data() + query.size());
  summary["dt"] = integ.dt;
  summary["t_end"] = integ.t_end;
  summary["steps"] = result.reduced.times.size() - 1;
  summary["metric"] = name_of(kMetricNames, config_.metric.kind);
  summary["aggregate_error"] = nullptr;

  if (with_reference) {
    const SparseSystem fom =
        run_stage("reference model", [&] { return config_.factory()(query); });
    const TransientSolution reference = run_stage("reference solve", [&] {
      return solve_transient(fom, integ.signal, integ.dt, integ.t_end);
    });
    const TransientSolution full = run_stage("back projection", [&] {
      return back_project(result.reduced, interp.set->basis);
    });
    const ErrorSeries series = run_stage("metric", [&] {
      return configured_series(config_, n_, reference, full);
    });
    write_trajectory_csv(out / "reference.csv", reference);
    write_series_csv(out / "error.csv", series);
    result.aggregate_error = series.aggregate;
    result.has_reference = true;
    summary["aggregate_error"] = series.aggregate;
  }
  write_json_file(out / "summary.json", summary);
  return result;
}

std::vector<SurfaceRow> Artifact::surface(const std::string& out_dir,
                                          int workers,
                                          std::uint64_t seed_override) {
  const std::vector<ParameterPoint> points =
      config_.validation_points(seed_override);
  const FomFactory factory = config_.factory();
  const IntegrationConfig integ = config_.integration;

  const auto point_error = [&](const ParameterPoint& mu) {
    const InterpolationEngine::Result interp = engine_->evaluate(mu);
    const TransientSolution reduced =
        solve_transient(interp.sys, integ.signal, integ.dt, integ.t_end);
    const TransientSolution full = back_project(reduced, interp.set->basis);
    const SparseSystem fom = factory(mu);
    const TransientSolution reference =
        solve_transient(fom, integ.signal, integ.dt, integ.t_end);
    return configured_series(config_, n_, reference, full).aggregate;
  };

  const std::vector<SurfaceRow> rows = error_surface(points, point_error, workers);

  fs::create_directories(out_dir);
  const fs::path out(out_dir);
  {
    std::ofstream csv(out / "surface.csv");
    if (!csv) throw ConfigError("cannot write " + (out / "surface.csv").string());
    csv << surface_to_csv(rows, config_.axis_names);
  }
  int failures = 0;
  double sum = 0.0;
  for (const auto& row : rows) {
    if (std::isnan(row.value))
      ++failures;
    else
      sum += row.value;
  }
  json summary;
  summary["fingerprint"] = fingerprint_;
  summary["metric"] = name_of(kMetricNames, config_.metric.kind);
  summary["points"] = rows.size();
  summary["failures"] = failures;
  const int valid = static_cast<int>(rows.size()) - failures;
  if (valid > 0)
    summary["mean_error"] = sum / valid;
  else
    summary["mean_error"] = nullptr;
  write_json_file(out / "surface_summary.json", summary);
  return rows;
}

// ---- bench and export ------------------------------------------------------

TimingReport bench(const PipelineConfig& config, const std::string& out_dir,
                   int repetitions) {
  if (repetitions < 1) throw ConfigError("bench needs at least one repetition");
  const TrainingGrid grid = config.grid();
  const FomFactory factory = config.factory();
  const auto [lo, hi] = grid.hull();
  const ParameterPoint query = 0.5 * (lo + hi);
  const IntegrationConfig integ = config.integration;

  TimingReport report;
  std::vector<double> samples;

  std::vector<LocalRom> roms;
  samples.clear();
  for (int rep = 0; rep < repetitions; ++rep) {
    Stopwatch watch;
    auto fresh = run_stage("reduction", [&] {
      return reduce_training_set(factory, grid.points(), config.r, config.s0, 1);
    });
    samples.push_back(watch.seconds());
    roms = std::move(fresh);
  }
  report.reduction_s = median(samples);

  std::optional<InterpolationEngine> engine;
  samples.clear();
  for (int rep = 0; rep < repetitions; ++rep) {
    std::vector<LocalRom> copy = roms;
    engine.reset();
    Stopwatch watch;
    run_stage("basis change", [&] {
      engine.emplace(grid, std::move(copy), config.strategy);
      engine->precompute_boxes(1);
      return 0;
    });
    samples.push_back(watch.seconds());
  }
  report.basis_change_s = median(samples);
  report.offline_total_s = report.reduction_s + report.basis_change_s;

  const InterpolationEngine::Result interp =
      run_stage("interpolation", [&] { return engine->evaluate(query); });
  const SparseSystem fom =
      run_stage("full-order model", [&] { return factory(query); });

  Eigen::Index steps = 0;
  samples.clear();
  for (int rep = 0; rep < repetitions; ++rep) {
    Stopwatch watch;
    const TransientSolution sol = run_stage("full-order solve", [&] {
      return solve_transient(fom, integ.signal, integ.dt, integ.t_end);
    });
    steps = sol.times.size() - 1;
    samples.push_back(watch.seconds() / static_cast<double>(steps));
  }
  report.fom_per_step_s = median(samples);

  samples.clear();
  for (int rep = 0; rep < repetitions; ++rep) {
    Stopwatch watch;
    const TransientSolution sol = run_stage("reduced solve", [&] {
      return solve_transient(interp.sys, integ.signal, integ.dt, integ.t_end);
    });
    samples.push_back(watch.seconds() / static_cast<double>(steps));
  }
  report.online_per_step_s = median(samples);

  report.speedup = report.fom_per_step_s / report.online_per_step_s;
  report.break_even_steps = break_even(
      report.offline_total_s, report.online_per_step_s, report.fom_per_step_s);

  fs::create_directories(out_dir);
  json j;
  j["fingerprint"] = config.fingerprint();
  j["query"] = std::vector<double>(query.data(), query.data() + query.size());
  j["steps"] = steps;
  j["repetitions"] = repetitions;
  j["reduction_s"] = report.reduction_s;
  j["basis_change_s"] = report.basis_change_s;
  j["offline_total_s"] = report.offline_total_s;
  j["online_per_step_s"] = report.online_per_step_s;
  j["fom_per_step_s"] = report.fom_per_step_s;
  j["speedup"] = report.speedup;
  j["break_even_steps"] = report.break_even_steps;
  write_json_file(fs::path(out_dir) / "timing.json", j);
  return report;
}

void export_fom(const PipelineConfig& config, const ParameterPoint& query,
                const std::string& out_dir) {
  const TrainingGrid grid = config.grid();
  ParameterPoint at = query;
  if (at.size() == 0) at = grid.point(0);
  if (at.size() != grid.dims())
    throw ConfigError("query has " + std::to_string(at.size()) +
                      " coordinates, the model takes " +
                      std::to_string(grid.dims()));
  const SparseSystem system = config.factory()(at);
  export_system(system, out_dir, grid.names(), at);
}

}  // namespace boxmor
