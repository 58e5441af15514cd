// Copyright 2026 The qwgasket Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qwg/cli.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "qwg/csv.hpp"
#include "qwg/errors.hpp"
#include "qwg/evolution.hpp"
#include "qwg/observables.hpp"
#include "qwg/spectral.hpp"

#ifndef QWG_VERSION
#define QWG_VERSION "dev"
#endif

namespace qwg::cli {

using nlohmann::json;

std::string_view to_string(Command command) {
  switch (command) {
    case Command::Simulate: return "simulate";
    case Command::Sweep: return "sweep";
    case Command::Limiting: return "limiting";
    case Command::Tvd: return "tvd";
    case Command::Mixing: return "mixing";
    case Command::Verify: return "verify";
  }
  return "?";
}

Command parse_command(std::string_view text) {
  for (const auto c : {Command::Simulate, Command::Sweep, Command::Limiting, Command::Tvd,
                       Command::Mixing, Command::Verify}) {
    if (to_string(c) == text) return c;
  }
  throw ConfigError("command: unknown command '" + std::string(text) + "'");
}

namespace {

std::string_view to_string(DenseMode mode) {
  switch (mode) {
    case DenseMode::Auto: return "auto";
    case DenseMode::On: return "on";
    case DenseMode::Off: return "off";
  }
  return "?";
}

DenseMode parse_dense(std::string_view text) {
  if (text == "auto") return DenseMode::Auto;
  if (text == "on") return DenseMode::On;
  if (text == "off") return DenseMode::Off;
  throw ConfigError("dense: expected auto, on or off, got '" + std::string(text) + "'");
}

std::optional<Vertex> parse_start(const std::string& text) {
  if (text == "all") return std::nullopt;
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw ConfigError("start: expected \"x,y\" or \"all\", got '" + text + "'");
  }
  try {
    std::size_t used_x = 0, used_y = 0;
    const int x = std::stoi(text.substr(0, comma), &used_x);
    const int y = std::stoi(text.substr(comma + 1), &used_y);
    if (used_x != comma || used_y != text.size() - comma - 1) throw std::invalid_argument("");
    return Vertex{x, y};
  } catch (const std::logic_error&) {
    throw ConfigError("start: expected \"x,y\" or \"all\", got '" + text + "'");
  }
}

Vertex bottom_center(int g) { return {1 << g, 0}; }

template <typename T>
T field(const json& j, const char* key, T fallback) {
  if (!j.contains(key) || j.at(key).is_null()) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

}  // namespace

Boundary ExperimentConfig::effective_boundary() const {
  if (boundary) return *boundary;
  switch (command) {
    case Command::Simulate:
    case Command::Sweep:
      return Boundary::Reflective;
    default:
      return Boundary::Periodic;
  }
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["command"] = to_string(c.command);
  j["generation"] = c.generation;
  j["generations"] = c.generations;
  j["boundary"] = c.boundary ? json(qwg::to_string(*c.boundary)) : json(nullptr);
  j["start"] = c.start ? json(*c.start) : json(nullptr);
  j["steps"] = c.steps ? json(*c.steps) : json(nullptr);
  j["horizon"] = c.horizon ? json(*c.horizon) : json(nullptr);
  j["empirical_horizon"] = c.empirical_horizon;
  j["epsilons"] = c.epsilons;
  j["window"] = c.window ? json::array({c.window->t_min, c.window->t_max}) : json(nullptr);
  j["output_dir"] = c.output_dir;
  j["dense"] = to_string(c.dense);
  j["dense_cap"] = c.dense_cap;
  j["workers"] = c.workers;
  j["bins"] = c.bins;
  return j;
}

ExperimentConfig config_from_json(const json& input) {
  const json& j = input.contains("config") && input.at("config").is_object() ? input.at("config")
                                                                             : input;
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  ExperimentConfig c;
  if (j.contains("command") && !j.at("command").is_null()) {
    c.command = parse_command(field<std::string>(j, "command", ""));
  }
  c.generation = field<int>(j, "generation", c.generation);
  c.generations = field<std::vector<int>>(j, "generations", {});
  if (j.contains("boundary") && !j.at("boundary").is_null()) {
    try {
      c.boundary = parse_boundary(field<std::string>(j, "boundary", ""));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("boundary: ") + e.what());
    }
  }
  if (j.contains("start") && !j.at("start").is_null()) {
    c.start = field<std::string>(j, "start", "");
  }
  if (j.contains("steps") && !j.at("steps").is_null()) {
    c.steps = field<std::size_t>(j, "steps", 0);
  }
  if (j.contains("horizon") && !j.at("horizon").is_null()) {
    c.horizon = field<std::size_t>(j, "horizon", 0);
  }
  c.empirical_horizon = field<std::size_t>(j, "empirical_horizon", c.empirical_horizon);
  c.epsilons = field<std::vector<double>>(j, "epsilons", c.epsilons);
  if (j.contains("window") && !j.at("window").is_null()) {
    const auto w = field<std::vector<double>>(j, "window", {});
    if (w.size() != 2) throw ConfigError("window: expected [t_min, t_max]");
    c.window = FitWindow{w[0], w[1]};
  }
  c.output_dir = field<std::string>(j, "output_dir", c.output_dir);
  c.dense = parse_dense(field<std::string>(j, "dense", "auto"));
  c.dense_cap = field<std::size_t>(j, "dense_cap", c.dense_cap);
  c.workers = field<unsigned>(j, "workers", c.workers);
  c.bins = field<std::size_t>(j, "bins", c.bins);
  return c;
}

void validate(const ExperimentConfig& c) {
  auto check_generation = [](int g, const char* name) {
    if (g < 0 || g > 12) {
      throw ConfigError(std::string(name) + ": generation must lie in [0, 12], got " +
                        std::to_string(g));
    }
  };
  check_generation(c.generation, "generation");
  for (const int g : c.generations) check_generation(g, "generations");
  if (c.start) {
    const auto v = parse_start(*c.start);
    if (!v && c.command != Command::Sweep) {
      throw ConfigError("start: \"all\" is only meaningful for sweep");
    }
    if (v && !contains(c.generation, v->x, v->y)) {
      throw ConfigError("start: (" + std::to_string(v->x) + "," + std::to_string(v->y) +
                        ") is not a vertex of the generation-" + std::to_string(c.generation) +
                        " gasket");
    }
    if (v && c.command == Command::Mixing && c.generations.size() > 1) {
      throw ConfigError("start: a fixed start cannot be used across several generations");
    }
  }
  if (c.steps && *c.steps < 1) throw ConfigError("steps: must be >= 1");
  if (c.horizon && *c.horizon < 1) throw ConfigError("horizon: must be >= 1");
  if (c.empirical_horizon < 1) throw ConfigError("empirical_horizon: must be >= 1");
  if (c.command == Command::Mixing && c.epsilons.empty()) {
    throw ConfigError("epsilons: at least one epsilon is required");
  }
  for (const double e : c.epsilons) {
    if (!(e > 0.0 && e < 1.0)) {
      throw ConfigError("epsilons: each epsilon must lie in (0, 1), got " + format_double(e));
    }
  }
  if (c.window && !(c.window->t_min > 0.0 && c.window->t_max >= c.window->t_min)) {
    throw ConfigError("window: need 0 < t_min <= t_max");
  }
  if (c.workers < 1) throw ConfigError("workers: must be >= 1");
  if (c.bins < 1) throw ConfigError("bins: must be >= 1");
  if (c.command == Command::Sweep && c.effective_boundary() != Boundary::Reflective) {
    throw ConfigError("boundary: sweep requires reflective boundary conditions");
  }
  if (c.command == Command::Mixing && c.effective_boundary() != Boundary::Periodic) {
    throw ConfigError("boundary: mixing requires periodic boundary conditions");
  }
}

namespace {

struct RunContext {
  const ExperimentConfig& config;
  std::filesystem::path dir;
  std::ostream& log;
  json outputs = json::array();
  json notes = json::object();

  std::ofstream open(const std::string& name) {
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw ConfigError("output_dir: cannot write " + (dir / name).string());
    outputs.push_back(name);
    return f;
  }
};

Vertex start_vertex(const ExperimentConfig& c) {
  if (c.start) {
    if (auto v = parse_start(*c.start)) return *v;
  }
  return bottom_center(c.generation);
}

void write_fit_row(CsvWriter& csv, std::string_view kind, const PowerLawFit& f) {
  csv.row(kind, f.prefactor, f.exponent, f.window.t_min, f.window.t_max, f.rms_residual);
}

LimitingEstimate limiting_for(const QuantumWalk& walk, const WalkerState& initial,
                              const ExperimentConfig& c) {
  switch (c.dense) {
    case DenseMode::Off:
      return {empirical_limiting_distribution(walk, initial, c.empirical_horizon),
              LimitMethod::Empirical, c.empirical_horizon};
    case DenseMode::On: {
      const auto decomp = decompose(walk.graph(), c.dense_cap);
      return {limiting_distribution(decomp, initial), LimitMethod::Spectral, 0};
    }
    case DenseMode::Auto:
      break;
  }
  return estimate_limiting_distribution(walk, initial, c.dense_cap, c.empirical_horizon);
}

void run_simulate(RunContext& ctx) {
  const auto& c = ctx.config;
  const GasketGraph graph({c.generation, c.effective_boundary()});
  const QuantumWalk walk(graph);
  const std::size_t steps = c.steps.value_or(default_sweep_steps(c.generation));
  const auto series = sigma_series(walk, start_vertex(c), steps);
  {
    auto f = ctx.open("sigma.csv");
    CsvWriter csv(f);
    csv.header({"t", "sigma_x", "sigma_y", "sigma"});
    for (const auto& s : series) csv.row(s.t, s.sigma_x, s.sigma_y, s.sigma);
  }
  const FitWindow window = c.window.value_or(default_fit_window(steps));
  try {
    const auto fit = fit_power_law(sigma_points(series), window);
    auto f = ctx.open("sigma_fit.csv");
    CsvWriter csv(f);
    csv.header({"kind", "prefactor", "exponent", "t_min", "t_max", "rms_residual"});
    write_fit_row(csv, "sigma", fit);
    ctx.log << "sigma ~ " << format_double(fit.prefactor) << " t^" << format_double(fit.exponent)
            << "\n";
  } catch (const FitError& e) {
    ctx.notes["fit"] = std::string("skipped: ") + e.what();
  }
  if (steps > (std::size_t{1} << c.generation)) {
    ctx.notes["cutoff"] = "steps exceed 2^g; sigma is past the power-law regime";
  }
}

void run_sweep(RunContext& ctx) {
  const auto& c = ctx.config;
  const GasketGraph graph({c.generation, Boundary::Reflective});
  SweepOptions opt;
  opt.steps = c.steps.value_or(0);
  opt.window = c.window;
  opt.workers = c.workers;
  opt.bins = c.bins;
  const SweepResult r = sweep_exponents(graph, opt);
  {
    auto f = ctx.open("per_vertex.csv");
    CsvWriter csv(f);
    csv.header({"x", "y", "a", "exponent", "residual"});
    for (const auto& pv : r.per_vertex) {
      csv.row(pv.start.x, pv.start.y, pv.fit.prefactor, pv.fit.exponent, pv.fit.rms_residual);
    }
  }
  {
    auto f = ctx.open("histogram.csv");
    CsvWriter csv(f);
    csv.header({"bin_lo", "bin_hi", "count"});
    for (std::size_t i = 0; i < r.histogram.counts.size(); ++i) {
      csv.row(r.histogram.edges[i], r.histogram.edges[i + 1], r.histogram.counts[i]);
    }
  }
  {
    auto f = ctx.open("mean_sigma.csv");
    CsvWriter csv(f);
    csv.header({"t", "sigma_mean"});
    for (const auto& p : r.mean_sigma) csv.row(p.t, p.value);
  }
  {
    auto f = ctx.open("sweep_summary.csv");
    CsvWriter csv(f);
    csv.header({"quantity", "value"});
    csv.row("mean_series_prefactor", r.mean_fit.prefactor);
    csv.row("mean_series_exponent", r.mean_fit.exponent);
    csv.row("mean_of_exponents", r.mean_of_exponents);
    csv.row("min_exponent", r.min_exponent);
    csv.row("max_exponent", r.max_exponent);
    csv.row("steps", r.steps);
    csv.row("t_min", r.window.t_min);
    csv.row("t_max", r.window.t_max);
  }
  ctx.log << "sigma-bar ~ " << format_double(r.mean_fit.prefactor) << " t^"
          << format_double(r.mean_fit.exponent) << "; per-vertex exponents in ["
          << format_double(r.min_exponent) << ", " << format_double(r.max_exponent) << "]\n";
}

void run_limiting(RunContext& ctx) {
  const auto& c = ctx.config;
  const GasketGraph graph({c.generation, c.effective_boundary()});
  const QuantumWalk walk(graph);
  const WalkerState initial = walk.initial(start_vertex(c));
  const bool spectral = c.dense == DenseMode::On ||
                        (c.dense == DenseMode::Auto && graph.port_count() <= c.dense_cap);
  std::optional<SpectralDecomposition> decomp;
  if (spectral) decomp.emplace(decompose(graph, c.dense_cap));
  const LimitingEstimate pi =
      spectral ? LimitingEstimate{limiting_distribution(*decomp, initial), LimitMethod::Spectral, 0}
               : LimitingEstimate{empirical_limiting_distribution(walk, initial, c.empirical_horizon),
                                  LimitMethod::Empirical, c.empirical_horizon};
  ctx.notes["pi_method"] = to_string(pi.method);
  if (pi.method == LimitMethod::Empirical) ctx.notes["pi_horizon"] = pi.horizon;
  {
    auto f = ctx.open("pi.csv");
    write_field_csv(pi.field, f);
  }
  {
    auto f = ctx.open("pi_x.csv");
    write_x_marginal_csv(pi.field, f);
  }
  if (decomp) {
    auto f = ctx.open("eigenvalues.csv");
    write_eigenvalues_csv(*decomp, f);
  }
  ctx.log << "limiting distribution (" << to_string(pi.method) << ") written\n";
}

void run_tvd(RunContext& ctx) {
  const auto& c = ctx.config;
  const GasketGraph graph({c.generation, c.effective_boundary()});
  const QuantumWalk walk(graph);
  const WalkerState initial = walk.initial(start_vertex(c));
  const LimitingEstimate pi = limiting_for(walk, initial, c);
  ctx.notes["pi_method"] = to_string(pi.method);
  const std::size_t horizon = c.horizon.value_or(5000);
  const auto series = tvd_series(walk, initial, pi.field, horizon);
  {
    auto f = ctx.open("tvd.csv");
    CsvWriter csv(f);
    csv.header({"t", "tvd"});
    for (const auto& p : series) csv.row(p.t, p.value);
  }
  const FitWindow window = c.window.value_or(FitWindow{20.0, static_cast<double>(horizon)});
  try {
    const auto fit = fit_power_law(series, window);
    auto f = ctx.open("tvd_fit.csv");
    CsvWriter csv(f);
    csv.header({"kind", "prefactor", "exponent", "t_min", "t_max", "rms_residual"});
    write_fit_row(csv, "tvd", fit);
    ctx.log << "tvd ~ " << format_double(fit.prefactor) << " T^" << format_double(fit.exponent)
            << "\n";
  } catch (const FitError& e) {
    ctx.notes["fit"] = std::string("skipped: ") + e.what();
  }
}

void run_mixing(RunContext& ctx) {
  const auto& c = ctx.config;
  const std::vector<int> gens = c.generations.empty() ? std::vector<int>{c.generation}
                                                      : c.generations;
  MixingOptions opt;
  opt.horizon = c.horizon.value_or(10000);
  opt.dense_cap = c.dense == DenseMode::Off ? 0 : c.dense_cap;
  opt.empirical_horizon = c.empirical_horizon;

  std::vector<std::vector<MixingResult>> results;
  std::vector<double> sizes;
  auto f = ctx.open("mixing.csv");
  CsvWriter csv(f);
  csv.header({"N", "epsilon", "tau"});
  json methods = json::object();
  for (const int g : gens) {
    const GasketGraph graph({g, Boundary::Periodic});
    if (c.dense == DenseMode::On && graph.port_count() > c.dense_cap) {
      throw CapExceeded(graph.port_count(), c.dense_cap);
    }
    const QuantumWalk walk(graph);
    ExperimentConfig local = c;
    local.generation = g;
    const auto rs = mixing_times(walk, start_vertex(local), c.epsilons, opt);
    for (const auto& r : rs) {
      if (r.tau) {
        csv.row(graph.size(), r.epsilon, *r.tau);
      } else {
        csv.row(graph.size(), r.epsilon, "NA");
      }
    }
    methods[std::to_string(g)] = to_string(rs.front().pi_method);
    results.push_back(rs);
    sizes.push_back(static_cast<double>(graph.size()));
    ctx.log << "g=" << g << " N=" << graph.size() << " done\n";
  }
  ctx.notes["pi_method"] = methods;
  ctx.notes["horizon"] = opt.horizon;

  if (gens.size() >= 3) {
    auto ff = ctx.open("mixing_fit.csv");
    CsvWriter fit_csv(ff);
    fit_csv.header({"epsilon", "prefactor", "exponent"});
    for (std::size_t e = 0; e < c.epsilons.size(); ++e) {
      std::vector<std::pair<double, double>> pts;
      for (std::size_t i = 0; i < gens.size(); ++i) {
        if (results[i][e].tau && *results[i][e].tau > 0) {
          pts.emplace_back(sizes[i], static_cast<double>(*results[i][e].tau));
        }
      }
      try {
        const auto fit = mixing_scaling(pts);
        fit_csv.row(c.epsilons[e], fit.prefactor, fit.exponent);
      } catch (const FitError& err) {
        ctx.notes["fit_eps_" + format_double(c.epsilons[e])] = err.what();
      }
    }
  }
}

struct CheckRow {
  std::string name;
  std::string boundary;
  double value;
  double tolerance;
  bool pass() const { return value <= tolerance; }
};

std::vector<CheckRow> verification_checks(int g, Boundary bc, std::size_t cap) {
  std::vector<CheckRow> rows;
  const std::string bcs(qwg::to_string(bc));
  const GasketGraph graph({g, bc});
  const QuantumWalk walk(graph);

  rows.push_back({"vertex_count", bcs,
                  std::abs(static_cast<double>(graph.size()) -
                           static_cast<double>(expected_vertex_count(g))),
                  0.0});

  double asym = 0.0;
  for (std::size_t v = 0; v < graph.size(); ++v) {
    for (int k = 0; k < kDirections; ++k) {
      const Link l = graph.link(v, k);
      if (!l.valid()) continue;
      const Link back = graph.link(static_cast<std::size_t>(l.vertex), l.arrival);
      if (back.vertex != static_cast<std::int32_t>(v) || back.arrival != k) asym += 1.0;
    }
  }
  rows.push_back({"adjacency_symmetry_violations", bcs, asym, 0.0});

  double inv = 0.0;
  for (const std::uint32_t slot : graph.port_slots()) {
    if (walk.shift().forward(walk.shift().forward(slot)) != slot) inv += 1.0;
  }
  rows.push_back({"shift_involution_violations", bcs, inv, 0.0});

  const Eigen::MatrixXcd u = build_dense_unitary(graph, cap);
  const auto n = u.rows();
  rows.push_back({"unitarity_max_error", bcs,
                  (u.adjoint() * u - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff(),
                  1e-12});

  const Vertex start = bottom_center(g);
  WalkerState state = walk.initial(start);
  Eigen::VectorXcd dense = to_port_vector(state);
  double oracle = 0.0;
  for (int t = 0; t < 50; ++t) {
    walk.step(state);
    dense = u * dense;
    oracle = std::max(oracle, (to_port_vector(state) - dense).cwiseAbs().maxCoeff());
  }
  rows.push_back({"sparse_vs_dense_50_steps", bcs, oracle, 1e-12});

  const SpectralDecomposition decomp(graph, u);
  const WalkerState initial = walk.initial(start);
  TimeAverager acc(graph);
  WalkerState s = initial;
  acc.add(s);
  walk.evolve(s, 199, [&](const WalkerState& x) { acc.add(x); });
  const ProbabilityField iter = acc.mean();
  const ProbabilityField exact = exact_time_average(decomp, initial, 200);
  double diff = 0.0;
  for (std::size_t v = 0; v < graph.size(); ++v) diff = std::max(diff, std::abs(iter[v] - exact[v]));
  rows.push_back({"time_average_T200_iterative_vs_spectral", bcs, diff, 1e-8});

  const ProbabilityField pi = limiting_distribution(decomp, initial);
  rows.push_back({"limiting_total_minus_one", bcs, std::abs(pi.total() - 1.0), 1e-10});

  WalkerState r = initial;
  walk.evolve(r, 1000);
  const double drift = std::abs(r.norm_squared() - 1.0);
  rows.push_back({"norm_drift_1000_steps", bcs, drift, 1e-10});
  for (int t = 0; t < 1000; ++t) walk.step_back(r);
  double rev = 0.0;
  for (std::size_t i = 0; i < r.amplitudes().size(); ++i) {
    rev = std::max(rev, std::abs(r.amplitudes()[i] - initial.amplitudes()[i]));
  }
  rows.push_back({"time_reversal_1000_steps", bcs, rev, 1e-9});
  return rows;
}

void run_verify(RunContext& ctx, bool& all_pass) {
  const auto& c = ctx.config;
  std::vector<CheckRow> rows;
  for (const Boundary bc : {Boundary::Periodic, Boundary::Reflective}) {
    if (c.boundary && *c.boundary != bc) continue;
    auto part = verification_checks(c.generation, bc, c.dense_cap);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  auto f = ctx.open("verify.csv");
  CsvWriter csv(f);
  csv.header({"check", "boundary", "value", "tolerance", "pass"});
  all_pass = true;
  for (const auto& row : rows) {
    csv.row(row.name, row.boundary, row.value, row.tolerance, row.pass() ? 1 : 0);
    ctx.log << (row.pass() ? "PASS " : "FAIL ") << row.name << " [" << row.boundary
            << "] value=" << format_double(row.value) << " tol=" << format_double(row.tolerance)
            << "\n";
    all_pass = all_pass && row.pass();
  }
}

std::string compiler_version() {
#if defined(__clang__)
  return "clang " __clang_version__;
#elif defined(__GNUC__)
  return "gcc " __VERSION__;
#else
  return "unknown";
#endif
}

}  // namespace

int execute(const ExperimentConfig& config, std::ostream& log) {
  const auto started = std::chrono::steady_clock::now();
  try {
    validate(config);
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) {
    log << "config error: output_dir: " << ec.message() << "\n";
    return kExitConfig;
  }
  RunContext ctx{config, config.output_dir, log};
  int status = kExitOk;
  try {
    switch (config.command) {
      case Command::Simulate: run_simulate(ctx); break;
      case Command::Sweep: run_sweep(ctx); break;
      case Command::Limiting: run_limiting(ctx); break;
      case Command::Tvd: run_tvd(ctx); break;
      case Command::Mixing: run_mixing(ctx); break;
      case Command::Verify: {
        bool pass = false;
        run_verify(ctx, pass);
        if (!pass) status = kExitVerify;
        break;
      }
    }
  } catch (const CapExceeded& e) {
    log << "cap exceeded: " << e.what() << "\n";
    return kExitCap;
  } catch (const ConfigError& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const Error& e) {
    log << "error: " << e.what() << "\n";
    return kExitFailure;
  }

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  json manifest;
  manifest["command"] = to_string(config.command);
  manifest["config"] = to_json(config);
  manifest["versions"] = {{"qwgasket", QWG_VERSION},
                          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." +
                                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                        std::to_string(EIGEN_MINOR_VERSION)},
                          {"compiler", compiler_version()}};
  manifest["wall_time_seconds"] = wall;
  manifest["outputs"] = ctx.outputs;
  manifest["notes"] = ctx.notes;
  manifest["exit_status"] = status;
  std::ofstream m(ctx.dir / "manifest.json");
  m << manifest.dump(2) << "\n";
  return status;
}

namespace {

unsigned default_workers() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return static_cast<unsigned>(n);
    } catch (const std::logic_error&) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

struct FlagValues {
  int generation = 0;
  std::vector<int> generations;
  std::string boundary;
  std::string start;
  std::size_t steps = 0;
  std::size_t horizon = 0;
  std::size_t empirical_horizon = 0;
  std::vector<double> epsilons;
  std::vector<double> window;
  std::string output_dir;
  std::string dense;
  std::size_t dense_cap = 0;
  unsigned workers = 0;
  std::size_t bins = 0;
  std::string config_file;
};

void add_flags(CLI::App& app, FlagValues& f) {
  app.add_option("--config", f.config_file, "JSON config or run manifest; flags override it");
  app.add_option("--g,--generation", f.generation, "Gasket generation");
  app.add_option("--generations", f.generations, "Generations for mixing")->delimiter(',');
  app.add_option("--bc,--boundary", f.boundary, "periodic | reflective");
  app.add_option("--start", f.start, "Initial vertex \"x,y\" (or \"all\" for sweep)");
  app.add_option("--steps", f.steps, "Number of walk steps");
  app.add_option("--horizon", f.horizon, "tvd / mixing scan horizon");
  app.add_option("--empirical-horizon", f.empirical_horizon,
                 "Averaging horizon for the empirical limiting distribution");
  app.add_option("--eps,--epsilons", f.epsilons, "Mixing thresholds")->delimiter(',');
  app.add_option("--window", f.window, "Fit window t_min,t_max")->delimiter(',')->expected(2);
  app.add_option("--out,--output-dir", f.output_dir, "Output directory");
  app.add_option("--dense", f.dense, "Dense spectral oracle: auto | on | off");
  app.add_option("--dense-cap", f.dense_cap, "Largest port count for dense algebra");
  app.add_option("--workers", f.workers, "Worker threads (env QWG_WORKERS)");
  app.add_option("--bins", f.bins, "Histogram bins");
}

json overrides(const CLI::App& app, const FlagValues& f) {
  json j = json::object();
  auto given = [&](const char* name) { return app.get_option(name)->count() > 0; };
  if (given("--g")) j["generation"] = f.generation;
  if (given("--generations")) j["generations"] = f.generations;
  if (given("--bc")) j["boundary"] = f.boundary;
  if (given("--start")) j["start"] = f.start;
  if (given("--steps")) j["steps"] = f.steps;
  if (given("--horizon")) j["horizon"] = f.horizon;
  if (given("--empirical-horizon")) j["empirical_horizon"] = f.empirical_horizon;
  if (given("--eps")) j["epsilons"] = f.epsilons;
  if (given("--window")) j["window"] = f.window;
  if (given("--out")) j["output_dir"] = f.output_dir;
  if (given("--dense")) j["dense"] = f.dense;
  if (given("--dense-cap")) j["dense_cap"] = f.dense_cap;
  if (given("--workers")) j["workers"] = f.workers;
  if (given("--bins")) j["bins"] = f.bins;
  return j;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config: " + path + ": " + e.what());
  }
}

}  // namespace

int run(int argc, char** argv) {
  CLI::App app{"Coined quantum walks on Sierpinski gaskets"};
  app.require_subcommand(1);
  std::vector<std::pair<CLI::App*, Command>> subs;
  FlagValues flags;
  const std::pair<Command, const char*> commands[] = {
      {Command::Simulate, "sigma(t) series from one start"},
      {Command::Sweep, "displacement exponents from every start"},
      {Command::Limiting, "limiting distribution and its x-marginal"},
      {Command::Tvd, "distance between time average and limiting distribution"},
      {Command::Mixing, "mixing times versus N"},
      {Command::Verify, "operator and oracle checks"}};
  for (const auto& [cmd, help] : commands) {
    CLI::App* sub = app.add_subcommand(std::string(to_string(cmd)), help);
    add_flags(*sub, flags);
    subs.emplace_back(sub, cmd);
  }
  std::string manifest_path, replay_out;
  CLI::App* replay = app.add_subcommand("replay", "re-run the config recorded in a manifest");
  replay->add_option("manifest", manifest_path, "manifest.json")->required();
  replay->add_option("--out,--output-dir", replay_out, "Output directory override");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    json merged;
    if (replay->parsed()) {
      merged = read_json_file(manifest_path);
      if (merged.contains("config")) merged = merged.at("config");
      if (!replay_out.empty()) merged["output_dir"] = replay_out;
    } else {
      for (const auto& [sub, cmd] : subs) {
        if (!sub->parsed()) continue;
        merged = flags.config_file.empty() ? json::object() : read_json_file(flags.config_file);
        if (merged.contains("config")) merged = merged.at("config");
        if (!merged.contains("workers")) merged["workers"] = default_workers();
        merged.merge_patch(overrides(*sub, flags));
        merged["command"] = to_string(cmd);
      }
    }
    const ExperimentConfig config = config_from_json(merged);
    return execute(config, std::cerr);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }
}

}  // namespace qwg::cli
