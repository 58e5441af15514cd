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

#include "qwg/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>

#include "qwg/errors.hpp"

namespace qwg {

double PowerLawFit::operator()(double t) const { return prefactor * std::pow(t, exponent); }

PowerLawFit fit_power_law(std::span<const SeriesPoint> series, FitWindow window,
                          std::size_t min_points) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    if (s.t < window.t_min || s.t > window.t_max) continue;
    if (!(s.t > 0.0) || !(s.value > 0.0)) {
      throw FitError("nonpositive entry at index " + std::to_string(i) + " (t=" +
                     std::to_string(s.t) + ", value=" + std::to_string(s.value) + ")");
    }
    lx.push_back(std::log(s.t));
    ly.push_back(std::log(s.value));
  }
  if (lx.size() < min_points) {
    throw FitError("fit window [" + std::to_string(window.t_min) + ", " +
                   std::to_string(window.t_max) + "] holds " + std::to_string(lx.size()) +
                   " points, need " + std::to_string(min_points));
  }
  const double n = static_cast<double>(lx.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("degenerate fit: all abscissae coincide");
  PowerLawFit fit;
  fit.exponent = sxy / sxx;
  const double intercept = my - fit.exponent * mx;
  fit.prefactor = std::exp(intercept);
  fit.window = window;
  fit.points = lx.size();
  double rss = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - (intercept + fit.exponent * lx[i]);
    rss += r * r;
  }
  fit.rms_residual = std::sqrt(rss / n);
  return fit;
}

std::size_t default_sweep_steps(int generation) {
  return generation >= 1 ? std::size_t{1} << (generation - 1) : 1;
}

FitWindow default_fit_window(std::size_t steps) {
  return {4.0, static_cast<double>(steps)};
}

std::vector<StdDevSample> sigma_series(const QuantumWalk& walk, Vertex start,
                                       std::size_t steps) {
  WalkerState state = walk.initial(start);
  std::vector<StdDevSample> out;
  out.reserve(steps + 1);
  out.push_back(stddev(state));
  walk.evolve(state, steps, [&](const WalkerState& s) { out.push_back(stddev(s)); });
  return out;
}

std::vector<SeriesPoint> sigma_points(std::span<const StdDevSample> samples) {
  std::vector<SeriesPoint> out;
  out.reserve(samples.size());
  for (const auto& s : samples) out.push_back({static_cast<double>(s.t), s.sigma});
  return out;
}

ExponentHistogram make_histogram(std::vector<double> walk_dimensions, std::size_t bins) {
  if (bins == 0) throw std::invalid_argument("histogram needs at least one bin");
  ExponentHistogram h;
  h.counts.assign(bins, 0);
  h.walk_dimensions = std::move(walk_dimensions);
  if (h.walk_dimensions.empty()) {
    h.edges.assign(bins + 1, 0.0);
    return h;
  }
  const auto [lo_it, hi_it] =
      std::minmax_element(h.walk_dimensions.begin(), h.walk_dimensions.end());
  const double lo = *lo_it;
  double hi = *hi_it;
  if (hi <= lo) hi = lo + 1.0;
  const double width = (hi - lo) / static_cast<double>(bins);
  h.edges.resize(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) h.edges[i] = lo + width * static_cast<double>(i);
  h.edges.back() = hi;
  for (const double d : h.walk_dimensions) {
    auto bin = static_cast<std::size_t>((d - lo) / width);
    h.counts[std::min(bin, bins - 1)] += 1;
  }
  return h;
}

SweepResult sweep_exponents(const GasketGraph& graph, const SweepOptions& options) {
  if (graph.boundary() != Boundary::Reflective) {
    throw std::invalid_argument("displacement sweeps use reflective boundary conditions");
  }
  SweepResult result;
  result.steps = options.steps == 0 ? default_sweep_steps(graph.generation()) : options.steps;
  const std::size_t cutoff = std::size_t{1} << graph.generation();
  if (result.steps > cutoff) {
    throw std::invalid_argument("sweep of " + std::to_string(result.steps) +
                                " steps exceeds the cutoff guard 2^g = " +
                                std::to_string(cutoff));
  }
  result.window = options.window.value_or(default_fit_window(result.steps));

  const QuantumWalk walk(graph);
  const std::size_t n = graph.size();
  const std::size_t len = result.steps + 1;
  std::vector<double> sigmas(n * len);
  result.per_vertex.resize(n);

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t v = next++; v < n; v = next++) {
        const auto series = sigma_series(walk, graph.vertex(v), result.steps);
        std::vector<SeriesPoint> pts = sigma_points(series);
        for (std::size_t t = 0; t < len; ++t) sigmas[v * len + t] = series[t].sigma;
        result.per_vertex[v] = {graph.vertex(v), fit_power_law(pts, result.window)};
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = n;
    }
  };
  const unsigned workers = std::max(1u, options.workers);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < workers; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  // Ordered reduction: identical for any worker count.
  result.mean_sigma.resize(len);
  for (std::size_t t = 0; t < len; ++t) {
    double s = 0.0;
    for (std::size_t v = 0; v < n; ++v) s += sigmas[v * len + t];
    result.mean_sigma[t] = {static_cast<double>(t), s / static_cast<double>(n)};
  }
  result.mean_fit = fit_power_law(result.mean_sigma, result.window);

  std::vector<double> dims(n);
  double sum = 0.0;
  result.min_exponent = std::numeric_limits<double>::infinity();
  result.max_exponent = -std::numeric_limits<double>::infinity();
  for (std::size_t v = 0; v < n; ++v) {
    const double b = result.per_vertex[v].fit.exponent;
    dims[v] = 1.0 / b;
    sum += b;
    result.min_exponent = std::min(result.min_exponent, b);
    result.max_exponent = std::max(result.max_exponent, b);
  }
  result.mean_of_exponents = sum / static_cast<double>(n);
  result.histogram = make_histogram(std::move(dims), options.bins);
  return result;
}

std::string_view to_string(MixingMethod method) {
  return method == MixingMethod::Scan ? "scan" : "fit-extrapolated";
}

std::optional<std::uint64_t> scan_mixing_time(std::span<const SeriesPoint> series,
                                              double epsilon) {
  std::optional<std::size_t> last_fail;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (series[i].value > epsilon) last_fail = i;
  }
  if (!last_fail) return 0;
  if (*last_fail + 1 >= series.size()) return std::nullopt;
  return static_cast<std::uint64_t>(series[*last_fail + 1].t);
}

std::vector<SeriesPoint> tvd_series(const QuantumWalk& walk, const WalkerState& initial,
                                    const ProbabilityField& pi, std::size_t horizon) {
  if (pi.generation() != walk.graph().generation()) {
    throw GraphMismatch("limiting distribution belongs to another generation");
  }
  std::vector<SeriesPoint> out;
  if (horizon == 0) return out;
  out.reserve(horizon);
  TimeAverager acc(walk.graph());
  auto record = [&](const WalkerState& s) {
    acc.add(s);
    out.push_back({static_cast<double>(acc.count()), tvd(acc.mean(), pi)});
  };
  WalkerState state = initial;
  record(state);
  walk.evolve(state, horizon - 1, record);
  return out;
}

std::vector<MixingResult> mixing_times(const QuantumWalk& walk, Vertex start,
                                       std::span<const double> epsilons,
                                       const MixingOptions& options) {
  if (walk.graph().boundary() != Boundary::Periodic) {
    throw std::invalid_argument("mixing analysis uses periodic boundary conditions");
  }
  for (const double eps : epsilons) {
    if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  }
  const WalkerState initial = walk.initial(start);
  const LimitingEstimate pi = estimate_limiting_distribution(
      walk, initial, options.dense_cap, options.empirical_horizon);
  const auto series = tvd_series(walk, initial, pi.field, options.horizon);
  std::vector<MixingResult> out;
  for (const double eps : epsilons) {
    MixingResult r;
    r.epsilon = eps;
    r.tau = scan_mixing_time(series, eps);
    r.horizon = options.horizon;
    r.method = MixingMethod::Scan;
    r.pi_method = pi.method;
    out.push_back(r);
  }
  return out;
}

MixingResult mixing_time(const QuantumWalk& walk, Vertex start, double epsilon,
                         const MixingOptions& options) {
  const double eps[] = {epsilon};
  return mixing_times(walk, start, eps, options).front();
}

MixingResult extrapolate_mixing_time(const PowerLawFit& envelope, double epsilon) {
  if (!(envelope.exponent < 0.0)) {
    throw FitError("envelope exponent must be negative to extrapolate a mixing time");
  }
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  MixingResult r;
  r.epsilon = epsilon;
  r.method = MixingMethod::FitExtrapolated;
  const double t = std::pow(epsilon / envelope.prefactor, 1.0 / envelope.exponent);
  r.tau = static_cast<std::uint64_t>(std::ceil(std::max(t, 0.0)));
  return r;
}

PowerLawFit mixing_scaling(std::span<const std::pair<double, double>> n_tau) {
  if (n_tau.size() < 3) throw FitError("mixing scaling needs at least 3 generations");
  std::set<double> seen;
  std::vector<SeriesPoint> pts;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (const auto& [n, tau] : n_tau) {
    if (!seen.insert(n).second) throw FitError("repeated N in mixing scaling input");
    pts.push_back({n, tau});
    lo = std::min(lo, n);
    hi = std::max(hi, n);
  }
  return fit_power_law(pts, {lo, hi}, 3);
}

std::vector<StdDevSample> classical_walk_series(const GasketGraph& graph, Vertex start,
                                                std::size_t steps) {
  const std::size_t n = graph.size();
  std::vector<double> p(n, 0.0), next(n, 0.0);
  p[graph.index(start)] = 1.0;
  std::vector<double> inv_degree(n);
  for (std::size_t v = 0; v < n; ++v) inv_degree[v] = 1.0 / graph.degree(v);

  std::vector<StdDevSample> out;
  out.reserve(steps + 1);
  auto sample = [&](std::uint64_t t) {
    out.push_back(stddev(ProbabilityField(graph, p, t)));
  };
  sample(0);
  for (std::size_t t = 1; t <= steps; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t u = 0; u < n; ++u) {
      const double share = p[u] * inv_degree[u];
      for (int k = 0; k < kDirections; ++k) {
        const Link l = graph.link(u, k);
        if (l.valid()) next[static_cast<std::size_t>(l.vertex)] += share;
      }
    }
    p.swap(next);
    sample(t);
  }
  return out;
}

}  // namespace qwg
