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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "qwg/evolution.hpp"
#include "qwg/gasket.hpp"
#include "qwg/observables.hpp"
#include "qwg/spectral.hpp"

namespace qwg {

struct SeriesPoint {
  double t = 0.0;
  double value = 0.0;
};

/// Closed interval of t used by a fit.
struct FitWindow {
  double t_min = 0.0;
  double t_max = 0.0;
};

/// value ~ prefactor * t^exponent.
struct PowerLawFit {
  double prefactor = 0.0;
  double exponent = 0.0;
  FitWindow window;
  /// RMS of log(value) - log(fit) over the window.
  double rms_residual = 0.0;
  std::size_t points = 0;

  double operator()(double t) const;
  /// d_w = 1 / exponent for displacement fits.
  double walk_dimension() const { return 1.0 / exponent; }
};

/// Least-squares line through (log t, log value) for t in the window.
/// Throws FitError on fewer than `min_points` points, a single distinct t,
/// or a nonpositive t/value inside the window (the message names its index).
PowerLawFit fit_power_law(std::span<const SeriesPoint> series, FitWindow window,
                          std::size_t min_points = 5);

/// Default displacement horizon, 2^{g-1} (128 at g = 8), at least 1.
std::size_t default_sweep_steps(int generation);
/// Default fit window, [4, steps].
FitWindow default_fit_window(std::size_t steps);

/// sigma(t) for t = 0..steps from the uniform coin state at `start`.
std::vector<StdDevSample> sigma_series(const QuantumWalk& walk, Vertex start, std::size_t steps);

struct ExponentHistogram {
  /// bins + 1 ascending edges over the observed d_w range.
  std::vector<double> edges;
  std::vector<std::size_t> counts;
  /// Per-vertex fitted d_w, in graph vertex order.
  std::vector<double> walk_dimensions;
};

ExponentHistogram make_histogram(std::vector<double> walk_dimensions, std::size_t bins = 40);

struct VertexExponent {
  Vertex start;
  PowerLawFit fit;
};

struct SweepOptions {
  std::size_t steps = 0;  // 0 selects default_sweep_steps
  std::optional<FitWindow> window;
  unsigned workers = 1;
  std::size_t bins = 40;
};

struct SweepResult {
  std::size_t steps = 0;
  FitWindow window;
  std::vector<VertexExponent> per_vertex;
  ExponentHistogram histogram;
  /// sigma-bar(t) = (1/N) sum over starts, t = 0..steps.
  std::vector<SeriesPoint> mean_sigma;
  PowerLawFit mean_fit;
  double mean_of_exponents = 0.0;
  double min_exponent = 0.0;
  double max_exponent = 0.0;
};

/// Displacement exponent from every vertex of a Reflective gasket.
/// Throws std::invalid_argument on a Periodic graph or steps > 2^g.
/// Results do not depend on the worker count.
SweepResult sweep_exponents(const GasketGraph& graph, const SweepOptions& options);

enum class MixingMethod { Scan, FitExtrapolated };
std::string_view to_string(MixingMethod method);

struct MixingResult {
  double epsilon = 0.0;
  /// Empty when the distance is still above epsilon at the horizon.
  std::optional<std::uint64_t> tau;
  std::size_t horizon = 0;
  MixingMethod method = MixingMethod::Scan;
  LimitMethod pi_method = LimitMethod::Spectral;

  bool mixed() const { return tau.has_value(); }
};

/// Smallest computed T such that every computed t >= T has value <= epsilon;
/// 0 if no point exceeds epsilon, empty if the last point does.
std::optional<std::uint64_t> scan_mixing_time(std::span<const SeriesPoint> series,
                                              double epsilon);

/// tvd(p-bar(T), pi) for T = 1..horizon.
std::vector<SeriesPoint> tvd_series(const QuantumWalk& walk, const WalkerState& initial,
                                    const ProbabilityField& pi, std::size_t horizon);

struct MixingOptions {
  std::size_t horizon = 10000;
  std::size_t dense_cap = kDefaultDenseCap;
  std::size_t empirical_horizon = kDefaultEmpiricalHorizon;
};

/// Scan-based mixing times for several epsilons over one tvd series.
/// Throws std::invalid_argument on a Reflective graph or epsilon <= 0.
std::vector<MixingResult> mixing_times(const QuantumWalk& walk, Vertex start,
                                       std::span<const double> epsilons,
                                       const MixingOptions& options = {});
MixingResult mixing_time(const QuantumWalk& walk, Vertex start, double epsilon,
                         const MixingOptions& options = {});

/// tau from a fitted envelope a T^b (b < 0): smallest integer T with a T^b <= epsilon.
MixingResult extrapolate_mixing_time(const PowerLawFit& envelope, double epsilon);

/// tau_eps ~ c N^e. Throws FitError on fewer than 3 points or repeated N.
PowerLawFit mixing_scaling(std::span<const std::pair<double, double>> n_tau);

/// Classical random walk p_{t+1}(v) = sum_{u~v} p_t(u)/deg(u) from a point
/// mass; sigma(t) for t = 0..steps.
std::vector<StdDevSample> classical_walk_series(const GasketGraph& graph, Vertex start,
                                                std::size_t steps);

/// (t, sigma) view of a sample series.
std::vector<SeriesPoint> sigma_points(std::span<const StdDevSample> samples);

}  // namespace qwg
