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

#include <doctest.h>

#include <cmath>

#include "qwg/analysis.hpp"
#include "qwg/errors.hpp"

namespace qwg {
namespace {

std::vector<SeriesPoint> power_series(double a, double b, int t0, int t1) {
  std::vector<SeriesPoint> s;
  for (int t = t0; t <= t1; ++t) s.push_back({double(t), a * std::pow(double(t), b)});
  return s;
}

}  // namespace

TEST_CASE("power-law fit recovers exact inputs") {
  const auto s = power_series(1.3, 0.44, 1, 128);
  const PowerLawFit f = fit_power_law(s, {1, 128});
  CHECK(f.prefactor == doctest::Approx(1.3).epsilon(1e-12));
  CHECK(f.exponent == doctest::Approx(0.44).epsilon(1e-12));
  CHECK(f.rms_residual < 1e-12);
  CHECK(f.points == 128);
  CHECK(f.walk_dimension() == doctest::Approx(1.0 / 0.44));
  CHECK(f(16.0) == doctest::Approx(1.3 * std::pow(16.0, 0.44)));

  const auto decay = power_series(1.76, -1.0, 1, 5000);
  const PowerLawFit d = fit_power_law(decay, {20, 5000});
  CHECK(d.prefactor == doctest::Approx(1.76).epsilon(1e-12));
  CHECK(d.exponent == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(d.points == 4981);
}

TEST_CASE("fit uses only the window") {
  auto s = power_series(2.0, 0.29, 1, 100);
  for (auto& p : s) {
    if (p.t < 10) p.value = 1000.0;
  }
  const PowerLawFit f = fit_power_law(s, {10, 100});
  CHECK(f.exponent == doctest::Approx(0.29).epsilon(1e-12));
  CHECK(f.window.t_min == 10);
  CHECK(f.window.t_max == 100);
}

TEST_CASE("fit errors") {
  const auto s = power_series(1.0, 0.5, 1, 10);
  CHECK_THROWS_AS(fit_power_law(s, {1, 4}), FitError);
  CHECK_THROWS_AS(fit_power_law(s, {20, 30}), FitError);
  std::vector<SeriesPoint> same(6, SeriesPoint{3.0, 1.0});
  CHECK_THROWS_AS(fit_power_law(same, {1, 10}), FitError);
  auto bad = s;
  bad[3].value = 0.0;
  try {
    fit_power_law(bad, {1, 10});
    FAIL("expected FitError");
  } catch (const FitError& e) {
    CHECK(std::string(e.what()).find("index 3") != std::string::npos);
  }
  // t = 0 lies outside [1, 10] and is ignored.
  auto with_zero = s;
  with_zero.insert(with_zero.begin(), SeriesPoint{0.0, 0.0});
  CHECK_NOTHROW(fit_power_law(with_zero, {1, 10}));
}

TEST_CASE("default horizons") {
  CHECK(default_sweep_steps(8) == 128);
  CHECK(default_sweep_steps(6) == 32);
  CHECK(default_sweep_steps(1) == 1);
  CHECK(default_sweep_steps(0) == 1);
  const FitWindow w = default_fit_window(128);
  CHECK(w.t_min == 4);
  CHECK(w.t_max == 128);
}

TEST_CASE("mixing-time scan") {
  std::vector<SeriesPoint> s;
  for (int t = 1; t <= 1000; ++t) s.push_back({double(t), 2.0 / t});
  CHECK(scan_mixing_time(s, 0.01) == std::uint64_t{200});
  CHECK(scan_mixing_time(s, 5.0) == std::uint64_t{0});
  CHECK_FALSE(scan_mixing_time(s, 0.001).has_value());
  // A late excursion above epsilon moves tau past it.
  s[499].value = 0.5;
  CHECK(scan_mixing_time(s, 0.01) == std::uint64_t{501});
}

TEST_CASE("mixing time from a fitted envelope") {
  PowerLawFit env;
  env.prefactor = 1.76;
  env.exponent = -1.0;
  const MixingResult r = extrapolate_mixing_time(env, 0.01);
  REQUIRE(r.tau.has_value());
  CHECK(*r.tau == 176);
  CHECK(r.method == MixingMethod::FitExtrapolated);
  env.exponent = 0.5;
  CHECK_THROWS_AS(extrapolate_mixing_time(env, 0.01), FitError);
}

TEST_CASE("mixing scaling fit") {
  std::vector<std::pair<double, double>> pts;
  for (const double n : {123.0, 366.0, 1095.0, 3282.0}) pts.emplace_back(n, 0.034 * std::pow(n, 0.54));
  const PowerLawFit f = mixing_scaling(pts);
  CHECK(f.exponent == doctest::Approx(0.54).epsilon(1e-12));
  CHECK(f.prefactor == doctest::Approx(0.034).epsilon(1e-12));
  const std::vector<std::pair<double, double>> two{{1, 1}, {2, 2}};
  CHECK_THROWS_AS(mixing_scaling(two), FitError);
  const std::vector<std::pair<double, double>> repeated{{1, 1}, {2, 2}, {2, 3}};
  CHECK_THROWS_AS(mixing_scaling(repeated), FitError);
}

TEST_CASE("sigma series and sweeps") {
  const GasketGraph graph({3, Boundary::Reflective});
  const QuantumWalk walk(graph);
  const auto series = sigma_series(walk, {8, 0}, 8);
  REQUIRE(series.size() == 9);
  CHECK(series[0].sigma == 0.0);
  CHECK(series[8].t == 8);
  const auto pts = sigma_points(series);
  CHECK(pts[5].t == 5.0);
  CHECK(pts[5].value == series[5].sigma);

  SweepOptions one;
  one.steps = 8;
  one.window = FitWindow{2, 8};
  one.bins = 7;
  SweepOptions many = one;
  many.workers = 3;
  const SweepResult a = sweep_exponents(graph, one);
  const SweepResult b = sweep_exponents(graph, many);
  REQUIRE(a.per_vertex.size() == graph.size());
  for (std::size_t v = 0; v < graph.size(); ++v) {
    CHECK(a.per_vertex[v].start == graph.vertex(v));
    CHECK(a.per_vertex[v].fit.exponent == b.per_vertex[v].fit.exponent);
  }
  CHECK(a.mean_fit.exponent == b.mean_fit.exponent);
  CHECK(a.mean_sigma.size() == 9);
  std::size_t counted = 0;
  for (const auto c : a.histogram.counts) counted += c;
  CHECK(counted == graph.size());
  CHECK(a.histogram.edges.size() == 8);
  CHECK(a.min_exponent <= a.mean_of_exponents);
  CHECK(a.mean_of_exponents <= a.max_exponent);

  const auto direct = sigma_series(walk, graph.vertex(5), 8);
  double mean8 = 0.0;
  for (std::size_t v = 0; v < graph.size(); ++v) {
    mean8 += sigma_series(walk, graph.vertex(v), 8)[8].sigma;
  }
  CHECK(a.mean_sigma[8].value == doctest::Approx(mean8 / graph.size()).epsilon(1e-13));
  CHECK(a.per_vertex[5].fit.exponent ==
        doctest::Approx(fit_power_law(sigma_points(direct), {2, 8}).exponent).epsilon(1e-13));

  SweepOptions too_long;
  too_long.steps = 9;
  CHECK_THROWS_AS(sweep_exponents(graph, too_long), std::invalid_argument);
  const GasketGraph periodic({3, Boundary::Periodic});
  CHECK_THROWS_AS(sweep_exponents(periodic, one), std::invalid_argument);
}

TEST_CASE("histogram") {
  const ExponentHistogram h = make_histogram({2.0, 2.5, 3.0, 3.0}, 2);
  REQUIRE(h.edges.size() == 3);
  CHECK(h.edges.front() == 2.0);
  CHECK(h.edges.back() == 3.0);
  CHECK(h.counts[0] == 1);
  CHECK(h.counts[1] == 3);
  CHECK_THROWS_AS(make_histogram({1.0}, 0), std::invalid_argument);
}

TEST_CASE("mixing times on a small periodic gasket") {
  const GasketGraph graph({2, Boundary::Periodic});
  const QuantumWalk walk(graph);
  MixingOptions opt;
  opt.horizon = 2000;
  const double eps[] = {0.1, 0.05};
  const auto rs = mixing_times(walk, {4, 0}, eps, opt);
  REQUIRE(rs.size() == 2);
  for (const auto& r : rs) {
    CHECK(r.mixed());
    CHECK(r.pi_method == LimitMethod::Spectral);
    CHECK(r.method == MixingMethod::Scan);
    CHECK(r.horizon == 2000);
  }
  CHECK(*rs[0].tau <= *rs[1].tau);

  const WalkerState init = walk.initial({4, 0});
  const auto pi = estimate_limiting_distribution(walk, init).field;
  const auto series = tvd_series(walk, init, pi, 2000);
  CHECK(series.size() == 2000);
  CHECK(series.front().t == 1.0);
  CHECK(scan_mixing_time(series, 0.1) == rs[0].tau);

  CHECK(mixing_time(walk, {4, 0}, 0.1, opt).tau == rs[0].tau);
  const double bad[] = {0.0};
  CHECK_THROWS_AS(mixing_times(walk, {4, 0}, bad, opt), std::invalid_argument);
  const GasketGraph reflective({2, Boundary::Reflective});
  const QuantumWalk rw(reflective);
  CHECK_THROWS_AS(mixing_time(rw, {4, 0}, 0.1, opt), std::invalid_argument);
}

TEST_CASE("classical walk") {
  const GasketGraph graph({1, Boundary::Reflective});
  const auto s = classical_walk_series(graph, {2, 0}, 1);
  REQUIRE(s.size() == 2);
  CHECK(s[0].sigma == 0.0);
  CHECK(s[1].sigma_x * s[1].sigma_x == doctest::Approx(2.5));
  CHECK(s[1].sigma_y * s[1].sigma_y == doctest::Approx(0.25));
}

}  // namespace qwg
