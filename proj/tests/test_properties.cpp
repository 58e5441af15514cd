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

// Randomized invariant checks. Every generator is seeded, so a failure
// reproduces exactly; the seed and case index are captured in the report.

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "qwg/analysis.hpp"
#include "qwg/coinshift.hpp"
#include "qwg/evolution.hpp"
#include "qwg/observables.hpp"
#include "qwg/spectral.hpp"

namespace qwg {
namespace {

constexpr std::uint64_t kSeed = 20261018;
constexpr int kCases = 60;

Boundary random_boundary(std::mt19937_64& rng) {
  return std::bernoulli_distribution(0.5)(rng) ? Boundary::Periodic : Boundary::Reflective;
}

Vertex random_vertex(const GasketGraph& graph, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, graph.size() - 1);
  return graph.vertex(pick(rng));
}

// Normalized state with Gaussian amplitudes on every valid port.
WalkerState random_state(const GasketGraph& graph, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  WalkerState s(graph);
  auto amps = s.amplitudes();
  double norm = 0.0;
  for (const std::uint32_t slot : graph.port_slots()) {
    amps[slot] = {n(rng), n(rng)};
    norm += std::norm(amps[slot]);
  }
  for (const std::uint32_t slot : graph.port_slots()) amps[slot] /= std::sqrt(norm);
  return s;
}

ProbabilityField random_field(const GasketGraph& graph, std::mt19937_64& rng) {
  std::exponential_distribution<double> e;
  std::vector<double> p(graph.size());
  for (auto& x : p) x = e(rng);
  const double total = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& x : p) x /= total;
  return ProbabilityField(graph, std::move(p));
}

Amplitude inner(const WalkerState& a, const WalkerState& b) {
  Amplitude s{};
  for (std::size_t i = 0; i < a.amplitudes().size(); ++i) {
    s += std::conj(a.amplitudes()[i]) * b.amplitudes()[i];
  }
  return s;
}

}  // namespace

TEST_CASE("property: norm is preserved by evolution") {
  std::mt19937_64 rng(kSeed);
  for (int c = 0; c < kCases; ++c) {
    CAPTURE(c);
    const int g = std::uniform_int_distribution<int>(0, 4)(rng);
    const GasketGraph graph({g, random_boundary(rng)});
    const QuantumWalk walk(graph);
    WalkerState s = std::bernoulli_distribution(0.5)(rng) ? walk.initial(random_vertex(graph, rng))
                                                          : random_state(graph, rng);
    walk.evolve(s, std::uniform_int_distribution<std::size_t>(0, 500)(rng));
    CHECK(std::abs(s.norm_squared() - 1.0) < 1e-12);
    CHECK(probability(s).total() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("property: shift is an involution and U preserves inner products") {
  std::mt19937_64 rng(kSeed + 1);
  for (int c = 0; c < kCases; ++c) {
    CAPTURE(c);
    const int g = std::uniform_int_distribution<int>(0, 4)(rng);
    const GasketGraph graph({g, random_boundary(rng)});
    const QuantumWalk walk(graph);
    const WalkerState a = random_state(graph, rng);
    const WalkerState b = random_state(graph, rng);

    const WalkerState twice = apply_shift(walk.shift(), apply_shift(walk.shift(), a));
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i) {
      CHECK(twice.amplitudes()[i] == a.amplitudes()[i]);
    }
    const WalkerState coined = apply_coin(walk.coin(), apply_coin(walk.coin(), a));
    for (std::size_t i = 0; i < a.amplitudes().size(); ++i) {
      CHECK(std::abs(coined.amplitudes()[i] - a.amplitudes()[i]) < 1e-14);
    }

    WalkerState ua = a, ub = b;
    walk.step(ua);
    walk.step(ub);
    CHECK(std::abs(inner(ua, ub) - inner(a, b)) < 1e-13);
  }
}

TEST_CASE("property: step_back undoes step") {
  std::mt19937_64 rng(kSeed + 2);
  for (int c = 0; c < kCases; ++c) {
    CAPTURE(c);
    const int g = std::uniform_int_distribution<int>(0, 4)(rng);
    const GasketGraph graph({g, random_boundary(rng)});
    const QuantumWalk walk(graph);
    const WalkerState s0 = random_state(graph, rng);
    const std::size_t steps = std::uniform_int_distribution<std::size_t>(1, 200)(rng);
    WalkerState s = s0;
    walk.evolve(s, steps);
    for (std::size_t t = 0; t < steps; ++t) walk.step_back(s);
    for (std::size_t i = 0; i < s.amplitudes().size(); ++i) {
      CHECK(std::abs(s.amplitudes()[i] - s0.amplitudes()[i]) < 1e-11);
    }
  }
}

TEST_CASE("property: coin blocks are invariant under port relabeling") {
  std::mt19937_64 rng(kSeed + 3);
  for (int c = 0; c < kCases; ++c) {
    CAPTURE(c);
    const int d = std::bernoulli_distribution(0.5)(rng) ? 4 : 2;
    std::vector<int> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d, d);
    for (int i = 0; i < d; ++i) p(i, perm[static_cast<std::size_t>(i)]) = 1.0;
    const Eigen::MatrixXd g = coin_matrix(d);
    CHECK((p.transpose() * g * p - g).cwiseAbs().maxCoeff() == 0.0);
  }
  // The sparse coin acts identically on any vertex whose ports are permuted:
  // the uniform coin state is fixed, anything orthogonal to it is negated.
  for (int c = 0; c < kCases; ++c) {
    const GasketGraph graph({3, random_boundary(rng)});
    const CoinOperator coin(graph);
    const WalkerState s = random_state(graph, rng);
    const WalkerState out = apply_coin(coin, s);
    for (std::size_t v = 0; v < graph.size(); ++v) {
      Amplitude mean{};
      const int d = graph.degree(v);
      for (int k = 0; k < kDirections; ++k) mean += s.at(v, k);
      mean /= static_cast<double>(d);
      for (const int k : direction_set(graph, graph.vertex(v))) {
        CHECK(std::abs(out.at(v, k) - (2.0 * mean - s.at(v, k))) < 1e-14);
      }
    }
  }
}

TEST_CASE("property: tvd is a metric bounded by one") {
  std::mt19937_64 rng(kSeed + 4);
  for (int c = 0; c < kCases; ++c) {
    CAPTURE(c);
    const GasketGraph graph({std::uniform_int_distribution<int>(0, 4)(rng), Boundary::Periodic});
    const auto p = random_field(graph, rng);
    const auto q = random_field(graph, rng);
    const auto r = random_field(graph, rng);
    CHECK(tvd(p, p) == 0.0);
    CHECK(tvd(p, q) == tvd(q, p));
    CHECK(tvd(p, q) >= 0.0);
    CHECK(tvd(p, q) <= 1.0);
    CHECK(tvd(p, r) <= tvd(p, q) + tvd(q, r) + 1e-15);
  }
}

TEST_CASE("property: sigma^2 = sigma_x^2 + sigma_y^2 and sigma is bounded by the grid") {
  std::mt19937_64 rng(kSeed + 5);
  for (int c = 0; c < kCases; ++c) {
    CAPTURE(c);
    const int g = std::uniform_int_distribution<int>(0, 5)(rng);
    const GasketGraph graph({g, random_boundary(rng)});
    const StdDevSample s = stddev(random_field(graph, rng));
    CHECK(std::abs(s.sigma * s.sigma - (s.sigma_x * s.sigma_x + s.sigma_y * s.sigma_y)) < 1e-12 * (1 + s.sigma * s.sigma));
    CHECK(s.sigma <= std::ldexp(1.0, g + 1));
    CHECK(s.sigma_x >= 0.0);
    CHECK(s.sigma_y >= 0.0);
  }
}

TEST_CASE("property: power-law fits are exact and scale covariant") {
  std::mt19937_64 rng(kSeed + 6);
  std::uniform_real_distribution<double> pref(0.01, 100.0), expo(-2.0, 2.0), scale(0.001, 1000.0);
  for (int c = 0; c < kCases; ++c) {
    CAPTURE(c);
    const double a = pref(rng), b = expo(rng), k = scale(rng);
    const int t1 = std::uniform_int_distribution<int>(10, 3000)(rng);
    std::vector<SeriesPoint> s, scaled;
    for (int t = 1; t <= t1; ++t) {
      s.push_back({double(t), a * std::pow(double(t), b)});
      scaled.push_back({double(t), k * s.back().value});
    }
    const FitWindow w{1.0, double(t1)};
    const PowerLawFit f = fit_power_law(s, w);
    CHECK(f.exponent == doctest::Approx(b).epsilon(1e-10));
    CHECK(f.prefactor == doctest::Approx(a).epsilon(1e-10));
    CHECK(f.rms_residual < 1e-12);
    const PowerLawFit fs = fit_power_law(scaled, w);
    CHECK(std::abs(fs.exponent - f.exponent) < 1e-12);
    CHECK(fs.prefactor == doctest::Approx(k * f.prefactor).epsilon(1e-12));
  }
}

TEST_CASE("property: time average of probability fields stays normalized") {
  std::mt19937_64 rng(kSeed + 7);
  for (int c = 0; c < 20; ++c) {
    CAPTURE(c);
    const GasketGraph graph({std::uniform_int_distribution<int>(1, 3)(rng), random_boundary(rng)});
    const QuantumWalk walk(graph);
    TimeAverager acc(graph);
    WalkerState s = walk.initial(random_vertex(graph, rng));
    acc.add(s);
    walk.evolve(s, std::uniform_int_distribution<std::size_t>(0, 300)(rng),
                [&](const WalkerState& x) { acc.add(x); });
    const ProbabilityField m = acc.mean();
    CHECK(m.total() == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t v = 0; v < graph.size(); ++v) CHECK(m[v] >= 0.0);
  }
}

TEST_CASE("property: the limiting distribution is stationary under averaging") {
  std::mt19937_64 rng(kSeed + 8);
  for (int c = 0; c < 10; ++c) {
    CAPTURE(c);
    const GasketGraph graph({std::uniform_int_distribution<int>(0, 2)(rng), random_boundary(rng)});
    const QuantumWalk walk(graph);
    const SpectralDecomposition d = decompose(graph);
    const WalkerState init = walk.initial(random_vertex(graph, rng));
    const ProbabilityField pi = limiting_distribution(d, init);
    CHECK(pi.total() == doctest::Approx(1.0).epsilon(1e-12));
    // tvd(p-bar(T), pi) <= C/T: the gap shrinks tenfold from T to 10T, give or take.
    const double near = tvd(exact_time_average(d, init, 1000), pi);
    const double far = tvd(exact_time_average(d, init, 100000), pi);
    CHECK(far <= near);
    CHECK(far < 1e-2);
  }
}

}  // namespace qwg
