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
#include <numbers>
#include <sstream>

#include "qwg/errors.hpp"
#include "qwg/evolution.hpp"
#include "qwg/observables.hpp"
#include "qwg/spectral.hpp"

namespace qwg {

TEST_CASE("port vector round trip") {
  const GasketGraph graph({2, Boundary::Reflective});
  const QuantumWalk walk(graph);
  WalkerState s = walk.initial({4, 0});
  walk.evolve(s, 9);
  const WalkerState back = from_port_vector(graph, to_port_vector(s));
  for (std::size_t i = 0; i < s.amplitudes().size(); ++i) {
    CHECK(back.amplitudes()[i] == s.amplitudes()[i]);
  }
  CHECK_THROWS_AS(from_port_vector(graph, Eigen::VectorXcd::Zero(3)), std::invalid_argument);
}

TEST_CASE("decomposition is an orthonormal eigenbasis") {
  for (int g = 0; g <= 3; ++g) {
    for (const auto bc : {Boundary::Periodic, Boundary::Reflective}) {
      const GasketGraph graph({g, bc});
      const Eigen::MatrixXcd u = build_dense_unitary(graph);
      const SpectralDecomposition d(graph, u);
      const auto n = u.rows();
      const Eigen::MatrixXcd& v = d.eigenvectors();
      CHECK((v.adjoint() * v - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((u * v - v * d.eigenvalues().asDiagonal()).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(d.residual() < 1e-10);
      for (Eigen::Index i = 0; i < n; ++i) CHECK(std::abs(std::abs(d.eigenvalues()(i)) - 1.0) < 1e-12);
      std::size_t total = 0;
      for (const auto& grp : d.groups()) total += grp.size();
      CHECK(total == static_cast<std::size_t>(n));
    }
  }
}

TEST_CASE("projectors are orthogonal and resolve the identity") {
  const GasketGraph graph({2, Boundary::Periodic});
  const SpectralDecomposition d = decompose(graph);
  const auto n = static_cast<Eigen::Index>(graph.port_count());
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
  for (std::size_t i = 0; i < d.groups().size(); ++i) {
    const Eigen::MatrixXcd p = d.projector(i);
    CHECK((p * p - p).cwiseAbs().maxCoeff() < 1e-12);
    sum += p;
  }
  CHECK((sum - Eigen::MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff() < 1e-12);
  // U is real, so -1 and 1 appear and spectra come in conjugate pairs.
  double imag_sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) imag_sum += d.eigenvalues()(i).imag();
  CHECK(std::abs(imag_sum) < 1e-10);
}

TEST_CASE("grouping merges clusters across the -pi/pi cut") {
  const GasketGraph graph({0, Boundary::Periodic});  // 12 ports
  const double pi = std::numbers::pi;
  Eigen::VectorXcd diag(12);
  diag(0) = std::polar(1.0, pi - 1e-12);
  diag(1) = std::polar(1.0, -pi + 1e-12);
  diag(2) = std::polar(1.0, pi);
  for (int i = 3; i < 12; ++i) diag(i) = std::polar(1.0, 0.1 * i);
  diag(4) = diag(3);
  const Eigen::MatrixXcd u = diag.asDiagonal();
  const SpectralDecomposition d(graph, u);
  CHECK(d.groups().size() == 9);
  bool found_wrap = false;
  for (std::size_t i = 0; i < d.groups().size(); ++i) {
    if (d.groups()[i].size() == 3) {
      found_wrap = true;
      CHECK(std::abs(d.group_value(i) + 1.0) < 1e-11);
    }
  }
  CHECK(found_wrap);
  const SpectralDecomposition coarse = d.regrouped(0.5);
  CHECK(coarse.groups().size() < d.groups().size());
  CHECK(coarse.tolerance() == 0.5);
}

TEST_CASE("dense cap") {
  const GasketGraph graph({3, Boundary::Periodic});
  try {
    build_dense_unitary(graph, 100);
    FAIL("expected CapExceeded");
  } catch (const CapExceeded& e) {
    CHECK(e.requested() == 168);
    CHECK(e.cap() == 100);
  }
  CHECK_THROWS_AS(decompose(graph, 167), CapExceeded);
  CHECK_NOTHROW(decompose(graph, 168));
}

TEST_CASE("exact time average equals the iterative average") {
  for (const auto bc : {Boundary::Periodic, Boundary::Reflective}) {
    const GasketGraph graph({2, bc});
    const QuantumWalk walk(graph);
    const SpectralDecomposition d = decompose(graph);
    const WalkerState init = walk.initial({4, 0});
    for (const std::size_t T : {std::size_t{1}, std::size_t{2}, std::size_t{7}, std::size_t{200}}) {
      TimeAverager acc(graph);
      WalkerState s = init;
      acc.add(s);
      walk.evolve(s, T - 1, [&](const WalkerState& x) { acc.add(x); });
      const ProbabilityField it = acc.mean();
      const ProbabilityField ex = exact_time_average(d, init, T);
      for (std::size_t v = 0; v < graph.size(); ++v) CHECK(std::abs(it[v] - ex[v]) <= 1e-8);
    }
    CHECK_THROWS_AS(exact_time_average(d, init, 0), std::invalid_argument);
  }
}

TEST_CASE("limiting distribution") {
  const GasketGraph graph({3, Boundary::Periodic});
  const QuantumWalk walk(graph);
  const WalkerState init = walk.initial({8, 0});
  const SpectralDecomposition d = decompose(graph);
  const ProbabilityField pi = limiting_distribution(d, init);
  CHECK(pi.total() == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t v = 0; v < graph.size(); ++v) CHECK(pi[v] >= -1e-15);

  const ProbabilityField far = exact_time_average(d, init, 1000000);
  CHECK(tvd(far, pi) < 1e-4);
  const ProbabilityField emp = empirical_limiting_distribution(walk, init, 20000);
  CHECK(tvd(emp, pi) < 1e-2);

  const LimitingEstimate spectral = estimate_limiting_distribution(walk, init, 1000, 10);
  CHECK(spectral.method == LimitMethod::Spectral);
  CHECK(tvd(spectral.field, pi) < 1e-12);
  const LimitingEstimate empirical = estimate_limiting_distribution(walk, init, 100, 50);
  CHECK(empirical.method == LimitMethod::Empirical);
  CHECK(empirical.horizon == 50);
  CHECK(to_string(LimitMethod::Empirical) == "empirical");

  const GasketGraph other({3, Boundary::Periodic});
  const WalkerState foreign = initial_state(other, {8, 0});
  CHECK_THROWS_AS(limiting_distribution(d, foreign), StateError);
}

TEST_CASE("eigenvalue csv multiplicities cover every port") {
  const GasketGraph graph({1, Boundary::Reflective});
  const SpectralDecomposition d = decompose(graph);
  std::ostringstream out;
  write_eigenvalues_csv(d, out);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "re,im,multiplicity");
  std::size_t total = 0;
  while (std::getline(in, line)) total += std::stoul(line.substr(line.rfind(',') + 1));
  CHECK(total == graph.port_count());
}

}  // namespace qwg
