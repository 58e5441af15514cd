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

#include "qwg/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "qwg/coinshift.hpp"
#include "qwg/csv.hpp"
#include "qwg/errors.hpp"

namespace qwg {

Eigen::MatrixXcd build_dense_unitary(const GasketGraph& graph, std::size_t cap) {
  const std::size_t n = graph.port_count();
  if (n > cap) throw CapExceeded(n, cap);

  const ShiftPermutation shift(graph);
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
  std::vector<Eigen::Index> ports;
  for (std::size_t v = 0; v < graph.size(); ++v) {
    ports.clear();
    for (int k = 0; k < kDirections; ++k) {
      const std::int32_t p = graph.compact_port(v * kDirections + static_cast<std::size_t>(k));
      if (p >= 0) ports.push_back(p);
    }
    const Eigen::MatrixXd block = coin_matrix(static_cast<int>(ports.size()));
    for (std::size_t i = 0; i < ports.size(); ++i) {
      const std::size_t slot = graph.port_slots()[static_cast<std::size_t>(ports[i])];
      const Eigen::Index row = graph.compact_port(shift.forward(slot));
      for (std::size_t j = 0; j < ports.size(); ++j) {
        u(row, ports[j]) = block(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      }
    }
  }
  return u;
}

Eigen::VectorXcd to_port_vector(const WalkerState& state) {
  const GasketGraph& graph = state.graph();
  Eigen::VectorXcd out(static_cast<Eigen::Index>(graph.port_count()));
  const auto amps = state.amplitudes();
  for (std::size_t p = 0; p < graph.port_count(); ++p) {
    out(static_cast<Eigen::Index>(p)) = amps[graph.port_slots()[p]];
  }
  return out;
}

WalkerState from_port_vector(const GasketGraph& graph, const Eigen::VectorXcd& v) {
  if (static_cast<std::size_t>(v.size()) != graph.port_count()) {
    throw std::invalid_argument("port vector length does not match the graph");
  }
  WalkerState state(graph);
  auto amps = state.amplitudes();
  for (std::size_t p = 0; p < graph.port_count(); ++p) {
    amps[graph.port_slots()[p]] = v(static_cast<Eigen::Index>(p));
  }
  return state;
}

SpectralDecomposition::SpectralDecomposition(const GasketGraph& graph,
                                             const Eigen::MatrixXcd& unitary, double tolerance)
    : graph_(&graph) {
  if (static_cast<std::size_t>(unitary.rows()) != graph.port_count() ||
      unitary.rows() != unitary.cols()) {
    throw std::invalid_argument("unitary dimension does not match the graph port count");
  }
  const Eigen::Index n = unitary.rows();
  // Generic real weight; any c whose H + cK spectrum separates the
  // eigenvalues of U works, and the cluster step repairs collisions.
  constexpr double kMix = 0.6180339887498949;
  const std::complex<double> i_unit(0.0, 1.0);
  const Eigen::MatrixXcd adj = unitary.adjoint();
  const Eigen::MatrixXcd a =
      0.5 * (unitary + adj) + (kMix / 2.0) * (-i_unit) * (unitary - adj);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a);
  if (solver.info() != Eigen::Success) {
    throw Error("Hermitian eigensolver did not converge");
  }
  vectors_ = solver.eigenvectors();
  eigenvalues_.resize(n);
  const Eigen::SparseMatrix<std::complex<double>> u_sparse = unitary.sparseView();
  const Eigen::VectorXd& mu = solver.eigenvalues();
  constexpr double kClusterGap = 1e-6;
  Eigen::Index begin = 0;
  while (begin < n) {
    Eigen::Index end = begin + 1;
    while (end < n && mu(end) - mu(end - 1) <= kClusterGap) ++end;
    const Eigen::Index m = end - begin;
    const Eigen::MatrixXcd block = vectors_.middleCols(begin, m);
    const Eigen::MatrixXcd restricted = block.adjoint() * (u_sparse * block);
    if (m == 1) {
      eigenvalues_(begin) = restricted(0, 0);
    } else {
      Eigen::ComplexSchur<Eigen::MatrixXcd> schur(restricted, true);
      vectors_.middleCols(begin, m) = block * schur.matrixU();
      eigenvalues_.segment(begin, m) = schur.matrixT().diagonal();
    }
    begin = end;
  }
  const Eigen::MatrixXcd r =
      u_sparse * vectors_ - vectors_ * eigenvalues_.asDiagonal();
  residual_ = r.colwise().norm().maxCoeff();
  group(tolerance);
}

void SpectralDecomposition::group(double tolerance) {
  tolerance_ = tolerance;
  groups_.clear();
  const Eigen::Index n = eigenvalues_.size();
  if (n == 0) return;
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::arg(eigenvalues_(a)) < std::arg(eigenvalues_(b));
  });
  groups_.push_back({order.front()});
  for (std::size_t i = 1; i < order.size(); ++i) {
    const auto prev = eigenvalues_(order[i - 1]);
    const auto cur = eigenvalues_(order[i]);
    if (std::abs(cur - prev) <= tolerance) {
      groups_.back().push_back(order[i]);
    } else {
      groups_.push_back({order[i]});
    }
  }
  // Angles wrap at -pi / pi: the first and last clusters may be one eigenspace.
  if (groups_.size() > 1 &&
      std::abs(eigenvalues_(order.front()) - eigenvalues_(order.back())) <= tolerance) {
    auto& last = groups_.back();
    last.insert(last.end(), groups_.front().begin(), groups_.front().end());
    groups_.erase(groups_.begin());
  }
}

std::complex<double> SpectralDecomposition::group_value(std::size_t i) const {
  std::complex<double> s{};
  for (const auto j : groups_[i]) s += eigenvalues_(j);
  return s / static_cast<double>(groups_[i].size());
}

SpectralDecomposition SpectralDecomposition::regrouped(double tolerance) const {
  SpectralDecomposition out;
  out.graph_ = graph_;
  out.eigenvalues_ = eigenvalues_;
  out.vectors_ = vectors_;
  out.residual_ = residual_;
  out.group(tolerance);
  return out;
}

Eigen::MatrixXcd SpectralDecomposition::projector(std::size_t i) const {
  Eigen::MatrixXcd basis(vectors_.rows(), static_cast<Eigen::Index>(groups_[i].size()));
  for (std::size_t c = 0; c < groups_[i].size(); ++c) {
    basis.col(static_cast<Eigen::Index>(c)) = vectors_.col(groups_[i][c]);
  }
  return basis * basis.adjoint();
}

SpectralDecomposition decompose(const GasketGraph& graph, std::size_t cap, double tolerance) {
  return SpectralDecomposition(graph, build_dense_unitary(graph, cap), tolerance);
}

namespace {

// Column G holds P_G psi(0) over compact ports.
Eigen::MatrixXcd projected_components(const SpectralDecomposition& decomp,
                                      const WalkerState& initial) {
  if (&initial.graph() != &decomp.graph()) {
    throw StateError("initial state belongs to a different graph than the decomposition");
  }
  const Eigen::VectorXcd psi = to_port_vector(initial);
  const Eigen::VectorXcd coeff = decomp.eigenvectors().adjoint() * psi;
  const auto& groups = decomp.groups();
  Eigen::MatrixXcd w = Eigen::MatrixXcd::Zero(psi.size(), static_cast<Eigen::Index>(groups.size()));
  for (std::size_t g = 0; g < groups.size(); ++g) {
    for (const auto j : groups[g]) {
      w.col(static_cast<Eigen::Index>(g)) += decomp.eigenvectors().col(j) * coeff(j);
    }
  }
  return w;
}

ProbabilityField aggregate_ports(const GasketGraph& graph, const Eigen::VectorXd& per_port,
                                 std::uint64_t time) {
  std::vector<double> p(graph.size(), 0.0);
  for (std::size_t port = 0; port < graph.port_count(); ++port) {
    p[graph.port_slots()[port] / kDirections] += per_port(static_cast<Eigen::Index>(port));
  }
  return ProbabilityField(graph, std::move(p), time);
}

}  // namespace

ProbabilityField limiting_distribution(const SpectralDecomposition& decomp,
                                       const WalkerState& initial) {
  const Eigen::MatrixXcd w = projected_components(decomp, initial);
  const Eigen::VectorXd per_port = w.cwiseAbs2().rowwise().sum();
  return aggregate_ports(decomp.graph(), per_port, 0);
}

ProbabilityField exact_time_average(const SpectralDecomposition& decomp,
                                    const WalkerState& initial, std::size_t T) {
  if (T == 0) throw std::invalid_argument("time average needs T >= 1");
  const Eigen::MatrixXcd w = projected_components(decomp, initial);
  const auto m = static_cast<Eigen::Index>(decomp.groups().size());
  std::vector<double> angle(static_cast<std::size_t>(m));
  for (Eigen::Index g = 0; g < m; ++g) {
    angle[static_cast<std::size_t>(g)] = std::arg(decomp.group_value(static_cast<std::size_t>(g)));
  }
  // kernel(G, H) = (1/T) sum_{t<T} (lambda_G conj(lambda_H))^t, a Dirichlet kernel.
  const double tt = static_cast<double>(T);
  Eigen::MatrixXcd kernel(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      if (a == b) {
        kernel(a, b) = 1.0;
        continue;
      }
      const double theta = angle[static_cast<std::size_t>(a)] - angle[static_cast<std::size_t>(b)];
      const double den = tt * std::sin(0.5 * theta);
      const double mag = std::sin(0.5 * theta * tt) / den;
      kernel(a, b) = std::polar(mag, 0.5 * theta * (tt - 1.0));
    }
  }
  const Eigen::MatrixXcd wk = w * kernel;
  const Eigen::VectorXd per_port = wk.cwiseProduct(w.conjugate()).rowwise().sum().real();
  return aggregate_ports(decomp.graph(), per_port, T);
}

void write_eigenvalues_csv(const SpectralDecomposition& decomp, std::ostream& out) {
  CsvWriter csv(out);
  csv.header({"re", "im", "multiplicity"});
  for (std::size_t g = 0; g < decomp.groups().size(); ++g) {
    const auto z = decomp.group_value(g);
    csv.row(z.real(), z.imag(), decomp.groups()[g].size());
  }
}

std::string_view to_string(LimitMethod method) {
  return method == LimitMethod::Spectral ? "spectral" : "empirical";
}

ProbabilityField empirical_limiting_distribution(const QuantumWalk& walk,
                                                 const WalkerState& initial,
                                                 std::size_t horizon) {
  if (horizon == 0) throw std::invalid_argument("empirical horizon must be >= 1");
  TimeAverager acc(walk.graph());
  WalkerState state = initial;
  acc.add(state);
  walk.evolve(state, horizon - 1, [&](const WalkerState& s) { acc.add(s); });
  return acc.mean();
}

LimitingEstimate estimate_limiting_distribution(const QuantumWalk& walk,
                                                const WalkerState& initial, std::size_t cap,
                                                std::size_t horizon) {
  if (walk.graph().port_count() <= cap) {
    const SpectralDecomposition decomp = decompose(walk.graph(), cap);
    return {limiting_distribution(decomp, initial), LimitMethod::Spectral, 0};
  }
  return {empirical_limiting_distribution(walk, initial, horizon), LimitMethod::Empirical,
          horizon};
}

}  // namespace qwg
