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
#include <iosfwd>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "qwg/evolution.hpp"
#include "qwg/gasket.hpp"
#include "qwg/observables.hpp"
#include "qwg/state.hpp"

namespace qwg {

inline constexpr std::size_t kDefaultDenseCap = 2048;
inline constexpr double kDefaultEigenTolerance = 1e-9;
inline constexpr std::size_t kDefaultEmpiricalHorizon = 100000;

/// U = S (G x I) as a dense matrix over compact port indices.
/// Throws CapExceeded when the port count is above `cap`.
Eigen::MatrixXcd build_dense_unitary(const GasketGraph& graph,
                                     std::size_t cap = kDefaultDenseCap);

/// Amplitudes of the valid ports in compact order, and back.
Eigen::VectorXcd to_port_vector(const WalkerState& state);
WalkerState from_port_vector(const GasketGraph& graph, const Eigen::VectorXcd& v);

/// Eigenbasis of U with eigenvalues grouped into eigenspaces.
///
/// U is normal, so H = (U + U^*)/2 and K = (U - U^*)/2i commute and share
/// its eigenvectors. The basis comes from the Hermitian eigensolver applied
/// to H + cK; clusters of that spectrum are split by a small Schur
/// decomposition of U restricted to the cluster.
class SpectralDecomposition {
 public:
  SpectralDecomposition(const GasketGraph& graph, const Eigen::MatrixXcd& unitary,
                        double tolerance = kDefaultEigenTolerance);

  const GasketGraph& graph() const { return *graph_; }
  const Eigen::VectorXcd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXcd& eigenvectors() const { return vectors_; }
  double tolerance() const { return tolerance_; }
  /// max_j |U v_j - lambda_j v_j|.
  double residual() const { return residual_; }

  /// Column indices of each eigenspace; sorted by eigenvalue angle.
  const std::vector<std::vector<Eigen::Index>>& groups() const { return groups_; }
  /// Mean eigenvalue of group i.
  std::complex<double> group_value(std::size_t i) const;

  /// Same eigenbasis grouped with another tolerance.
  SpectralDecomposition regrouped(double tolerance) const;

  /// Orthogonal projector onto eigenspace i.
  Eigen::MatrixXcd projector(std::size_t i) const;

 private:
  SpectralDecomposition() = default;
  void group(double tolerance);

  const GasketGraph* graph_ = nullptr;
  Eigen::VectorXcd eigenvalues_;
  Eigen::MatrixXcd vectors_;
  double tolerance_ = kDefaultEigenTolerance;
  double residual_ = 0.0;
  std::vector<std::vector<Eigen::Index>> groups_;
};

/// Dense build plus decomposition; CapExceeded as build_dense_unitary.
SpectralDecomposition decompose(const GasketGraph& graph, std::size_t cap = kDefaultDenseCap,
                                double tolerance = kDefaultEigenTolerance);

/// pi(v) = sum_k sum_lambda |<v,k| P_lambda |psi(0)>|^2.
ProbabilityField limiting_distribution(const SpectralDecomposition& decomp,
                                       const WalkerState& initial);

/// p-bar(T) in closed form: equal-eigenvalue pairs contribute constants,
/// unequal pairs the geometric sums of (lambda mu^*)^t over t < T.
ProbabilityField exact_time_average(const SpectralDecomposition& decomp,
                                    const WalkerState& initial, std::size_t T);

/// "re,im,multiplicity", one row per eigenspace.
void write_eigenvalues_csv(const SpectralDecomposition& decomp, std::ostream& out);

enum class LimitMethod { Spectral, Empirical };
std::string_view to_string(LimitMethod method);

struct LimitingEstimate {
  ProbabilityField field;
  LimitMethod method;
  /// Averaging horizon for Empirical, 0 for Spectral.
  std::size_t horizon = 0;
};

/// p-bar(horizon) by iteration: the stand-in for pi above the dense cap.
ProbabilityField empirical_limiting_distribution(const QuantumWalk& walk,
                                                 const WalkerState& initial,
                                                 std::size_t horizon);

/// Spectral pi when the port count fits under `cap`, empirical otherwise.
LimitingEstimate estimate_limiting_distribution(const QuantumWalk& walk,
                                                const WalkerState& initial,
                                                std::size_t cap = kDefaultDenseCap,
                                                std::size_t horizon = kDefaultEmpiricalHorizon);

}  // namespace qwg
