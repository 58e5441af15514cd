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
#include <iosfwd>
#include <utility>
#include <vector>

#include "qwg/gasket.hpp"
#include "qwg/state.hpp"

namespace qwg {

/// Probability per vertex of one gasket, in graph vertex order.
class ProbabilityField {
 public:
  ProbabilityField(const GasketGraph& graph, std::vector<double> values,
                   std::uint64_t time = 0);

  const GasketGraph& graph() const { return *graph_; }
  int generation() const { return graph_->generation(); }
  std::uint64_t time() const { return time_; }

  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t v) const { return values_[v]; }
  const std::vector<double>& values() const { return values_; }
  double total() const;

 private:
  const GasketGraph* graph_;
  std::vector<double> values_;
  std::uint64_t time_;
};

struct StdDevSample {
  std::uint64_t t = 0;
  double sigma_x = 0.0;
  double sigma_y = 0.0;
  double sigma = 0.0;
};

/// p(v) = sum_k |psi_{k;v}|^2.
ProbabilityField probability(const WalkerState& state);

/// Position spread from the x and y marginals.
StdDevSample stddev(const ProbabilityField& field);
/// Same quantity computed straight from amplitudes, without a field.
StdDevSample stddev(const WalkerState& state);

/// Cesaro mean of per-step fields: a running sum, divided once on read.
class TimeAverager {
 public:
  explicit TimeAverager(const GasketGraph& graph);

  /// Throws GraphMismatch on a field from another generation.
  void add(const ProbabilityField& field);
  void add(const WalkerState& state);

  std::size_t count() const { return count_; }
  /// Mean over the fields added so far. Throws std::logic_error when empty.
  ProbabilityField mean() const;

 private:
  const GasketGraph* graph_;
  std::vector<double> sum_;
  std::size_t count_ = 0;
};

/// p-bar(T) from the first T per-step fields. Throws std::invalid_argument
/// when fewer than T are given or T == 0, GraphMismatch on mixed generations.
ProbabilityField time_averaged(const std::vector<ProbabilityField>& fields, std::size_t T);

/// Half the L1 distance. Throws GraphMismatch.
double tvd(const ProbabilityField& p, const ProbabilityField& q);

/// sum_y p(x, y) for every x that carries a vertex, ascending in x.
std::vector<std::pair<int, double>> x_marginal(const ProbabilityField& field);

/// "x,y,p" rows in (y, x) order.
void write_field_csv(const ProbabilityField& field, std::ostream& out);
/// "x,p" rows.
void write_x_marginal_csv(const ProbabilityField& field, std::ostream& out);

}  // namespace qwg
