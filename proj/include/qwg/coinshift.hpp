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

#include <cstdint>
#include <iosfwd>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qwg/gasket.hpp"
#include "qwg/state.hpp"

namespace qwg {

/// Flip-flop shift S as an involution on port slots.
class ShiftPermutation {
 public:
  explicit ShiftPermutation(const GasketGraph& graph);

  std::size_t port_count() const { return pairs_.size() * 2; }
  /// Image of a slot; invalid slots map to themselves.
  std::uint32_t forward(std::size_t slot) const { return forward_[slot]; }
  /// Disjoint transpositions, one per undirected edge (wrap edges included).
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& pairs() const { return pairs_; }

  /// Throws StateError if any slot outside the valid ports is nonzero.
  void validate(const WalkerState& state) const;
  /// Moves the amplitude at every port p to forward(p). No validation.
  void apply_unchecked(WalkerState& state) const;

 private:
  const GasketGraph* graph_;
  std::vector<std::uint32_t> forward_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs_;
  std::vector<std::uint32_t> invalid_slots_;
};

/// Grover coin (2/d) J - I on the valid ports of every vertex.
class CoinOperator {
 public:
  explicit CoinOperator(const GasketGraph& graph);

  /// 2/d for vertex v.
  double weight(std::size_t v) const { return weights_[v]; }
  int degree(std::size_t v) const { return graph_->degree(v); }
  /// Dense block for vertex v, ordered by ascending label.
  Eigen::MatrixXd block(std::size_t v) const;

  /// Throws StateError if any slot outside the valid ports is nonzero.
  void validate(const WalkerState& state) const;
  void apply_unchecked(WalkerState& state) const;

 private:
  const GasketGraph* graph_;
  std::vector<double> weights_;
  std::vector<std::uint32_t> invalid_slots_;
};

ShiftPermutation build_shift(const GasketGraph& graph);
CoinOperator build_coin(const GasketGraph& graph);

/// (2/d) J - I. Throws std::invalid_argument unless degree is 2 or 4.
Eigen::MatrixXd coin_matrix(int degree);

/// Coin factor of U. Throws StateError on amplitude at an invalid port
/// or a state built over another graph.
WalkerState apply_coin(const CoinOperator& coin, WalkerState state);
/// Shift factor of U. Same error contract as apply_coin.
WalkerState apply_shift(const ShiftPermutation& shift, WalkerState state);

/// Debug dump of the transpositions as "x,y,k,nx,ny,nk" lines.
void write_shift_pairs_csv(const GasketGraph& graph, const ShiftPermutation& shift,
                           std::ostream& out);

}  // namespace qwg
