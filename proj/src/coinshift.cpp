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

#include "qwg/coinshift.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

#include "qwg/errors.hpp"

namespace qwg {

namespace {

std::vector<std::uint32_t> invalid_slots_of(const GasketGraph& graph) {
  std::vector<std::uint32_t> out;
  out.reserve(graph.size() * kDirections - graph.port_count());
  for (std::size_t slot = 0; slot < graph.links().size(); ++slot) {
    if (!graph.links()[slot].valid()) out.push_back(static_cast<std::uint32_t>(slot));
  }
  return out;
}

void check_binding(const GasketGraph* graph, const WalkerState& state) {
  if (&state.graph() != graph) {
    throw StateError("walker state belongs to a different graph");
  }
}

void check_invalid_slots(const std::vector<std::uint32_t>& invalid, const WalkerState& state) {
  const auto amps = state.amplitudes();
  for (const std::uint32_t slot : invalid) {
    if (amps[slot] != Amplitude{}) {
      throw StateError("nonzero amplitude on nonexistent port (vertex " +
                       std::to_string(slot / kDirections) + ", label " +
                       std::to_string(slot % kDirections) + ")");
    }
  }
}

}  // namespace

ShiftPermutation::ShiftPermutation(const GasketGraph& graph)
    : graph_(&graph), invalid_slots_(invalid_slots_of(graph)) {
  const auto& links = graph.links();
  forward_.resize(links.size());
  for (std::size_t slot = 0; slot < links.size(); ++slot) {
    const Link l = links[slot];
    forward_[slot] = l.valid() ? static_cast<std::uint32_t>(
                                     static_cast<std::size_t>(l.vertex) * kDirections +
                                     static_cast<std::size_t>(l.arrival))
                               : static_cast<std::uint32_t>(slot);
  }
  pairs_.reserve(graph.port_count() / 2);
  for (const std::uint32_t slot : graph.port_slots()) {
    const std::uint32_t image = forward_[slot];
    if (forward_[image] != slot || image == slot) {
      throw std::logic_error("port wiring is not a fixed-point-free involution");
    }
    if (slot < image) pairs_.emplace_back(slot, image);
  }
}

void ShiftPermutation::validate(const WalkerState& state) const {
  check_binding(graph_, state);
  check_invalid_slots(invalid_slots_, state);
}

void ShiftPermutation::apply_unchecked(WalkerState& state) const {
  Amplitude* a = state.amplitudes().data();
  for (const auto& [p, q] : pairs_) std::swap(a[p], a[q]);
}

CoinOperator::CoinOperator(const GasketGraph& graph)
    : graph_(&graph), weights_(graph.size()), invalid_slots_(invalid_slots_of(graph)) {
  for (std::size_t v = 0; v < graph.size(); ++v) {
    weights_[v] = 2.0 / graph.degree(v);
  }
}

Eigen::MatrixXd CoinOperator::block(std::size_t v) const { return coin_matrix(degree(v)); }

void CoinOperator::validate(const WalkerState& state) const {
  check_binding(graph_, state);
  check_invalid_slots(invalid_slots_, state);
}

void CoinOperator::apply_unchecked(WalkerState& state) const {
  Amplitude* a = state.amplitudes().data();
  const std::size_t n = graph_->size();
  for (std::size_t v = 0; v < n; ++v, a += kDirections) {
    const DirectionMask mask = graph_->mask(v);
    const Amplitude s = (a[0] + a[1]) + (a[2] + a[3]) + (a[4] + a[5]);
    const Amplitude ws = weights_[v] * s;
    for (int k = 0; k < kDirections; ++k) {
      // Invalid slots hold zero and stay zero.
      if (mask & (1u << k)) a[k] = ws - a[k];
    }
  }
}

ShiftPermutation build_shift(const GasketGraph& graph) { return ShiftPermutation(graph); }
CoinOperator build_coin(const GasketGraph& graph) { return CoinOperator(graph); }

Eigen::MatrixXd coin_matrix(int degree) {
  if (degree != 2 && degree != 4) {
    throw std::invalid_argument("Grover coin requested for unsupported degree " +
                                std::to_string(degree));
  }
  return Eigen::MatrixXd::Constant(degree, degree, 2.0 / degree) -
         Eigen::MatrixXd::Identity(degree, degree);
}

WalkerState apply_coin(const CoinOperator& coin, WalkerState state) {
  coin.validate(state);
  coin.apply_unchecked(state);
  return state;
}

WalkerState apply_shift(const ShiftPermutation& shift, WalkerState state) {
  shift.validate(state);
  shift.apply_unchecked(state);
  return state;
}

void write_shift_pairs_csv(const GasketGraph& graph, const ShiftPermutation& shift,
                           std::ostream& out) {
  out << "x,y,k,nx,ny,nk\n";
  for (const auto& [p, q] : shift.pairs()) {
    const Vertex& a = graph.vertex(p / kDirections);
    const Vertex& b = graph.vertex(q / kDirections);
    out << a.x << ',' << a.y << ',' << p % kDirections << ',' << b.x << ',' << b.y << ','
        << q % kDirections << '\n';
  }
}

}  // namespace qwg
