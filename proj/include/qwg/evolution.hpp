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
#include <functional>
#include <iosfwd>

#include "qwg/coinshift.hpp"
#include "qwg/gasket.hpp"
#include "qwg/state.hpp"

namespace qwg {

/// Uniform coin state over the valid ports of v0, i.e. |D>|x,y> at
/// degree-4 vertices. Throws UnknownVertex.
WalkerState initial_state(const GasketGraph& graph, Vertex v0);

/// One application of U = S (G x I): coin, then shift; time advances by one.
WalkerState step(const GasketGraph& graph, const ShiftPermutation& shift,
                 const CoinOperator& coin, WalkerState state);

/// Called after every step with the updated state.
using StepObserver = std::function<void(const WalkerState&)>;

/// Applies step() `steps` times. An observer exception aborts the run with
/// EvolutionAborted carrying the 1-based step index.
WalkerState evolve(const GasketGraph& graph, const ShiftPermutation& shift,
                   const CoinOperator& coin, WalkerState state, std::size_t steps,
                   const StepObserver& observer = {});

/// Graph plus its two operators; the in-place fast path used by sweeps.
class QuantumWalk {
 public:
  explicit QuantumWalk(const GasketGraph& graph)
      : graph_(&graph), shift_(graph), coin_(graph) {}

  const GasketGraph& graph() const { return *graph_; }
  const ShiftPermutation& shift() const { return shift_; }
  const CoinOperator& coin() const { return coin_; }

  WalkerState initial(Vertex v0) const { return initial_state(*graph_, v0); }

  void step(WalkerState& state) const;
  /// U^{-1} = C S, since both factors are involutions.
  void step_back(WalkerState& state) const;
  void evolve(WalkerState& state, std::size_t steps, const StepObserver& observer = {}) const;

 private:
  const GasketGraph* graph_;
  ShiftPermutation shift_;
  CoinOperator coin_;
};

// Binary checkpoint, all fields little-endian:
//   u32 generation, u32 boundary (0 periodic, 1 reflective), u64 time,
//   u64 port count, then (re, im) float64 pairs in compact port order.
void save_checkpoint(const WalkerState& state, std::ostream& out);
/// Throws StateError if the header does not match `graph` or the stream is short.
WalkerState load_checkpoint(const GasketGraph& graph, std::istream& in);

}  // namespace qwg
