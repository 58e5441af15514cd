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

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qwg/directions.hpp"
#include "qwg/gasket.hpp"

namespace qwg {

using Amplitude = std::complex<double>;

/// Coin-position amplitudes psi_{k; x,y}(t) plus the step counter.
///
/// Six slots per vertex (slot 6*v + k); slots of labels a vertex does not
/// own are held at exactly zero. The state refers to, but does not own,
/// its graph.
class WalkerState {
 public:
  explicit WalkerState(const GasketGraph& graph)
      : graph_(&graph), amplitudes_(graph.size() * kDirections) {}

  const GasketGraph& graph() const { return *graph_; }

  std::span<Amplitude> amplitudes() { return amplitudes_; }
  std::span<const Amplitude> amplitudes() const { return amplitudes_; }

  Amplitude& at(std::size_t v, int k) { return amplitudes_[v * kDirections + k]; }
  const Amplitude& at(std::size_t v, int k) const { return amplitudes_[v * kDirections + k]; }

  std::uint64_t time() const { return time_; }
  void set_time(std::uint64_t t) { time_ = t; }

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amplitudes_) s += std::norm(a);
    return s;
  }

 private:
  const GasketGraph* graph_;
  std::vector<Amplitude> amplitudes_;
  std::uint64_t time_ = 0;
};

}  // namespace qwg
