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

#include "qwg/evolution.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <exception>
#include <istream>
#include <ostream>
#include <string>

#include "qwg/errors.hpp"

namespace qwg {

WalkerState initial_state(const GasketGraph& graph, Vertex v0) {
  const std::size_t v = graph.index(v0);
  WalkerState state(graph);
  const double amp = 1.0 / std::sqrt(static_cast<double>(graph.degree(v)));
  for (int k = 0; k < kDirections; ++k) {
    if (graph.mask(v) & (1u << k)) state.at(v, k) = amp;
  }
  return state;
}

WalkerState step(const GasketGraph& graph, const ShiftPermutation& shift,
                 const CoinOperator& coin, WalkerState state) {
  if (&state.graph() != &graph) throw StateError("walker state belongs to a different graph");
  coin.validate(state);
  coin.apply_unchecked(state);
  shift.apply_unchecked(state);
  state.set_time(state.time() + 1);
  return state;
}

WalkerState evolve(const GasketGraph& graph, const ShiftPermutation& shift,
                   const CoinOperator& coin, WalkerState state, std::size_t steps,
                   const StepObserver& observer) {
  for (std::size_t i = 1; i <= steps; ++i) {
    state = step(graph, shift, coin, std::move(state));
    if (!observer) continue;
    try {
      observer(state);
    } catch (const std::exception& e) {
      throw EvolutionAborted(i, e.what());
    }
  }
  return state;
}

void QuantumWalk::step(WalkerState& state) const {
  coin_.validate(state);
  coin_.apply_unchecked(state);
  shift_.apply_unchecked(state);
  state.set_time(state.time() + 1);
}

void QuantumWalk::step_back(WalkerState& state) const {
  shift_.validate(state);
  shift_.apply_unchecked(state);
  coin_.apply_unchecked(state);
  state.set_time(state.time() - 1);
}

void QuantumWalk::evolve(WalkerState& state, std::size_t steps,
                         const StepObserver& observer) const {
  if (&state.graph() != graph_) throw StateError("walker state belongs to a different graph");
  coin_.validate(state);
  for (std::size_t i = 1; i <= steps; ++i) {
    // Coin and shift both keep invalid slots at zero, so one check suffices.
    coin_.apply_unchecked(state);
    shift_.apply_unchecked(state);
    state.set_time(state.time() + 1);
    if (!observer) continue;
    try {
      observer(state);
    } catch (const std::exception& e) {
      throw EvolutionAborted(i, e.what());
    }
  }
}

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>((value >> (8 * i)) & 0xFF);
  }
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in) {
  std::array<unsigned char, sizeof(T)> bytes{};
  in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
  if (!in) throw StateError("checkpoint stream ended early");
  T value = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) value |= static_cast<T>(bytes[i]) << (8 * i);
  return value;
}

}  // namespace

void save_checkpoint(const WalkerState& state, std::ostream& out) {
  const GasketGraph& graph = state.graph();
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(graph.generation()));
  put_le<std::uint32_t>(out, graph.boundary() == Boundary::Periodic ? 0u : 1u);
  put_le<std::uint64_t>(out, state.time());
  put_le<std::uint64_t>(out, graph.port_count());
  const auto amps = state.amplitudes();
  for (const std::uint32_t slot : graph.port_slots()) {
    put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(amps[slot].real()));
    put_le<std::uint64_t>(out, std::bit_cast<std::uint64_t>(amps[slot].imag()));
  }
}

WalkerState load_checkpoint(const GasketGraph& graph, std::istream& in) {
  const auto generation = get_le<std::uint32_t>(in);
  const auto boundary = get_le<std::uint32_t>(in);
  const auto time = get_le<std::uint64_t>(in);
  const auto ports = get_le<std::uint64_t>(in);
  const std::uint32_t expected_bc = graph.boundary() == Boundary::Periodic ? 0u : 1u;
  if (generation != static_cast<std::uint32_t>(graph.generation()) || boundary != expected_bc ||
      ports != graph.port_count()) {
    throw StateError("checkpoint header (g=" + std::to_string(generation) +
                     ", boundary=" + std::to_string(boundary) +
                     ", ports=" + std::to_string(ports) + ") does not match the graph");
  }
  WalkerState state(graph);
  auto amps = state.amplitudes();
  for (const std::uint32_t slot : graph.port_slots()) {
    const double re = std::bit_cast<double>(get_le<std::uint64_t>(in));
    const double im = std::bit_cast<double>(get_le<std::uint64_t>(in));
    amps[slot] = {re, im};
  }
  state.set_time(time);
  return state;
}

}  // namespace qwg
