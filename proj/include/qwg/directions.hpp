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

#include <array>
#include <cstdint>

namespace qwg {

/// Number of coin labels available to every vertex of the embedding.
inline constexpr int kDirections = 6;

/// Lattice displacement and flip-flop partner for each coin label.
///
/// Label k moves a walker by (dx[k], dy[k]) on the half-grid; arriving
/// walkers carry the label pointing back, opposite(k) = (k + 3) mod 6.
struct DirectionTable {
  static constexpr std::array<int, kDirections> dx{2, 1, -1, -2, -1, 1};
  static constexpr std::array<int, kDirections> dy{0, 1, 1, 0, -1, -1};

  static constexpr int opposite(int k) { return (k + 3) % kDirections; }

  /// Label whose displacement is (ddx, ddy), or -1 if none.
  static constexpr int from_displacement(int ddx, int ddy) {
    for (int k = 0; k < kDirections; ++k) {
      if (dx[k] == ddx && dy[k] == ddy) return k;
    }
    return -1;
  }
};

/// Set of coin labels as a bitmask, bit k for label k.
using DirectionMask = std::uint8_t;

}  // namespace qwg
