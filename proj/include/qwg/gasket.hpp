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
#include <compare>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "qwg/directions.hpp"

namespace qwg {

enum class Boundary { Periodic, Reflective };

std::string_view to_string(Boundary bc);
/// Parses "periodic" / "reflective" (case-sensitive). Throws std::invalid_argument.
Boundary parse_boundary(std::string_view text);

struct GasketSpec {
  int generation = 0;
  Boundary boundary = Boundary::Reflective;
};

/// Integer half-grid position; ordering is lexicographic by (y, x).
struct Vertex {
  int x = 0;
  int y = 0;

  friend bool operator==(const Vertex&, const Vertex&) = default;
  friend std::strong_ordering operator<=>(const Vertex& a, const Vertex& b) {
    if (auto c = a.y <=> b.y; c != 0) return c;
    return a.x <=> b.x;
  }
};

/// Hausdorff dimension of the gasket, log 3 / log 2. Metadata only.
double fractal_dimension();

/// 3(3^g + 1)/2.
std::size_t expected_vertex_count(int generation);

/// True iff (x, y) is a vertex of the generation-g gasket with corners
/// (0,0), (2^{g+1},0), (2^g,2^g).
bool contains(int generation, long long x, long long y);

/// Where a port leads: the neighbor vertex and the label the walker
/// arrives with. vertex < 0 marks a port that does not exist.
struct Link {
  std::int32_t vertex = -1;
  std::int8_t arrival = -1;

  bool valid() const { return vertex >= 0; }
};

/// Sierpinski gasket of a given generation with its port wiring.
///
/// Ports are (vertex, label) pairs laid out in slots 6*v + k. Internal
/// vertices own four ports; the three corners own four under Periodic
/// (two lattice edges plus two wrap edges) and two under Reflective.
/// Immutable after construction.
class GasketGraph {
 public:
  explicit GasketGraph(GasketSpec spec);

  const GasketSpec& spec() const { return spec_; }
  int generation() const { return spec_.generation; }
  Boundary boundary() const { return spec_.boundary; }

  std::size_t size() const { return vertices_.size(); }
  const std::vector<Vertex>& vertices() const { return vertices_; }
  const Vertex& vertex(std::size_t v) const { return vertices_[v]; }

  std::optional<std::size_t> find(Vertex v) const;
  /// Throws UnknownVertex.
  std::size_t index(Vertex v) const;

  DirectionMask mask(std::size_t v) const { return masks_[v]; }
  int degree(std::size_t v) const;
  Link link(std::size_t v, int k) const {
    return links_[v * kDirections + static_cast<std::size_t>(k)];
  }
  const std::vector<Link>& links() const { return links_; }

  /// Corners (0,0), (2^g,2^g), (2^{g+1},0) in that order.
  const std::array<Vertex, 3>& corners() const { return corners_; }
  bool is_corner(std::size_t v) const;

  /// Undirected edges, wrap edges included.
  std::size_t edge_count() const { return port_count() / 2; }

  // Compact port numbering (valid slots only, in slot order), used by the
  // dense operator and the checkpoint format.
  std::size_t port_count() const { return port_slots_.size(); }
  const std::vector<std::uint32_t>& port_slots() const { return port_slots_; }
  /// Compact index of a slot, or -1 for an invalid slot.
  std::int32_t compact_port(std::size_t slot) const { return slot_to_port_[slot]; }

 private:
  void wire_lattice();
  void wire_corners();

  GasketSpec spec_;
  int width_ = 0;   // 2^{g+1}
  int height_ = 0;  // 2^g
  std::vector<Vertex> vertices_;
  std::vector<std::int32_t> grid_;  // (height+1) x (width+1), -1 if absent
  std::vector<DirectionMask> masks_;
  std::vector<Link> links_;
  std::array<Vertex, 3> corners_{};
  std::vector<std::uint32_t> port_slots_;
  std::vector<std::int32_t> slot_to_port_;
};

GasketGraph build_gasket(GasketSpec spec);

/// Valid labels at v, ascending. Throws UnknownVertex.
std::vector<int> direction_set(const GasketGraph& graph, Vertex v);

/// Hop distance from source to every vertex over the port wiring
/// (wrap edges count under Periodic).
std::vector<int> graph_distances(const GasketGraph& graph, std::size_t source);

/// Debug dump: header then one "x,y,k,nx,ny,k_arr" line per valid port.
void write_adjacency_csv(const GasketGraph& graph, std::ostream& out);

}  // namespace qwg
