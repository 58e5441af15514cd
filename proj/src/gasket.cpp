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

#include "qwg/gasket.hpp"

#include <cmath>
#include <deque>
#include <ostream>
#include <stdexcept>
#include <string>

#include "qwg/errors.hpp"

namespace qwg {

std::string_view to_string(Boundary bc) {
  return bc == Boundary::Periodic ? "periodic" : "reflective";
}

Boundary parse_boundary(std::string_view text) {
  if (text == "periodic") return Boundary::Periodic;
  if (text == "reflective") return Boundary::Reflective;
  throw std::invalid_argument("unknown boundary condition '" + std::string(text) +
                              "' (expected periodic or reflective)");
}

double fractal_dimension() { return std::log(3.0) / std::log(2.0); }

std::size_t expected_vertex_count(int generation) {
  std::size_t p = 1;
  for (int i = 0; i < generation; ++i) p *= 3;
  return 3 * (p + 1) / 2;
}

namespace {

bool contains_at(int g, long long a, long long b, long long x, long long y) {
  const long long half = 1LL << g;  // height of this gasket
  if (y < b || y > b + half) return false;
  if (y - b > x - a || y - b > a + 2 * half - x) return false;
  if (g == 0) {
    return (y == b && (x == a || x == a + 2)) || (y == b + 1 && x == a + 1);
  }
  const long long q = half / 2;
  return contains_at(g - 1, a, b, x, y) || contains_at(g - 1, a + half, b, x, y) ||
         contains_at(g - 1, a + q, b + q, x, y);
}

// Anchors (bottom-left corners) of all generation-0 triangles.
void collect_cells(int g, int a, int b, std::vector<Vertex>& out) {
  if (g == 0) {
    out.push_back({a, b});
    return;
  }
  const int half = 1 << g;
  const int q = half / 2;
  collect_cells(g - 1, a, b, out);
  collect_cells(g - 1, a + half, b, out);
  collect_cells(g - 1, a + q, b + q, out);
}

}  // namespace

bool contains(int generation, long long x, long long y) {
  if (generation < 0 || generation > 40) return false;
  return contains_at(generation, 0, 0, x, y);
}

GasketGraph::GasketGraph(GasketSpec spec) : spec_(spec) {
  if (spec.generation < 0 || spec.generation > 14) {
    throw std::invalid_argument("generation must lie in [0, 14], got " +
                                std::to_string(spec.generation));
  }
  const int g = spec.generation;
  height_ = 1 << g;
  width_ = 2 * height_;
  corners_ = {Vertex{0, 0}, Vertex{height_, height_}, Vertex{width_, 0}};

  grid_.assign(static_cast<std::size_t>(height_ + 1) * (width_ + 1), -1);
  std::vector<Vertex> cells;
  collect_cells(g, 0, 0, cells);
  auto cell_at = [&](int x, int y) -> std::int32_t& {
    return grid_[static_cast<std::size_t>(y) * (width_ + 1) + x];
  };
  for (const auto& c : cells) {
    cell_at(c.x, c.y) = 0;
    cell_at(c.x + 2, c.y) = 0;
    cell_at(c.x + 1, c.y + 1) = 0;
  }
  for (int y = 0; y <= height_; ++y) {
    for (int x = 0; x <= width_; ++x) {
      if (cell_at(x, y) == 0) {
        cell_at(x, y) = static_cast<std::int32_t>(vertices_.size());
        vertices_.push_back({x, y});
      }
    }
  }

  links_.assign(vertices_.size() * kDirections, Link{});
  for (const auto& c : cells) {
    const std::array<Vertex, 3> tri{c, Vertex{c.x + 2, c.y}, Vertex{c.x + 1, c.y + 1}};
    for (const auto& u : tri) {
      for (const auto& w : tri) {
        if (u == w) continue;
        const int k = DirectionTable::from_displacement(w.x - u.x, w.y - u.y);
        links_[static_cast<std::size_t>(cell_at(u.x, u.y)) * kDirections + k] =
            Link{cell_at(w.x, w.y), static_cast<std::int8_t>(DirectionTable::opposite(k))};
      }
    }
  }

  wire_corners();

  masks_.assign(vertices_.size(), 0);
  slot_to_port_.assign(links_.size(), -1);
  for (std::size_t slot = 0; slot < links_.size(); ++slot) {
    if (!links_[slot].valid()) continue;
    masks_[slot / kDirections] |= static_cast<DirectionMask>(1u << (slot % kDirections));
    slot_to_port_[slot] = static_cast<std::int32_t>(port_slots_.size());
    port_slots_.push_back(static_cast<std::uint32_t>(slot));
  }
}

void GasketGraph::wire_corners() {
  const std::size_t left = index(corners_[0]);
  const std::size_t top = index(corners_[1]);
  const std::size_t right = index(corners_[2]);
  auto slot = [](std::size_t v, int k) { return v * kDirections + static_cast<std::size_t>(k); };
  auto pair = [&](std::size_t u, int ku, std::size_t w, int kw) {
    links_[slot(u, ku)] = Link{static_cast<std::int32_t>(w), static_cast<std::int8_t>(kw)};
    links_[slot(w, kw)] = Link{static_cast<std::int32_t>(u), static_cast<std::int8_t>(ku)};
  };

  if (spec_.boundary == Boundary::Periodic) {
    // The six printed wrap rules, closed under (k + 3) mod 6.
    pair(left, 3, right, 0);
    pair(left, 4, top, 1);
    pair(top, 2, right, 5);
    return;
  }

  // Reflective: each corner keeps its two lattice edges but carries them
  // on the labels the printed rules assign, {3,4}, {1,2}, {0,5}.
  struct Relabel {
    std::size_t corner;
    int from;
    int to;
  };
  const std::array<Relabel, 6> moves{{{left, 1, 3},
                                      {left, 0, 4},
                                      {top, 4, 1},
                                      {top, 5, 2},
                                      {right, 2, 0},
                                      {right, 3, 5}}};
  std::array<Link, 6> saved{};
  for (std::size_t i = 0; i < moves.size(); ++i) {
    saved[i] = links_[slot(moves[i].corner, moves[i].from)];
    links_[slot(moves[i].corner, moves[i].from)] = Link{};
  }
  // At g = 0 the corners are adjacent, so far ends may be relabeled too.
  auto relabeled = [&](std::size_t v, int k) {
    for (const auto& m : moves) {
      if (m.corner == v && m.from == k) return m.to;
    }
    return k;
  };
  for (std::size_t i = 0; i < moves.size(); ++i) {
    const Link far = saved[i];
    const auto w = static_cast<std::size_t>(far.vertex);
    pair(moves[i].corner, moves[i].to, w, relabeled(w, far.arrival));
  }
}

std::optional<std::size_t> GasketGraph::find(Vertex v) const {
  if (v.x < 0 || v.y < 0 || v.x > width_ || v.y > height_) return std::nullopt;
  const std::int32_t i = grid_[static_cast<std::size_t>(v.y) * (width_ + 1) + v.x];
  if (i < 0) return std::nullopt;
  return static_cast<std::size_t>(i);
}

std::size_t GasketGraph::index(Vertex v) const {
  if (auto i = find(v)) return *i;
  throw UnknownVertex("(" + std::to_string(v.x) + "," + std::to_string(v.y) +
                      ") is not a vertex of the generation-" +
                      std::to_string(spec_.generation) + " gasket");
}

int GasketGraph::degree(std::size_t v) const {
  int d = 0;
  for (DirectionMask m = masks_[v]; m != 0; m &= static_cast<DirectionMask>(m - 1)) ++d;
  return d;
}

bool GasketGraph::is_corner(std::size_t v) const {
  const Vertex& p = vertices_[v];
  return p == corners_[0] || p == corners_[1] || p == corners_[2];
}

GasketGraph build_gasket(GasketSpec spec) { return GasketGraph(spec); }

std::vector<int> direction_set(const GasketGraph& graph, Vertex v) {
  const std::size_t i = graph.index(v);
  std::vector<int> out;
  for (int k = 0; k < kDirections; ++k) {
    if (graph.mask(i) & (1u << k)) out.push_back(k);
  }
  return out;
}

std::vector<int> graph_distances(const GasketGraph& graph, std::size_t source) {
  std::vector<int> dist(graph.size(), -1);
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    for (int k = 0; k < kDirections; ++k) {
      const Link l = graph.link(u, k);
      if (!l.valid() || dist[static_cast<std::size_t>(l.vertex)] >= 0) continue;
      dist[static_cast<std::size_t>(l.vertex)] = dist[u] + 1;
      queue.push_back(static_cast<std::size_t>(l.vertex));
    }
  }
  return dist;
}

void write_adjacency_csv(const GasketGraph& graph, std::ostream& out) {
  out << "x,y,k,nx,ny,k_arr\n";
  for (std::size_t v = 0; v < graph.size(); ++v) {
    for (int k = 0; k < kDirections; ++k) {
      const Link l = graph.link(v, k);
      if (!l.valid()) continue;
      const Vertex& a = graph.vertex(v);
      const Vertex& b = graph.vertex(static_cast<std::size_t>(l.vertex));
      out << a.x << ',' << a.y << ',' << k << ',' << b.x << ',' << b.y << ','
          << static_cast<int>(l.arrival) << '\n';
    }
  }
}

}  // namespace qwg
