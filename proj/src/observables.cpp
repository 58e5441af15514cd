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

#include "qwg/observables.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

#include "qwg/csv.hpp"
#include "qwg/errors.hpp"

namespace qwg {

namespace {

void require_same_generation(const GasketGraph& a, const GasketGraph& b) {
  if (a.generation() != b.generation()) {
    throw GraphMismatch("fields over generations " + std::to_string(a.generation()) + " and " +
                        std::to_string(b.generation()) + " cannot be combined");
  }
}

void accumulate_probability(const WalkerState& state, std::vector<double>& out) {
  const auto amps = state.amplitudes();
  for (std::size_t v = 0; v < out.size(); ++v) {
    const Amplitude* a = amps.data() + v * kDirections;
    out[v] += (std::norm(a[0]) + std::norm(a[1])) + (std::norm(a[2]) + std::norm(a[3])) +
              (std::norm(a[4]) + std::norm(a[5]));
  }
}

}  // namespace

ProbabilityField::ProbabilityField(const GasketGraph& graph, std::vector<double> values,
                                   std::uint64_t time)
    : graph_(&graph), values_(std::move(values)), time_(time) {
  if (values_.size() != graph.size()) {
    throw std::invalid_argument("field has " + std::to_string(values_.size()) +
                                " entries for a graph of " + std::to_string(graph.size()) +
                                " vertices");
  }
}

double ProbabilityField::total() const {
  double s = 0.0;
  for (const double p : values_) s += p;
  return s;
}

ProbabilityField probability(const WalkerState& state) {
  std::vector<double> p(state.graph().size(), 0.0);
  accumulate_probability(state, p);
  return ProbabilityField(state.graph(), std::move(p), state.time());
}

StdDevSample stddev(const ProbabilityField& field) {
  const auto& verts = field.graph().vertices();
  double mx = 0.0, my = 0.0;
  for (std::size_t v = 0; v < field.size(); ++v) {
    mx += verts[v].x * field[v];
    my += verts[v].y * field[v];
  }
  double vx = 0.0, vy = 0.0;
  for (std::size_t v = 0; v < field.size(); ++v) {
    const double dx = verts[v].x - mx;
    const double dy = verts[v].y - my;
    vx += dx * dx * field[v];
    vy += dy * dy * field[v];
  }
  vx = std::max(vx, 0.0);
  vy = std::max(vy, 0.0);
  return {field.time(), std::sqrt(vx), std::sqrt(vy), std::sqrt(vx + vy)};
}

StdDevSample stddev(const WalkerState& state) { return stddev(probability(state)); }

TimeAverager::TimeAverager(const GasketGraph& graph)
    : graph_(&graph), sum_(graph.size(), 0.0) {}

void TimeAverager::add(const ProbabilityField& field) {
  require_same_generation(*graph_, field.graph());
  for (std::size_t v = 0; v < sum_.size(); ++v) sum_[v] += field[v];
  ++count_;
}

void TimeAverager::add(const WalkerState& state) {
  require_same_generation(*graph_, state.graph());
  accumulate_probability(state, sum_);
  ++count_;
}

ProbabilityField TimeAverager::mean() const {
  if (count_ == 0) throw std::logic_error("time average of zero fields");
  std::vector<double> p(sum_);
  const double inv = 1.0 / static_cast<double>(count_);
  for (double& x : p) x *= inv;
  return ProbabilityField(*graph_, std::move(p), count_);
}

ProbabilityField time_averaged(const std::vector<ProbabilityField>& fields, std::size_t T) {
  if (T == 0) throw std::invalid_argument("time average needs T >= 1");
  if (fields.size() < T) {
    throw std::invalid_argument("time average over T=" + std::to_string(T) + " needs " +
                                std::to_string(T) + " fields, got " +
                                std::to_string(fields.size()));
  }
  TimeAverager acc(fields.front().graph());
  for (std::size_t t = 0; t < T; ++t) acc.add(fields[t]);
  return acc.mean();
}

double tvd(const ProbabilityField& p, const ProbabilityField& q) {
  require_same_generation(p.graph(), q.graph());
  double s = 0.0;
  for (std::size_t v = 0; v < p.size(); ++v) s += std::abs(p[v] - q[v]);
  return std::min(1.0, 0.5 * s);
}

std::vector<std::pair<int, double>> x_marginal(const ProbabilityField& field) {
  std::map<int, double> acc;
  const auto& verts = field.graph().vertices();
  for (std::size_t v = 0; v < field.size(); ++v) acc[verts[v].x] += field[v];
  return {acc.begin(), acc.end()};
}

void write_field_csv(const ProbabilityField& field, std::ostream& out) {
  CsvWriter csv(out);
  csv.header({"x", "y", "p"});
  const auto& verts = field.graph().vertices();
  for (std::size_t v = 0; v < field.size(); ++v) csv.row(verts[v].x, verts[v].y, field[v]);
}

void write_x_marginal_csv(const ProbabilityField& field, std::ostream& out) {
  CsvWriter csv(out);
  csv.header({"x", "p"});
  for (const auto& [x, p] : x_marginal(field)) csv.row(x, p);
}

}  // namespace qwg
