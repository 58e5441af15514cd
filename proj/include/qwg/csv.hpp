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

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <type_traits>

namespace qwg {

/// Shortest decimal text that parses back to exactly `value`.
std::string format_double(double value);

/// Comma-separated rows with round-trip number formatting.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(&out) {}

  void header(std::initializer_list<std::string_view> columns);

  template <typename... Fields>
  void row(const Fields&... fields) {
    bool first = true;
    ((write_field(fields, first), first = false), ...);
    *out_ << '\n';
  }

 private:
  template <typename T>
  void write_field(const T& value, bool first) {
    if (!first) *out_ << ',';
    if constexpr (std::is_floating_point_v<T>) {
      *out_ << format_double(static_cast<double>(value));
    } else {
      *out_ << value;
    }
  }

  std::ostream* out_;
};

}  // namespace qwg
