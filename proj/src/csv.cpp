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

#include "qwg/csv.hpp"

#include <array>
#include <charconv>

namespace qwg {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  (void)ec;  // 32 bytes always suffice for a double
  return std::string(buf.data(), end);
}

void CsvWriter::header(std::initializer_list<std::string_view> columns) {
  bool first = true;
  for (const auto c : columns) {
    if (!first) *out_ << ',';
    *out_ << c;
    first = false;
  }
  *out_ << '\n';
}

}  // namespace qwg
