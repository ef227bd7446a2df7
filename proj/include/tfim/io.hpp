// Copyright 2026 The tfim-control Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <vector>

namespace tfim {

/// 12 significant digits, '.' separator, independent of the global locale.
inline std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 12);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

/// Full round-trip precision, used where values are read back (manifests,
/// resumable cell files).
inline std::string format_exact(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

inline std::string join_numbers(const std::vector<double>& xs, char sep = ';') {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += sep;
    out += format_number(xs[i]);
  }
  return out;
}

}  // namespace tfim
