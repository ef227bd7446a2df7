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

#include "tfim/optimizers/common.hpp"

#include <stdexcept>

namespace tfim {

void SearchBox::validate(bool need_resolution) const {
  if (lower.empty() || lower.size() != upper.size()) {
    throw std::invalid_argument("SearchBox: lower/upper must be non-empty and of equal length");
  }
  for (std::size_t i = 0; i < lower.size(); ++i) {
    if (!(lower[i] < upper[i])) throw std::invalid_argument("SearchBox: need lower < upper on every axis");
  }
  if (need_resolution) {
    if (resolution.size() != lower.size()) throw std::invalid_argument("SearchBox: one resolution per axis");
    for (int r : resolution) {
      if (r < 1) throw std::invalid_argument("SearchBox: empty grid");
    }
  }
}

double SearchBox::axis_value(std::size_t axis, int i) const {
  const int n = resolution.at(axis);
  if (n == 1) return lower[axis];
  if (i == n - 1) return upper[axis];
  return lower[axis] + (upper[axis] - lower[axis]) * i / (n - 1);
}

std::vector<double> finite_difference_gradient(const Objective& f, std::span<const double> x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("finite_difference_gradient: h must be positive");
  std::vector<double> point(x.begin(), x.end());
  std::vector<double> gradient(point.size());
  for (std::size_t i = 0; i < point.size(); ++i) {
    const double x0 = point[i];
    point[i] = x0 + h;
    const double up = f(point);
    point[i] = x0 - h;
    const double down = f(point);
    point[i] = x0;
    gradient[i] = (up - down) / (2.0 * h);
  }
  return gradient;
}

}  // namespace tfim
