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

#include "tfim/optimizers/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tfim {

void NelderMeadConfig::validate() const {
  if (!(simplex_scale > 0.0)) throw std::invalid_argument("nelder_mead: simplex_scale must be positive");
  if (!(x_tolerance >= 0.0) || !(f_tolerance >= 0.0)) {
    throw std::invalid_argument("nelder_mead: tolerances must be non-negative");
  }
  if (max_evaluations < 1) throw std::invalid_argument("nelder_mead: max_evaluations must be >= 1");
}

namespace {

using Point = std::vector<double>;

Point affine(const Point& base, const Point& toward, double t) {
  // base + t * (toward - base)
  Point out(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) out[i] = base[i] + t * (toward[i] - base[i]);
  return out;
}

}  // namespace

NelderMeadResult nelder_mead(const Objective& f, std::span<const double> x0, const NelderMeadConfig& config) {
  config.validate();
  if (x0.empty()) throw std::invalid_argument("nelder_mead: empty starting point");

  const std::size_t n = x0.size();
  NelderMeadResult result;
  auto eval = [&](const Point& p) {
    ++result.evaluations;
    return f(p);
  };

  std::vector<Point> vertex(n + 1, Point(x0.begin(), x0.end()));
  std::vector<double> value(n + 1);
  for (std::size_t i = 1; i <= n; ++i) vertex[i][i - 1] += config.simplex_scale;
  for (std::size_t i = 0; i <= n; ++i) value[i] = eval(vertex[i]);

  std::vector<std::size_t> order(n + 1);
  while (true) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](auto a, auto b) { return value[a] < value[b]; });
    {
      std::vector<Point> v(n + 1);
      std::vector<double> fv(n + 1);
      for (std::size_t i = 0; i <= n; ++i) {
        v[i] = std::move(vertex[order[i]]);
        fv[i] = value[order[i]];
      }
      vertex = std::move(v);
      value = std::move(fv);
    }

    const double spread = value[n] - value[0];
    double diameter = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t k = 0; k < n; ++k) diameter = std::max(diameter, std::abs(vertex[i][k] - vertex[0][k]));
    }
    if (spread == 0.0 || (spread <= config.f_tolerance && diameter <= config.x_tolerance)) {
      result.converged = true;
      break;
    }
    if (result.evaluations >= config.max_evaluations) break;

    Point centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) centroid[k] += vertex[i][k] / static_cast<double>(n);
    }

    const Point reflected = affine(centroid, vertex[n], -1.0);
    const double f_reflected = eval(reflected);

    if (f_reflected < value[0]) {
      const Point expanded = affine(centroid, vertex[n], -2.0);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        vertex[n] = expanded;
        value[n] = f_expanded;
      } else {
        vertex[n] = reflected;
        value[n] = f_reflected;
      }
      continue;
    }
    if (f_reflected < value[n - 1]) {
      vertex[n] = reflected;
      value[n] = f_reflected;
      continue;
    }

    bool shrink = false;
    if (f_reflected < value[n]) {
      const Point outside = affine(centroid, reflected, 0.5);
      const double f_outside = eval(outside);
      if (f_outside <= f_reflected) {
        vertex[n] = outside;
        value[n] = f_outside;
      } else {
        shrink = true;
      }
    } else {
      const Point inside = affine(centroid, vertex[n], 0.5);
      const double f_inside = eval(inside);
      if (f_inside < value[n]) {
        vertex[n] = inside;
        value[n] = f_inside;
      } else {
        shrink = true;
      }
    }
    if (shrink) {
      for (std::size_t i = 1; i <= n; ++i) {
        vertex[i] = affine(vertex[0], vertex[i], 0.5);
        value[i] = eval(vertex[i]);
      }
    }
  }

  result.x = vertex[0];
  result.f = value[0];
  return result;
}

}  // namespace tfim
