/**
 * Copyright 2026 The mmqpt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>

namespace mmqpt {

template <std::size_t N>
struct SimplexOptions {
  double lower = -1.0;
  double upper = 1.0;
  double initial_step = 0.25;
  double tolerance = 1e-6;  // simplex diameter
  int max_iterations = 2000;
};

template <std::size_t N>
struct SimplexResult {
  std::array<double, N> x{};
  double value = std::numeric_limits<double>::infinity();
  std::uint64_t evaluations = 0;
  int iterations = 0;
  bool converged = false;
};

/// Derivative-free Nelder-Mead minimisation inside the box [lower, upper]^N.
/// Trial points are clipped onto the box. Stops when the largest distance
/// from the best vertex falls below `tolerance` or after `max_iterations`.
/// The returned value never exceeds f(x0).
template <std::size_t N, class F>
SimplexResult<N> nelder_mead(F&& f, std::array<double, N> x0, const SimplexOptions<N>& opt) {
  using Point = std::array<double, N>;
  constexpr double kReflect = 1.0, kExpand = 2.0, kContract = 0.5, kShrink = 0.5;

  SimplexResult<N> res;
  auto clip = [&](Point p) {
    for (auto& v : p) v = std::clamp(v, opt.lower, opt.upper);
    return p;
  };
  auto eval = [&](const Point& p) {
    ++res.evaluations;
    return f(p);
  };

  std::array<Point, N + 1> pts;
  std::array<double, N + 1> val;
  pts[0] = clip(x0);
  val[0] = eval(pts[0]);
  for (std::size_t i = 0; i < N; ++i) {
    Point p = pts[0];
    // Step away from the nearer wall so the vertex stays distinct after clipping.
    p[i] += (p[i] + opt.initial_step <= opt.upper) ? opt.initial_step : -opt.initial_step;
    pts[i + 1] = clip(p);
    val[i + 1] = eval(pts[i + 1]);
  }

  std::array<std::size_t, N + 1> order;
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    std::array<Point, N + 1> p2;
    std::array<double, N + 1> v2;
    for (std::size_t i = 0; i <= N; ++i) {
      p2[i] = pts[order[i]];
      v2[i] = val[order[i]];
    }
    pts = p2;
    val = v2;
  };
  auto diameter = [&] {
    double d = 0.0;
    for (std::size_t i = 1; i <= N; ++i) {
      double s = 0.0;
      for (std::size_t j = 0; j < N; ++j) s += (pts[i][j] - pts[0][j]) * (pts[i][j] - pts[0][j]);
      d = std::max(d, std::sqrt(s));
    }
    return d;
  };
  auto along = [&](const Point& c, const Point& w, double t) {
    Point p;
    for (std::size_t j = 0; j < N; ++j) p[j] = c[j] + t * (c[j] - w[j]);
    return clip(p);
  };

  sort_simplex();
  while (res.iterations < opt.max_iterations) {
    if (diameter() < opt.tolerance) {
      res.converged = true;
      break;
    }
    ++res.iterations;
    Point centroid{};
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) centroid[j] += pts[i][j] / static_cast<double>(N);
    }
    const Point& worst = pts[N];
    const Point xr = along(centroid, worst, kReflect);
    const double fr = eval(xr);
    if (fr < val[0]) {
      const Point xe = along(centroid, worst, kExpand);
      const double fe = eval(xe);
      if (fe < fr) {
        pts[N] = xe;
        val[N] = fe;
      } else {
        pts[N] = xr;
        val[N] = fr;
      }
    } else if (fr < val[N - 1]) {
      pts[N] = xr;
      val[N] = fr;
    } else {
      const bool outside = fr < val[N];
      const Point xc = outside ? along(centroid, worst, kContract) : along(centroid, worst, -kContract);
      const double fc = eval(xc);
      if (fc < (outside ? fr : val[N])) {
        pts[N] = xc;
        val[N] = fc;
      } else {
        for (std::size_t i = 1; i <= N; ++i) {
          for (std::size_t j = 0; j < N; ++j) pts[i][j] = pts[0][j] + kShrink * (pts[i][j] - pts[0][j]);
          val[i] = eval(pts[i]);
        }
      }
    }
    sort_simplex();
  }
  res.x = pts[0];
  res.value = val[0];
  return res;
}

}  // namespace mmqpt
