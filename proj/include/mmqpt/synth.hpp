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

// Synthetic coincidence data with counting noise.
//
// Each (input, measurement basis) block is an independent multinomial draw of
// `counts` events over its four outcomes, reported as frequencies. Fixing
// the block total keeps every block normalised, as post-selected conditional
// frequencies are. A Poissonian total of c events has relative spread
// 1/sqrt(c); at c = 4600 that is 1.47 %.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>

#include "mmqpt/error.hpp"
#include "mmqpt/meas_matrix.hpp"

namespace mmqpt {

inline double poisson_relative_sigma(double counts) { return 1.0 / std::sqrt(counts); }

inline MeasMatrix synthesize(const MeasMatrix& model, std::int64_t counts, std::uint64_t seed) {
  if (counts < 1) throw ValidationError("counts per block must be at least 1");
  validate(model, kModelBlockTolerance);
  std::mt19937_64 rng(seed);
  MeasMatrix out;
  for (int r = 0; r < 8; ++r) {
    for (int b = 0; b < 2; ++b) {
      // Sequential conditional binomials.
      std::int64_t remaining = counts;
      double mass = 1.0;
      for (int o = 0; o < 4; ++o) {
        const double p = std::max(model(r, 4 * b + o), 0.0);
        std::int64_t n = remaining;
        if (o < 3) {
          const double q = mass > 0.0 ? std::clamp(p / mass, 0.0, 1.0) : 0.0;
          n = std::binomial_distribution<std::int64_t>(remaining, q)(rng);
        }
        out(r, 4 * b + o) = static_cast<double>(n) / static_cast<double>(counts);
        remaining -= n;
        mass -= p;
      }
    }
  }
  return out;
}

}  // namespace mmqpt
