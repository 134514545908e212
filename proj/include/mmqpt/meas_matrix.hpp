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

#include <array>
#include <cmath>
#include <string>

#include <Eigen/Dense>

#include "mmqpt/error.hpp"

namespace mmqpt {

/// 8x8 matrix of conditional coincidence probabilities.
///
/// Rows are inputs |00>, |01>, |10>, |11>, |++>, |+->, |-+>, |-->. Columns
/// 0-3 are Z (x) Z outcomes 00, 01, 10, 11 and columns 4-7 are X (x) X
/// outcomes ++, +-, -+, --. Each row's Z block and X block sum to one.
struct MeasMatrix {
  using Entries = Eigen::Matrix<double, 8, 8, Eigen::RowMajor>;

  static constexpr int kRows = 8;
  static constexpr int kCols = 8;
  static constexpr std::array<const char*, 8> kRowLabels{"00", "01", "10", "11", "++", "+-", "-+", "--"};
  static constexpr std::array<const char*, 8> kColLabels{"00", "01", "10", "11", "++", "+-", "-+", "--"};

  Entries entries = Entries::Zero();

  double operator()(int r, int c) const { return entries(r, c); }
  double& operator()(int r, int c) { return entries(r, c); }

  /// Sum of row r over the Z block (block 0) or the X block (block 1).
  double block_sum(int r, int block) const { return entries.row(r).segment<4>(4 * block).sum(); }

  friend bool operator==(const MeasMatrix& a, const MeasMatrix& b) { return a.entries == b.entries; }
};

/// Block sums must lie within this of one for model-derived matrices.
inline constexpr double kModelBlockTolerance = 1e-9;
/// Looser block-sum tolerance admitting real, normalised count data.
inline constexpr double kDataBlockTolerance = 0.02;

/// Throws ValidationError unless all entries are finite probabilities and
/// every block sums to one within `block_tolerance`.
inline void validate(const MeasMatrix& m, double block_tolerance) {
  constexpr double kSlack = 1e-12;
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      const double v = m(r, c);
      if (!std::isfinite(v) || v < -kSlack || v > 1.0 + kSlack) {
        throw ValidationError("measurement entry (" + std::to_string(r) + ", " + std::to_string(c) +
                              ") = " + std::to_string(v) + " is not a probability");
      }
    }
    for (int b = 0; b < 2; ++b) {
      const double s = m.block_sum(r, b);
      if (std::abs(s - 1.0) > block_tolerance) {
        throw ValidationError(std::string("row ") + MeasMatrix::kRowLabels[r] + (b == 0 ? " Z" : " X") +
                              " block sums to " + std::to_string(s) + ", not 1");
      }
    }
  }
}

}  // namespace mmqpt
