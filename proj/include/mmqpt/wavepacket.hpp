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

// Photon wavepacket displacement labels and their Gaussian overlaps.
//
// Every photon carries a wavepacket psi(k) = pi^{-1/4} exp(-k^2 / 2) over
// each internal degree of freedom (unit bandwidth). A displacement shifts
// the wavepacket's centre; two photons displaced by a and b have overlap
//
//     <psi_a | psi_b> = exp(-|a - b|^2 / 4).
//
// The bandwidth convention fixes the scale of every displacement used in
// the library: a displacement of 1 means one inverse photon bandwidth under
// this particular Gaussian. Parameter values quoted elsewhere under a
// different width convention have to be rescaled before use.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mmqpt/error.hpp"

namespace mmqpt {

/// Wavepacket displacement in units of inverse photon bandwidth.
///
/// Trivially copyable with inline storage; the dimensionality is a runtime
/// property so mixing labels of different dimension is reported as an error
/// rather than silently broadcast.
class Displacement {
 public:
  static constexpr std::size_t kMaxDims = 8;

  /// One-dimensional zero displacement.
  constexpr Displacement() noexcept = default;

  explicit Displacement(double scalar) : dims_(1) {
    components_[0] = scalar;
    check_finite();
  }

  Displacement(std::initializer_list<double> components)
      : Displacement(std::span<const double>(components.begin(), components.size())) {}

  explicit Displacement(std::span<const double> components) : dims_(components.size()) {
    if (components.empty() || components.size() > kMaxDims) {
      throw ValidationError("displacement dimensionality must be in [1, " +
                            std::to_string(kMaxDims) + "], got " +
                            std::to_string(components.size()));
    }
    std::copy(components.begin(), components.end(), components_.begin());
    check_finite();
  }

  static Displacement zero(std::size_t dims) {
    std::array<double, kMaxDims> z{};
    return Displacement(std::span<const double>(z.data(), dims));
  }

  std::size_t dims() const noexcept { return dims_; }
  double operator[](std::size_t i) const noexcept { return components_[i]; }
  std::span<const double> components() const noexcept { return {components_.data(), dims_}; }

  double squared_norm() const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < dims_; ++i) s += components_[i] * components_[i];
    return s;
  }
  double norm() const noexcept { return std::sqrt(squared_norm()); }

  Displacement& operator+=(const Displacement& other) {
    require_same_dims(*this, other);
    for (std::size_t i = 0; i < dims_; ++i) components_[i] += other.components_[i];
    return *this;
  }
  Displacement& operator-=(const Displacement& other) {
    require_same_dims(*this, other);
    for (std::size_t i = 0; i < dims_; ++i) components_[i] -= other.components_[i];
    return *this;
  }
  friend Displacement operator+(Displacement a, const Displacement& b) { return a += b; }
  friend Displacement operator-(Displacement a, const Displacement& b) { return a -= b; }
  friend Displacement operator-(Displacement a) noexcept {
    for (std::size_t i = 0; i < a.dims_; ++i) a.components_[i] = -a.components_[i];
    return a;
  }

  friend bool operator==(const Displacement& a, const Displacement& b) noexcept {
    return a.dims_ == b.dims_ && std::equal(a.components_.begin(), a.components_.begin() + a.dims_,
                                            b.components_.begin());
  }
  // Orders by dimensionality first, then lexicographically. Components are
  // finite, so the weak order of doubles is total here.
  friend std::weak_ordering operator<=>(const Displacement& a, const Displacement& b) noexcept {
    if (auto c = a.dims_ <=> b.dims_; c != 0) return c;
    for (std::size_t i = 0; i < a.dims_; ++i) {
      if (a.components_[i] < b.components_[i]) return std::weak_ordering::less;
      if (a.components_[i] > b.components_[i]) return std::weak_ordering::greater;
    }
    return std::weak_ordering::equivalent;
  }

  friend void require_same_dims(const Displacement& a, const Displacement& b) {
    if (a.dims_ != b.dims_) {
      throw ValidationError("displacement dimension mismatch: " + std::to_string(a.dims_) +
                            " vs " + std::to_string(b.dims_));
    }
  }

 private:
  void check_finite() const {
    for (std::size_t i = 0; i < dims_; ++i) {
      if (!std::isfinite(components_[i])) throw ValidationError("displacement component is not finite");
    }
  }

  std::array<double, kMaxDims> components_{};
  std::size_t dims_ = 1;
};

/// Overlap of two displaced unit-bandwidth Gaussian wavepackets, in [0, 1].
inline double overlap(const Displacement& a, const Displacement& b) {
  require_same_dims(a, b);
  double d2 = 0.0;
  for (std::size_t i = 0; i < a.dims(); ++i) {
    const double d = a[i] - b[i];
    d2 += d * d;
  }
  return std::exp(-0.25 * d2);
}

/// Scalar overlap for the one-dimensional fast paths.
inline double overlap(double delta) noexcept { return std::exp(-0.25 * delta * delta); }

/// Collapses a multi-component displacement onto a single axis of the same
/// length. Gate behaviour depends only on overlaps, which are invariant under
/// rotations of the degree-of-freedom axes.
inline Displacement reduce_to_scalar(const Displacement& d) { return Displacement(d.norm()); }

/// Matrix of pairwise wavepacket overlaps. Symmetric, unit diagonal, PSD.
struct OverlapGram {
  Eigen::MatrixXd entries;

  Eigen::Index size() const noexcept { return entries.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries(i, j); }

  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(entries, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
  }
};

inline OverlapGram gram(std::span<const Displacement> labels) {
  if (labels.empty()) throw ValidationError("gram: label list is empty");
  const auto n = static_cast<Eigen::Index>(labels.size());
  OverlapGram g{Eigen::MatrixXd::Identity(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    require_same_dims(labels[0], labels[i]);
    for (Eigen::Index j = 0; j < i; ++j) {
      const double o = overlap(labels[i], labels[j]);
      g.entries(i, j) = o;
      g.entries(j, i) = o;
    }
  }
  return g;
}

}  // namespace mmqpt
