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

// Two-photon states in the extended Hilbert space.
//
// A state is a superposition of terms  amplitude * a+_{x} a+_{y} |0>, where
// each creation operator x = (spatial mode, wavepacket label). Amplitudes are
// coefficients of the raw operator product, so a doubly occupied mode with
// identical labels contributes |amplitude|^2 * 2 to the norm through the
// bosonic exchange term; no combinatorial factor is folded into storage.
//
// Linear optics acts only on mode indices and leaves labels alone; a tau-box
// shifts the label of whatever photon occupies its mode. Photodetection is
// insensitive to the label, so probabilities are Born-rule norms in which
// labels contribute wavepacket overlaps.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mmqpt/error.hpp"
#include "mmqpt/wavepacket.hpp"

namespace mmqpt {

using Complex = std::complex<double>;

/// Index of a spatial mode within a circuit's mode table.
struct ModeId {
  std::uint16_t index = 0;
  friend auto operator<=>(const ModeId&, const ModeId&) = default;
};

template <class Label>
struct Photon {
  ModeId mode;
  Label label;
  friend auto operator<=>(const Photon&, const Photon&) = default;
  friend bool operator==(const Photon&, const Photon&) = default;
};

/// One term of a two-photon superposition. `first <= second` always.
template <class Label>
struct PathTerm {
  Complex amplitude;
  Photon<Label> first;
  Photon<Label> second;

  bool same_key(const PathTerm& o) const { return first == o.first && second == o.second; }
  bool key_less(const PathTerm& o) const {
    if (auto c = first <=> o.first; c != 0) return c < 0;
    return (second <=> o.second) < 0;
  }
};

template <class Label>
PathTerm<Label> make_term(Complex amplitude, Photon<Label> a, Photon<Label> b) {
  if (b < a) std::swap(a, b);
  return {amplitude, std::move(a), std::move(b)};
}

/// Terms whose amplitude falls below this after merging are exact
/// cancellations up to round-off and are dropped.
inline constexpr double kAmplitudeCutoff = 1e-15;

template <class Label>
class TwoPhotonState {
 public:
  explicit TwoPhotonState(std::size_t mode_count) : mode_count_(mode_count) {}

  TwoPhotonState(std::size_t mode_count, std::vector<PathTerm<Label>> terms)
      : mode_count_(mode_count), terms_(std::move(terms)) {
    for (auto& t : terms_) {
      check_mode(t.first.mode);
      check_mode(t.second.mode);
      if (t.second < t.first) std::swap(t.first, t.second);
    }
    canonicalize();
  }

  std::size_t mode_count() const noexcept { return mode_count_; }
  std::span<const PathTerm<Label>> terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

  void check_mode(ModeId m) const {
    if (m.index >= mode_count_) {
      throw ValidationError("unknown mode index " + std::to_string(m.index) + " (state has " +
                            std::to_string(mode_count_) + " modes)");
    }
  }

  friend bool operator==(const TwoPhotonState& a, const TwoPhotonState& b) {
    if (a.mode_count_ != b.mode_count_ || a.terms_.size() != b.terms_.size()) return false;
    for (std::size_t i = 0; i < a.terms_.size(); ++i) {
      if (!a.terms_[i].same_key(b.terms_[i]) || a.terms_[i].amplitude != b.terms_[i].amplitude) {
        return false;
      }
    }
    return true;
  }

 private:
  // Sort by key, merge duplicates, drop cancelled terms.
  void canonicalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const PathTerm<Label>& a, const PathTerm<Label>& b) { return a.key_less(b); });
    std::size_t out = 0;
    for (std::size_t i = 0; i < terms_.size();) {
      PathTerm<Label> merged = terms_[i];
      std::size_t j = i + 1;
      for (; j < terms_.size() && terms_[j].same_key(merged); ++j) merged.amplitude += terms_[j].amplitude;
      if (std::abs(merged.amplitude) > kAmplitudeCutoff) terms_[out++] = std::move(merged);
      i = j;
    }
    terms_.resize(out);
  }

  std::size_t mode_count_;
  std::vector<PathTerm<Label>> terms_;
};

namespace detail {

template <class Label, class PhotonMap>
TwoPhotonState<Label> map_photons(const TwoPhotonState<Label>& s, PhotonMap&& map) {
  // map(photon, out) appends (photon', coefficient) pairs; at most two each.
  std::vector<PathTerm<Label>> out;
  out.reserve(s.terms().size() * 4);
  std::vector<std::pair<Photon<Label>, Complex>> xs, ys;
  for (const auto& t : s.terms()) {
    xs.clear();
    ys.clear();
    map(t.first, xs);
    map(t.second, ys);
    for (const auto& [px, cx] : xs) {
      for (const auto& [py, cy] : ys) out.push_back(make_term(t.amplitude * cx * cy, px, py));
    }
  }
  return TwoPhotonState<Label>(s.mode_count(), std::move(out));
}

}  // namespace detail

/// Beamsplitter between m1 and m2 with reflectivity eta. With the gray
/// (sign-inverting) surface on m2:
///     a+_{m1} -> sqrt(eta) a+_{m1} + sqrt(1-eta) a+_{m2}
///     a+_{m2} -> sqrt(1-eta) a+_{m1} - sqrt(eta) a+_{m2}
/// and symmetrically, the minus sign sits on the m1 -> m1 entry when the gray
/// surface faces m1. Labels pass through untouched.
template <class Label>
TwoPhotonState<Label> apply_beamsplitter(const TwoPhotonState<Label>& s, ModeId m1, ModeId m2, double eta,
                                         ModeId gray) {
  s.check_mode(m1);
  s.check_mode(m2);
  if (m1 == m2) throw ValidationError("beamsplitter modes must differ");
  if (gray != m1 && gray != m2) throw ValidationError("beamsplitter gray side must be one of its modes");
  if (!(eta >= 0.0 && eta <= 1.0)) throw ValidationError("beamsplitter reflectivity outside [0, 1]");
  const double r = std::sqrt(eta);
  const double t = std::sqrt(1.0 - eta);
  const double r1 = gray == m1 ? -r : r;
  const double r2 = gray == m2 ? -r : r;
  return detail::map_photons(s, [&](const Photon<Label>& p, auto& out) {
    if (p.mode == m1) {
      if (r1 != 0.0) out.emplace_back(Photon<Label>{m1, p.label}, r1);
      if (t != 0.0) out.emplace_back(Photon<Label>{m2, p.label}, t);
    } else if (p.mode == m2) {
      if (t != 0.0) out.emplace_back(Photon<Label>{m1, p.label}, t);
      if (r2 != 0.0) out.emplace_back(Photon<Label>{m2, p.label}, r2);
    } else {
      out.emplace_back(p, 1.0);
    }
  });
}

/// Beamsplitter with the gray surface on m2.
template <class Label>
TwoPhotonState<Label> apply_beamsplitter(const TwoPhotonState<Label>& s, ModeId m1, ModeId m2, double eta) {
  return apply_beamsplitter(s, m1, m2, eta, m2);
}

template <class Label>
TwoPhotonState<Label> apply_phase(const TwoPhotonState<Label>& s, ModeId m, double radians) {
  s.check_mode(m);
  const Complex phase = std::polar(1.0, radians);
  return detail::map_photons(s, [&](const Photon<Label>& p, auto& out) {
    out.emplace_back(p, p.mode == m ? phase : Complex(1.0));
  });
}

/// Displaces the wavepacket of every photon currently in mode m.
template <class Label>
TwoPhotonState<Label> apply_taubox(const TwoPhotonState<Label>& s, ModeId m, const Label& shift) {
  s.check_mode(m);
  return detail::map_photons(s, [&](const Photon<Label>& p, auto& out) {
    if (p.mode == m) {
      out.emplace_back(Photon<Label>{p.mode, p.label + shift}, 1.0);
    } else {
      out.emplace_back(p, 1.0);
    }
  });
}

/// Keeps terms with exactly one photon in group_a and one in group_b. Not
/// renormalised: the surviving norm is the success probability.
template <class Label>
TwoPhotonState<Label> post_select(const TwoPhotonState<Label>& s, std::span<const ModeId> group_a,
                                  std::span<const ModeId> group_b) {
  auto in = [](std::span<const ModeId> g, ModeId m) { return std::find(g.begin(), g.end(), m) != g.end(); };
  for (ModeId m : group_a) {
    if (in(group_b, m)) throw ValidationError("post-selection groups overlap");
  }
  std::vector<PathTerm<Label>> kept;
  for (const auto& t : s.terms()) {
    const bool a1 = in(group_a, t.first.mode), a2 = in(group_a, t.second.mode);
    const bool b1 = in(group_b, t.first.mode), b2 = in(group_b, t.second.mode);
    if ((a1 && b2) || (b1 && a2)) kept.push_back(t);
  }
  return TwoPhotonState<Label>(s.mode_count(), std::move(kept));
}

/// Sub-state with one photon in ma and one in mb (both in ma when equal).
template <class Label>
TwoPhotonState<Label> restrict_to(const TwoPhotonState<Label>& s, ModeId ma, ModeId mb) {
  s.check_mode(ma);
  s.check_mode(mb);
  if (mb < ma) std::swap(ma, mb);
  std::vector<PathTerm<Label>> kept;
  for (const auto& t : s.terms()) {
    if (t.first.mode == ma && t.second.mode == mb) kept.push_back(t);
  }
  return TwoPhotonState<Label>(s.mode_count(), std::move(kept));
}

/// Negative norms within this of zero are round-off and are clamped.
inline constexpr double kNormNegativityTolerance = 1e-12;

inline double clamp_norm(double n) {
  if (n < -kNormNegativityTolerance) {
    throw NumericalError("state norm is negative beyond round-off: " + std::to_string(n));
  }
  return std::max(n, 0.0);
}

/// Born-rule norm with a caller-supplied label overlap <q|p>.
///     sum_{p,q} conj(a_q) a_p ( <x_q|x_p><y_q|y_p> + <x_q|y_p><y_q|x_p> )
/// where single-photon overlaps vanish between different modes.
template <class Label, class LabelOverlap>
double norm_with(const TwoPhotonState<Label>& s, LabelOverlap&& label_overlap) {
  auto single = [&](const Photon<Label>& q, const Photon<Label>& p) -> double {
    return q.mode == p.mode ? label_overlap(q.label, p.label) : 0.0;
  };
  const auto terms = s.terms();
  double total = 0.0;
  for (std::size_t p = 0; p < terms.size(); ++p) {
    for (std::size_t q = 0; q < terms.size(); ++q) {
      const auto& tp = terms[p];
      const auto& tq = terms[q];
      const double inner = single(tq.first, tp.first) * single(tq.second, tp.second) +
                           single(tq.first, tp.second) * single(tq.second, tp.first);
      if (inner != 0.0) total += (std::conj(tq.amplitude) * tp.amplitude).real() * inner;
    }
  }
  return clamp_norm(total);
}

/// Norm of a state with concrete displacement labels. Label overlaps come
/// from the Gram matrix of the distinct labels present.
inline double norm(const TwoPhotonState<Displacement>& s) {
  std::vector<Displacement> labels;
  for (const auto& t : s.terms()) {
    labels.push_back(t.first.label);
    labels.push_back(t.second.label);
  }
  if (labels.empty()) return 0.0;
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  const OverlapGram g = gram(labels);
  auto index_of = [&](const Displacement& d) {
    return static_cast<Eigen::Index>(std::lower_bound(labels.begin(), labels.end(), d) - labels.begin());
  };
  return norm_with(s, [&](const Displacement& a, const Displacement& b) { return g(index_of(a), index_of(b)); });
}

/// Probability of detecting one photon in ma and one in mb; detectors do not
/// resolve the wavepacket label.
inline double outcome_probability(const TwoPhotonState<Displacement>& s, ModeId ma, ModeId mb) {
  return std::min(norm(restrict_to(s, ma, mb)), 1.0);
}

}  // namespace mmqpt
