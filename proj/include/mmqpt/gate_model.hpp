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

// Fast evaluation of the measurement matrix for many parameter vectors.
//
// Amplitudes in the model never depend on tau; only wavepacket labels do, and
// every label is an integer combination of the tau values. Each (input,
// basis) pair is therefore evolved once with symbolic tallies, and every
// detection probability becomes a fixed sum
//
//     P = sum_k w_k exp(-((dc_k . tau)^2 + (dt_k . tau)^2) / 4)
//
// over pairs of surviving path terms, where dc and dt are the tally
// differences of the control-side and target-side photons.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "mmqpt/circuit.hpp"
#include "mmqpt/error.hpp"
#include "mmqpt/fock.hpp"
#include "mmqpt/meas_matrix.hpp"

namespace mmqpt {

class CompiledGateModel {
 public:
  explicit CompiledGateModel(const Circuit& circuit) : tau_count_(circuit.tau_count()) {
    require_dual_rail(circuit);
    const auto& inputs = matrix_inputs();
    for (int r = 0; r < 8; ++r) {
      std::map<Pattern, std::uint32_t> index;
      for (int b = 0; b < 2; ++b) {
        const auto selected = evolve_and_measure(circuit, prepare_input<TauTally>(circuit, inputs[r]),
                                                 b == 0 ? Basis::Z : Basis::X,
                                                 [](int i) { return TauTally::unit(i); });
        compile_block(circuit, selected, rows_[r], rows_[r].blocks[b], index);
      }
    }
  }

  int tau_count() const noexcept { return tau_count_; }

  /// Conditional probabilities for row r (8 values, Z block then X block).
  void evaluate_row(int r, std::span<const double> tau, std::span<double, 8> out) const {
    check_arity(tau);
    const Row& row = rows_[static_cast<std::size_t>(r)];
    double* ov = scratch(row.patterns.size());
    for (std::size_t k = 0; k < row.patterns.size(); ++k) ov[k] = row.patterns[k].overlap(tau);
    for (int b = 0; b < 2; ++b) {
      std::array<double, 4> raw{};
      double success = 0.0;
      for (int o = 0; o < 4; ++o) {
        double p = 0.0;
        for (const auto& wp : row.blocks[b][o]) p += wp.weight * ov[wp.pattern];
        raw[o] = std::clamp(p, 0.0, 1.0);
        success += raw[o];
      }
      if (success < kMinSuccessProbability) {
        throw NumericalError(std::string("degenerate post-selection for input ") + MeasMatrix::kRowLabels[r]);
      }
      for (int o = 0; o < 4; ++o) out[4 * b + o] = raw[o] / success;
    }
  }

  MeasMatrix evaluate(std::span<const double> tau) const {
    MeasMatrix m;
    std::array<double, 8> row{};
    for (int r = 0; r < 8; ++r) {
      evaluate_row(r, tau, row);
      for (int c = 0; c < 8; ++c) m(r, c) = row[c];
    }
    return m;
  }

  /// Number of distinct Gaussian patterns per row; exposed for diagnostics.
  std::size_t pattern_count(int r) const { return rows_[static_cast<std::size_t>(r)].patterns.size(); }

 private:
  // Tally difference vectors for the control and target photons, each
  // reduced to a canonical sign; the overlap depends only on their squares.
  struct Pattern {
    std::array<std::int8_t, kMaxTauIndex> dc{};
    std::array<std::int8_t, kMaxTauIndex> dt{};

    double overlap(std::span<const double> tau) const noexcept {
      double a = 0.0, b = 0.0;
      for (std::size_t i = 0; i < tau.size(); ++i) {
        a += dc[i] * tau[i];
        b += dt[i] * tau[i];
      }
      return std::exp(-0.25 * (a * a + b * b));
    }
    friend auto operator<=>(const Pattern&, const Pattern&) = default;
  };

  struct WeightedPattern {
    std::uint32_t pattern;
    double weight;
  };

  using Block = std::array<std::vector<WeightedPattern>, 4>;

  struct Row {
    std::vector<Pattern> patterns;
    std::array<Block, 2> blocks;
  };

  static std::array<std::int8_t, kMaxTauIndex> difference(const TauTally& a, const TauTally& b) {
    std::array<std::int8_t, kMaxTauIndex> d{};
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = static_cast<std::int8_t>(a.counts[i] - b.counts[i]);
    // Canonical sign: first nonzero entry positive.
    for (auto v : d) {
      if (v == 0) continue;
      if (v < 0) {
        for (auto& x : d) x = static_cast<std::int8_t>(-x);
      }
      break;
    }
    return d;
  }

  static void compile_block(const Circuit& c, const TwoPhotonState<TauTally>& s, Row& row, Block& block,
                            std::map<Pattern, std::uint32_t>& index) {
    struct Entry {
      int outcome;
      Complex amplitude;
      TauTally control, target;
    };
    auto rail = [](std::span<const ModeId> g, ModeId m) -> int {
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (g[i] == m) return static_cast<int>(i);
      }
      return -1;
    };
    std::vector<Entry> entries;
    for (const auto& t : s.terms()) {
      int cr = rail(c.control_modes(), t.first.mode);
      Entry e;
      if (cr >= 0) {
        e = {2 * cr + rail(c.target_modes(), t.second.mode), t.amplitude, t.first.label, t.second.label};
      } else {
        cr = rail(c.control_modes(), t.second.mode);
        e = {2 * cr + rail(c.target_modes(), t.first.mode), t.amplitude, t.second.label, t.first.label};
      }
      entries.push_back(e);
    }
    std::array<std::map<std::uint32_t, double>, 4> acc;
    for (std::size_t p = 0; p < entries.size(); ++p) {
      for (std::size_t q = p; q < entries.size(); ++q) {
        if (entries[p].outcome != entries[q].outcome) continue;
        double w = (std::conj(entries[q].amplitude) * entries[p].amplitude).real();
        if (q != p) w *= 2.0;
        Pattern pat{difference(entries[p].control, entries[q].control),
                    difference(entries[p].target, entries[q].target)};
        if (pat.dt < pat.dc) std::swap(pat.dc, pat.dt);
        auto [it, inserted] = index.try_emplace(pat, static_cast<std::uint32_t>(row.patterns.size()));
        if (inserted) row.patterns.push_back(pat);
        acc[static_cast<std::size_t>(entries[p].outcome)][it->second] += w;
      }
    }
    for (int o = 0; o < 4; ++o) {
      for (const auto& [pat, w] : acc[o]) {
        if (w != 0.0) block[o].push_back({pat, w});
      }
    }
  }

  void check_arity(std::span<const double> tau) const {
    if (static_cast<int>(tau.size()) != tau_count_) {
      throw ValidationError("model needs " + std::to_string(tau_count_) + " tau values, got " +
                            std::to_string(tau.size()));
    }
  }

  static double* scratch(std::size_t n) {
    thread_local std::vector<double> buf;
    if (buf.size() < n) buf.resize(n);
    return buf.data();
  }

  int tau_count_;
  std::array<Row, 8> rows_;
};

/// Compiled model of the CNOT network, built on first use.
inline const CompiledGateModel& cnot_model() {
  static const CompiledGateModel model(build_cnot());
  return model;
}

/// Model-predicted measurement matrix for the CNOT at the given parameters.
inline MeasMatrix model_matrix(const TauParams& tau) { return cnot_model().evaluate(tau.span()); }

/// Same matrix evaluated directly with concrete displacement labels, for any
/// dual-rail circuit. Slower; used to cross-check the compiled path.
inline MeasMatrix model_matrix_direct(const Circuit& c, std::span<const double> tau) {
  MeasMatrix m;
  const auto& inputs = matrix_inputs();
  for (int r = 0; r < 8; ++r) {
    for (int b = 0; b < 2; ++b) {
      const auto d = simulate(c, tau, inputs[r], b == 0 ? Basis::Z : Basis::X);
      for (int o = 0; o < 4; ++o) m(r, 4 * b + o) = d.conditional[o];
    }
  }
  return m;
}

}  // namespace mmqpt
