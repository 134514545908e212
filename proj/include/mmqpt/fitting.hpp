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

// Minimax estimation of the five mismatch displacements from a measured
// coincidence matrix.
//
// The objective is the worst-case absolute deviation between data and model.
// It is a maximum of smooth functions, hence non-smooth, so it is minimised
// by multi-start Nelder-Mead: one start at tau = 0 followed by `restarts`
// starts drawn uniformly from the box |tau_i| <= bound with a seeded
// generator. Each start is re-seeded at its own optimum until it stops
// improving, which un-sticks simplices that collapse on a kink.

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "mmqpt/circuit.hpp"
#include "mmqpt/error.hpp"
#include "mmqpt/gate_model.hpp"
#include "mmqpt/meas_matrix.hpp"
#include "mmqpt/nelder_mead.hpp"
#include "mmqpt/tomography.hpp"

namespace mmqpt {

enum class FitMode { Global, PerInput };

inline const char* to_string(FitMode m) { return m == FitMode::Global ? "global" : "per-input"; }

/// Which matrix entries enter the objective. All by default.
using EntryMask = std::array<std::array<bool, 8>, 8>;

inline EntryMask full_mask() {
  EntryMask m;
  for (auto& row : m) row.fill(true);
  return m;
}

/// Rows 00..11, Z block only: the data a computational-basis experiment sees.
inline EntryMask computational_mask() {
  EntryMask m{};
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m[r][c] = true;
  }
  return m;
}

struct FitConfig {
  double bound = 3.0;
  int restarts = 32;
  std::uint64_t seed = 0;
  double tolerance = 1e-6;
  int max_iterations = 2000;
  double initial_step = 0.25;
  /// Re-seeded simplex runs per start after the first convergence.
  int polish_rounds = 4;
  FitMode mode = FitMode::Global;
  EntryMask mask = full_mask();

  void validate() const {
    if (!(bound > 0.0) || !std::isfinite(bound)) throw ValidationError("fit bound must be positive");
    if (restarts < 1) throw ValidationError("fit needs at least one restart");
    if (!(tolerance > 0.0)) throw ValidationError("fit tolerance must be positive");
    if (max_iterations < 1) throw ValidationError("fit needs at least one iteration");
    if (polish_rounds < 0) throw ValidationError("polish rounds must be non-negative");
  }
};

/// A perturbation of +-0.1 that moves the objective by less than this marks
/// the component as unconstrained by the data.
inline constexpr double kUnconstrainedProbe = 0.1;
inline constexpr double kUnconstrainedThreshold = 1e-8;

struct FitResult {
  FitMode mode = FitMode::Global;
  /// One parameter set (global) or one per matrix row (per-input).
  std::vector<TauParams> tau;
  double achieved_e_max = 0.0;
  double achieved_e_mean = 0.0;
  std::uint64_t objective_evaluations = 0;
  /// 0 is the tau = 0 start, 1..restarts the random starts, restarts + 1 the
  /// warm start from the global fit (per-input only). One entry per tau set.
  std::vector<int> restart_index_of_best;
  std::vector<std::array<bool, 5>> unconstrained;
  std::uint64_t seed = 0;
};

namespace detail {

using Point5 = std::array<double, 5>;

inline std::vector<Point5> start_points(const FitConfig& cfg) {
  std::vector<Point5> starts{Point5{}};
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> u(-cfg.bound, cfg.bound);
  for (int i = 0; i < cfg.restarts; ++i) {
    Point5 p;
    for (auto& v : p) v = u(rng);
    starts.push_back(p);
  }
  return starts;
}

struct StartOutcome {
  Point5 x{};
  double value = 0.0;
  int index = -1;
  std::uint64_t evaluations = 0;
};

// Runs every start, keeps the best; ties within 1e-12 go to the lower index.
template <class Objective>
StartOutcome multistart(Objective&& objective, std::span<const Point5> starts, const FitConfig& cfg) {
  SimplexOptions<5> opt{-cfg.bound, cfg.bound, cfg.initial_step, cfg.tolerance, cfg.max_iterations};
  StartOutcome best;
  best.value = std::numeric_limits<double>::infinity();
  std::uint64_t evaluations = 0;
  for (std::size_t s = 0; s < starts.size(); ++s) {
    auto r = nelder_mead<5>(objective, starts[s], opt);
    evaluations += r.evaluations;
    for (int round = 0; round < cfg.polish_rounds; ++round) {
      auto again = nelder_mead<5>(objective, r.x, opt);
      evaluations += again.evaluations;
      const bool improved = again.value < r.value;
      if (improved) r = again;
      if (!improved || r.value == 0.0) break;
    }
    if (!std::isfinite(r.value)) throw NumericalError("fit objective is not finite");
    if (r.value < best.value - 1e-12) best = {r.x, r.value, static_cast<int>(s), 0};
  }
  best.evaluations = evaluations;
  return best;
}

inline double masked_max_error(const MeasMatrix& data, const MeasMatrix& model, const EntryMask& mask) {
  double e = 0.0;
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      if (mask[r][c]) e = std::max(e, std::abs(data(r, c) - model(r, c)));
    }
  }
  return e;
}

inline double masked_mean_error(const MeasMatrix& data, const MeasMatrix& model, const EntryMask& mask) {
  double s = 0.0;
  int n = 0;
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) {
      if (mask[r][c]) {
        s += std::abs(data(r, c) - model(r, c));
        ++n;
      }
    }
  }
  return n == 0 ? 0.0 : s / n;
}

template <class Objective>
std::array<bool, 5> unconstrained_components(Objective&& objective, const Point5& x, double at_x) {
  std::array<bool, 5> flags{};
  for (std::size_t i = 0; i < 5; ++i) {
    bool flat = true;
    for (double sign : {1.0, -1.0}) {
      Point5 p = x;
      p[i] += sign * kUnconstrainedProbe;
      flat = flat && std::abs(objective(p) - at_x) < kUnconstrainedThreshold;
    }
    flags[i] = flat;
  }
  return flags;
}

inline void check_data(const MeasMatrix& data, const EntryMask& mask) {
  validate(data, kDataBlockTolerance);
  bool any = false;
  for (const auto& row : mask) {
    for (bool b : row) any = any || b;
  }
  if (!any) throw ValidationError("fit mask selects no entries");
}

}  // namespace detail

/// E_max(tau) restricted to the configured mask.
inline double fit_objective(const MeasMatrix& data, const TauParams& tau, const EntryMask& mask = full_mask()) {
  return detail::masked_max_error(data, model_matrix(tau), mask);
}

/// One parameter set for the whole matrix.
inline FitResult fit_global(const MeasMatrix& data, FitConfig cfg) {
  cfg.validate();
  detail::check_data(data, cfg.mask);
  const auto& model = cnot_model();
  auto objective = [&](const detail::Point5& p) {
    return detail::masked_max_error(data, model.evaluate(p), cfg.mask);
  };
  const auto starts = detail::start_points(cfg);
  const auto best = detail::multistart(objective, starts, cfg);

  FitResult r;
  r.mode = FitMode::Global;
  r.tau = {TauParams{best.x}};
  const MeasMatrix fitted = model.evaluate(best.x);
  r.achieved_e_max = detail::masked_max_error(data, fitted, cfg.mask);
  r.achieved_e_mean = detail::masked_mean_error(data, fitted, cfg.mask);
  r.objective_evaluations = best.evaluations;
  r.restart_index_of_best = {best.index};
  r.unconstrained = {detail::unconstrained_components(objective, best.x, r.achieved_e_max)};
  r.seed = cfg.seed;
  return r;
}

/// Independent parameter set per input row (both measurement blocks of the
/// row share it). Each row is started from the same points as the global fit
/// plus the global optimum itself, so no row ends up worse than under the
/// global fit.
inline FitResult fit_per_input(const MeasMatrix& data, FitConfig cfg) {
  cfg.validate();
  detail::check_data(data, cfg.mask);
  cfg.mode = FitMode::Global;
  const FitResult global = fit_global(data, cfg);

  const auto& model = cnot_model();
  auto starts = detail::start_points(cfg);
  starts.push_back(global.tau[0].values);

  FitResult r;
  r.mode = FitMode::PerInput;
  r.seed = cfg.seed;
  r.objective_evaluations = global.objective_evaluations;
  MeasMatrix fitted;
  bool any_row = false;
  for (int row = 0; row < 8; ++row) {
    const auto& row_mask = cfg.mask[static_cast<std::size_t>(row)];
    if (std::none_of(row_mask.begin(), row_mask.end(), [](bool b) { return b; })) {
      // No data in this row: keep the global parameters.
      r.tau.push_back(global.tau[0]);
      r.restart_index_of_best.push_back(cfg.restarts + 1);
      r.unconstrained.push_back({true, true, true, true, true});
      std::array<double, 8> vals{};
      model.evaluate_row(row, global.tau[0].span(), vals);
      for (int c = 0; c < 8; ++c) fitted(row, c) = vals[c];
      continue;
    }
    any_row = true;
    auto objective = [&](const detail::Point5& p) {
      std::array<double, 8> vals{};
      model.evaluate_row(row, p, vals);
      double e = 0.0;
      for (int c = 0; c < 8; ++c) {
        if (row_mask[c]) e = std::max(e, std::abs(data(row, c) - vals[c]));
      }
      return e;
    };
    const auto best = detail::multistart(objective, starts, cfg);
    r.objective_evaluations += best.evaluations;
    r.tau.push_back(TauParams{best.x});
    r.restart_index_of_best.push_back(best.index);
    r.unconstrained.push_back(detail::unconstrained_components(objective, best.x, objective(best.x)));
    std::array<double, 8> vals{};
    model.evaluate_row(row, best.x, vals);
    for (int c = 0; c < 8; ++c) fitted(row, c) = vals[c];
  }
  if (!any_row) throw ValidationError("fit mask selects no entries");
  r.achieved_e_max = detail::masked_max_error(data, fitted, cfg.mask);
  r.achieved_e_mean = detail::masked_mean_error(data, fitted, cfg.mask);
  return r;
}

inline FitResult fit(const MeasMatrix& data, const FitConfig& cfg) {
  return cfg.mode == FitMode::Global ? fit_global(data, cfg) : fit_per_input(data, cfg);
}

/// Model matrix implied by a fit: row r uses tau[r] in per-input mode.
inline MeasMatrix fitted_matrix(const FitResult& r) {
  if (r.mode == FitMode::Global) return model_matrix(r.tau.at(0));
  MeasMatrix m;
  std::array<double, 8> vals{};
  for (int row = 0; row < 8; ++row) {
    cnot_model().evaluate_row(row, r.tau.at(static_cast<std::size_t>(row)).span(), vals);
    for (int c = 0; c < 8; ++c) m(row, c) = vals[c];
  }
  return m;
}

}  // namespace mmqpt
