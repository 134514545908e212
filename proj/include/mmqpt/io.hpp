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

// File formats: measurement-matrix CSV, process-matrix JSON and fit-result
// JSON.

#pragma once

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "mmqpt/error.hpp"
#include "mmqpt/fitting.hpp"
#include "mmqpt/meas_matrix.hpp"
#include "mmqpt/tomography.hpp"

namespace mmqpt {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string shortest(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

}  // namespace detail

/// Eight lines of eight comma-separated probabilities, preceded by a '#'
/// header describing the row and column order.
inline void write_meas_csv(std::ostream& os, const MeasMatrix& m) {
  os << "# rows: 00,01,10,11,++,+-,-+,--; cols: Z 00,01,10,11 | X ++,+-,-+,--\n";
  for (int r = 0; r < 8; ++r) {
    for (int c = 0; c < 8; ++c) os << (c ? "," : "") << detail::shortest(m(r, c));
    os << '\n';
  }
}

/// Parses the CSV form. Lines beginning with '#' and blank lines are skipped.
/// Only shape and number syntax are checked here; probability semantics are
/// checked by validate().
inline MeasMatrix read_meas_csv(std::istream& is) {
  MeasMatrix m;
  std::string line;
  int row = 0;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t.front() == '#') continue;
    if (row >= 8) throw ValidationError("measurement CSV has more than 8 data rows (line " + std::to_string(line_no) + ")");
    std::vector<std::string> cells;
    std::stringstream ss(t);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(detail::trim(cell));
    if (!t.empty() && t.back() == ',') cells.emplace_back();
    if (cells.size() != 8) {
      throw ValidationError("measurement CSV line " + std::to_string(line_no) + " has " + std::to_string(cells.size()) +
                            " columns, expected 8");
    }
    for (int c = 0; c < 8; ++c) {
      const auto& s = cells[static_cast<std::size_t>(c)];
      double v = 0.0;
      auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc() || end != s.data() + s.size()) {
        throw ValidationError("measurement CSV line " + std::to_string(line_no) + ": '" + s + "' is not a number");
      }
      m(row, c) = v;
    }
    ++row;
  }
  if (is.bad()) throw IoError("failed reading measurement CSV");
  if (row != 8) throw ValidationError("measurement CSV has " + std::to_string(row) + " data rows, expected 8");
  return m;
}

inline Json chi_to_json(const ChiMatrix& chi) {
  Json re = Json::array(), im = Json::array();
  for (int i = 0; i < 16; ++i) {
    Json rr = Json::array(), ir = Json::array();
    for (int j = 0; j < 16; ++j) {
      rr.push_back(chi.chi(i, j).real());
      ir.push_back(chi.chi(i, j).imag());
    }
    re.push_back(std::move(rr));
    im.push_back(std::move(ir));
  }
  Json basis = Json::array();
  for (const auto& l : pauli_labels()) basis.push_back(l);
  return Json{{"basis", basis},
              {"basis_convention", "P_m = sigma_a (x) sigma_b, m = 4a + b, sigma order I,X,Y,Z, control qubit first; "
                                   "E(rho) = sum_mn chi_mn P_m rho P_n^dagger"},
              {"real", re},
              {"imag", im}};
}

inline ChiMatrix chi_from_json(const Json& j) {
  try {
    const auto& re = j.at("real");
    const auto& im = j.at("imag");
    if (re.size() != 16 || im.size() != 16) throw ValidationError("chi JSON must hold 16x16 arrays");
    if (j.contains("basis")) {
      const auto& b = j.at("basis");
      for (std::size_t k = 0; k < 16; ++k) {
        if (b.at(k).get<std::string>() != pauli_labels()[k]) throw ValidationError("chi JSON basis order differs");
      }
    }
    ChiMatrix c;
    for (int r = 0; r < 16; ++r) {
      if (re.at(r).size() != 16 || im.at(r).size() != 16) throw ValidationError("chi JSON must hold 16x16 arrays");
      for (int s = 0; s < 16; ++s) c.chi(r, s) = Complex(re.at(r).at(s).get<double>(), im.at(r).at(s).get<double>());
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed chi JSON: ") + e.what());
  }
}

inline Json fit_result_to_json(const FitResult& r) {
  Json taus = Json::array();
  for (const auto& t : r.tau) taus.push_back(t.values);
  Json flags = Json::array();
  for (const auto& f : r.unconstrained) flags.push_back(f);
  return Json{{"mode", to_string(r.mode)},
              {"tau", taus},
              {"achieved_e_max", r.achieved_e_max},
              {"achieved_e_mean", r.achieved_e_mean},
              {"unconstrained", flags},
              {"objective_evaluations", r.objective_evaluations},
              {"restart_index_of_best", r.restart_index_of_best},
              {"seed", r.seed}};
}

inline FitResult fit_result_from_json(const Json& j) {
  try {
    FitResult r;
    const auto mode = j.at("mode").get<std::string>();
    if (mode == "global") {
      r.mode = FitMode::Global;
    } else if (mode == "per-input") {
      r.mode = FitMode::PerInput;
    } else {
      throw ValidationError("unknown fit mode '" + mode + "'");
    }
    for (const auto& t : j.at("tau")) r.tau.push_back(TauParams::from(t.get<std::vector<double>>()));
    const std::size_t expected = r.mode == FitMode::Global ? 1 : 8;
    if (r.tau.size() != expected) throw ValidationError("fit result holds the wrong number of tau sets");
    r.achieved_e_max = j.at("achieved_e_max").get<double>();
    r.achieved_e_mean = j.at("achieved_e_mean").get<double>();
    r.unconstrained = j.at("unconstrained").get<std::vector<std::array<bool, 5>>>();
    r.objective_evaluations = j.at("objective_evaluations").get<std::uint64_t>();
    r.restart_index_of_best = j.at("restart_index_of_best").get<std::vector<int>>();
    r.seed = j.at("seed").get<std::uint64_t>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed fit result JSON: ") + e.what());
  }
}

}  // namespace mmqpt
