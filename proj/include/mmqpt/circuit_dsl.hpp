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

// Line-oriented text form of a Circuit.
//
//   # comment
//   mode <id>
//   bs <m1> <m2> <eta> gray=<m1|m2>
//   tau <mode> <index>
//   phase <mode> <radians>
//   control <mode>...
//   target <mode>...
//
// Modes must be declared before they are referenced. serialize() emits the
// canonical form: sorted mode table, then one element per line in circuit
// order, then the post-selection groups. Numbers are written in shortest
// round-trip form, so parse(serialize(c)) == c exactly.

#pragma once

#include <cctype>
#include <charconv>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "mmqpt/circuit.hpp"
#include "mmqpt/error.hpp"

namespace mmqpt {

namespace detail {

struct Token {
  std::string_view text;
  int column;  // 1-based
};

inline std::vector<Token> tokenize_line(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back({line.substr(start, i - start), static_cast<int>(start) + 1});
  }
  return out;
}

inline bool valid_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char ch : s) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
  }
  return true;
}

inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

}  // namespace detail

inline Circuit parse_circuit(std::string_view text) {
  Circuit::Builder builder;
  std::vector<std::string> declared;
  std::vector<int> tau_seen;
  std::vector<std::string> control_seen, target_seen;
  int line_no = 0;

  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const auto tok = detail::tokenize_line(line);
    if (tok.empty()) continue;

    auto fail = [&](const detail::Token& t, const std::string& msg) -> ParseError {
      return ParseError(line_no, t.column, msg);
    };
    auto expect_arity = [&](std::size_t n) {
      if (tok.size() != n) {
        const auto& at = tok.size() > n ? tok[n] : tok.back();
        throw fail(at, "'" + std::string(tok[0].text) + "' takes " + std::to_string(n - 1) + " argument(s)");
      }
    };
    auto known_mode = [&](const detail::Token& t) {
      if (std::find(declared.begin(), declared.end(), t.text) == declared.end()) {
        throw fail(t, "unknown mode '" + std::string(t.text) + "'");
      }
      return std::string(t.text);
    };
    auto number = [&](const detail::Token& t) {
      double v = 0.0;
      auto [end, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
      if (ec != std::errc() || end != t.text.data() + t.text.size() || !std::isfinite(v)) {
        throw fail(t, "expected a number, got '" + std::string(t.text) + "'");
      }
      return v;
    };

    const std::string_view kw = tok[0].text;
    if (kw == "mode") {
      expect_arity(2);
      if (!detail::valid_identifier(tok[1].text)) throw fail(tok[1], "invalid mode name '" + std::string(tok[1].text) + "'");
      if (std::find(declared.begin(), declared.end(), tok[1].text) != declared.end()) {
        throw fail(tok[1], "duplicate mode '" + std::string(tok[1].text) + "'");
      }
      declared.emplace_back(tok[1].text);
      builder.mode(std::string(tok[1].text));
    } else if (kw == "bs") {
      expect_arity(5);
      const auto m1 = known_mode(tok[1]);
      const auto m2 = known_mode(tok[2]);
      if (m1 == m2) throw fail(tok[2], "beamsplitter modes must differ");
      const double eta = number(tok[3]);
      if (!(eta >= 0.0 && eta <= 1.0)) throw fail(tok[3], "reflectivity " + std::string(tok[3].text) + " outside [0, 1]");
      if (!tok[4].text.starts_with("gray=")) throw fail(tok[4], "expected gray=<mode>");
      detail::Token gray_tok{tok[4].text.substr(5), tok[4].column + 5};
      const auto gray = known_mode(gray_tok);
      if (gray != m1 && gray != m2) throw fail(gray_tok, "gray side must be '" + m1 + "' or '" + m2 + "'");
      builder.beamsplitter(m1, m2, eta, gray);
    } else if (kw == "tau") {
      expect_arity(3);
      const auto m = known_mode(tok[1]);
      int index = 0;
      auto [end, ec] = std::from_chars(tok[2].text.data(), tok[2].text.data() + tok[2].text.size(), index);
      if (ec != std::errc() || end != tok[2].text.data() + tok[2].text.size()) {
        throw fail(tok[2], "expected an integer tau index, got '" + std::string(tok[2].text) + "'");
      }
      if (index < 1 || index > kMaxTauIndex) {
        throw fail(tok[2], "tau index outside [1, " + std::to_string(kMaxTauIndex) + "]");
      }
      if (std::find(tau_seen.begin(), tau_seen.end(), index) != tau_seen.end()) {
        throw fail(tok[2], "duplicate tau index " + std::to_string(index));
      }
      tau_seen.push_back(index);
      builder.tau(m, index);
    } else if (kw == "phase") {
      expect_arity(3);
      builder.phase(known_mode(tok[1]), number(tok[2]));
    } else if (kw == "control" || kw == "target") {
      if (tok.size() < 2) throw fail(tok[0], "'" + std::string(kw) + "' needs at least one mode");
      auto& mine = kw == "control" ? control_seen : target_seen;
      const auto& other = kw == "control" ? target_seen : control_seen;
      if (!mine.empty()) throw fail(tok[0], "repeated '" + std::string(kw) + "' statement");
      std::vector<std::string> group;
      for (std::size_t i = 1; i < tok.size(); ++i) {
        auto m = known_mode(tok[i]);
        if (std::find(group.begin(), group.end(), m) != group.end()) {
          throw fail(tok[i], "mode '" + m + "' listed twice");
        }
        if (std::find(other.begin(), other.end(), m) != other.end()) {
          throw fail(tok[i], "mode '" + m + "' is in both control and target groups");
        }
        group.push_back(std::move(m));
      }
      mine = group;
      if (kw == "control") {
        builder.control(std::move(group));
      } else {
        builder.target(std::move(group));
      }
    } else {
      throw fail(tok[0], "unknown statement '" + std::string(kw) + "'");
    }
  }

  try {
    return builder.build();
  } catch (const ParseError&) {
    throw;
  } catch (const ValidationError& e) {
    throw ParseError(line_no, 1, e.what());
  }
}

inline std::string serialize(const Circuit& c) {
  std::string out;
  for (const auto& name : c.mode_names()) out += "mode " + name + "\n";
  for (const auto& e : c.elements()) {
    if (const auto* bs = std::get_if<Beamsplitter>(&e)) {
      out += "bs " + c.mode_name(bs->m1) + " " + c.mode_name(bs->m2) + " " + detail::format_double(bs->eta) +
             " gray=" + c.mode_name(bs->gray) + "\n";
    } else if (const auto* tb = std::get_if<TauBox>(&e)) {
      out += "tau " + c.mode_name(tb->mode) + " " + std::to_string(tb->index) + "\n";
    } else {
      const auto& ps = std::get<PhaseShift>(e);
      out += "phase " + c.mode_name(ps.mode) + " " + detail::format_double(ps.radians) + "\n";
    }
  }
  auto group = [&](const char* kw, std::span<const ModeId> g) {
    if (g.empty()) return;
    out += kw;
    for (ModeId m : g) out += " " + c.mode_name(m);
    out += "\n";
  };
  group("control", c.control_modes());
  group("target", c.target_modes());
  return out;
}

}  // namespace mmqpt
