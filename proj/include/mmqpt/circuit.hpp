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
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mmqpt/error.hpp"
#include "mmqpt/fock.hpp"
#include "mmqpt/wavepacket.hpp"

namespace mmqpt {

/// tau-box indices run from 1 to this inclusive.
inline constexpr int kMaxTauIndex = 16;

struct Beamsplitter {
  ModeId m1;
  ModeId m2;
  double eta;
  ModeId gray;  // side whose reflection picks up the sign flip
  friend bool operator==(const Beamsplitter&, const Beamsplitter&) = default;
};

struct TauBox {
  ModeId mode;
  int index;  // 1-based
  friend bool operator==(const TauBox&, const TauBox&) = default;
};

struct PhaseShift {
  ModeId mode;
  double radians;
  friend bool operator==(const PhaseShift&, const PhaseShift&) = default;
};

using Element = std::variant<Beamsplitter, TauBox, PhaseShift>;

/// An optical network over named spatial modes. The mode table is kept in
/// sorted order so that equal networks compare equal irrespective of the
/// order in which modes were declared. Control and target groups keep their
/// declared order: rail 0 first, rail 1 second.
class Circuit {
 public:
  class Builder;

  std::size_t mode_count() const noexcept { return modes_.size(); }
  std::span<const std::string> mode_names() const noexcept { return modes_; }
  const std::string& mode_name(ModeId m) const { return modes_.at(m.index); }

  std::optional<ModeId> find_mode(std::string_view name) const {
    auto it = std::lower_bound(modes_.begin(), modes_.end(), name);
    if (it == modes_.end() || *it != name) return std::nullopt;
    return ModeId{static_cast<std::uint16_t>(it - modes_.begin())};
  }
  ModeId mode(std::string_view name) const {
    if (auto m = find_mode(name)) return *m;
    throw ValidationError("unknown mode '" + std::string(name) + "'");
  }

  std::span<const Element> elements() const noexcept { return elements_; }
  std::span<const ModeId> control_modes() const noexcept { return control_; }
  std::span<const ModeId> target_modes() const noexcept { return target_; }

  /// Largest tau index referenced; the arity a parameter vector must have.
  int tau_count() const noexcept {
    int n = 0;
    for (const auto& e : elements_) {
      if (const auto* t = std::get_if<TauBox>(&e)) n = std::max(n, t->index);
    }
    return n;
  }

  /// Both groups hold exactly two rails, so the circuit acts on a dual-rail
  /// control and target qubit.
  bool is_dual_rail_gate() const noexcept { return control_.size() == 2 && target_.size() == 2; }

  friend bool operator==(const Circuit&, const Circuit&) = default;

 private:
  std::vector<std::string> modes_;
  std::vector<Element> elements_;
  std::vector<ModeId> control_;
  std::vector<ModeId> target_;
};

/// Collects modes and elements by name; `build()` resolves names against the
/// sorted mode table and validates the whole network.
class Circuit::Builder {
 public:
  Builder& mode(std::string name) {
    if (std::find(modes_.begin(), modes_.end(), name) != modes_.end()) {
      throw ValidationError("duplicate mode '" + name + "'");
    }
    modes_.push_back(std::move(name));
    return *this;
  }
  Builder& beamsplitter(std::string m1, std::string m2, double eta, std::string gray) {
    pending_.push_back(PendingBs{std::move(m1), std::move(m2), eta, std::move(gray)});
    return *this;
  }
  Builder& tau(std::string m, int index) {
    pending_.push_back(PendingTau{std::move(m), index});
    return *this;
  }
  Builder& phase(std::string m, double radians) {
    pending_.push_back(PendingPhase{std::move(m), radians});
    return *this;
  }
  Builder& control(std::vector<std::string> modes) {
    control_ = std::move(modes);
    return *this;
  }
  Builder& target(std::vector<std::string> modes) {
    target_ = std::move(modes);
    return *this;
  }

  Circuit build() const {
    Circuit c;
    c.modes_ = modes_;
    std::sort(c.modes_.begin(), c.modes_.end());
    std::vector<int> tau_seen;
    for (const auto& p : pending_) {
      std::visit(
          [&](const auto& e) {
            using T = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<T, PendingBs>) {
              const ModeId m1 = c.mode(e.m1), m2 = c.mode(e.m2), gray = c.mode(e.gray);
              if (m1 == m2) throw ValidationError("beamsplitter modes must differ");
              if (gray != m1 && gray != m2) {
                throw ValidationError("beamsplitter gray side '" + e.gray + "' is not one of its modes");
              }
              if (!(e.eta >= 0.0 && e.eta <= 1.0)) {
                throw ValidationError("beamsplitter reflectivity " + std::to_string(e.eta) +
                                      " outside [0, 1]");
              }
              c.elements_.push_back(Beamsplitter{m1, m2, e.eta, gray});
            } else if constexpr (std::is_same_v<T, PendingTau>) {
              if (e.index < 1 || e.index > kMaxTauIndex) {
                throw ValidationError("tau index " + std::to_string(e.index) + " outside [1, " +
                                      std::to_string(kMaxTauIndex) + "]");
              }
              if (std::find(tau_seen.begin(), tau_seen.end(), e.index) != tau_seen.end()) {
                throw ValidationError("duplicate tau index " + std::to_string(e.index));
              }
              tau_seen.push_back(e.index);
              c.elements_.push_back(TauBox{c.mode(e.m), e.index});
            } else {
              if (!std::isfinite(e.radians)) throw ValidationError("phase is not finite");
              c.elements_.push_back(PhaseShift{c.mode(e.m), e.radians});
            }
          },
          p);
    }
    for (const auto& n : control_) c.control_.push_back(c.mode(n));
    for (const auto& n : target_) c.target_.push_back(c.mode(n));
    for (ModeId m : c.control_) {
      if (std::find(c.target_.begin(), c.target_.end(), m) != c.target_.end()) {
        throw ValidationError("control and target groups overlap at '" + c.mode_name(m) + "'");
      }
    }
    auto has_dupes = [](std::vector<ModeId> g) {
      std::sort(g.begin(), g.end());
      return std::adjacent_find(g.begin(), g.end()) != g.end();
    };
    if (has_dupes(c.control_) || has_dupes(c.target_)) throw ValidationError("mode repeated within a group");
    return c;
  }

 private:
  struct PendingBs {
    std::string m1, m2;
    double eta;
    std::string gray;
  };
  struct PendingTau {
    std::string m;
    int index;
  };
  struct PendingPhase {
    std::string m;
    double radians;
  };

  std::vector<std::string> modes_;
  std::vector<std::variant<PendingBs, PendingTau, PendingPhase>> pending_;
  std::vector<std::string> control_;
  std::vector<std::string> target_;
};

/// The five mode-mismatch displacements of the CNOT model, in units of
/// inverse photon bandwidth. values[i] belongs to tau-box index i + 1.
struct TauParams {
  std::array<double, 5> values{};

  double& operator[](std::size_t i) noexcept { return values[i]; }
  double operator[](std::size_t i) const noexcept { return values[i]; }
  std::span<const double> span() const noexcept { return values; }

  static TauParams from(std::span<const double> v) {
    if (v.size() != 5) throw ValidationError("expected 5 tau values, got " + std::to_string(v.size()));
    TauParams t;
    for (std::size_t i = 0; i < 5; ++i) {
      if (!std::isfinite(v[i])) throw ValidationError("tau value is not finite");
      t.values[i] = v[i];
    }
    return t;
  }

  friend bool operator==(const TauParams&, const TauParams&) = default;
};

/// Per-photon record of how many times each tau-box was traversed. Labels
/// are linear in tau, so a state evolved with tallies can be evaluated for
/// any parameter vector afterwards without re-running the circuit.
struct TauTally {
  std::array<std::int8_t, kMaxTauIndex> counts{};

  static TauTally unit(int index) {
    TauTally t;
    t.counts[static_cast<std::size_t>(index - 1)] = 1;
    return t;
  }
  friend TauTally operator+(TauTally a, const TauTally& b) noexcept {
    for (std::size_t i = 0; i < a.counts.size(); ++i) a.counts[i] = static_cast<std::int8_t>(a.counts[i] + b.counts[i]);
    return a;
  }
  friend auto operator<=>(const TauTally&, const TauTally&) = default;
  friend bool operator==(const TauTally&, const TauTally&) = default;

  /// Scalar displacement sum_i counts[i] * tau[i].
  double evaluate(std::span<const double> tau) const noexcept {
    double s = 0.0;
    for (std::size_t i = 0; i < tau.size() && i < counts.size(); ++i) s += counts[i] * tau[i];
    return s;
  }
};

/// The post-selected linear-optics CNOT with five tau-boxes.
///
/// Modes c0/c1 (control rails), t0/t1 (target rails), v1/v2 (vacuum inputs
/// whose outputs are discarded). The target sits in a 50:50 interferometer;
/// inside it a 1/3 beamsplitter couples c1 with t0, and 1/3 beamsplitters
/// against vacuum attenuate c0 and t1 to balance amplitudes. Success
/// probability is 1/9 for every input when all taus vanish.
///
/// Box placement: tau1 on c0 before the gate, tau2 on c1 ahead of the
/// central coupler, tau3 on t0 before the first 50:50, tau4 on t1 inside the
/// interferometer, tau5 on t0 after the closing 50:50.
inline Circuit build_cnot() {
  constexpr double kThird = 1.0 / 3.0;
  return Circuit::Builder()
      .mode("c0").mode("c1").mode("t0").mode("t1").mode("v1").mode("v2")
      .tau("c0", 1)
      .tau("t0", 3)
      .beamsplitter("t0", "t1", 0.5, "t1")
      .tau("c1", 2)
      .tau("t1", 4)
      .beamsplitter("c1", "t0", kThird, "t0")
      .beamsplitter("v1", "c0", kThird, "c0")
      .beamsplitter("v2", "t1", kThird, "t1")
      .beamsplitter("t0", "t1", 0.5, "t1")
      .tau("t0", 5)
      .control({"c0", "c1"})
      .target({"t0", "t1"})
      .build();
}

/// Runs every element of `circuit` over `state`. `shift(index)` yields the
/// label increment for tau-box `index`.
template <class Label, class TauShift>
TwoPhotonState<Label> run(const Circuit& circuit, TwoPhotonState<Label> state, TauShift&& shift) {
  for (const auto& e : circuit.elements()) {
    if (const auto* bs = std::get_if<Beamsplitter>(&e)) {
      state = apply_beamsplitter(state, bs->m1, bs->m2, bs->eta, bs->gray);
    } else if (const auto* tb = std::get_if<TauBox>(&e)) {
      state = apply_taubox(state, tb->mode, shift(tb->index));
    } else {
      const auto& ps = std::get<PhaseShift>(e);
      state = apply_phase(state, ps.mode, ps.radians);
    }
  }
  return state;
}

/// Runs with scalar displacements tau[index - 1].
inline TwoPhotonState<Displacement> run(const Circuit& circuit, TwoPhotonState<Displacement> state,
                                        std::span<const double> tau) {
  if (static_cast<int>(tau.size()) < circuit.tau_count()) {
    throw ValidationError("circuit needs " + std::to_string(circuit.tau_count()) + " tau values, got " +
                          std::to_string(tau.size()));
  }
  return run(circuit, std::move(state),
             [&](int index) { return Displacement(tau[static_cast<std::size_t>(index - 1)]); });
}

/// Runs with symbolic tallies.
inline TwoPhotonState<TauTally> run_symbolic(const Circuit& circuit, TwoPhotonState<TauTally> state) {
  return run(circuit, std::move(state), [](int index) { return TauTally::unit(index); });
}

// ---------------------------------------------------------------------------
// Qubit preparation and measurement

enum class QubitState { Zero, One, Plus, Minus, PlusI, MinusI };
enum class Basis { Z, X };

/// Two-qubit product input, control first. Text form is two symbols from
/// 0 1 + - R L (R = |+i>, L = |-i>); the Unicode minus is accepted for '-'.
struct InputLabel {
  QubitState control = QubitState::Zero;
  QubitState target = QubitState::Zero;

  friend bool operator==(const InputLabel&, const InputLabel&) = default;

  static InputLabel parse(std::string_view text);
  std::string to_string() const;
};

/// Measurement outcome for one qubit: basis and which eigenstate (false =
/// |0> or |+>, true = |1> or |->).
struct QubitOutcome {
  Basis basis = Basis::Z;
  bool bit = false;
  friend bool operator==(const QubitOutcome&, const QubitOutcome&) = default;
};

struct OutcomeLabel {
  QubitOutcome control;
  QubitOutcome target;

  friend bool operator==(const OutcomeLabel&, const OutcomeLabel&) = default;

  static OutcomeLabel parse(std::string_view text);
  std::string to_string() const;
};

namespace detail {

// Splits a two-symbol label into symbols, translating U+2212 to '-'.
inline std::vector<char> label_symbols(std::string_view text) {
  std::vector<char> out;
  for (std::size_t i = 0; i < text.size();) {
    if (text.substr(i, 3) == "\xE2\x88\x92") {
      out.push_back('-');
      i += 3;
    } else {
      out.push_back(text[i]);
      ++i;
    }
  }
  return out;
}

inline QubitState qubit_state_from(char c, std::string_view whole) {
  switch (c) {
    case '0': return QubitState::Zero;
    case '1': return QubitState::One;
    case '+': return QubitState::Plus;
    case '-': return QubitState::Minus;
    case 'R': return QubitState::PlusI;
    case 'L': return QubitState::MinusI;
    default: throw ValidationError("invalid input label '" + std::string(whole) + "'");
  }
}

inline char qubit_state_symbol(QubitState s) {
  constexpr std::array<char, 6> kSymbols{'0', '1', '+', '-', 'R', 'L'};
  return kSymbols[static_cast<std::size_t>(s)];
}

}  // namespace detail

inline InputLabel InputLabel::parse(std::string_view text) {
  const auto sym = detail::label_symbols(text);
  if (sym.size() != 2) throw ValidationError("invalid input label '" + std::string(text) + "'");
  return {detail::qubit_state_from(sym[0], text), detail::qubit_state_from(sym[1], text)};
}

inline std::string InputLabel::to_string() const {
  return {detail::qubit_state_symbol(control), detail::qubit_state_symbol(target)};
}

inline OutcomeLabel OutcomeLabel::parse(std::string_view text) {
  const auto sym = detail::label_symbols(text);
  if (sym.size() != 2) throw ValidationError("invalid measurement label '" + std::string(text) + "'");
  auto one = [&](char c) -> QubitOutcome {
    switch (c) {
      case '0': return {Basis::Z, false};
      case '1': return {Basis::Z, true};
      case '+': return {Basis::X, false};
      case '-': return {Basis::X, true};
      default: throw ValidationError("invalid measurement label '" + std::string(text) + "'");
    }
  };
  return {one(sym[0]), one(sym[1])};
}

inline std::string OutcomeLabel::to_string() const {
  auto one = [](QubitOutcome q) { return q.basis == Basis::Z ? (q.bit ? '1' : '0') : (q.bit ? '-' : '+'); };
  return {one(control), one(target)};
}

/// The eight product inputs that index the rows of a measurement matrix.
inline const std::array<InputLabel, 8>& matrix_inputs() {
  using Q = QubitState;
  static const std::array<InputLabel, 8> kInputs{{{Q::Zero, Q::Zero},
                                                   {Q::Zero, Q::One},
                                                   {Q::One, Q::Zero},
                                                   {Q::One, Q::One},
                                                   {Q::Plus, Q::Plus},
                                                   {Q::Plus, Q::Minus},
                                                   {Q::Minus, Q::Plus},
                                                   {Q::Minus, Q::Minus}}};
  return kInputs;
}

inline void require_dual_rail(const Circuit& c) {
  if (!c.is_dual_rail_gate()) {
    throw ValidationError("circuit must declare exactly two control and two target rails");
  }
}

namespace detail {

// Rail index and virtual optics for one qubit state.
inline void prepare_qubit(QubitState q, ModeId rail0, ModeId rail1, ModeId& start,
                          std::vector<Element>& optics) {
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  switch (q) {
    case QubitState::Zero: start = rail0; return;
    case QubitState::One: start = rail1; return;
    case QubitState::Plus: start = rail0; break;
    case QubitState::Minus: start = rail1; break;
    case QubitState::PlusI:
    case QubitState::MinusI: start = rail0; break;
  }
  optics.push_back(Beamsplitter{rail0, rail1, 0.5, rail1});
  if (q == QubitState::PlusI) optics.push_back(PhaseShift{rail1, kHalfPi});
  if (q == QubitState::MinusI) optics.push_back(PhaseShift{rail1, -kHalfPi});
}

template <class Label>
TwoPhotonState<Label> apply_ideal(TwoPhotonState<Label> s, std::span<const Element> optics) {
  for (const auto& e : optics) {
    if (const auto* bs = std::get_if<Beamsplitter>(&e)) {
      s = apply_beamsplitter(s, bs->m1, bs->m2, bs->eta, bs->gray);
    } else if (const auto* ps = std::get_if<PhaseShift>(&e)) {
      s = apply_phase(s, ps->mode, ps->radians);
    }
  }
  return s;
}

}  // namespace detail

/// Input state for a dual-rail gate: one undisplaced photon on the rail-0 or
/// rail-1 mode of each qubit, with mismatch-free virtual 50:50 splitters (and
/// a quarter-wave phase for the +-i states) before the circuit.
template <class Label = Displacement>
TwoPhotonState<Label> prepare_input(const Circuit& c, InputLabel label) {
  require_dual_rail(c);
  const auto ctl = c.control_modes();
  const auto tgt = c.target_modes();
  ModeId cs, ts;
  std::vector<Element> optics;
  detail::prepare_qubit(label.control, ctl[0], ctl[1], cs, optics);
  detail::prepare_qubit(label.target, tgt[0], tgt[1], ts, optics);
  TwoPhotonState<Label> s(c.mode_count(), {make_term<Label>(1.0, {cs, Label{}}, {ts, Label{}})});
  return detail::apply_ideal(std::move(s), optics);
}

/// Input state from an arbitrary normalised two-qubit ket (index 2c + t).
/// Entangled kets are not reachable with local virtual optics but remain
/// valid inputs to the linear model.
template <class Label = Displacement>
TwoPhotonState<Label> prepare_ket(const Circuit& c, std::span<const Complex, 4> ket) {
  require_dual_rail(c);
  std::vector<PathTerm<Label>> terms;
  for (int ci = 0; ci < 2; ++ci) {
    for (int ti = 0; ti < 2; ++ti) {
      const Complex a = ket[static_cast<std::size_t>(2 * ci + ti)];
      if (a != Complex(0.0)) {
        terms.push_back(make_term<Label>(a, {c.control_modes()[ci], Label{}}, {c.target_modes()[ti], Label{}}));
      }
    }
  }
  return TwoPhotonState<Label>(c.mode_count(), std::move(terms));
}

/// Virtual optics appended after the circuit for a measurement setting, and
/// the detector pair that registers the requested outcome.
struct MeasurementSetting {
  std::vector<Element> virtual_elements;
  ModeId control_detector;
  ModeId target_detector;
};

/// X-basis outcomes put an ideal 50:50 on the qubit's rails; |+> then exits
/// on rail 0 and |-> on rail 1.
inline MeasurementSetting measurement_setting(const Circuit& c, OutcomeLabel outcome) {
  require_dual_rail(c);
  MeasurementSetting m;
  const auto ctl = c.control_modes();
  const auto tgt = c.target_modes();
  if (outcome.control.basis == Basis::X) m.virtual_elements.push_back(Beamsplitter{ctl[0], ctl[1], 0.5, ctl[1]});
  if (outcome.target.basis == Basis::X) m.virtual_elements.push_back(Beamsplitter{tgt[0], tgt[1], 0.5, tgt[1]});
  m.control_detector = ctl[outcome.control.bit ? 1 : 0];
  m.target_detector = tgt[outcome.target.bit ? 1 : 0];
  return m;
}

/// Evolves through the circuit and measurement optics for `basis` on both
/// qubits, then post-selects on one photon per qubit group.
template <class Label, class TauShift>
TwoPhotonState<Label> evolve_and_measure(const Circuit& c, TwoPhotonState<Label> input, Basis basis,
                                         TauShift&& shift) {
  auto out = run(c, std::move(input), shift);
  const auto setting = measurement_setting(c, OutcomeLabel{{basis, false}, {basis, false}});
  out = detail::apply_ideal(std::move(out), setting.virtual_elements);
  return post_select(out, c.control_modes(), c.target_modes());
}

/// Conditional outcome probabilities for one input and one measurement basis
/// (both qubits measured in `basis`), ordered 00, 01, 10, 11 by (control bit,
/// target bit), plus the post-selection success probability.
struct OutcomeDistribution {
  std::array<double, 4> conditional{};
  double success = 0.0;
};

/// Post-selected norms below this make conditional probabilities meaningless.
inline constexpr double kMinSuccessProbability = 1e-12;

inline OutcomeDistribution simulate(const Circuit& c, std::span<const double> tau, InputLabel input, Basis basis) {
  if (static_cast<int>(tau.size()) != c.tau_count()) {
    throw ValidationError("circuit needs " + std::to_string(c.tau_count()) + " tau values, got " +
                          std::to_string(tau.size()));
  }
  const auto selected = evolve_and_measure(c, prepare_input(c, input), basis, [&](int index) {
    return Displacement(tau[static_cast<std::size_t>(index - 1)]);
  });
  OutcomeDistribution d;
  std::array<double, 4> raw{};
  for (int k = 0; k < 4; ++k) {
    raw[k] = outcome_probability(selected, c.control_modes()[k / 2], c.target_modes()[k % 2]);
    d.success += raw[k];
  }
  if (d.success < kMinSuccessProbability) {
    throw NumericalError("post-selection success probability below " + std::to_string(kMinSuccessProbability));
  }
  for (int k = 0; k < 4; ++k) d.conditional[k] = raw[k] / d.success;
  return d;
}

}  // namespace mmqpt
