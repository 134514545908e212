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

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "mmqpt/circuit.hpp"
#include "mmqpt/fock.hpp"
#include "oracles.hpp"

namespace mmqpt {
namespace {

using State = TwoPhotonState<Displacement>;

constexpr ModeId M0{0}, M1{1}, M2{2}, M3{3};

State pair(ModeId a, double la, ModeId b, double lb, std::size_t modes = 4) {
  return State(modes, {make_term<Displacement>(1.0, {a, Displacement(la)}, {b, Displacement(lb)})});
}

// Brute-force double sum straight from overlap(), no Gram matrix.
double brute_norm(const State& s) {
  auto single = [](const Photon<Displacement>& q, const Photon<Displacement>& p) {
    return q.mode == p.mode ? overlap(q.label, p.label) : 0.0;
  };
  double total = 0.0;
  for (const auto& p : s.terms()) {
    for (const auto& q : s.terms()) {
      total += (std::conj(q.amplitude) * p.amplitude).real() *
               (single(q.first, p.first) * single(q.second, p.second) +
                single(q.first, p.second) * single(q.second, p.first));
    }
  }
  return total;
}

TEST(Beamsplitter, FullReflectivityLeavesPhotonInPlace) {
  const auto out = apply_beamsplitter(pair(M0, 0.0, M2, 0.0), M0, M1, 1.0);
  ASSERT_EQ(out.terms().size(), 1u);
  EXPECT_EQ(out.terms()[0].first.mode, M0);
  EXPECT_EQ(out.terms()[0].second.mode, M2);
  EXPECT_NEAR(std::abs(out.terms()[0].amplitude - Complex(1.0)), 0.0, 1e-15);
}

TEST(Beamsplitter, HongOuMandelCancelsCoincidences) {
  const auto out = apply_beamsplitter(pair(M0, 0.0, M1, 0.0), M0, M1, 0.5);
  for (const auto& t : out.terms()) {
    const bool coincidence = t.first.mode != t.second.mode;
    if (coincidence) {
      EXPECT_LT(std::abs(t.amplitude), 1e-15);
    }
  }
  EXPECT_EQ(outcome_probability(out, M0, M1), 0.0);
}

TEST(Beamsplitter, DistinguishablePhotonsBehaveClassically) {
  const auto out = apply_beamsplitter(pair(M0, 0.0, M1, 10.0), M0, M1, 0.5);
  EXPECT_NEAR(outcome_probability(out, M0, M1), 0.5, 1e-10);
}

TEST(Beamsplitter, GraySideCarriesTheSign) {
  const State one(4, {make_term<Displacement>(1.0, {M1, Displacement(0.0)}, {M3, Displacement(0.0)})});
  const auto gray_m2 = apply_beamsplitter(one, M0, M1, 0.25, M1);
  const auto gray_m1 = apply_beamsplitter(one, M0, M1, 0.25, M0);
  auto amp_in = [](const State& s, ModeId m) {
    for (const auto& t : s.terms()) {
      if (t.first.mode == m) return t.amplitude.real();
    }
    return 0.0;
  };
  EXPECT_NEAR(amp_in(gray_m2, M1), -0.5, 1e-15);
  EXPECT_NEAR(amp_in(gray_m1, M1), 0.5, 1e-15);
  EXPECT_NEAR(amp_in(gray_m2, M0), std::sqrt(0.75), 1e-15);
}

TEST(Beamsplitter, RejectsInvalidArguments) {
  const auto s = pair(M0, 0.0, M1, 0.0);
  EXPECT_THROW(apply_beamsplitter(s, M0, M1, 1.5), ValidationError);
  EXPECT_THROW(apply_beamsplitter(s, M0, M1, -0.1), ValidationError);
  EXPECT_THROW(apply_beamsplitter(s, M0, ModeId{7}, 0.5), ValidationError);
  EXPECT_THROW(apply_beamsplitter(s, M0, M0, 0.5, M0), ValidationError);
  EXPECT_THROW(apply_beamsplitter(s, M0, M1, 0.5, M2), ValidationError);
}

TEST(TauBox, ZeroShiftIsIdentity) {
  const auto s = apply_beamsplitter(pair(M0, 0.1, M1, -0.2), M0, M1, 0.3);
  EXPECT_EQ(apply_taubox(s, M0, Displacement(0.0)), s);
}

TEST(TauBox, ShiftIsAdditive) {
  const auto out = apply_taubox(pair(M0, 0.2, M1, 0.0), M0, Displacement(0.3));
  ASSERT_EQ(out.terms().size(), 1u);
  EXPECT_NEAR(out.terms()[0].first.label[0], 0.5, 1e-15);
  EXPECT_EQ(out.terms()[0].second.label[0], 0.0);
}

TEST(TauBox, InverseShiftRestoresState) {
  const auto s = apply_beamsplitter(pair(M0, 0.2, M1, 0.0), M0, M1, 0.3);
  const auto back = apply_taubox(apply_taubox(s, M0, Displacement(0.3)), M0, Displacement(-0.3));
  ASSERT_EQ(back.terms().size(), s.terms().size());
  for (std::size_t i = 0; i < s.terms().size(); ++i) {
    EXPECT_NEAR(back.terms()[i].first.label[0], s.terms()[i].first.label[0], 1e-15);
    EXPECT_NEAR(back.terms()[i].second.label[0], s.terms()[i].second.label[0], 1e-15);
    EXPECT_NEAR(std::abs(back.terms()[i].amplitude - s.terms()[i].amplitude), 0.0, 1e-15);
  }
}

TEST(TauBox, RejectsUnknownModeAndDimensionMismatch) {
  const auto s = pair(M0, 0.0, M1, 0.0);
  EXPECT_THROW(apply_taubox(s, ModeId{9}, Displacement(0.1)), ValidationError);
  EXPECT_THROW(apply_taubox(s, M0, Displacement{0.1, 0.2}), ValidationError);
}

TEST(PostSelect, DropsTermsOutsideTheGroups) {
  const State s(5, {make_term<Displacement>(1.0, {M0, {}}, {M1, {}}),   // both in group A
                    make_term<Displacement>(1.0, {M0, {}}, {ModeId{4}, {}}),  // one in a discard mode
                    make_term<Displacement>(1.0, {M1, {}}, {M2, {}})});
  const std::vector<ModeId> a{M0, M1}, b{M2, M3};
  const auto kept = post_select(s, a, b);
  ASSERT_EQ(kept.terms().size(), 1u);
  EXPECT_EQ(kept.terms()[0].first.mode, M1);
  EXPECT_EQ(kept.terms()[0].second.mode, M2);
}

TEST(PostSelect, RejectsOverlappingGroups) {
  const std::vector<ModeId> a{M0, M1}, b{M1, M2};
  EXPECT_THROW(post_select(pair(M0, 0, M2, 0), a, b), ValidationError);
}

TEST(PostSelect, IdealCnotSuccessProbabilityIsOneNinth) {
  const Circuit cnot = build_cnot();
  const std::vector<double> tau(5, 0.0);
  auto s = run(cnot, prepare_input(cnot, InputLabel::parse("10")), std::span<const double>(tau));
  s = post_select(s, cnot.control_modes(), cnot.target_modes());
  double oracle_total = 0.0;
  for (int oc = 0; oc < 2; ++oc) {
    for (int ot = 0; ot < 2; ++ot) oracle_total += oracle::cnot_coincidence(cnot, tau, 1, 0, oc, ot);
  }
  EXPECT_NEAR(oracle_total, 1.0 / 9.0, 1e-14);
  EXPECT_NEAR(norm(s), 1.0 / 9.0, 1e-14);
}

TEST(Norm, SingleTerm) { EXPECT_DOUBLE_EQ(norm(pair(M0, 0.0, M1, 0.0)), 1.0); }

TEST(Norm, PerfectDestructiveInterference) {
  const double h = 1.0 / std::sqrt(2.0);
  const State s(2, {make_term<Displacement>(h, {M0, {}}, {M1, {}}), make_term<Displacement>(-h, {M0, {}}, {M1, {}})});
  EXPECT_EQ(norm(s), 0.0);
}

TEST(Norm, DistinguishableTermsDoNotInterfere) {
  const double h = 1.0 / std::sqrt(2.0);
  const State s(2, {make_term<Displacement>(h, {M0, Displacement(0.0)}, {M1, Displacement(0.0)}),
                    make_term<Displacement>(-h, {M0, Displacement(10.0)}, {M1, Displacement(0.0)})});
  EXPECT_NEAR(norm(s), 1.0, 1e-10);
}

TEST(Norm, DoublyOccupiedModeUsesExchangeTerm) {
  // a+_0 a+_0 |0> has norm 2; with distinct labels 1 + overlap^2.
  EXPECT_DOUBLE_EQ(norm(pair(M0, 0.0, M0, 0.0)), 2.0);
  EXPECT_NEAR(norm(pair(M0, 0.0, M0, 1.0)), 1.0 + std::exp(-0.5), 1e-15);
}

TEST(Norm, ClampsRoundOffNegativity) {
  EXPECT_EQ(clamp_norm(-5e-13), 0.0);
  EXPECT_THROW(clamp_norm(-1e-6), NumericalError);
}

TEST(OutcomeProbability, IdealCnotTruthTableEntries) {
  const Circuit cnot = build_cnot();
  const std::vector<double> tau(5, 0.0);
  for (const char* in : {"10", "00"}) {
    auto s = run(cnot, prepare_input(cnot, InputLabel::parse(in)), std::span<const double>(tau));
    s = post_select(s, cnot.control_modes(), cnot.target_modes());
    const double success = norm(s);
    const ModeId c = in[0] == '1' ? cnot.mode("c1") : cnot.mode("c0");
    const ModeId t = in[0] == '1' ? cnot.mode("t1") : cnot.mode("t0");
    EXPECT_NEAR(outcome_probability(s, c, t) / success, 1.0, 1e-12) << in;
  }
}

TEST(OutcomeProbability, HongOuMandelDipMatchesClosedForm) {
  for (double delta : {0.0, 0.5, 1.0, 2.0, 5.0}) {
    const auto out = apply_beamsplitter(pair(M0, 0.0, M1, delta), M0, M1, 0.5);
    const double ov = oracle::integrated_overlap(delta);
    const double expected = 0.5 * (1.0 - ov * ov);
    EXPECT_NEAR(outcome_probability(out, M0, M1), expected, 1e-10) << delta;
  }
}

// Random optical networks over four modes.
class FockProperties : public ::testing::Test {
 protected:
  std::mt19937_64 rng{77};

  State random_input() {
    std::uniform_int_distribution<int> mode(0, 3);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<PathTerm<Displacement>> terms;
    for (int k = 0; k < 3; ++k) {
      terms.push_back(make_term<Displacement>(Complex(u(rng), u(rng)),
                                              {ModeId{static_cast<std::uint16_t>(mode(rng))}, Displacement(u(rng))},
                                              {ModeId{static_cast<std::uint16_t>(mode(rng))}, Displacement(u(rng))}));
    }
    return State(4, std::move(terms));
  }

  State random_network(State s, int elements) {
    std::uniform_int_distribution<int> mode(0, 3), kind(0, 2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < elements; ++i) {
      const ModeId a{static_cast<std::uint16_t>(mode(rng))};
      ModeId b{static_cast<std::uint16_t>(mode(rng))};
      if (b == a) b.index = static_cast<std::uint16_t>((a.index + 1) % 4);
      switch (kind(rng)) {
        case 0: s = apply_beamsplitter(s, a, b, u(rng), u(rng) < 0.5 ? a : b); break;
        case 1: s = apply_taubox(s, a, Displacement(2.0 * u(rng) - 1.0)); break;
        default: s = apply_phase(s, a, 6.0 * u(rng)); break;
      }
    }
    return s;
  }
};

TEST_F(FockProperties, ProbabilityIsConserved) {
  for (int trial = 0; trial < 200; ++trial) {
    const State in = random_input();
    const State out = random_network(in, 12);
    EXPECT_NEAR(norm(out), norm(in), 1e-10 * std::max(1.0, norm(in)));
  }
}

TEST_F(FockProperties, OutcomeProbabilitiesAreProbabilities) {
  for (int trial = 0; trial < 100; ++trial) {
    State in = random_input();
    const double n = norm(in);
    if (n < 1e-3) continue;
    std::vector<PathTerm<Displacement>> scaled(in.terms().begin(), in.terms().end());
    for (auto& t : scaled) t.amplitude /= std::sqrt(n);
    const State out = random_network(State(4, std::move(scaled)), 10);
    double total = 0.0;
    for (std::uint16_t a = 0; a < 4; ++a) {
      for (std::uint16_t b = a; b < 4; ++b) {
        const double p = outcome_probability(out, ModeId{a}, ModeId{b});
        EXPECT_GE(p, 0.0);
        EXPECT_LE(p, 1.0);
        total += p;
      }
    }
    EXPECT_NEAR(total, 1.0, 1e-10);
  }
}

TEST_F(FockProperties, TauBoxCommutesWithDisjointBeamsplitter) {
  for (int trial = 0; trial < 100; ++trial) {
    const State s = random_input();
    const Displacement d(0.37);
    const auto one = apply_beamsplitter(apply_taubox(s, M2, d), M0, M1, 0.3);
    const auto two = apply_taubox(apply_beamsplitter(s, M0, M1, 0.3), M2, d);
    ASSERT_EQ(one.terms().size(), two.terms().size());
    for (std::size_t i = 0; i < one.terms().size(); ++i) {
      EXPECT_TRUE(one.terms()[i].same_key(two.terms()[i]));
      EXPECT_NEAR(std::abs(one.terms()[i].amplitude - two.terms()[i].amplitude), 0.0, 1e-12);
    }
  }
}

TEST_F(FockProperties, GramNormMatchesBruteForce) {
  for (int trial = 0; trial < 200; ++trial) {
    const State s = random_network(random_input(), 8);
    EXPECT_NEAR(norm(s), std::max(brute_norm(s), 0.0), 1e-12);
  }
}

TEST(GlobalDisplacement, InvisibleToTheCnot) {
  const Circuit cnot = build_cnot();
  const std::vector<double> tau{-0.3, 0.5, -0.55, 0.1, -0.45};
  for (const auto& label : matrix_inputs()) {
    for (Basis basis : {Basis::Z, Basis::X}) {
      const auto plain = evolve_and_measure(cnot, prepare_input(cnot, label), basis,
                                            [&](int i) { return Displacement(tau[i - 1]); });
      auto shifted_in = prepare_input(cnot, label);
      for (const char* m : {"c0", "c1", "t0", "t1", "v1", "v2"}) {
        shifted_in = apply_taubox(shifted_in, cnot.mode(m), Displacement(1.7));
      }
      const auto shifted = evolve_and_measure(cnot, shifted_in, basis, [&](int i) { return Displacement(tau[i - 1]); });
      for (int o = 0; o < 4; ++o) {
        const ModeId c = cnot.control_modes()[o / 2], t = cnot.target_modes()[o % 2];
        EXPECT_NEAR(outcome_probability(shifted, c, t), outcome_probability(plain, c, t), 1e-10);
      }
    }
  }
}

}  // namespace
}  // namespace mmqpt
