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
#include <complex>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "mmqpt/circuit.hpp"
#include "mmqpt/error.hpp"
#include "mmqpt/fock.hpp"
#include "mmqpt/gate_model.hpp"
#include "mmqpt/meas_matrix.hpp"

namespace mmqpt {

using Ket2 = Eigen::Vector2cd;
using Ket4 = Eigen::Vector4cd;
using Matrix4c = Eigen::Matrix4cd;
using Matrix16c = Eigen::Matrix<Complex, 16, 16>;

// ---------------------------------------------------------------------------
// Error metrics

struct ErrorReport {
  MeasMatrix::Entries error_matrix;
  double e_max = 0.0;
  double e_mean = 0.0;
};

/// Element-wise |exp - model| with its maximum and mean over all 64 entries.
inline ErrorReport error_report(const MeasMatrix& exp, const MeasMatrix& model) {
  ErrorReport r;
  r.error_matrix = (exp.entries - model.entries).cwiseAbs();
  r.e_max = r.error_matrix.maxCoeff();
  r.e_mean = r.error_matrix.mean();
  return r;
}

// ---------------------------------------------------------------------------
// Two-qubit states

inline Ket2 qubit_ket(QubitState q) {
  const double h = 1.0 / std::sqrt(2.0);
  const Complex i(0.0, 1.0);
  switch (q) {
    case QubitState::Zero: return Ket2(1.0, 0.0);
    case QubitState::One: return Ket2(0.0, 1.0);
    case QubitState::Plus: return Ket2(h, h);
    case QubitState::Minus: return Ket2(h, -h);
    case QubitState::PlusI: return Ket2(h, h * i);
    case QubitState::MinusI: return Ket2(h, -h * i);
  }
  return Ket2::Zero();
}

/// Product ket, control qubit most significant (index 2c + t).
inline Ket4 product_ket(InputLabel label) {
  const Ket2 c = qubit_ket(label.control);
  const Ket2 t = qubit_ket(label.target);
  Ket4 k;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) k(2 * a + b) = c(a) * t(b);
  }
  return k;
}

struct DensityMatrix {
  Matrix4c rho = Matrix4c::Zero();

  double trace() const { return rho.trace().real(); }
  double purity() const { return (rho * rho).trace().real(); }
  double hermiticity_error() const { return (rho - rho.adjoint()).cwiseAbs().maxCoeff(); }
  double min_eigenvalue() const {
    Eigen::SelfAdjointEigenSolver<Matrix4c> s(rho, Eigen::EigenvaluesOnly);
    return s.eigenvalues().minCoeff();
  }
};

struct OutputState {
  DensityMatrix density;  // unit trace
  double success_probability = 0.0;
};

/// Post-selected, unnormalised qubit output of the CNOT model for a pure
/// input. The wavepacket labels are traced out:
///     rho_ij = sum_{p in i, q in j} a_p conj(a_q) <labels_q | labels_p>.
inline Matrix4c unnormalized_output(const Ket4& input, const TauParams& tau) {
  static const Circuit circuit = build_cnot();
  const std::array<Complex, 4> ket{input(0), input(1), input(2), input(3)};
  auto state = prepare_ket<Displacement>(circuit, std::span<const Complex, 4>(ket));
  state = run(circuit, std::move(state), tau.span());
  state = post_select(state, circuit.control_modes(), circuit.target_modes());

  struct Entry {
    int index;
    Complex amplitude;
    Displacement control, target;
  };
  std::vector<Entry> entries;
  auto rail = [](std::span<const ModeId> g, ModeId m) { return g[0] == m ? 0 : (g[1] == m ? 1 : -1); };
  for (const auto& t : state.terms()) {
    const int c1 = rail(circuit.control_modes(), t.first.mode);
    if (c1 >= 0) {
      entries.push_back({2 * c1 + rail(circuit.target_modes(), t.second.mode), t.amplitude, t.first.label,
                         t.second.label});
    } else {
      entries.push_back({2 * rail(circuit.control_modes(), t.second.mode) + rail(circuit.target_modes(), t.first.mode),
                         t.amplitude, t.second.label, t.first.label});
    }
  }
  Matrix4c rho = Matrix4c::Zero();
  for (const auto& p : entries) {
    for (const auto& q : entries) {
      rho(p.index, q.index) += p.amplitude * std::conj(q.amplitude) * overlap(q.control, p.control) *
                               overlap(q.target, p.target);
    }
  }
  return rho;
}

inline OutputState output_density(const Ket4& input, const TauParams& tau) {
  if (std::abs(input.norm() - 1.0) > 1e-9) throw ValidationError("input ket is not normalised");
  const Matrix4c rho = unnormalized_output(input, tau);
  const double success = rho.trace().real();
  if (success < kMinSuccessProbability) {
    throw NumericalError("post-selection success probability below " + std::to_string(kMinSuccessProbability));
  }
  return {DensityMatrix{rho / success}, success};
}

// ---------------------------------------------------------------------------
// Process matrices

/// Two-qubit Pauli products sigma_a (x) sigma_b, index 4a + b, order I X Y Z.
inline const std::array<Matrix4c, 16>& pauli_basis() {
  static const std::array<Matrix4c, 16> basis = [] {
    const Complex i(0.0, 1.0);
    std::array<Eigen::Matrix2cd, 4> s;
    s[0] << 1, 0, 0, 1;
    s[1] << 0, 1, 1, 0;
    s[2] << 0, -i, i, 0;
    s[3] << 1, 0, 0, -1;
    std::array<Matrix4c, 16> out;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) out[4 * a + b] = Eigen::kroneckerProduct(s[a], s[b]);
    }
    return out;
  }();
  return basis;
}

inline const std::array<std::string, 16>& pauli_labels() {
  static const std::array<std::string, 16> labels = [] {
    const char* names = "IXYZ";
    std::array<std::string, 16> out;
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) out[4 * a + b] = std::string{names[a], names[b]};
    }
    return out;
  }();
  return labels;
}

/// Process matrix chi with E(rho) = sum_mn chi_mn P_m rho P_n^dagger.
struct ChiMatrix {
  Matrix16c chi = Matrix16c::Zero();

  double trace() const { return chi.trace().real(); }
  double hermiticity_error() const { return (chi - chi.adjoint()).cwiseAbs().maxCoeff(); }
  Eigen::Matrix<double, 16, 1> eigenvalues() const {
    Eigen::SelfAdjointEigenSolver<Matrix16c> s(chi, Eigen::EigenvaluesOnly);
    return s.eigenvalues();
  }
  double min_eigenvalue() const { return eigenvalues().minCoeff(); }
};

/// Applies the channel described by chi to a 4x4 operator.
inline Matrix4c apply_chi(const ChiMatrix& chi, const Matrix4c& rho) {
  const auto& P = pauli_basis();
  Matrix4c out = Matrix4c::Zero();
  for (int m = 0; m < 16; ++m) {
    const Matrix4c left = P[m] * rho;
    for (int n = 0; n < 16; ++n) {
      if (chi.chi(m, n) != Complex(0.0)) out += chi.chi(m, n) * left * P[n].adjoint();
    }
  }
  return out;
}

/// chi of the unitary channel rho -> U rho U^dagger: rank one, built from the
/// Pauli expansion c_m = tr(P_m U) / 4.
inline ChiMatrix unitary_chi(const Matrix4c& u) {
  Eigen::Matrix<Complex, 16, 1> c;
  for (int m = 0; m < 16; ++m) c(m) = (pauli_basis()[m].adjoint() * u).trace() / 4.0;
  return {c * c.adjoint()};
}

inline ChiMatrix ideal_cnot_chi() {
  Matrix4c cnot;
  cnot << 1, 0, 0, 0,  //
      0, 1, 0, 0,      //
      0, 0, 0, 1,      //
      0, 0, 1, 0;
  return unitary_chi(cnot);
}

/// Informationally complete input set {|0>, |1>, |+>, |+i>}^(x)2.
inline std::vector<InputLabel> standard_tomography_inputs() {
  using Q = QubitState;
  constexpr std::array<Q, 4> kStates{Q::Zero, Q::One, Q::Plus, Q::PlusI};
  std::vector<InputLabel> out;
  for (Q c : kStates) {
    for (Q t : kStates) out.push_back({c, t});
  }
  return out;
}

/// Every product of the six Pauli eigenstates: 36 inputs, overcomplete.
inline std::vector<InputLabel> overcomplete_tomography_inputs() {
  using Q = QubitState;
  constexpr std::array<Q, 6> kStates{Q::Zero, Q::One, Q::Plus, Q::Minus, Q::PlusI, Q::MinusI};
  std::vector<InputLabel> out;
  for (Q c : kStates) {
    for (Q t : kStates) out.push_back({c, t});
  }
  return out;
}

namespace detail {

// Row-major vectorisation of a 4x4 operator, index 4i + j.
inline Eigen::Matrix<Complex, 16, 1> vec(const Matrix4c& m) {
  Eigen::Matrix<Complex, 16, 1> v;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) v(4 * i + j) = m(i, j);
  }
  return v;
}

}  // namespace detail

/// Linear-inversion process tomography from input states and the channel's
/// (trace-decreasing) outputs on them.
///
/// Each elementary operator |k><l| is expanded over the inputs, the outputs
/// are combined with the same coefficients, and the resulting Choi matrix
/// J = sum_kl |k><l| (x) E(|k><l|) is projected onto the Pauli basis:
/// chi_mn = <v_m|J|v_n> / 16 with |v_m> = (I (x) P_m) sum_k |kk>.
/// More than 16 inputs are handled by least squares. chi is left unnormalised.
inline Matrix16c invert_process(std::span<const Matrix4c> inputs, std::span<const Matrix4c> outputs) {
  if (inputs.size() != outputs.size()) throw ValidationError("tomography input/output count mismatch");
  const auto n = static_cast<Eigen::Index>(inputs.size());
  Eigen::MatrixXcd r(16, n);
  for (Eigen::Index j = 0; j < n; ++j) r.col(j) = detail::vec(inputs[static_cast<std::size_t>(j)]);
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXcd> cod(r);
  cod.setThreshold(1e-10);
  if (cod.rank() < 16) {
    throw NumericalError("tomography inputs are not informationally complete (rank " + std::to_string(cod.rank()) +
                         ")");
  }
  const Eigen::MatrixXcd coeff = cod.solve(Eigen::MatrixXcd::Identity(16, 16));  // n x 16

  Matrix16c choi = Matrix16c::Zero();
  for (int k = 0; k < 4; ++k) {
    for (int l = 0; l < 4; ++l) {
      Matrix4c e = Matrix4c::Zero();
      for (Eigen::Index j = 0; j < n; ++j) e += coeff(j, 4 * k + l) * outputs[static_cast<std::size_t>(j)];
      choi.block<4, 4>(4 * k, 4 * l) = e;
    }
  }
  Eigen::Matrix<Complex, 16, 16> v;
  for (int m = 0; m < 16; ++m) {
    Eigen::Matrix<Complex, 16, 1> col = Eigen::Matrix<Complex, 16, 1>::Zero();
    for (int k = 0; k < 4; ++k) col.segment<4>(4 * k) = pauli_basis()[m].col(k);
    v.col(m) = col;
  }
  return v.adjoint() * choi * v / 16.0;
}

/// Process matrix of the CNOT model at the given parameters, reconstructed
/// from success-weighted outputs (the post-selected map stays linear) and
/// scaled to unit trace at the end.
inline ChiMatrix reconstruct_chi(const TauParams& tau, std::span<const InputLabel> inputs) {
  std::vector<Matrix4c> in, out;
  for (const auto& label : inputs) {
    const Ket4 k = product_ket(label);
    in.push_back(k * k.adjoint());
    out.push_back(unnormalized_output(k, tau));
  }
  Matrix16c chi = invert_process(in, out);
  const double tr = chi.trace().real();
  if (!(tr > kMinSuccessProbability)) throw NumericalError("reconstructed process has vanishing trace");
  chi /= tr;
  return {chi};
}

inline ChiMatrix reconstruct_chi(const TauParams& tau) {
  static const auto inputs = standard_tomography_inputs();
  return reconstruct_chi(tau, inputs);
}

/// Conditional measurement matrix implied by a process matrix: each of the
/// eight inputs is sent through chi and measured in Z(x)Z and X(x)X.
inline MeasMatrix predicted_matrix(const ChiMatrix& chi) {
  Eigen::Matrix2cd h;
  h << 1, 1, 1, -1;
  h /= std::sqrt(2.0);
  const Matrix4c hh = Eigen::kroneckerProduct(h, h);
  MeasMatrix m;
  const auto& inputs = matrix_inputs();
  for (int r = 0; r < 8; ++r) {
    const Ket4 k = product_ket(inputs[static_cast<std::size_t>(r)]);
    const Matrix4c rho = apply_chi(chi, k * k.adjoint());
    const Matrix4c rx = hh * rho * hh.adjoint();
    const double tz = rho.trace().real();
    const double tx = rx.trace().real();
    if (tz < kMinSuccessProbability || tx < kMinSuccessProbability) {
      throw NumericalError("process annihilates input " + std::string(MeasMatrix::kRowLabels[r]));
    }
    for (int o = 0; o < 4; ++o) {
      m(r, o) = rho(o, o).real() / tz;
      m(r, 4 + o) = rx(o, o).real() / tx;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Process fidelity

inline constexpr double kHermiticityTolerance = 1e-10;
inline constexpr double kPsdTolerance = 1e-9;
/// Eigenvalues of a unit-trace process matrix below this are round-off and
/// are zeroed before taking square roots.
inline constexpr double kEigenvalueFloor = 1e-14;

namespace detail {

// Eigenvalues in [-kPsdTolerance, kEigenvalueFloor] are set to zero.
inline Matrix16c psd_sqrt(const Matrix16c& a, const char* what) {
  Eigen::SelfAdjointEigenSolver<Matrix16c> s(a);
  Eigen::Matrix<double, 16, 1> w = s.eigenvalues();
  if (w.minCoeff() < -kPsdTolerance) {
    throw ValidationError(std::string(what) + " is not positive semidefinite (eigenvalue " +
                          std::to_string(w.minCoeff()) + ")");
  }
  for (auto& x : w) x = x <= kEigenvalueFloor ? 0.0 : std::sqrt(x);
  return s.eigenvectors() * w.asDiagonal() * s.eigenvectors().adjoint();
}

inline void check_process(const ChiMatrix& c, const char* what) {
  if (c.hermiticity_error() > kHermiticityTolerance) {
    throw ValidationError(std::string(what) + " is not Hermitian");
  }
  if (std::abs(c.trace() - 1.0) > 1e-9) throw ValidationError(std::string(what) + " is not trace-normalised");
}

}  // namespace detail

/// F = ( tr sqrt( sqrt(A) B sqrt(A) ) )^2 = ( sum of singular values of
/// sqrt(A) sqrt(B) )^2. Working with the product avoids squaring small
/// eigenvalues, so F(A, A) = 1 to rounding even for nearly singular A.
inline double process_fidelity(const ChiMatrix& a, const ChiMatrix& b) {
  detail::check_process(a, "first process matrix");
  detail::check_process(b, "second process matrix");
  const Matrix16c sa = detail::psd_sqrt(0.5 * (a.chi + a.chi.adjoint()), "first process matrix");
  const Matrix16c sb = detail::psd_sqrt(0.5 * (b.chi + b.chi.adjoint()), "second process matrix");
  const Eigen::JacobiSVD<Matrix16c> svd(sa * sb);
  const double tr = svd.singularValues().sum();
  return std::clamp(tr * tr, 0.0, 1.0);
}

}  // namespace mmqpt
