// Copyright 2026 The qtele Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtele/node/cavity_node.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "qtele/core/error.hpp"
#include "qtele/core/operations.hpp"
#include "qtele/core/tolerances.hpp"

namespace qtele::node {

namespace {

using core::HilbertLayout;
using core::Matrix;
using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::kInvalidArgument, message);
}

double factorial(std::size_t n) { return std::tgamma(static_cast<double>(n) + 1.0); }

Complex ipow(Complex z, std::size_t n) {
  Complex out = 1.0;
  for (std::size_t i = 0; i < n; ++i) out *= z;
  return out;
}

// Single-mode multiport splitter restricted to one atomic branch:
// |n> -> sum sqrt(multinomial) r^(n-k1-k2) t^k1 s^k2 |n-k1-k2>.
Matrix multiport_kraus(const BranchScattering& b, std::size_t k1, std::size_t k2,
                       std::size_t cutoff) {
  const std::size_t levels = cutoff + 1;
  Matrix a = Matrix::Zero(idx(levels), idx(levels));
  for (std::size_t n = k1 + k2; n < levels; ++n) {
    const std::size_t kept = n - k1 - k2;
    const double weight = std::sqrt(factorial(n) /
                                    (factorial(kept) * factorial(k1) * factorial(k2)));
    a(idx(kept), idx(n)) = weight * ipow(b.reflection, kept) *
                           ipow(b.cavity_loss, k1) * ipow(b.atom_scatter, k2);
  }
  return a;
}

}  // namespace

double NodeParams::cooperativity() const {
  if (gamma_mhz == 0.0) return std::numeric_limits<double>::infinity();
  return g_mhz * g_mhz / (2.0 * kappa_mhz * gamma_mhz);
}

void NodeParams::validate() const {
  require(kappa_mhz > 0.0, "kappa must be positive");
  require(gamma_mhz >= 0.0, "gamma must be non-negative");
  require(g_mhz > 0.0, "g must be positive");
  require(input_coupling_fraction > 0.0 && input_coupling_fraction <= 1.0,
          "input coupling fraction must lie in (0, 1]");
  require(mode_matching > 0.0 && mode_matching <= 1.0,
          "mode matching must lie in (0, 1]");
  require(pump_fidelity >= 0.0 && pump_fidelity <= 1.0,
          "pump fidelity must lie in [0, 1]");
  require(pi_pulse_residual >= 0.0 && pi_pulse_residual <= 1.0,
          "pi-pulse residual must lie in [0, 1]");
  require(coherence_time_us > 0.0, "coherence time must be positive");
  require(pi_half_duration_us >= 0.0 && pi_duration_us >= 0.0,
          "pulse durations must be non-negative");
}

NodeParams NodeParams::bob() {
  NodeParams p;
  p.kappa_mhz = 2.5;
  p.gamma_mhz = 3.0;
  p.g_mhz = 7.6;
  p.input_coupling_fraction = 0.8835;  // reproduces the 60% reflectivity
  return p;
}

NodeParams NodeParams::alice() {
  NodeParams p;
  p.kappa_mhz = 2.8;
  p.gamma_mhz = 3.0;
  p.g_mhz = 7.6;
  p.input_coupling_fraction = 0.8641;  // reproduces the 55% reflectivity
  return p;
}

NodeParams NodeParams::ideal() {
  NodeParams p;
  p.gamma_mhz = 0.0;
  p.input_coupling_fraction = 1.0;
  p.mode_matching = 1.0;
  p.pump_fidelity = 1.0;
  p.pi_pulse_residual = 0.0;
  p.coherence_time_us = std::numeric_limits<double>::infinity();
  return p;
}

double BranchScattering::flux() const {
  return std::norm(reflection) + std::norm(cavity_loss) + std::norm(atom_scatter) +
         unmatched_flux;
}

Complex ReflectionAmplitudes::r_coupled() const {
  return std::sqrt(mode_matching) * coupled.reflection;
}

Complex ReflectionAmplitudes::r_uncoupled() const {
  return std::sqrt(mode_matching) * uncoupled.reflection;
}

ReflectionAmplitudes ReflectionAmplitudes::ideal() {
  ReflectionAmplitudes a;
  a.coupled.reflection = 1.0;
  a.uncoupled.reflection = -1.0;
  return a;
}

ReflectionAmplitudes reflection_amplitudes(const NodeParams& params) {
  params.validate();
  const double k = params.input_coupling_fraction;
  const double c = params.cooperativity();
  const double leak = 2.0 * std::sqrt(k * (1.0 - k));

  ReflectionAmplitudes a;
  a.mode_matching = params.mode_matching;
  a.uncoupled.reflection = 1.0 - 2.0 * k;
  a.uncoupled.cavity_loss = leak;
  a.uncoupled.atom_scatter = 0.0;
  if (std::isinf(c)) {
    a.coupled.reflection = 1.0;
  } else {
    const double suppression = 1.0 + 2.0 * c;
    a.coupled.reflection = 1.0 - 2.0 * k / suppression;
    a.coupled.cavity_loss = leak / suppression;
    a.coupled.atom_scatter = 2.0 * std::sqrt(2.0 * c * k) / suppression;
  }
  for (const BranchScattering* b : {&a.coupled, &a.uncoupled}) {
    if (std::abs(b->flux() - 1.0) > tol::kFlux) {
      throw Error(ErrorKind::kInvalidArgument, "scattering flux not conserved");
    }
  }
  return a;
}

double operational_reflectivity(const ReflectionAmplitudes& amps) {
  // A or D is half coupled-circular, half uncoupled-circular.
  const double up = 0.5 * (std::norm(amps.coupled.reflection) +
                           std::norm(amps.uncoupled.reflection));
  const double down = std::norm(amps.uncoupled.reflection);
  return amps.mode_matching * 0.5 * (up + down);
}

std::vector<Matrix> coupled_mode_kraus(const ReflectionAmplitudes& amps,
                                       std::size_t cutoff) {
  const std::size_t levels = cutoff + 1;
  std::vector<Matrix> out;
  for (std::size_t k1 = 0; k1 < levels; ++k1) {
    for (std::size_t k2 = 0; k1 + k2 < levels; ++k2) {
      const Matrix up = multiport_kraus(amps.coupled, k1, k2, cutoff);
      const Matrix down = multiport_kraus(amps.uncoupled, k1, k2, cutoff);
      if (up.cwiseAbs().maxCoeff() == 0.0 && down.cwiseAbs().maxCoeff() == 0.0) {
        continue;
      }
      Matrix k = Matrix::Zero(idx(2 * levels), idx(2 * levels));
      k.topLeftCorner(idx(levels), idx(levels)) = up;
      k.bottomRightCorner(idx(levels), idx(levels)) = down;
      out.push_back(std::move(k));
    }
  }
  return out;
}

DensityState cavity_reflection(const DensityState& state,
                               const ReflectionAmplitudes& amps,
                               const photonics::PolarizationModePair& pair,
                               const std::string& atom) {
  if (state.layout().dim_of(atom) != 2) {
    throw Error(ErrorKind::kDimensionMismatch, "atom '" + atom + "' is not a qubit");
  }
  if (state.layout().dim_of(pair.first) != pair.cutoff + 1 ||
      state.layout().dim_of(pair.second) != pair.cutoff + 1) {
    throw Error(ErrorKind::kCutoffTooSmall,
                "photonic modes do not match the pair cutoff");
  }
  const auto circular =
      photonics::polarization_change_basis(state, pair, photonics::PolarizationBasis::kRL);
  DensityState rho = circular.state;
  const auto& rl = circular.pair;

  if (amps.mode_matching < 1.0) {
    rho = photonics::loss_channel(rho, rl.first, amps.mode_matching);
    rho = photonics::loss_channel(rho, rl.second, amps.mode_matching);
  }

  // The uncoupled circular mode never sees the atom.
  const Complex r_u = amps.uncoupled.reflection;
  rho = photonics::phase_shift(rho, rl.second, std::arg(r_u));
  rho = photonics::loss_channel(rho, rl.second, std::norm(r_u));

  const auto kraus = coupled_mode_kraus(amps, rl.cutoff);
  const std::string targets[] = {atom, rl.first};
  rho = core::apply_kraus(rho, kraus, targets);
  rho = DensityState(rho.layout(), rho.matrix(), state.normalization());

  if (pair.basis == photonics::PolarizationBasis::kRL) return rho;
  return photonics::polarization_change_basis(rho, rl, pair.basis).state;
}

DensityState cavity_reflection(const DensityState& state, const NodeParams& node,
                               const photonics::PolarizationModePair& pair,
                               const std::string& atom) {
  return cavity_reflection(state, reflection_amplitudes(node), pair, atom);
}

void InputQubit::validate() const {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > tol::kNormalization) {
    throw Error(ErrorKind::kInvalidArgument, "input qubit is not normalized");
  }
}

core::Vector InputQubit::vector() const {
  core::Vector v(2);
  v << alpha, beta;
  return v;
}

bool InputQubit::is_z_eigenstate() const {
  return std::abs(alpha) < 1e-12 || std::abs(beta) < 1e-12;
}

InputQubit InputQubit::up_z() { return {1.0, 0.0}; }
InputQubit InputQubit::down_z() { return {0.0, 1.0}; }
InputQubit InputQubit::up_x() {
  return {1.0 / std::numbers::sqrt2, 1.0 / std::numbers::sqrt2};
}
InputQubit InputQubit::down_x() {
  return {1.0 / std::numbers::sqrt2, -1.0 / std::numbers::sqrt2};
}
InputQubit InputQubit::up_y() {
  return {1.0 / std::numbers::sqrt2, Complex(0.0, 1.0 / std::numbers::sqrt2)};
}
InputQubit InputQubit::down_y() {
  return {1.0 / std::numbers::sqrt2, Complex(0.0, -1.0 / std::numbers::sqrt2)};
}

std::array<InputQubit, 6> six_states() {
  return {InputQubit::up_z(), InputQubit::down_z(), InputQubit::up_x(),
          InputQubit::down_x(), InputQubit::up_y(), InputQubit::down_y()};
}

std::array<std::string, 6> six_state_labels() {
  return {"+z", "-z", "+x", "-x", "+y", "-y"};
}

Eigen::Matrix2cd rotation_matrix(Axis axis, double theta) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd r;
  switch (axis) {
    case Axis::kX:
      r << c, -i * s, -i * s, c;
      break;
    case Axis::kY:
      r << c, -s, s, c;
      break;
    case Axis::kZ:
      r << std::polar(1.0, -theta / 2.0), 0.0, 0.0, std::polar(1.0, theta / 2.0);
      break;
  }
  return r;
}

Eigen::Matrix2cd equatorial_rotation(double theta, double phi) {
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd r;
  r << c, -i * s * std::polar(1.0, -phi), -i * s * std::polar(1.0, phi), c;
  return r;
}

DensityState apply_qubit_gate(const DensityState& state, const std::string& atom,
                              const Eigen::Matrix2cd& gate) {
  const core::LinearOperator op(HilbertLayout::single(atom, 2), gate, true);
  const std::string targets[] = {atom};
  return core::apply_unitary(state, op, targets);
}

DensityState raman_rotation(const DensityState& state, const std::string& atom,
                            Axis axis, double theta) {
  return apply_qubit_gate(state, atom, rotation_matrix(axis, theta));
}

DensityState prepare_state(const InputQubit& target, const NodeParams& node,
                           const std::string& label) {
  target.validate();
  const HilbertLayout layout = HilbertLayout::single(label, 2);
  Matrix pumped = Matrix::Zero(2, 2);
  pumped(0, 0) = node.pump_fidelity;
  pumped(1, 1) = 1.0 - node.pump_fidelity;
  const DensityState start(layout, pumped);

  const double theta = 2.0 * std::acos(std::clamp(std::abs(target.alpha), 0.0, 1.0));
  if (theta == 0.0) return start;
  const double relative_phase =
      std::abs(target.alpha) > 0.0 && std::abs(target.beta) > 0.0
          ? std::arg(target.beta) - std::arg(target.alpha)
          : 0.0;
  const Eigen::Matrix2cd u =
      equatorial_rotation(theta, relative_phase + std::numbers::pi / 2.0);
  const DensityState rotated = apply_qubit_gate(start, label, u);

  // A fraction of the population, growing with pulse area, is left behind.
  const double residual = node.pi_pulse_residual * theta / std::numbers::pi;
  return DensityState(layout,
                      (1.0 - residual) * rotated.matrix() + residual * pumped);
}

double coherence_factor(double duration_us, double coherence_time_us,
                        DecoherenceLaw law) {
  if (duration_us < 0.0) {
    throw Error(ErrorKind::kInvalidArgument, "negative idle duration");
  }
  if (!(coherence_time_us > 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "coherence time must be positive");
  }
  const double x = duration_us / coherence_time_us;
  return law == DecoherenceLaw::kExponential ? std::exp(-x) : std::exp(-x * x);
}

DensityState idle_decoherence(const DensityState& state, const std::string& atom,
                              double duration_us, const NodeParams& node,
                              DecoherenceLaw law) {
  const double factor = coherence_factor(duration_us, node.coherence_time_us, law);
  if (factor == 1.0) return state;
  return core::apply_noise(state, atom,
                           {core::NoiseKind::kDephasing, 1.0 - factor});
}

std::array<core::Branch, 2> atomic_readout(const DensityState& state,
                                           const std::string& atom,
                                           double readout_fidelity) {
  if (!(readout_fidelity >= 0.0 && readout_fidelity <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "readout fidelity must lie in [0, 1]");
  }
  const HilbertLayout qubit = HilbertLayout::single(atom, 2);
  Matrix up = Matrix::Zero(2, 2);
  up(0, 0) = 1.0;
  Matrix down = Matrix::Zero(2, 2);
  down(1, 1) = 1.0;
  const core::LinearOperator projectors[] = {core::LinearOperator(qubit, up),
                                             core::LinearOperator(qubit, down)};
  const auto exact = core::projective_measure(state, projectors);

  std::array<core::Branch, 2> out;
  for (std::size_t reported = 0; reported < 2; ++reported) {
    Matrix mix = Matrix::Zero(state.matrix().rows(), state.matrix().cols());
    double prob = 0.0;
    for (std::size_t actual = 0; actual < 2; ++actual) {
      const double w = actual == reported ? readout_fidelity : 1.0 - readout_fidelity;
      if (w == 0.0 || !exact[actual].state) continue;
      prob += w * exact[actual].probability;
      mix += w * exact[actual].probability * exact[actual].state->matrix();
    }
    out[reported].probability = prob;
    if (prob > tol::kZeroProbability) {
      out[reported].state = DensityState(state.layout(), mix / prob);
    }
  }
  return out;
}

}  // namespace qtele::node
