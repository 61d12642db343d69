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

#pragma once

#include <array>
#include <string>
#include <vector>

#include "qtele/core/types.hpp"
#include "qtele/photonics/photonics.hpp"

namespace qtele::node {

using core::Complex;
using core::DensityState;

/// Cavity-QED numbers of one node plus the control errors of its atom.
/// Rates are in MHz, times in microseconds.
struct NodeParams {
  double kappa_mhz = 2.5;
  double gamma_mhz = 3.0;
  double g_mhz = 7.6;
  double input_coupling_fraction = 1.0;  // kappa_in / kappa
  double mode_matching = 1.0;            // power fraction entering the cavity mode
  double pump_fidelity = 0.99;
  double pi_pulse_residual = 0.03;
  double coherence_time_us = 400.0;
  double pi_half_duration_us = 4.0;
  double pi_duration_us = 8.0;

  /// C = g^2 / (2 kappa gamma); infinite when gamma is zero.
  double cooperativity() const;
  void validate() const;

  static NodeParams bob();
  static NodeParams alice();
  /// Lossless, overcoupled, infinitely cooperative node with perfect control.
  static NodeParams ideal();
};

/// Where a photon entering the cavity mode ends up, for one atomic state.
struct BranchScattering {
  Complex reflection;    // back into the detected mode
  Complex cavity_loss;   // transmission through the far mirror and mirror scattering
  Complex atom_scatter;  // spontaneous emission out of the cavity mode
  double unmatched_flux = 0.0;

  double flux() const;
};

struct ReflectionAmplitudes {
  // Cavity-internal amplitudes; the mode-matching factor is kept separately.
  BranchScattering coupled;
  BranchScattering uncoupled;
  double mode_matching = 1.0;

  /// Amplitudes as seen by the detected mode (including mode matching).
  Complex r_coupled() const;
  Complex r_uncoupled() const;

  static ReflectionAmplitudes ideal();
};

/// On-resonance one-sided cavity: r_uncoupled = 1 - 2 k, r_coupled =
/// 1 - 2 k / (1 + 2C) with k = kappa_in / kappa.
ReflectionAmplitudes reflection_amplitudes(const NodeParams& params);

/// Photon survival probability of one reflection, averaged over an atom that
/// is |up_z> or |down_z> with equal weight and an A/D-polarized photon.
double operational_reflectivity(const ReflectionAmplitudes& amps);

/// Kraus operators of the conditional reflection on (atom, coupled mode).
std::vector<core::Matrix> coupled_mode_kraus(const ReflectionAmplitudes& amps,
                                             std::size_t cutoff);

/// Reflects the pulse held in \p pair from the cavity containing \p atom.
/// The returned state is in the same polarization basis as \p pair.
DensityState cavity_reflection(const DensityState& state,
                               const ReflectionAmplitudes& amps,
                               const photonics::PolarizationModePair& pair,
                               const std::string& atom);
DensityState cavity_reflection(const DensityState& state, const NodeParams& node,
                               const photonics::PolarizationModePair& pair,
                               const std::string& atom);

struct InputQubit {
  Complex alpha = 1.0;
  Complex beta = 0.0;

  void validate() const;
  core::Vector vector() const;
  bool is_z_eigenstate() const;

  static InputQubit up_z();
  static InputQubit down_z();
  static InputQubit up_x();
  static InputQubit down_x();
  static InputQubit up_y();
  static InputQubit down_y();
};

/// The six Pauli eigenstates in the order +z, -z, +x, -x, +y, -y.
std::array<InputQubit, 6> six_states();
std::array<std::string, 6> six_state_labels();

enum class Axis { kX, kY, kZ };

/// Rotation matrices with the R(theta) = exp(-i theta sigma / 2) convention.
Eigen::Matrix2cd rotation_matrix(Axis axis, double theta);
/// Rotation by theta about the equatorial axis (cos phi, sin phi, 0).
Eigen::Matrix2cd equatorial_rotation(double theta, double phi);

DensityState raman_rotation(const DensityState& state, const std::string& atom,
                            Axis axis, double theta);
DensityState apply_qubit_gate(const DensityState& state, const std::string& atom,
                              const Eigen::Matrix2cd& gate);

/// Optical pumping to |up_z> followed by a Raman rotation onto \p target,
/// with the node's pumping and rotation errors.
DensityState prepare_state(const InputQubit& target, const NodeParams& node,
                           const std::string& label = "atom");

enum class DecoherenceLaw { kExponential, kGaussian };

/// Remaining coherence factor after \p duration_us.
double coherence_factor(double duration_us, double coherence_time_us,
                        DecoherenceLaw law);

DensityState idle_decoherence(const DensityState& state, const std::string& atom,
                              double duration_us, const NodeParams& node,
                              DecoherenceLaw law);

enum class AtomOutcome { kUp = 0, kDown = 1 };

/// Fluorescence state detection in the z basis. Each outcome is misreported
/// with probability 1 - readout_fidelity. Branches are ordered up, down.
std::array<core::Branch, 2> atomic_readout(const DensityState& state,
                                           const std::string& atom,
                                           double readout_fidelity);

}  // namespace qtele::node
