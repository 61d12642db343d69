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
#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "qtele/core/tolerances.hpp"
#include "qtele/core/types.hpp"

namespace qtele::photonics {

using core::DensityState;
using core::Matrix;

enum class Polarization { kA, kD, kR, kL };
enum class PolarizationBasis { kAD, kRL };

/// Weak coherent pulse. The envelope width is carried along for reporting;
/// the reflection model does not resolve the temporal mode.
struct PulseConfig {
  double mean_photon_number = 0.07;
  Polarization polarization = Polarization::kA;
  std::size_t fock_cutoff = 3;
  double envelope_fwhm_us = 1.0;
};

/// Two Fock modes holding the orthogonal polarizations of one pulse.
/// In the AD basis the first mode is A and the second D; in the RL basis the
/// first mode is R, the circular component that couples to the atom.
struct PolarizationModePair {
  std::string first = "photon_0";
  std::string second = "photon_1";
  PolarizationBasis basis = PolarizationBasis::kAD;
  std::size_t cutoff = 3;

  std::array<std::string, 2> labels() const { return {first, second}; }
};

struct DetectorParams {
  double efficiency = 0.9;
  double dark_count_rate_hz = 9.0;
  double gate_window_us = 3.0;

  double dark_click_probability() const;
};

struct ClickOutcome {
  bool clicked_a = false;
  bool clicked_d = false;

  std::size_t index() const {
    return (clicked_a ? 1U : 0U) + (clicked_d ? 2U : 0U);
  }
  static ClickOutcome from_index(std::size_t i) {
    return ClickOutcome{(i & 1U) != 0, (i & 2U) != 0};
  }
  bool operator==(const ClickOutcome&) const = default;
};

/// Poisson mass above \p cutoff.
double poisson_tail(double mean_photon_number, std::size_t cutoff);

/// Smallest cutoff >= 2 whose Poisson tail is below \p tail.
std::size_t required_cutoff(double mean_photon_number,
                            double tail = tol::kFockTruncation);

/// Layout of the two polarization modes, (cutoff + 1) levels each.
core::HilbertLayout pair_layout(const PolarizationModePair& pair);

/// The mode pair a pulse of \p config lives in.
PolarizationModePair pair_for(const PulseConfig& config);

DensityState coherent_pulse_state(const PulseConfig& config);

/// |n> in the configured polarization, vacuum in the orthogonal mode.
DensityState fock_pulse_state(std::size_t photons, Polarization polarization,
                              std::size_t cutoff);

/// Fock-space matrix of the passive two-mode transformation
/// a_j^dag -> sum_i u(i, j) a_i^dag. Exact on every state with at most
/// \p cutoff photons in total; components above that are dropped.
Matrix two_mode_transform(const Eigen::Matrix2cd& u, std::size_t cutoff);

/// Beam-splitter mode matrix. Convention: real amplitude transmittance
/// sqrt(T), reflection i*sqrt(1 - T) on both ports.
Eigen::Matrix2cd beam_splitter_modes(double transmittance);

DensityState beam_splitter(const DensityState& state, const std::string& mode_a,
                           const std::string& mode_b, double transmittance);

/// exp(i * phi * n) on one mode.
DensityState phase_shift(const DensityState& state, const std::string& mode,
                         double phi);

/// Kraus operators of a single-mode loss channel: the mode meets a vacuum
/// ancilla on a beam splitter of the given transmission and the ancilla is
/// traced out. Index k is the number of photons lost.
std::vector<Matrix> loss_kraus(double transmission, std::size_t cutoff);

DensityState loss_channel(const DensityState& state, const std::string& mode,
                          double transmission);

struct BasisChange {
  DensityState state;
  PolarizationModePair pair;
  bool was_noop = false;
};

BasisChange polarization_change_basis(const DensityState& state,
                                      const PolarizationModePair& pair,
                                      PolarizationBasis to);

/// Applies an arbitrary passive polarization transformation to the pair.
DensityState polarization_transform(const DensityState& state,
                                    const PolarizationModePair& pair,
                                    const Eigen::Matrix2cd& u);

/// Polarization depolarizing channel: with probability p the pulse
/// polarization is scrambled by a uniformly random Pauli rotation of both
/// modes. On one photon this is p * I/2 + (1 - p) * rho.
DensityState depolarize_polarization(const DensityState& state,
                                     const PolarizationModePair& pair,
                                     double p);

/// Four click POVM elements on an AD pair, indexed by ClickOutcome::index().
/// Each detector independently fails to click on n photons with probability
/// (1 - eta)^n * (1 - p_dark).
std::array<Matrix, 4> click_povm(const DetectorParams& params, std::size_t cutoff);

/// Photon-number expectation of one mode.
double mean_photon_number(const DensityState& state, const std::string& mode);

/// Diagonal photon-number distribution of one mode.
Eigen::VectorXd photon_number_distribution(const DensityState& state,
                                           const std::string& mode);

}  // namespace qtele::photonics
