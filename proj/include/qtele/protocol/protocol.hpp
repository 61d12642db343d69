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
#include <optional>
#include <string>
#include <vector>

#include "qtele/core/types.hpp"
#include "qtele/node/cavity_node.hpp"
#include "qtele/photonics/photonics.hpp"

namespace qtele::protocol {

using core::DensityState;
using node::AtomOutcome;
using node::DecoherenceLaw;
using node::InputQubit;
using node::NodeParams;

// Subsystem labels, in the fixed global order (Bob, Alice, photon modes).
inline constexpr const char* kBob = "bob";
inline constexpr const char* kAlice = "alice";

/// Durations in microseconds. With no inserted delay the span from the end
/// of optical pumping to the end of the feedback pulse is 25.5 us.
struct TimingConstants {
  double pump_bob_us = 200.0;
  double pump_alice_us = 240.0;
  double pi_half_us = 4.0;
  double pi_us = 8.0;
  double photon_window_us = 1.5;  // both reflections and the 60 m link
  double readout_us = 4.0;
  double classical_latency_us = 4.0;
  double feedback_us = 8.0;
};

enum class PhotonSource { kCoherent, kSinglePhoton };

struct ProtocolConfig {
  InputQubit input = InputQubit::up_x();
  NodeParams node_bob = NodeParams::bob();
  NodeParams node_alice = NodeParams::alice();
  photonics::PulseConfig pulse;
  PhotonSource source = PhotonSource::kCoherent;
  double fiber_transmission = 0.51;
  double fiber_depolarization = 0.0;
  double detection_path_efficiency = 0.5 / 0.9;
  photonics::DetectorParams detector;
  double delay_tau_us = 0.0;
  TimingConstants timing;
  double repetition_rate_hz = 1000.0;
  DecoherenceLaw decoherence_law = DecoherenceLaw::kExponential;
  bool decoherence_enabled = true;
  double alice_readout_fidelity = 1.0;
  // Readout fidelity of the tomography on Bob; only used for raw fidelities.
  double tomography_readout_fidelity = 1.0;
  bool apply_feedback = true;
  // Alice's pi/2 and readout happen only after a herald (default), or on
  // every attempt. Affects the timeline only.
  bool measure_after_herald = true;
  // Raise the Fock cutoff until the Poisson tail is below tolerance.
  bool auto_cutoff = true;

  void validate() const;
  /// Fock cutoff the run will actually use.
  std::size_t effective_cutoff() const;

  /// Every imperfection switched off: lossless unit-reflectivity cavities,
  /// one-photon source, perfect detectors, no decoherence.
  static ProtocolConfig ideal();
};

struct TimelineEvent {
  std::string tag;
  double start_us = 0.0;
  double duration_us = 0.0;
  std::string subsystem;

  double end_us() const { return start_us + duration_us; }
};

struct Timeline {
  std::vector<TimelineEvent> events;
  double pumping_end_us = 0.0;
  double bob_exposure_us = 0.0;
  double alice_exposure_us = 0.0;

  const TimelineEvent& find(const std::string& tag) const;
  double end_us() const;
  /// From the end of the last optical pumping to the end of the feedback.
  double post_pump_duration_us() const { return end_us() - pumping_end_us; }
};

Timeline build_timeline(const ProtocolConfig& config);

/// Length of fiber a delay stands for, with light at c / 1.5.
double length_equivalent_km(double tau_us);

enum class PhotonOutcome { kA = 0, kD = 1 };

struct FeedbackStep {
  node::Axis axis = node::Axis::kX;
  double theta = 0.0;
  std::string name;
};

/// Polarization feedback first, then the measurement feedback.
std::vector<FeedbackStep> feedback_for(PhotonOutcome photon, AtomOutcome alice);

struct BranchResult {
  PhotonOutcome photon = PhotonOutcome::kA;
  AtomOutcome alice = AtomOutcome::kUp;
  double probability = 0.0;
  std::vector<FeedbackStep> feedback;
  std::optional<DensityState> bob_state;
};

struct TeleportResult {
  // Ordered (A, up), (A, down), (D, up), (D, down).
  std::array<BranchResult, 4> branches;
  double herald_probability = 0.0;
  double double_click_probability = 0.0;
  double no_click_probability = 0.0;
  Timeline timeline;

  /// Herald-weighted Bob state; throws when nothing heralds.
  DensityState average_bob_state() const;
  double fidelity(const core::Vector& target) const;
  double branch_fidelity(std::size_t branch, const core::Vector& target) const;
  /// Herald-weighted fidelity of the branches with the given photon outcome.
  double photon_branch_fidelity(PhotonOutcome photon,
                                const core::Vector& target) const;
};

// Stages of the protocol, exposed for inspection and testing.

/// Both atoms after pumping, preparation and their idle decoherence.
DensityState prepare_atoms(const ProtocolConfig& config, const Timeline& timeline);

/// The photonic pulse (coherent or one-photon), on the AD pair.
DensityState source_state(const ProtocolConfig& config);
photonics::PolarizationModePair photon_pair(const ProtocolConfig& config);

/// Bob reflection, fiber, Alice reflection. Input and output are
/// (bob, alice, photon pair).
DensityState propagate_photon(const ProtocolConfig& config, const DensityState& state);

/// Photon detection: returns the four click outcomes with the two-atom
/// conditional states, indexed by photonics::ClickOutcome::index().
std::array<core::Branch, 4> detect_photon(const ProtocolConfig& config,
                                          const DensityState& state);

TeleportResult run_protocol(const ProtocolConfig& config);

double herald_probability(const ProtocolConfig& config);

}  // namespace qtele::protocol
