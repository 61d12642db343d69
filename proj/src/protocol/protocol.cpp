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

#include "qtele/protocol/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qtele/core/error.hpp"
#include "qtele/core/operations.hpp"
#include "qtele/core/tolerances.hpp"

namespace qtele::protocol {

namespace {

using core::Matrix;
using photonics::ClickOutcome;

void require_probability(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string(what) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

// c / 1.5 rounded to 2e8 m/s.
constexpr double kFiberLightSpeedKmPerUs = 0.2;

}  // namespace

void ProtocolConfig::validate() const {
  input.validate();
  node_bob.validate();
  node_alice.validate();
  require_probability(fiber_transmission, "fiber transmission");
  require_probability(fiber_depolarization, "fiber depolarization");
  require_probability(detection_path_efficiency, "detection path efficiency");
  require_probability(detector.efficiency, "detector efficiency");
  require_probability(alice_readout_fidelity, "Alice readout fidelity");
  require_probability(tomography_readout_fidelity, "tomography readout fidelity");
  if (!(pulse.mean_photon_number >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "mean photon number must be >= 0");
  }
  if (pulse.fock_cutoff < 2) {
    throw Error(ErrorKind::kInvalidArgument, "Fock cutoff must be >= 2");
  }
  if (!(delay_tau_us >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "delay must be >= 0");
  }
  if (!(detector.dark_count_rate_hz >= 0.0) || !(detector.gate_window_us >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "detector rates must be >= 0");
  }
  if (!(repetition_rate_hz >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "repetition rate must be >= 0");
  }
  const TimingConstants& t = timing;
  for (double d : {t.pump_bob_us, t.pump_alice_us, t.pi_half_us, t.pi_us,
                   t.photon_window_us, t.readout_us, t.classical_latency_us,
                   t.feedback_us}) {
    if (!(d >= 0.0)) {
      throw Error(ErrorKind::kInvalidArgument, "timing constants must be >= 0");
    }
  }
}

std::size_t ProtocolConfig::effective_cutoff() const {
  if (source == PhotonSource::kSinglePhoton) {
    return auto_cutoff ? 2 : pulse.fock_cutoff;
  }
  if (!auto_cutoff) return pulse.fock_cutoff;
  return std::max(pulse.fock_cutoff,
                  photonics::required_cutoff(pulse.mean_photon_number));
}

ProtocolConfig ProtocolConfig::ideal() {
  ProtocolConfig c;
  c.node_bob = NodeParams::ideal();
  c.node_alice = NodeParams::ideal();
  c.source = PhotonSource::kSinglePhoton;
  c.fiber_transmission = 1.0;
  c.fiber_depolarization = 0.0;
  c.detection_path_efficiency = 1.0;
  c.detector.efficiency = 1.0;
  c.detector.dark_count_rate_hz = 0.0;
  c.decoherence_enabled = false;
  c.alice_readout_fidelity = 1.0;
  return c;
}

const TimelineEvent& Timeline::find(const std::string& tag) const {
  for (const auto& e : events) {
    if (e.tag == tag) return e;
  }
  throw Error(ErrorKind::kInvalidArgument, "no timeline event '" + tag + "'");
}

double Timeline::end_us() const {
  double end = 0.0;
  for (const auto& e : events) end = std::max(end, e.end_us());
  return end;
}

Timeline build_timeline(const ProtocolConfig& config) {
  const TimingConstants& t = config.timing;
  const double tau = config.delay_tau_us;
  Timeline tl;
  auto add = [&tl](std::string tag, double start, double duration,
                   std::string subsystem) -> const TimelineEvent& {
    tl.events.push_back({std::move(tag), start, duration, std::move(subsystem)});
    return tl.events.back();
  };

  add("pump_bob", 0.0, t.pump_bob_us, kBob);
  add("pump_alice", 0.0, t.pump_alice_us, kAlice);
  tl.pumping_end_us = std::max(t.pump_bob_us, t.pump_alice_us);

  // Bob's pi/2 follows his own pumping; he then idles in superposition.
  const double bob_prep_start = t.pump_bob_us;
  add("prepare_bob", bob_prep_start, t.pi_half_us, kBob);
  const double delay1_start = std::max(tl.pumping_end_us, bob_prep_start + t.pi_half_us);
  add("delay_preparation", delay1_start, tau, "link");
  const double alice_prep_start = delay1_start + tau;
  add("prepare_alice", alice_prep_start, t.pi_half_us, kAlice);

  const double photon_start = alice_prep_start + t.pi_half_us;
  const double half_window = 0.5 * t.photon_window_us;
  add("reflect_bob", photon_start, half_window, "photon");
  add("delay_transit", photon_start + half_window, tau, "photon");
  const double alice_reflect_start = photon_start + half_window + tau;
  add("reflect_alice", alice_reflect_start, half_window, "photon");
  const double herald_time = alice_reflect_start + half_window;

  const double pi_half_start = herald_time;
  add("rotate_alice", pi_half_start, t.pi_half_us, kAlice);
  const double readout_start = pi_half_start + t.pi_half_us;
  add("readout_alice", readout_start, t.readout_us, kAlice);
  const double readout_end = readout_start + t.readout_us;
  if (config.measure_after_herald) {
    add("herald", herald_time, 0.0, "detector");
  } else {
    add("herald", readout_end, 0.0, "detector");
  }
  add("classical_signal", readout_end, t.classical_latency_us, "link");
  const double delay3_start = readout_end + t.classical_latency_us;
  add("delay_feedback", delay3_start, tau, "link");
  const double feedback_start = delay3_start + tau;
  add("feedback_bob", feedback_start, t.feedback_us, kBob);

  // Atoms dephase only while they hold a superposition.
  tl.bob_exposure_us = feedback_start + t.feedback_us - bob_prep_start;
  tl.alice_exposure_us = config.input.is_z_eigenstate()
                             ? 0.0
                             : pi_half_start + t.pi_half_us - alice_prep_start;
  return tl;
}

double length_equivalent_km(double tau_us) {
  return tau_us * kFiberLightSpeedKmPerUs;
}

std::vector<FeedbackStep> feedback_for(PhotonOutcome photon, AtomOutcome alice) {
  std::vector<FeedbackStep> steps;
  if (photon == PhotonOutcome::kD) {
    steps.push_back({node::Axis::kX, std::numbers::pi, "Rx(pi)"});
  }
  if (alice == AtomOutcome::kUp) {
    steps.push_back({node::Axis::kZ, std::numbers::pi, "Z"});
  }
  return steps;
}

DensityState TeleportResult::average_bob_state() const {
  Matrix acc = Matrix::Zero(2, 2);
  double weight = 0.0;
  for (const auto& b : branches) {
    if (!b.bob_state) continue;
    acc += b.probability * b.bob_state->matrix();
    weight += b.probability;
  }
  if (!(weight > tol::kZeroProbability)) {
    throw Error(ErrorKind::kInvalidArgument, "no heralded branch");
  }
  return DensityState(core::HilbertLayout::single(kBob, 2), acc / weight);
}

double TeleportResult::fidelity(const core::Vector& target) const {
  return core::fidelity_pure(average_bob_state(), target);
}

double TeleportResult::branch_fidelity(std::size_t branch,
                                       const core::Vector& target) const {
  const auto& b = branches.at(branch);
  if (!b.bob_state) return 0.0;
  return core::fidelity_pure(*b.bob_state, target);
}

double TeleportResult::photon_branch_fidelity(PhotonOutcome photon,
                                              const core::Vector& target) const {
  double acc = 0.0;
  double weight = 0.0;
  for (const auto& b : branches) {
    if (b.photon != photon || !b.bob_state) continue;
    acc += b.probability * core::fidelity_pure(*b.bob_state, target);
    weight += b.probability;
  }
  return weight > 0.0 ? acc / weight : 0.0;
}

DensityState prepare_atoms(const ProtocolConfig& config, const Timeline& timeline) {
  DensityState bob = node::prepare_state(InputQubit::up_x(), config.node_bob, kBob);
  DensityState alice = node::prepare_state(config.input, config.node_alice, kAlice);
  // Pure dephasing commutes with the z-controlled reflections and with the
  // feedback, so each atom's whole exposure can be applied up front.
  if (config.decoherence_enabled) {
    bob = node::idle_decoherence(bob, kBob, timeline.bob_exposure_us,
                                 config.node_bob, config.decoherence_law);
    alice = node::idle_decoherence(alice, kAlice, timeline.alice_exposure_us,
                                   config.node_alice, config.decoherence_law);
  }
  return core::tensor_product(bob, alice);
}

photonics::PolarizationModePair photon_pair(const ProtocolConfig& config) {
  photonics::PolarizationModePair pair;
  pair.cutoff = config.effective_cutoff();
  pair.basis = photonics::PolarizationBasis::kAD;
  return pair;
}

DensityState source_state(const ProtocolConfig& config) {
  const std::size_t cutoff = config.effective_cutoff();
  if (config.source == PhotonSource::kSinglePhoton) {
    return photonics::fock_pulse_state(1, photonics::Polarization::kA, cutoff);
  }
  photonics::PulseConfig pulse = config.pulse;
  pulse.fock_cutoff = cutoff;
  pulse.polarization = photonics::Polarization::kA;
  return photonics::coherent_pulse_state(pulse);
}

DensityState propagate_photon(const ProtocolConfig& config, const DensityState& state) {
  const auto pair = photon_pair(config);
  DensityState rho = node::cavity_reflection(state, config.node_bob, pair, kBob);
  rho = photonics::loss_channel(rho, pair.first, config.fiber_transmission);
  rho = photonics::loss_channel(rho, pair.second, config.fiber_transmission);
  rho = photonics::depolarize_polarization(rho, pair, config.fiber_depolarization);
  return node::cavity_reflection(rho, config.node_alice, pair, kAlice);
}

std::array<core::Branch, 4> detect_photon(const ProtocolConfig& config,
                                          const DensityState& state) {
  const auto pair = photon_pair(config);
  DensityState rho = photonics::loss_channel(state, pair.first,
                                             config.detection_path_efficiency);
  rho = photonics::loss_channel(rho, pair.second, config.detection_path_efficiency);
  const auto povm = photonics::click_povm(config.detector, pair.cutoff);
  const auto labels = pair.labels();
  const auto branches = core::measure_and_discard(rho, povm, labels);
  std::array<core::Branch, 4> out;
  std::copy(branches.begin(), branches.end(), out.begin());
  return out;
}

TeleportResult run_protocol(const ProtocolConfig& config) {
  config.validate();
  TeleportResult result;
  result.timeline = build_timeline(config);

  const DensityState atoms = prepare_atoms(config, result.timeline);
  const DensityState initial = core::tensor_product(atoms, source_state(config));
  const DensityState reflected = propagate_photon(config, initial);
  const auto clicks = detect_photon(config, reflected);

  result.no_click_probability = clicks[ClickOutcome{false, false}.index()].probability;
  result.double_click_probability = clicks[ClickOutcome{true, true}.index()].probability;

  const std::string keep_bob[] = {kBob};
  std::size_t slot = 0;
  for (PhotonOutcome photon : {PhotonOutcome::kA, PhotonOutcome::kD}) {
    const ClickOutcome click{photon == PhotonOutcome::kA, photon == PhotonOutcome::kD};
    const core::Branch& herald = clicks[click.index()];
    result.herald_probability += herald.probability;

    std::array<core::Branch, 2> readout;
    if (herald.state) {
      const DensityState rotated = node::raman_rotation(
          *herald.state, kAlice, node::Axis::kY, std::numbers::pi / 2.0);
      readout = node::atomic_readout(rotated, kAlice, config.alice_readout_fidelity);
    }
    for (AtomOutcome alice : {AtomOutcome::kUp, AtomOutcome::kDown}) {
      BranchResult& br = result.branches[slot++];
      br.photon = photon;
      br.alice = alice;
      br.feedback = feedback_for(photon, alice);
      const core::Branch& r = readout[static_cast<std::size_t>(alice)];
      br.probability = herald.probability * r.probability;
      if (!r.state) continue;
      DensityState bob = core::partial_trace(*r.state, keep_bob);
      if (config.apply_feedback) {
        for (const auto& step : br.feedback) {
          bob = node::raman_rotation(bob, kBob, step.axis, step.theta);
        }
      }
      br.bob_state = std::move(bob);
    }
  }
  return result;
}

double herald_probability(const ProtocolConfig& config) {
  return run_protocol(config).herald_probability;
}

}  // namespace qtele::protocol
