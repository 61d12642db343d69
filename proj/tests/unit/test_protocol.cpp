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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qtele/core/error.hpp"
#include "qtele/core/operations.hpp"
#include "qtele/core/tolerances.hpp"
#include "qtele/protocol/protocol.hpp"
#include "test_support.hpp"

namespace qtele::protocol {
namespace {

using core::Complex;
using core::Matrix;
using testing::max_abs;

InputQubit random_input(std::mt19937_64& rng) {
  const core::Vector v = testing::random_pure(2, rng);
  return InputQubit{v(0), v(1)};
}

// Herald-weighted, unnormalized Bob state: linear in the input density matrix.
Matrix weighted_bob(const TeleportResult& r) {
  Matrix acc = Matrix::Zero(2, 2);
  for (const auto& b : r.branches) {
    if (b.bob_state) acc += b.probability * b.bob_state->matrix();
  }
  return acc;
}

ProtocolConfig lossy_single_photon() {
  ProtocolConfig c;
  c.source = PhotonSource::kSinglePhoton;
  c.decoherence_enabled = false;
  for (NodeParams* n : {&c.node_bob, &c.node_alice}) {
    n->pump_fidelity = 1.0;
    n->pi_pulse_residual = 0.0;
  }
  c.fiber_depolarization = 0.05;
  c.alice_readout_fidelity = 0.97;
  return c;
}

TEST(Timeline, PostPumpDurationWithoutDelay) {
  const Timeline t = build_timeline(ProtocolConfig{});
  EXPECT_NEAR(t.post_pump_duration_us(), 25.5, 1e-12);
  EXPECT_NEAR(t.pumping_end_us, 240.0, 1e-12);
}

TEST(Timeline, ThreeDelayInsertions) {
  ProtocolConfig c;
  c.delay_tau_us = 17.0;
  const Timeline t = build_timeline(c);
  EXPECT_NEAR(t.post_pump_duration_us(), 25.5 + 3 * 17.0, 1e-12);
  EXPECT_NEAR(t.find("delay_preparation").duration_us, 17.0, 0.0);
  EXPECT_NEAR(t.find("delay_transit").duration_us, 17.0, 0.0);
  EXPECT_NEAR(t.find("delay_feedback").duration_us, 17.0, 0.0);
}

TEST(Timeline, EventOrder) {
  const Timeline t = build_timeline(ProtocolConfig{});
  const char* order[] = {"prepare_bob", "prepare_alice", "reflect_bob", "reflect_alice",
                         "rotate_alice", "readout_alice", "feedback_bob"};
  for (std::size_t i = 1; i < std::size(order); ++i) {
    EXPECT_LE(t.find(order[i - 1]).end_us(), t.find(order[i]).start_us + 1e-12) << order[i];
  }
  EXPECT_THROW(t.find("nothing"), Error);
}

TEST(Timeline, ExposureWindows) {
  ProtocolConfig c;
  c.delay_tau_us = 10.0;
  Timeline t = build_timeline(c);
  EXPECT_NEAR(t.bob_exposure_us, 65.5 + 30.0, 1e-12);
  EXPECT_NEAR(t.alice_exposure_us, 9.5 + 10.0, 1e-12);
  c.input = InputQubit::down_z();
  t = build_timeline(c);
  EXPECT_EQ(t.alice_exposure_us, 0.0);
}

TEST(Timeline, LengthEquivalent) {
  EXPECT_NEAR(length_equivalent_km(40.0), 8.0, 1e-12);
}

TEST(Feedback, Table) {
  EXPECT_TRUE(feedback_for(PhotonOutcome::kA, AtomOutcome::kDown).empty());
  const auto d_up = feedback_for(PhotonOutcome::kD, AtomOutcome::kUp);
  ASSERT_EQ(d_up.size(), 2U);
  EXPECT_EQ(d_up[0].axis, node::Axis::kX);
  EXPECT_EQ(d_up[1].axis, node::Axis::kZ);
}

TEST(IdealProtocol, EveryBranchTeleportsExactly) {
  ProtocolConfig c = ProtocolConfig::ideal();
  std::mt19937_64 rng(31);
  const auto six = node::six_states();
  std::vector<InputQubit> inputs(six.begin(), six.end());
  for (int i = 0; i < 20; ++i) inputs.push_back(random_input(rng));
  for (const auto& in : inputs) {
    c.input = in;
    const TeleportResult r = run_protocol(c);
    EXPECT_NEAR(r.herald_probability, 1.0, 1e-12);
    for (std::size_t b = 0; b < 4; ++b) {
      EXPECT_NEAR(r.branches[b].probability, 0.25, 1e-12);
      EXPECT_NEAR(r.branch_fidelity(b, in.vector()), 1.0, 1e-9);
    }
  }
}

TEST(IdealProtocol, ThreePartyStateAfterReflections) {
  // Hand expansion: [(a|uu> + b|dd>)|A> + (b|ud> + a|du>)|D>]/sqrt2, order bob, alice.
  std::mt19937_64 rng(32);
  ProtocolConfig c = ProtocolConfig::ideal();
  for (int trial = 0; trial < 20; ++trial) {
    c.input = random_input(rng);
    const auto atoms = prepare_atoms(c, build_timeline(c));
    const auto out = propagate_photon(c, core::tensor_product(atoms, source_state(c)));
    const std::size_t levels = c.effective_cutoff() + 1;
    auto index = [&](int bob, int alice, int na, int nd) {
      return static_cast<Eigen::Index>(((bob * 2 + alice) * levels + static_cast<std::size_t>(na)) * levels +
                                       static_cast<std::size_t>(nd));
    };
    const Complex a = c.input.alpha;
    const Complex b = c.input.beta;
    core::Vector psi = core::Vector::Zero(static_cast<Eigen::Index>(4 * levels * levels));
    const double s = 1.0 / std::numbers::sqrt2;
    psi(index(0, 0, 1, 0)) = s * a;
    psi(index(1, 1, 1, 0)) = s * b;
    psi(index(0, 1, 0, 1)) = s * b;
    psi(index(1, 0, 0, 1)) = s * a;
    const Matrix want = psi * psi.adjoint();
    ASSERT_LT(max_abs(out.matrix() - want), 1e-10);
  }
}

TEST(Protocol, LinearInInputOnRandomInstances) {
  ProtocolConfig c = lossy_single_photon();
  std::array<Matrix, 6> basis;
  const auto six = node::six_states();
  for (std::size_t i = 0; i < 6; ++i) {
    c.input = six[i];
    basis[i] = weighted_bob(run_protocol(c));
  }
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 200; ++trial) {
    c.input = random_input(rng);
    const Complex ab = std::conj(c.input.alpha) * c.input.beta;
    const double rx = 2 * ab.real();
    const double ry = 2 * ab.imag();
    const double rz = std::norm(c.input.alpha) - std::norm(c.input.beta);
    const Matrix predicted = 0.5 * ((basis[0] + basis[1]) + rx * (basis[2] - basis[3]) +
                                    ry * (basis[4] - basis[5]) + rz * (basis[0] - basis[1]));
    ASSERT_LT(max_abs(weighted_bob(run_protocol(c)) - predicted), 1e-9);
  }
}

TEST(Protocol, GlobalPhaseInvariantOnRandomInstances) {
  ProtocolConfig c = lossy_single_photon();
  c.decoherence_enabled = true;
  std::mt19937_64 rng(34);
  std::uniform_real_distribution<double> phase(0.0, 2 * std::numbers::pi);
  for (int trial = 0; trial < 200; ++trial) {
    const InputQubit in = random_input(rng);
    const Complex g = std::polar(1.0, phase(rng));
    c.input = in;
    const Matrix a = weighted_bob(run_protocol(c));
    c.input = InputQubit{g * in.alpha, g * in.beta};
    const Matrix b = weighted_bob(run_protocol(c));
    ASSERT_LT(max_abs(a - b), 1e-12);
  }
}

TEST(Protocol, BranchProbabilitiesSumToHerald) {
  const TeleportResult r = run_protocol(ProtocolConfig{});
  double sum = 0.0;
  for (const auto& b : r.branches) sum += b.probability;
  EXPECT_NEAR(sum, r.herald_probability, 1e-15);
  EXPECT_NEAR(r.herald_probability + r.double_click_probability + r.no_click_probability, 1.0,
              tol::kProbabilitySum);
  EXPECT_GT(r.double_click_probability, 0.0);
}

TEST(Protocol, SinglePhotonDetectionProbability) {
  ProtocolConfig c;
  c.source = PhotonSource::kSinglePhoton;
  EXPECT_NEAR(herald_probability(c), 0.084, 0.002);
}

TEST(Protocol, WeakCoherentDetectionProbability) {
  EXPECT_NEAR(herald_probability(ProtocolConfig{}), 6e-3, 6e-4);
}

TEST(Protocol, FeedbackIsNeededForPolarizationD) {
  ProtocolConfig c = ProtocolConfig::ideal();
  c.input = InputQubit::up_z();
  c.apply_feedback = false;
  const TeleportResult r = run_protocol(c);
  EXPECT_NEAR(r.photon_branch_fidelity(PhotonOutcome::kA, c.input.vector()), 1.0, 1e-12);
  EXPECT_NEAR(r.photon_branch_fidelity(PhotonOutcome::kD, c.input.vector()), 0.0, 1e-12);
}

TEST(Protocol, ZeroMeanPhotonNumberNeverHeralds) {
  ProtocolConfig c;
  c.pulse.mean_photon_number = 0.0;
  c.detector.dark_count_rate_hz = 0.0;
  const TeleportResult r = run_protocol(c);
  EXPECT_EQ(r.herald_probability, 0.0);
  EXPECT_THROW(r.average_bob_state(), Error);
}

TEST(Protocol, CutoffRaisedAutomatically) {
  ProtocolConfig c;
  c.pulse.mean_photon_number = 1.5;
  EXPECT_EQ(c.effective_cutoff(), 8U);
  c.auto_cutoff = false;
  EXPECT_THROW(run_protocol(c), Error);
}

TEST(Protocol, ValidateRejectsBadValues) {
  ProtocolConfig c;
  c.fiber_transmission = 1.2;
  EXPECT_THROW(c.validate(), Error);
  c = ProtocolConfig{};
  c.delay_tau_us = -1.0;
  EXPECT_THROW(c.validate(), Error);
  c = ProtocolConfig{};
  c.input = InputQubit{1.0, 1.0};
  EXPECT_THROW(c.validate(), Error);
}

TEST(Protocol, DelayOnlyLowersFidelity) {
  ProtocolConfig c;
  const double f0 = run_protocol(c).fidelity(c.input.vector());
  c.delay_tau_us = 30.0;
  EXPECT_LT(run_protocol(c).fidelity(c.input.vector()), f0);
}

}  // namespace
}  // namespace qtele::protocol
