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

// Prints one PASS/FAIL line per acceptance criterion; exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "../unit/test_support.hpp"
#include "qtele/core/operations.hpp"
#include "qtele/harness/harness.hpp"
#include "qtele/photonics/photonics.hpp"
#include "qtele/protocol/protocol.hpp"

namespace {

using namespace qtele;
using core::Complex;
using core::DensityState;
using core::HilbertLayout;
using core::Matrix;
using protocol::ProtocolConfig;
using testing::max_abs;

// Pinned tolerances.
constexpr double kIdealFidelityTol = 1e-9;
constexpr double kIdealRuntimeS = 1.0;
constexpr double kThreePartyTol = 1e-10;
constexpr int kThreePartyDraws = 20;
constexpr double kSinglePhotonHerald = 0.084;
constexpr double kSinglePhotonHeraldTol = 0.002;
constexpr double kCoherentHerald = 6e-3;
constexpr double kCoherentHeraldRelTol = 0.10;
constexpr double kSinglePhotonRate = 84.0;
constexpr double kSinglePhotonRateTol = 4.0;
constexpr double kCoherentRate = 6.0;
constexpr double kCoherentRateTol = 0.6;
constexpr double kLossChainRuntimeS = 10.0;
constexpr double kBenchLow = 0.85;
constexpr double kBenchHigh = 0.91;
constexpr double kClassicalThreshold = 2.0 / 3.0;
constexpr double kBenchRuntimeS = 60.0;
constexpr double kDecoherenceGain = 6.0;
constexpr double kDecoherenceGainTol = 1.5;
constexpr double kTwoPhotonGain = 3.9;
constexpr double kTwoPhotonGainTol = 1.5;
constexpr double kPreparationGain = 1.4;
constexpr double kPreparationGainTol = 1.0;
constexpr double kLowPhotonFidelity = 0.89;
constexpr double kLowPhotonFidelityTol = 0.03;
constexpr double kPhotonCrossing = 1.0;
constexpr double kPhotonCrossingTol = 0.2;
constexpr double kSweepRuntimeS = 300.0;
constexpr double kMonotoneSlack = 1e-12;
constexpr double kDelayCrossing = 40.0;
constexpr double kDelayCrossingTol = 15.0;
constexpr double kLengthAt40 = 8.0;
constexpr double kLengthTol = 1e-9;
constexpr int kPropertyInstances = 200;
constexpr double kPropertyTol = 1e-9;

struct Outcome {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(const char* id, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", id, o.detail.c_str());
  std::fflush(stdout);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool within(double v, double center, double tol) { return std::abs(v - center) <= tol; }

// First downward crossing of the threshold, linearly interpolated.
std::optional<double> crossing(const std::vector<harness::ResultRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double f0 = rows[i - 1].fidelity;
    const double f1 = rows[i].fidelity;
    if (f0 >= kClassicalThreshold && f1 < kClassicalThreshold) {
      const double x0 = std::stod(rows[i - 1].swept_value);
      const double x1 = std::stod(rows[i].swept_value);
      return x0 + (f0 - kClassicalThreshold) / (f0 - f1) * (x1 - x0);
    }
  }
  return std::nullopt;
}

bool non_increasing(const std::vector<harness::ResultRow>& rows) {
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i].fidelity > rows[i - 1].fidelity + kMonotoneSlack) return false;
  }
  return true;
}

Outcome ideal_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  ProtocolConfig c = ProtocolConfig::ideal();
  double worst = 0.0;
  for (const auto& in : node::six_states()) {
    c.input = in;
    const auto r = protocol::run_protocol(c);
    for (std::size_t b = 0; b < 4; ++b) {
      worst = std::max(worst, std::abs(1.0 - r.branch_fidelity(b, in.vector())));
    }
  }
  const double t = seconds_since(t0);
  return {worst <= kIdealFidelityTol && t < kIdealRuntimeS,
          "max |1-F| over 6 inputs x 4 branches = " + fmt("%.2e", worst) +
              ", runtime " + fmt("%.3f", t) + " s"};
}

Outcome three_party_state() {
  std::mt19937_64 rng(2024);
  ProtocolConfig c = ProtocolConfig::ideal();
  double worst = 0.0;
  for (int trial = 0; trial < kThreePartyDraws; ++trial) {
    const core::Vector v = testing::random_pure(2, rng);
    c.input = node::InputQubit{v(0), v(1)};
    const auto atoms = protocol::prepare_atoms(c, protocol::build_timeline(c));
    const auto out =
        protocol::propagate_photon(c, core::tensor_product(atoms, protocol::source_state(c)));
    const std::size_t levels = c.effective_cutoff() + 1;
    auto at = [&](std::size_t bob, std::size_t alice, std::size_t na, std::size_t nd) {
      return static_cast<Eigen::Index>(((bob * 2 + alice) * levels + na) * levels + nd);
    };
    const double s = 1.0 / std::numbers::sqrt2;
    core::Vector psi = core::Vector::Zero(static_cast<Eigen::Index>(4 * levels * levels));
    psi(at(0, 0, 1, 0)) = s * v(0);
    psi(at(1, 1, 1, 0)) = s * v(1);
    psi(at(0, 1, 0, 1)) = s * v(1);
    psi(at(1, 0, 0, 1)) = s * v(0);
    worst = std::max(worst, max_abs(out.matrix() - psi * psi.adjoint()));
  }
  return {worst <= kThreePartyTol,
          "max elementwise deviation over " + std::to_string(kThreePartyDraws) +
              " random inputs = " + fmt("%.2e", worst)};
}

Outcome loss_chain() {
  const auto t0 = std::chrono::steady_clock::now();
  ProtocolConfig single;
  single.source = protocol::PhotonSource::kSinglePhoton;
  const auto r1 = harness::rate_estimate(single);
  const auto rc = harness::rate_estimate(ProtocolConfig{});
  const double t = seconds_since(t0);
  const bool ok = within(r1.herald_probability, kSinglePhotonHerald, kSinglePhotonHeraldTol) &&
                  within(rc.herald_probability, kCoherentHerald,
                         kCoherentHeraldRelTol * kCoherentHerald) &&
                  within(r1.rate_hz, kSinglePhotonRate, kSinglePhotonRateTol) &&
                  within(rc.rate_hz, kCoherentRate, kCoherentRateTol) && t < kLossChainRuntimeS;
  return {ok, "single photon p = " + fmt("%.5f", r1.herald_probability) + " (" +
                  fmt("%.2f", r1.rate_hz) + " Hz), <n>=0.07 p = " +
                  fmt("%.3e", rc.herald_probability) + " (" + fmt("%.2f", rc.rate_hz) +
                  " Hz), runtime " + fmt("%.3f", t) + " s"};
}

Outcome six_state(const harness::ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto b = harness::six_state_benchmark(config);
  const double t = seconds_since(t0);
  double lowest = 1.0;
  std::string per;
  for (const auto& r : b.rows) {
    lowest = std::min(lowest, r.fidelity);
    per += " " + r.swept_value + "=" + fmt("%.4f", r.fidelity);
  }
  const bool ok = b.average_fidelity >= kBenchLow && b.average_fidelity <= kBenchHigh &&
                  lowest > kClassicalThreshold && t < kBenchRuntimeS;
  return {ok, "average " + fmt("%.4f", b.average_fidelity) + ";" + per + ", runtime " +
                  fmt("%.2f", t) + " s"};
}

Outcome budget(const harness::ExperimentConfig& config) {
  const auto b = harness::error_budget(config);
  const double dec = 100.0 * b.entries.at(0).gain;
  const double two = 100.0 * b.entries.at(1).gain;
  const double prep = 100.0 * b.entries.at(2).gain;
  const bool ok_dec = within(dec, kDecoherenceGain, kDecoherenceGainTol);
  const bool ok_two = within(two, kTwoPhotonGain, kTwoPhotonGainTol);
  const bool ok_prep = within(prep, kPreparationGain, kPreparationGainTol);
  auto mark = [](bool ok) { return ok ? std::string("ok") : std::string("out of band"); };
  return {ok_dec && ok_two && ok_prep,
          "gains (points): decoherence " + fmt("%.2f", dec) + " " + mark(ok_dec) +
              ", two-photon " + fmt("%.2f", two) + " " + mark(ok_two) + ", preparation " +
              fmt("%.2f", prep) + " " + mark(ok_prep)};
}

Outcome photon_sweep(const harness::ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto rows = harness::sweep(config, harness::SweepParam::kMeanPhoton);
  const double t = seconds_since(t0);
  const double f_low = rows.front().fidelity;
  const bool low_ok = std::stod(rows.front().swept_value) == 0.02 &&
                      within(f_low, kLowPhotonFidelity, kLowPhotonFidelityTol);
  const bool mono = non_increasing(rows);
  const auto x = crossing(rows);
  const bool cross_ok = x && within(*x, kPhotonCrossing, kPhotonCrossingTol);
  return {low_ok && mono && cross_ok && t < kSweepRuntimeS,
          "F(0.02) = " + fmt("%.4f", f_low) + ", monotone " + (mono ? "yes" : "no") +
              ", 2/3 crossing at <n> = " + (x ? fmt("%.3f", *x) : std::string("none")) +
              ", F(1.5) = " + fmt("%.4f", rows.back().fidelity) + ", runtime " +
              fmt("%.1f", t) + " s"};
}

Outcome delay_sweep(const std::vector<std::pair<std::string, harness::ExperimentConfig>>& laws) {
  bool any = false;
  std::string detail;
  double length = 0.0;
  for (const auto& [name, config] : laws) {
    const auto rows = harness::sweep(config, harness::SweepParam::kDelay);
    for (const auto& r : rows) {
      if (std::stod(r.swept_value) == 40.0 && r.length_equiv_km) length = *r.length_equiv_km;
    }
    const auto x = crossing(rows);
    const bool ok = x && within(*x, kDelayCrossing, kDelayCrossingTol) && non_increasing(rows);
    any = any || ok;
    detail += name + " crossing at tau = " + (x ? fmt("%.1f", *x) : std::string("none")) +
              " us; ";
  }
  const bool len_ok = within(length, kLengthAt40, kLengthTol);
  return {any && len_ok, detail + "length at 40 us = " + fmt("%.4f", length) + " km"};
}

std::vector<Matrix> random_channel(std::size_t dim, std::size_t count, std::mt19937_64& rng) {
  const Matrix v =
      testing::random_unitary(dim * count, rng).leftCols(static_cast<Eigen::Index>(dim));
  std::vector<Matrix> ks;
  for (std::size_t k = 0; k < count; ++k) {
    ks.push_back(
        v.middleRows(static_cast<Eigen::Index>(k * dim), static_cast<Eigen::Index>(dim)));
  }
  return ks;
}

Outcome property_suite() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const HilbertLayout abc({{"a", 2}, {"b", 3}, {"c", 2}});
  const std::string b_only[] = {"b"};
  const std::string keep_ac[] = {"a", "c"};
  int cptp = 0, povm = 0, semigroup = 0, ptrace = 0, linear = 0, phase = 0;

  for (int i = 0; i < kPropertyInstances; ++i) {
    const auto rho = testing::random_state(abc, rng);
    const auto out = core::apply_kraus(rho, random_channel(3, 3, rng), b_only);
    cptp += std::abs(out.trace() - 1.0) <= kPropertyTol && out.min_eigenvalue() >= -kPropertyTol;

    photonics::DetectorParams d;
    d.efficiency = unit(rng);
    d.dark_count_rate_hz = 1e4 * unit(rng);
    Matrix sum = Matrix::Zero(16, 16);
    for (const auto& e : photonics::click_povm(d, 3)) sum += e;
    povm += max_abs(sum - Matrix::Identity(16, 16)) <= kPropertyTol;

    const auto mode = testing::random_state(HilbertLayout({{"m", 4}, {"q", 2}}), rng);
    const double t1 = unit(rng), t2 = unit(rng);
    const auto twice =
        photonics::loss_channel(photonics::loss_channel(mode, "m", t1), "m", t2);
    semigroup += max_abs(twice.matrix() - photonics::loss_channel(mode, "m", t1 * t2).matrix()) <=
                 kPropertyTol;

    Matrix oracle = Matrix::Zero(4, 4);
    for (int a = 0; a < 2; ++a)
      for (int c = 0; c < 2; ++c)
        for (int a2 = 0; a2 < 2; ++a2)
          for (int c2 = 0; c2 < 2; ++c2)
            for (int b = 0; b < 3; ++b)
              oracle(a * 2 + c, a2 * 2 + c2) += rho.matrix()((a * 3 + b) * 2 + c,
                                                             (a2 * 3 + b) * 2 + c2);
    ptrace += max_abs(core::partial_trace(rho, keep_ac).matrix() - oracle) <= kPropertyTol;
  }

  ProtocolConfig c;
  c.source = protocol::PhotonSource::kSinglePhoton;
  c.decoherence_enabled = false;
  for (node::NodeParams* n : {&c.node_bob, &c.node_alice}) {
    n->pump_fidelity = 1.0;
    n->pi_pulse_residual = 0.0;
  }
  auto weighted = [](const protocol::TeleportResult& r) {
    Matrix acc = Matrix::Zero(2, 2);
    for (const auto& b : r.branches) {
      if (b.bob_state) acc += b.probability * b.bob_state->matrix();
    }
    return acc;
  };
  const auto six = node::six_states();
  std::array<Matrix, 6> basis;
  for (std::size_t i = 0; i < 6; ++i) {
    c.input = six[i];
    basis[i] = weighted(protocol::run_protocol(c));
  }
  for (int i = 0; i < kPropertyInstances; ++i) {
    const core::Vector v = testing::random_pure(2, rng);
    c.input = node::InputQubit{v(0), v(1)};
    const Matrix got = weighted(protocol::run_protocol(c));
    const Complex ab = std::conj(v(0)) * v(1);
    const double rz = std::norm(v(0)) - std::norm(v(1));
    const Matrix want = 0.5 * ((basis[0] + basis[1]) + 2 * ab.real() * (basis[2] - basis[3]) +
                               2 * ab.imag() * (basis[4] - basis[5]) + rz * (basis[0] - basis[1]));
    linear += max_abs(got - want) <= kPropertyTol;
    const Complex g = std::polar(1.0, 2 * std::numbers::pi * unit(rng));
    c.input = node::InputQubit{g * v(0), g * v(1)};
    phase += max_abs(weighted(protocol::run_protocol(c)) - got) <= kPropertyTol;
  }
  const int n = kPropertyInstances;
  const bool ok = cptp == n && povm == n && semigroup == n && ptrace == n && linear == n &&
                  phase == n;
  return {ok, "passed/instances: CPTP " + std::to_string(cptp) + ", POVM " +
                  std::to_string(povm) + ", loss semigroup " + std::to_string(semigroup) +
                  ", partial trace " + std::to_string(ptrace) + ", linearity " +
                  std::to_string(linear) + ", global phase " + std::to_string(phase) + " of " +
                  std::to_string(n)};
}

}  // namespace

int main() {
  const auto config = harness::load_config(QTELE_SOURCE_DIR "/config/default.json");
  const auto gauss = harness::load_config(QTELE_SOURCE_DIR "/config/fig4_gauss.json");

  report("ideal-protocol-exactness", ideal_exactness);
  report("three-party-state", three_party_state);
  report("loss-chain", loss_chain);
  report("six-state-benchmark", [&] { return six_state(config); });
  report("error-budget", [&] { return budget(config); });
  report("mean-photon-sweep", [&] { return photon_sweep(config); });
  report("delay-sweep", [&] {
    return delay_sweep({{"exp (T2 400 us)", config}, {"gauss (T2 200 us)", gauss}});
  });
  report("channel-properties", property_suite);

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
