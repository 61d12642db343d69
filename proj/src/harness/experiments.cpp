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

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <future>
#include <random>
#include <thread>

#include "qtele/core/error.hpp"
#include "qtele/harness/harness.hpp"

namespace qtele::harness {

namespace {

using protocol::PhotonOutcome;
using protocol::TeleportResult;

template <typename T>
std::vector<T> parallel_map(std::size_t count, unsigned workers,
                            const std::function<T(std::size_t)>& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<T> out;
  out.reserve(count);
  for (std::size_t start = 0; start < count; start += workers) {
    const std::size_t stop = std::min(count, start + workers);
    std::vector<std::future<T>> batch;
    for (std::size_t i = start; i < stop; ++i) {
      batch.push_back(std::async(std::launch::async, fn, i));
    }
    for (auto& f : batch) out.push_back(f.get());
  }
  return out;
}

std::array<double, 3> bloch_vector(const core::Matrix& rho) {
  return {2.0 * rho(0, 1).real(), -2.0 * rho(0, 1).imag(),
          (rho(0, 0) - rho(1, 1)).real()};
}

std::array<double, 3> bloch_vector(const core::Vector& v) {
  const core::Complex c = std::conj(v(0)) * v(1);
  return {2.0 * c.real(), 2.0 * c.imag(), std::norm(v(0)) - std::norm(v(1))};
}

ResultRow make_row(std::string name, std::string value, const TeleportResult& r,
                   const core::Vector& target, const ProtocolConfig& p) {
  ResultRow row;
  row.swept_name = std::move(name);
  row.swept_value = std::move(value);
  row.fidelity = r.fidelity(target);
  row.herald_prob = r.herald_probability;
  row.rate_hz = p.repetition_rate_hz * r.herald_probability;
  row.fidelity_photon_a = r.photon_branch_fidelity(PhotonOutcome::kA, target);
  row.fidelity_photon_d = r.photon_branch_fidelity(PhotonOutcome::kD, target);
  row.double_click_prob = r.double_click_probability;
  return row;
}

void apply_shots(ResultRow& row, const TeleportResult& r, const core::Vector& target,
                 const ExperimentConfig& config, std::size_t stream) {
  if (!config.shots) return;
  const auto est = sample_tomography(r.average_bob_state(), target, *config.shots,
                                     config.protocol.tomography_readout_fidelity,
                                     config.seed, stream);
  row.fidelity = est.fidelity;
  row.standard_error = est.standard_error;
}

ProtocolConfig perfect_preparation(ProtocolConfig p) {
  for (node::NodeParams* n : {&p.node_bob, &p.node_alice}) {
    n->pump_fidelity = 1.0;
    n->pi_pulse_residual = 0.0;
  }
  return p;
}

double reflectivity_at(node::NodeParams p, double x) {
  p.input_coupling_fraction = x;
  return node::operational_reflectivity(node::reflection_amplitudes(p));
}

}  // namespace

BenchmarkResult six_state_benchmark(const ExperimentConfig& config) {
  config.validate();
  const auto states = node::six_states();
  const auto labels = node::six_state_labels();
  struct Point {
    ResultRow row;
    core::Matrix bob;
  };
  const auto points = parallel_map<Point>(
      states.size(), config.workers, [&](std::size_t i) {
        ProtocolConfig p = config.protocol;
        p.input = states[i];
        const TeleportResult r = protocol::run_protocol(p);
        const core::Vector target = states[i].vector();
        Point pt{make_row("input", labels[i], r, target, p), r.average_bob_state().matrix()};
        apply_shots(pt.row, r, target, config, i);
        return pt;
      });
  BenchmarkResult out;
  for (const auto& pt : points) {
    out.rows.push_back(pt.row);
    out.bob_states.push_back(pt.bob);
    out.average_fidelity += pt.row.fidelity / static_cast<double>(points.size());
  }
  return out;
}

SweepParam parse_sweep_param(const std::string& name) {
  if (name == "mean-photon" || name == "mean_photon") return SweepParam::kMeanPhoton;
  if (name == "delay") return SweepParam::kDelay;
  throw Error(ErrorKind::kInvalidArgument, "unknown sweep parameter '" + name + "'");
}

std::vector<ResultRow> sweep(const ExperimentConfig& config, SweepParam param,
                             std::span<const double> grid) {
  config.validate();
  if (grid.empty()) throw Error(ErrorKind::kInvalidArgument, "sweep grid is empty");
  std::vector<double> values(grid.begin(), grid.end());
  std::sort(values.begin(), values.end());
  const double max = param == SweepParam::kMeanPhoton ? 1.5 : 100.0;
  for (double v : values) {
    if (!(v >= 0.0 && v <= max)) {
      throw Error(ErrorKind::kInvalidArgument,
                  "sweep value " + format_number(v) + " outside [0, " + format_number(max) + "]");
    }
  }
  const node::InputQubit input = node::InputQubit::up_x();
  return parallel_map<ResultRow>(values.size(), config.workers, [&](std::size_t i) {
    ProtocolConfig p = config.protocol;
    p.input = input;
    const double v = values[i];
    std::string name;
    if (param == SweepParam::kMeanPhoton) {
      p.pulse.mean_photon_number = v;
      name = "mean_photon";
    } else {
      p.pulse.mean_photon_number = 2.0 * config.protocol.pulse.mean_photon_number;
      p.delay_tau_us = v;
      name = "delay_us";
    }
    const TeleportResult r = protocol::run_protocol(p);
    ResultRow row = make_row(name, format_number(v), r, input.vector(), p);
    if (param == SweepParam::kDelay) row.length_equiv_km = protocol::length_equivalent_km(v);
    apply_shots(row, r, input.vector(), config, i);
    return row;
  });
}

std::vector<ResultRow> sweep(const ExperimentConfig& config, SweepParam param) {
  const auto& grid =
      param == SweepParam::kMeanPhoton ? config.mean_photon_grid : config.delay_grid_us;
  return sweep(config, param, grid);
}

ErrorBudget error_budget(const ExperimentConfig& config) {
  ErrorBudget budget;
  budget.baseline = six_state_benchmark(config).average_fidelity;
  auto add = [&](std::string label, ProtocolConfig p) {
    ExperimentConfig c = config;
    c.protocol = std::move(p);
    const double f = six_state_benchmark(c).average_fidelity;
    budget.entries.push_back({std::move(label), f, f - budget.baseline});
  };
  ProtocolConfig no_decoherence = config.protocol;
  no_decoherence.decoherence_enabled = false;
  add("decoherence", no_decoherence);
  ProtocolConfig single = config.protocol;
  single.source = protocol::PhotonSource::kSinglePhoton;
  add("two_photon", single);
  add("preparation", perfect_preparation(config.protocol));
  return budget;
}

RateEstimate rate_estimate(const ProtocolConfig& config) {
  RateEstimate est;
  est.herald_probability = protocol::herald_probability(config);
  est.rate_hz = config.repetition_rate_hz * est.herald_probability;
  return est;
}

TomographyEstimate sample_tomography(const core::DensityState& bob,
                                     const core::Vector& target, std::size_t shots,
                                     double readout_fidelity, std::uint64_t seed,
                                     std::uint64_t stream) {
  if (shots == 0) throw Error(ErrorKind::kInvalidArgument, "shots must be positive");
  if (bob.layout().total_dim() != 2) {
    throw Error(ErrorKind::kDimensionMismatch, "tomography needs a single qubit");
  }
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream),
                    static_cast<std::uint32_t>(stream >> 32)};
  std::mt19937_64 rng(seq);

  const auto exact = bloch_vector(bob.matrix());
  const auto t = bloch_vector(target);
  const double n = static_cast<double>(shots);
  std::array<double, 3> m{};
  for (std::size_t axis = 0; axis < 3; ++axis) {
    double p_up = std::clamp(0.5 * (1.0 + exact[axis]), 0.0, 1.0);
    p_up = readout_fidelity * p_up + (1.0 - readout_fidelity) * (1.0 - p_up);
    std::binomial_distribution<std::uint64_t> draw(shots, p_up);
    m[axis] = 2.0 * static_cast<double>(draw(rng)) / n - 1.0;
  }
  // Nearest physical state: pull the Bloch vector back onto the ball.
  const double len = std::sqrt(m[0] * m[0] + m[1] * m[1] + m[2] * m[2]);
  if (len > 1.0) {
    for (double& c : m) c /= len;
  }
  TomographyEstimate est;
  double var = 0.0;
  double dot = 0.0;
  for (std::size_t axis = 0; axis < 3; ++axis) {
    dot += t[axis] * m[axis];
    var += t[axis] * t[axis] * (1.0 - m[axis] * m[axis]) / n;
  }
  est.fidelity = std::clamp(0.5 * (1.0 + dot), 0.0, 1.0);
  est.standard_error = 0.5 * std::sqrt(std::max(var, 0.0));
  return est;
}

std::vector<ResultRow> finite_shot_tomography(const ExperimentConfig& config,
                                              std::size_t shots, std::uint64_t seed) {
  if (shots == 0) throw Error(ErrorKind::kInvalidArgument, "shots must be positive");
  ExperimentConfig c = config;
  c.shots = shots;
  c.seed = seed;
  return six_state_benchmark(c).rows;
}

CouplingFit fit_node_coupling(const node::NodeParams& node, double target) {
  if (!(target > 0.0 && target <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument, "target reflectivity must lie in (0, 1]");
  }
  node.validate();
  // Only the overcoupled side flips the sign of the empty-cavity reflection,
  // which the protocol needs.
  constexpr double kLow = 0.5;
  constexpr double kHigh = 1.0;
  constexpr int kSteps = 2000;
  auto cost = [&](double x) {
    const double d = reflectivity_at(node, x) - target;
    return d * d;
  };
  double best_x = kHigh;
  double best = cost(kHigh);
  for (int i = 1; i <= kSteps; ++i) {
    const double x = kLow + (kHigh - kLow) * i / kSteps;
    const double c = cost(x);
    if (c < best) {
      best = c;
      best_x = x;
    }
  }
  const double step = (kHigh - kLow) / kSteps;
  double a = std::max(kLow + 1e-12, best_x - step);
  double b = std::min(kHigh, best_x + step);
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int it = 0; it < 100; ++it) {
    const double x1 = b - phi * (b - a);
    const double x2 = a + phi * (b - a);
    if (cost(x1) < cost(x2)) {
      b = x2;
    } else {
      a = x1;
    }
  }
  const double x = 0.5 * (a + b);
  CouplingFit fit;
  fit.input_coupling_fraction = cost(x) < best ? x : best_x;
  fit.mode_matching = node.mode_matching;
  fit.reflectivity = reflectivity_at(node, fit.input_coupling_fraction);
  fit.residual = cost(fit.input_coupling_fraction);
  fit.converged = fit.residual < 1e-12;
  return fit;
}

}  // namespace qtele::harness
