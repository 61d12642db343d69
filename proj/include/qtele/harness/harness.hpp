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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "qtele/core/types.hpp"
#include "qtele/protocol/protocol.hpp"

namespace qtele::harness {

using protocol::ProtocolConfig;

struct ResultRow {
  std::string swept_name;
  std::string swept_value;
  double fidelity = 0.0;
  double standard_error = 0.0;
  double herald_prob = 0.0;
  double rate_hz = 0.0;
  double fidelity_photon_a = 0.0;
  double fidelity_photon_d = 0.0;
  double double_click_prob = 0.0;
  std::optional<double> length_equiv_km;

  bool operator==(const ResultRow&) const = default;
};

/// Column order of the CSV and key names of the JSON output.
const std::vector<std::string>& result_columns();

std::string emit_csv(std::span<const ResultRow> rows);
std::vector<ResultRow> parse_csv(const std::string& text);
std::string emit_json(std::span<const ResultRow> rows);
std::vector<ResultRow> parse_json(const std::string& text);

/// Shortest decimal text that parses back to the same double.
std::string format_number(double value);

struct ExperimentConfig {
  ProtocolConfig protocol;
  std::vector<double> mean_photon_grid{0.02, 0.05, 0.07, 0.1, 0.2, 0.35,
                                       0.5,  0.75, 1.0,  1.25, 1.5};
  std::vector<double> delay_grid_us{0, 5, 10, 20, 30, 40, 60, 80, 100};
  std::optional<std::size_t> shots;
  std::uint64_t seed = 1;
  unsigned workers = 0;  // 0 picks the hardware concurrency

  void validate() const;
};

ExperimentConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig load_config(const std::string& path);
void save_config(const ExperimentConfig& config, const std::string& path);

protocol::DecoherenceLaw parse_decoherence_law(const std::string& name);
node::InputQubit input_from_label(const std::string& label);

struct BenchmarkResult {
  std::vector<ResultRow> rows;  // +z, -z, +x, -x, +y, -y
  double average_fidelity = 0.0;
  std::vector<core::Matrix> bob_states;  // herald-weighted, one per input
};

BenchmarkResult six_state_benchmark(const ExperimentConfig& config);

enum class SweepParam { kMeanPhoton, kDelay };

SweepParam parse_sweep_param(const std::string& name);

/// Rows come back sorted by swept value whatever the grid order.
std::vector<ResultRow> sweep(const ExperimentConfig& config, SweepParam param,
                             std::span<const double> grid);
std::vector<ResultRow> sweep(const ExperimentConfig& config, SweepParam param);

struct BudgetEntry {
  std::string label;
  double fidelity = 0.0;
  double gain = 0.0;
};

struct ErrorBudget {
  double baseline = 0.0;
  std::vector<BudgetEntry> entries;  // decoherence, two_photon, preparation
};

ErrorBudget error_budget(const ExperimentConfig& config);

struct RateEstimate {
  double herald_probability = 0.0;
  double rate_hz = 0.0;
};

RateEstimate rate_estimate(const ProtocolConfig& config);

/// Sampled x, y, z tomography of Bob's herald-averaged state, one row per
/// input, each row with its own seeded stream.
std::vector<ResultRow> finite_shot_tomography(const ExperimentConfig& config,
                                              std::size_t shots, std::uint64_t seed);

struct TomographyEstimate {
  double fidelity = 0.0;
  double standard_error = 0.0;
};

TomographyEstimate sample_tomography(const core::DensityState& bob,
                                     const core::Vector& target, std::size_t shots,
                                     double readout_fidelity, std::uint64_t seed,
                                     std::uint64_t stream);

struct CouplingFit {
  double input_coupling_fraction = 0.0;
  double mode_matching = 1.0;
  double reflectivity = 0.0;
  double residual = 0.0;  // squared reflectivity error
  bool converged = false;
};

/// Scans kappa_in/kappa over the overcoupled range at the node's mode matching.
CouplingFit fit_node_coupling(const node::NodeParams& node, double target_reflectivity);

}  // namespace qtele::harness
