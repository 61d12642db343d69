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

#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "qtele/core/error.hpp"
#include "qtele/harness/harness.hpp"

namespace qtele::harness {

namespace {

using nlohmann::json;

// Reads known keys of one JSON object and rejects anything else, so a typo
// in a key name cannot silently fall back to a default.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) fail("expected an object");
  }

  template <typename T>
  void read(const char* key, T& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    try {
      out = it->template get<T>();
    } catch (const json::exception&) {
      fail(std::string("bad value for '") + key + "'");
    }
  }

  // Null stands for an unbounded value.
  void read_unbounded(const char* key, double& out) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) return;
    if (it->is_null()) {
      out = std::numeric_limits<double>::infinity();
      return;
    }
    read(key, out);
  }

  const json* child(const char* key) {
    seen_.insert(key);
    auto it = j_.find(key);
    return it == j_.end() ? nullptr : &*it;
  }

  std::string path(const char* key) const { return path_ + "." + key; }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (!seen_.contains(key)) fail("unknown key '" + key + "'");
    }
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::kConfig, path_ + ": " + what);
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

void read_node(const json& j, const std::string& path, node::NodeParams& p) {
  Section s(j, path);
  s.read("kappa_mhz", p.kappa_mhz);
  s.read("gamma_mhz", p.gamma_mhz);
  s.read("g_mhz", p.g_mhz);
  s.read("input_coupling_fraction", p.input_coupling_fraction);
  s.read("mode_matching", p.mode_matching);
  s.read("pump_fidelity", p.pump_fidelity);
  s.read("pi_pulse_residual", p.pi_pulse_residual);
  s.read_unbounded("coherence_time_us", p.coherence_time_us);
  s.read("pi_half_duration_us", p.pi_half_duration_us);
  s.read("pi_duration_us", p.pi_duration_us);
  s.finish();
}

json node_json(const node::NodeParams& p) {
  return json{{"kappa_mhz", p.kappa_mhz},
              {"gamma_mhz", p.gamma_mhz},
              {"g_mhz", p.g_mhz},
              {"input_coupling_fraction", p.input_coupling_fraction},
              {"mode_matching", p.mode_matching},
              {"pump_fidelity", p.pump_fidelity},
              {"pi_pulse_residual", p.pi_pulse_residual},
              {"coherence_time_us", std::isinf(p.coherence_time_us)
                                        ? json(nullptr)
                                        : json(p.coherence_time_us)},
              {"pi_half_duration_us", p.pi_half_duration_us},
              {"pi_duration_us", p.pi_duration_us}};
}

node::InputQubit read_input(const json& j, const std::string& path) {
  if (j.is_string()) return input_from_label(j.get<std::string>());
  Section s(j, path);
  std::vector<double> alpha{1.0, 0.0};
  std::vector<double> beta{0.0, 0.0};
  s.read("alpha", alpha);
  s.read("beta", beta);
  s.finish();
  if (alpha.size() != 2 || beta.size() != 2) {
    s.fail("alpha and beta are [re, im] pairs");
  }
  node::InputQubit q{core::Complex(alpha[0], alpha[1]), core::Complex(beta[0], beta[1])};
  return q;
}

json input_json(const node::InputQubit& q) {
  const auto states = node::six_states();
  const auto labels = node::six_state_labels();
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (states[i].alpha == q.alpha && states[i].beta == q.beta) return labels[i];
  }
  return json{{"alpha", {q.alpha.real(), q.alpha.imag()}},
              {"beta", {q.beta.real(), q.beta.imag()}}};
}

void check_grid(const std::vector<double>& grid, const char* name, double max) {
  if (grid.empty()) {
    throw Error(ErrorKind::kConfig, std::string(name) + " must not be empty");
  }
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= max)) {
      throw Error(ErrorKind::kConfig, std::string(name) + " value out of range [0, " +
                                          format_number(max) + "]");
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw Error(ErrorKind::kConfig, std::string(name) + " must be strictly increasing");
    }
  }
}

}  // namespace

protocol::DecoherenceLaw parse_decoherence_law(const std::string& name) {
  if (name == "exp" || name == "exponential") return protocol::DecoherenceLaw::kExponential;
  if (name == "gauss" || name == "gaussian") return protocol::DecoherenceLaw::kGaussian;
  throw Error(ErrorKind::kConfig, "unknown decoherence law '" + name + "'");
}

node::InputQubit input_from_label(const std::string& label) {
  const auto states = node::six_states();
  const auto labels = node::six_state_labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return states[i];
  }
  throw Error(ErrorKind::kUnknownLabel, "unknown input state '" + label + "'");
}

void ExperimentConfig::validate() const {
  protocol.validate();
  check_grid(mean_photon_grid, "mean_photon_grid", 1.5);
  check_grid(delay_grid_us, "delay_grid_us", 100.0);
  if (shots && *shots == 0) throw Error(ErrorKind::kConfig, "shots must be positive");
}

ExperimentConfig config_from_json(const json& j) {
  ExperimentConfig c;
  ProtocolConfig& p = c.protocol;
  Section root(j, "config");

  if (const json* in = root.child("input")) p.input = read_input(*in, root.path("input"));
  if (const json* n = root.child("node_bob")) read_node(*n, root.path("node_bob"), p.node_bob);
  if (const json* n = root.child("node_alice")) {
    read_node(*n, root.path("node_alice"), p.node_alice);
  }
  if (const json* pj = root.child("pulse")) {
    Section s(*pj, root.path("pulse"));
    s.read("mean_photon_number", p.pulse.mean_photon_number);
    s.read("fock_cutoff", p.pulse.fock_cutoff);
    s.read("envelope_fwhm_us", p.pulse.envelope_fwhm_us);
    std::string source = p.source == protocol::PhotonSource::kCoherent ? "coherent"
                                                                        : "single_photon";
    s.read("source", source);
    if (source == "coherent") {
      p.source = protocol::PhotonSource::kCoherent;
    } else if (source == "single_photon") {
      p.source = protocol::PhotonSource::kSinglePhoton;
    } else {
      s.fail("source must be 'coherent' or 'single_photon'");
    }
    s.read("auto_cutoff", p.auto_cutoff);
    s.finish();
  }
  if (const json* lj = root.child("link")) {
    Section s(*lj, root.path("link"));
    s.read("fiber_transmission", p.fiber_transmission);
    s.read("fiber_depolarization", p.fiber_depolarization);
    s.read("detection_path_efficiency", p.detection_path_efficiency);
    s.finish();
  }
  if (const json* dj = root.child("detector")) {
    Section s(*dj, root.path("detector"));
    s.read("efficiency", p.detector.efficiency);
    s.read("dark_count_rate_hz", p.detector.dark_count_rate_hz);
    s.read("gate_window_us", p.detector.gate_window_us);
    s.finish();
  }
  if (const json* tj = root.child("timing")) {
    Section s(*tj, root.path("timing"));
    s.read("pump_bob_us", p.timing.pump_bob_us);
    s.read("pump_alice_us", p.timing.pump_alice_us);
    s.read("pi_half_us", p.timing.pi_half_us);
    s.read("pi_us", p.timing.pi_us);
    s.read("photon_window_us", p.timing.photon_window_us);
    s.read("readout_us", p.timing.readout_us);
    s.read("classical_latency_us", p.timing.classical_latency_us);
    s.read("feedback_us", p.timing.feedback_us);
    s.finish();
  }
  if (const json* pj = root.child("protocol")) {
    Section s(*pj, root.path("protocol"));
    s.read("delay_tau_us", p.delay_tau_us);
    s.read("repetition_rate_hz", p.repetition_rate_hz);
    s.read("apply_feedback", p.apply_feedback);
    s.read("measure_after_herald", p.measure_after_herald);
    s.read("alice_readout_fidelity", p.alice_readout_fidelity);
    s.read("tomography_readout_fidelity", p.tomography_readout_fidelity);
    s.finish();
  }
  if (const json* dj = root.child("decoherence")) {
    Section s(*dj, root.path("decoherence"));
    std::string law = p.decoherence_law == protocol::DecoherenceLaw::kExponential ? "exp"
                                                                                  : "gauss";
    s.read("law", law);
    p.decoherence_law = parse_decoherence_law(law);
    s.read("enabled", p.decoherence_enabled);
    s.finish();
  }
  if (const json* sj = root.child("sweep")) {
    Section s(*sj, root.path("sweep"));
    s.read("mean_photon_grid", c.mean_photon_grid);
    s.read("delay_grid_us", c.delay_grid_us);
    s.read("workers", c.workers);
    s.finish();
  }
  if (const json* fj = root.child("finite_shot")) {
    Section s(*fj, root.path("finite_shot"));
    std::size_t shots = 0;
    s.read("shots", shots);
    if (shots > 0) c.shots = shots;
    s.read("seed", c.seed);
    s.finish();
  }
  root.finish();
  c.validate();
  return c;
}

json config_to_json(const ExperimentConfig& c) {
  const ProtocolConfig& p = c.protocol;
  json j;
  j["input"] = input_json(p.input);
  j["node_bob"] = node_json(p.node_bob);
  j["node_alice"] = node_json(p.node_alice);
  j["pulse"] = {{"mean_photon_number", p.pulse.mean_photon_number},
                {"fock_cutoff", p.pulse.fock_cutoff},
                {"envelope_fwhm_us", p.pulse.envelope_fwhm_us},
                {"source", p.source == protocol::PhotonSource::kCoherent ? "coherent"
                                                                          : "single_photon"},
                {"auto_cutoff", p.auto_cutoff}};
  j["link"] = {{"fiber_transmission", p.fiber_transmission},
               {"fiber_depolarization", p.fiber_depolarization},
               {"detection_path_efficiency", p.detection_path_efficiency}};
  j["detector"] = {{"efficiency", p.detector.efficiency},
                   {"dark_count_rate_hz", p.detector.dark_count_rate_hz},
                   {"gate_window_us", p.detector.gate_window_us}};
  j["timing"] = {{"pump_bob_us", p.timing.pump_bob_us},
                 {"pump_alice_us", p.timing.pump_alice_us},
                 {"pi_half_us", p.timing.pi_half_us},
                 {"pi_us", p.timing.pi_us},
                 {"photon_window_us", p.timing.photon_window_us},
                 {"readout_us", p.timing.readout_us},
                 {"classical_latency_us", p.timing.classical_latency_us},
                 {"feedback_us", p.timing.feedback_us}};
  j["protocol"] = {{"delay_tau_us", p.delay_tau_us},
                   {"repetition_rate_hz", p.repetition_rate_hz},
                   {"apply_feedback", p.apply_feedback},
                   {"measure_after_herald", p.measure_after_herald},
                   {"alice_readout_fidelity", p.alice_readout_fidelity},
                   {"tomography_readout_fidelity", p.tomography_readout_fidelity}};
  j["decoherence"] = {
      {"law", p.decoherence_law == protocol::DecoherenceLaw::kExponential ? "exp" : "gauss"},
      {"enabled", p.decoherence_enabled}};
  j["sweep"] = {{"mean_photon_grid", c.mean_photon_grid},
                {"delay_grid_us", c.delay_grid_us},
                {"workers", c.workers}};
  j["finite_shot"] = {{"shots", c.shots.value_or(0)}, {"seed", c.seed}};
  return j;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kIo, "cannot open config '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::kConfig, path + ": " + e.what());
  }
  return config_from_json(j);
}

void save_config(const ExperimentConfig& config, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write config '" + path + "'");
  out << config_to_json(config).dump(2) << '\n';
}

}  // namespace qtele::harness
