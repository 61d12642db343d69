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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtele/core/error.hpp"
#include "qtele/harness/harness.hpp"

namespace {

using nlohmann::json;
using namespace qtele;

struct Common {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  std::optional<std::size_t> shots;
  std::optional<std::uint64_t> seed;
  std::string decoherence_law;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON config file");
  cmd->add_option("--out", c.out_path, "output file (default stdout)");
  cmd->add_option("--format", c.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--shots", c.shots, "finite-shot tomography with N shots per basis");
  cmd->add_option("--seed", c.seed, "master seed for finite-shot sampling");
  cmd->add_option("--decoherence-law", c.decoherence_law, "exp or gauss");
}

harness::ExperimentConfig load(const Common& c) {
  harness::ExperimentConfig config =
      c.config_path.empty() ? harness::ExperimentConfig{} : harness::load_config(c.config_path);
  if (c.shots) config.shots = *c.shots;
  if (c.seed) config.seed = *c.seed;
  if (!c.decoherence_law.empty()) {
    config.protocol.decoherence_law = harness::parse_decoherence_law(c.decoherence_law);
  }
  config.validate();
  return config;
}

void write(const Common& c, const std::string& text) {
  if (c.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(c.out_path);
  if (!out) throw Error(ErrorKind::kIo, "cannot write '" + c.out_path + "'");
  out << text;
}

void write_rows(const Common& c, const std::vector<harness::ResultRow>& rows) {
  write(c, c.format == "json" ? harness::emit_json(rows) : harness::emit_csv(rows));
}

json matrix_json(const core::Matrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json r = json::array();
    json s = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) {
      r.push_back(m(i, k).real());
      s.push_back(m(i, k).imag());
    }
    re.push_back(r);
    im.push_back(s);
  }
  return json{{"re", re}, {"im", im}};
}

json run_json(const harness::ExperimentConfig& config) {
  const auto& p = config.protocol;
  const auto r = protocol::run_protocol(p);
  const core::Vector target = p.input.vector();
  json branches = json::array();
  for (std::size_t i = 0; i < r.branches.size(); ++i) {
    const auto& b = r.branches[i];
    json steps = json::array();
    for (const auto& s : b.feedback) steps.push_back(s.name);
    json o{{"photon", b.photon == protocol::PhotonOutcome::kA ? "A" : "D"},
           {"alice", b.alice == node::AtomOutcome::kUp ? "up" : "down"},
           {"probability", b.probability},
           {"feedback", steps}};
    if (b.bob_state) {
      o["fidelity"] = r.branch_fidelity(i, target);
      o["bob_state"] = matrix_json(b.bob_state->matrix());
    }
    branches.push_back(std::move(o));
  }
  json events = json::array();
  for (const auto& e : r.timeline.events) {
    events.push_back({{"tag", e.tag},
                      {"start_us", e.start_us},
                      {"duration_us", e.duration_us},
                      {"subsystem", e.subsystem}});
  }
  json out{{"herald_prob", r.herald_probability},
           {"double_click_prob", r.double_click_probability},
           {"no_click_prob", r.no_click_probability},
           {"rate_hz", p.repetition_rate_hz * r.herald_probability},
           {"fock_cutoff", p.effective_cutoff()},
           {"branches", branches},
           {"timeline", events},
           {"post_pump_duration_us", r.timeline.post_pump_duration_us()}};
  if (r.herald_probability > 0.0) {
    out["fidelity"] = r.fidelity(target);
    out["bob_state"] = matrix_json(r.average_bob_state().matrix());
  }
  return out;
}

void print_error(const std::string& kind, const std::string& message) {
  std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cavity-node teleportation simulator"};
  app.require_subcommand(1);
  Common common;

  auto* run = app.add_subcommand("run", "one protocol run, JSON result");
  add_common(run, common);
  std::string input_label;
  run->add_option("--input", input_label, "input state label (+z -z +x -x +y -y)");

  auto* bench = app.add_subcommand("bench6", "six-state benchmark");
  add_common(bench, common);
  std::string states_path;
  bench->add_option("--states", states_path, "write Bob's density matrices as JSON");

  auto* sweep = app.add_subcommand("sweep", "mean-photon or delay sweep");
  add_common(sweep, common);
  std::string param;
  sweep->add_option("--param", param, "mean-photon or delay")
      ->required()
      ->check(CLI::IsMember({"mean-photon", "delay"}));

  auto* budget = app.add_subcommand("budget", "fidelity gain per idealized imperfection");
  add_common(budget, common);

  auto* rate = app.add_subcommand("rate", "herald probability and teleportation rate");
  add_common(rate, common);

  auto* fit = app.add_subcommand("fit-coupling", "fit kappa_in/kappa to reflectivities");
  add_common(fit, common);
  double target_bob = 0.60;
  double target_alice = 0.55;
  std::string write_config;
  fit->add_option("--target-bob", target_bob, "Bob's operational reflectivity");
  fit->add_option("--target-alice", target_alice, "Alice's operational reflectivity");
  fit->add_option("--write-config", write_config, "write the config with fitted values");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    print_error("usage", e.what());
    return 2;
  }

  try {
    harness::ExperimentConfig config = load(common);
    if (run->parsed()) {
      if (!input_label.empty()) config.protocol.input = harness::input_from_label(input_label);
      write(common, run_json(config).dump(2) + "\n");
    } else if (bench->parsed()) {
      const auto result = harness::six_state_benchmark(config);
      write_rows(common, result.rows);
      if (!states_path.empty()) {
        json states = json::object();
        const auto labels = node::six_state_labels();
        for (std::size_t i = 0; i < result.bob_states.size(); ++i) {
          states[labels[i]] = matrix_json(result.bob_states[i]);
        }
        std::ofstream out(states_path);
        if (!out) throw Error(ErrorKind::kIo, "cannot write '" + states_path + "'");
        out << json{{"average_fidelity", result.average_fidelity}, {"states", states}}.dump(2)
            << '\n';
      }
    } else if (sweep->parsed()) {
      write_rows(common, harness::sweep(config, harness::parse_sweep_param(param)));
    } else if (budget->parsed()) {
      const auto b = harness::error_budget(config);
      if (common.format == "json") {
        json entries = json::array();
        for (const auto& e : b.entries) {
          entries.push_back({{"label", e.label}, {"fidelity", e.fidelity}, {"gain", e.gain}});
        }
        write(common, json{{"baseline", b.baseline}, {"entries", entries}}.dump(2) + "\n");
      } else {
        std::string text = "label,fidelity,gain\nbaseline," +
                           harness::format_number(b.baseline) + ",0\n";
        for (const auto& e : b.entries) {
          text += e.label + ',' + harness::format_number(e.fidelity) + ',' +
                  harness::format_number(e.gain) + '\n';
        }
        write(common, text);
      }
    } else if (rate->parsed()) {
      const auto r = harness::rate_estimate(config.protocol);
      if (common.format == "json") {
        write(common, json{{"herald_prob", r.herald_probability}, {"rate_hz", r.rate_hz}}
                              .dump(2) + "\n");
      } else {
        write(common, "herald_prob,rate_hz\n" + harness::format_number(r.herald_probability) +
                          ',' + harness::format_number(r.rate_hz) + '\n');
      }
    } else if (fit->parsed()) {
      const auto fb = harness::fit_node_coupling(config.protocol.node_bob, target_bob);
      const auto fa = harness::fit_node_coupling(config.protocol.node_alice, target_alice);
      json out = json::object();
      for (const auto& [name, f] : {std::pair{"node_bob", fb}, std::pair{"node_alice", fa}}) {
        out[name] = {{"input_coupling_fraction", f.input_coupling_fraction},
                     {"mode_matching", f.mode_matching},
                     {"reflectivity", f.reflectivity},
                     {"residual", f.residual},
                     {"converged", f.converged}};
      }
      write(common, out.dump(2) + "\n");
      if (!write_config.empty()) {
        config.protocol.node_bob.input_coupling_fraction = fb.input_coupling_fraction;
        config.protocol.node_alice.input_coupling_fraction = fa.input_coupling_fraction;
        harness::save_config(config, write_config);
      }
    }
  } catch (const Error& e) {
    print_error(std::string(error_kind_name(e.kind())), e.what());
    return 1;
  } catch (const std::exception& e) {
    print_error("internal", e.what());
    return 1;
  }
  return 0;
}
