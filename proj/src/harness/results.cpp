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

#include <array>
#include <charconv>
#include <cmath>
#include <sstream>
#include <system_error>

#include "qtele/core/error.hpp"
#include "qtele/harness/harness.hpp"

namespace qtele::harness {

namespace {

using nlohmann::json;

double parse_number(const std::string& field, const std::string& column) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    throw Error(ErrorKind::kIo, "column '" + column + "': cannot parse '" + field + "'");
  }
  return value;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

const std::vector<std::string>& result_columns() {
  static const std::vector<std::string> columns{
      "swept_name",        "swept_value",       "fidelity",
      "stderr",            "herald_prob",       "rate_hz",
      "fidelity_photon_a", "fidelity_photon_d", "double_click_prob",
      "length_equiv_km"};
  return columns;
}

std::string format_number(double value) {
  if (!std::isfinite(value)) {
    throw Error(ErrorKind::kInvalidArgument, "cannot format a non-finite number");
  }
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc()) throw Error(ErrorKind::kIo, "number formatting failed");
  return std::string(buf.data(), ptr);
}

std::string emit_csv(std::span<const ResultRow> rows) {
  std::string out;
  const auto& cols = result_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    out += (i ? "," : "") + cols[i];
  }
  out += '\n';
  for (const auto& r : rows) {
    for (const std::string* s : {&r.swept_name, &r.swept_value}) {
      if (s->find_first_of(",\n\"") != std::string::npos) {
        throw Error(ErrorKind::kInvalidArgument, "CSV field contains a separator: " + *s);
      }
    }
    out += r.swept_name + ',' + r.swept_value;
    for (double v : {r.fidelity, r.standard_error, r.herald_prob, r.rate_hz,
                     r.fidelity_photon_a, r.fidelity_photon_d, r.double_click_prob}) {
      out += ',' + format_number(v);
    }
    out += ',';
    if (r.length_equiv_km) out += format_number(*r.length_equiv_km);
    out += '\n';
  }
  return out;
}

std::vector<ResultRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  const auto& cols = result_columns();
  if (!std::getline(in, line) || split_fields(line) != cols) {
    throw Error(ErrorKind::kIo, "CSV header does not match the result schema");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_fields(line);
    if (f.size() != cols.size()) {
      throw Error(ErrorKind::kIo, "CSV row has " + std::to_string(f.size()) +
                                      " fields, expected " + std::to_string(cols.size()));
    }
    ResultRow r;
    r.swept_name = f[0];
    r.swept_value = f[1];
    r.fidelity = parse_number(f[2], cols[2]);
    r.standard_error = parse_number(f[3], cols[3]);
    r.herald_prob = parse_number(f[4], cols[4]);
    r.rate_hz = parse_number(f[5], cols[5]);
    r.fidelity_photon_a = parse_number(f[6], cols[6]);
    r.fidelity_photon_d = parse_number(f[7], cols[7]);
    r.double_click_prob = parse_number(f[8], cols[8]);
    if (!f[9].empty()) r.length_equiv_km = parse_number(f[9], cols[9]);
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string emit_json(std::span<const ResultRow> rows) {
  json arr = json::array();
  for (const auto& r : rows) {
    json o;
    o["swept_name"] = r.swept_name;
    o["swept_value"] = r.swept_value;
    o["fidelity"] = r.fidelity;
    o["stderr"] = r.standard_error;
    o["herald_prob"] = r.herald_prob;
    o["rate_hz"] = r.rate_hz;
    o["fidelity_photon_a"] = r.fidelity_photon_a;
    o["fidelity_photon_d"] = r.fidelity_photon_d;
    o["double_click_prob"] = r.double_click_prob;
    o["length_equiv_km"] = r.length_equiv_km ? json(*r.length_equiv_km) : json(nullptr);
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

std::vector<ResultRow> parse_json(const std::string& text) {
  std::vector<ResultRow> rows;
  try {
    const json arr = json::parse(text);
    if (!arr.is_array()) throw Error(ErrorKind::kIo, "expected a JSON array of rows");
    for (const auto& o : arr) {
      ResultRow r;
      r.swept_name = o.at("swept_name").get<std::string>();
      r.swept_value = o.at("swept_value").get<std::string>();
      r.fidelity = o.at("fidelity").get<double>();
      r.standard_error = o.at("stderr").get<double>();
      r.herald_prob = o.at("herald_prob").get<double>();
      r.rate_hz = o.at("rate_hz").get<double>();
      r.fidelity_photon_a = o.at("fidelity_photon_a").get<double>();
      r.fidelity_photon_d = o.at("fidelity_photon_d").get<double>();
      r.double_click_prob = o.at("double_click_prob").get<double>();
      const auto& len = o.at("length_equiv_km");
      if (!len.is_null()) r.length_equiv_km = len.get<double>();
      rows.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kIo, std::string("malformed result JSON: ") + e.what());
  }
  return rows;
}

}  // namespace qtele::harness
