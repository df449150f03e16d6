// Copyright 2026 The priorsam Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "priorsam/io.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "priorsam/version.hpp"

namespace priorsam::io {

using json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::runtime_error("malformed number: '" + std::string(s) + "'");
  }
  return v;
}

SampleTable to_table(const WeightedPosterior& post) {
  SampleTable t;
  t.dim = post.dim();
  t.has_weights = true;
  t.coords.assign(post.draws.coords().begin(), post.draws.coords().end());
  t.weights = post.weights;
  return t;
}

SampleTable to_table(const UnweightedPosterior& post) {
  SampleTable t;
  t.dim = post.dim;
  t.has_weights = false;
  t.coords = post.coords;
  return t;
}

namespace {

std::vector<std::string> column_names(const SampleTable& table) {
  std::vector<std::string> names;
  names.reserve(table.dim + (table.has_weights ? 1 : 0));
  for (std::size_t k = 0; k < table.dim; ++k) {
    names.push_back("theta" + std::to_string(k));
  }
  if (table.has_weights) names.push_back("weight");
  return names;
}

void validate_table(const SampleTable& table) {
  if (table.dim == 0) throw std::invalid_argument("sample table: dim must be >= 1");
  if (table.coords.empty() || table.coords.size() % table.dim != 0) {
    throw std::invalid_argument("sample table: coords must be a positive multiple of dim");
  }
  if (table.has_weights && table.weights.size() != table.rows()) {
    throw std::invalid_argument("sample table: weight column length mismatch");
  }
}

}  // namespace

std::string write_csv(const SampleTable& table) {
  validate_table(table);
  std::string out;
  const std::size_t rows = table.rows();
  out.reserve(24 * rows * (table.dim + 1));

  const auto names = column_names(table);
  for (std::size_t k = 0; k < names.size(); ++k) {
    if (k > 0) out += ',';
    out += names[k];
  }
  out += '\n';

  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t k = 0; k < table.dim; ++k) {
      if (k > 0) out += ',';
      out += format_double(table.coords[i * table.dim + k]);
    }
    if (table.has_weights) {
      out += ',';
      out += format_double(table.weights[i]);
    }
    out += '\n';
  }
  return out;
}

SampleTable read_csv(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back(line);
    start = end + 1;
  }
  if (lines.size() < 2) throw std::runtime_error("csv: need a header and at least one row");

  // Header: theta0..theta{d-1}[,weight].
  std::vector<std::string_view> header;
  {
    std::string_view h = lines[0];
    std::size_t pos = 0;
    while (true) {
      std::size_t comma = h.find(',', pos);
      if (comma == std::string_view::npos) {
        header.push_back(h.substr(pos));
        break;
      }
      header.push_back(h.substr(pos, comma - pos));
      pos = comma + 1;
    }
  }
  SampleTable table;
  table.has_weights = header.back() == "weight";
  table.dim = header.size() - (table.has_weights ? 1 : 0);
  if (table.dim == 0) throw std::runtime_error("csv: no coordinate columns");
  for (std::size_t k = 0; k < table.dim; ++k) {
    if (header[k] != "theta" + std::to_string(k)) {
      throw std::runtime_error("csv: unexpected column '" + std::string(header[k]) + "'");
    }
  }

  const std::size_t rows = lines.size() - 1;
  table.coords.reserve(rows * table.dim);
  if (table.has_weights) table.weights.reserve(rows);
  for (std::size_t r = 1; r < lines.size(); ++r) {
    std::string_view line = lines[r];
    std::size_t pos = 0;
    for (std::size_t k = 0; k < header.size(); ++k) {
      std::size_t comma = line.find(',', pos);
      const bool last = k + 1 == header.size();
      if (last != (comma == std::string_view::npos)) {
        throw std::runtime_error("csv: wrong field count on line " + std::to_string(r + 1));
      }
      const std::string_view field =
          last ? line.substr(pos) : line.substr(pos, comma - pos);
      const double v = parse_double(field);
      if (table.has_weights && k == table.dim) {
        table.weights.push_back(v);
      } else {
        table.coords.push_back(v);
      }
      pos = comma + 1;
    }
  }
  validate_table(table);
  return table;
}

std::string write_json(const SampleTable& table) {
  validate_table(table);
  json j;
  j["columns"] = column_names(table);
  json rows = json::array();
  const std::size_t n = table.rows();
  for (std::size_t i = 0; i < n; ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < table.dim; ++k) {
      row.push_back(table.coords[i * table.dim + k]);
    }
    if (table.has_weights) row.push_back(table.weights[i]);
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  return j.dump();
}

SampleTable read_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("columns") || !j.contains("rows")) {
    throw std::runtime_error("json: expected an object with 'columns' and 'rows'");
  }
  const auto& columns = j.at("columns");
  SampleTable table;
  table.has_weights = !columns.empty() && columns.back() == "weight";
  table.dim = columns.size() - (table.has_weights ? 1 : 0);
  if (table.dim == 0) throw std::runtime_error("json: no coordinate columns");
  for (std::size_t k = 0; k < table.dim; ++k) {
    if (columns.at(k) != "theta" + std::to_string(k)) {
      throw std::runtime_error("json: unexpected column '" +
                               columns.at(k).get<std::string>() + "'");
    }
  }

  const auto& rows = j.at("rows");
  table.coords.reserve(rows.size() * table.dim);
  if (table.has_weights) table.weights.reserve(rows.size());
  try {
    for (const auto& row : rows) {
      if (row.size() != columns.size()) {
        throw std::runtime_error("json: row width does not match columns");
      }
      for (std::size_t k = 0; k < table.dim; ++k) {
        table.coords.push_back(row.at(k).get<double>());
      }
      if (table.has_weights) table.weights.push_back(row.back().get<double>());
    }
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("json: ") + e.what());
  }
  validate_table(table);
  return table;
}

std::string diagnostics_report_json(const diagnostics::DiagnosticsReport& report) {
  json j;
  j["n"] = report.n;
  j["ess"] = report.ess;
  j["d2_hat"] = report.d2_hat;
  j["variance_bound"] = report.variance_bound;
  if (report.per_set_variance) {
    json sets = json::array();
    for (const auto& entry : *report.per_set_variance) {
      sets.push_back({{"set", entry.set}, {"variance", entry.variance}});
    }
    j["per_set_variance"] = std::move(sets);
  }
  if (report.ks) j["ks"] = *report.ks;
  return j.dump();
}

std::string run_manifest_json(const RunManifest& manifest) {
  json j;
  j["command"] = manifest.command;
  j["algorithm"] = manifest.algorithm;
  j["model"] = manifest.model_id;
  json params = json::object();
  for (const auto& [k, v] : manifest.params) params[k] = v;
  j["params"] = std::move(params);
  j["n"] = manifest.n;
  j["seed"] = manifest.seed;
  if (manifest.m) j["m"] = *manifest.m;
  if (manifest.c) j["c"] = *manifest.c;
  j["shards"] = manifest.shards;
  j["format"] = manifest.format;
  j["output"] = manifest.output_path;
  j["library_version"] = kVersion;

  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  j["written_at_utc"] = stamp;
  return j.dump(2);
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

}  // namespace priorsam::io
