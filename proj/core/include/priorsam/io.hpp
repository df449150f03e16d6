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

#ifndef PRIORSAM_IO_HPP
#define PRIORSAM_IO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "priorsam/diagnostics.hpp"
#include "priorsam/types.hpp"

namespace priorsam::io {

/// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double v);

/// Inverse of format_double; throws std::runtime_error on malformed input.
double parse_double(std::string_view s);

/// Row-per-draw sample matrix: columns theta0..theta{dim-1} plus an optional
/// trailing weight column. The on-disk shape of both posterior kinds.
struct SampleTable {
  std::size_t dim = 0;
  bool has_weights = false;
  std::vector<double> coords;   // row-major, rows() x dim
  std::vector<double> weights;  // rows() entries when has_weights

  std::size_t rows() const noexcept {
    return dim == 0 ? 0 : coords.size() / dim;
  }
};

SampleTable to_table(const WeightedPosterior& post);
SampleTable to_table(const UnweightedPosterior& post);

/// CSV with a header row, LF line ends, '.' decimals, round-trip precision.
std::string write_csv(const SampleTable& table);
SampleTable read_csv(std::string_view text);

/// JSON object {"columns": [...], "rows": [[...], ...]} with the same
/// column layout and round-trip precision as the CSV.
std::string write_json(const SampleTable& table);
SampleTable read_json(std::string_view text);

/// Flat JSON object for a DiagnosticsReport; absent optionals are omitted.
std::string diagnostics_report_json(const diagnostics::DiagnosticsReport& report);

/// Everything needed to rerun a command. The timestamp is the only
/// non-reproducible field and lives on its own.
struct RunManifest {
  std::string command;
  std::string algorithm;
  std::string model_id;
  std::map<std::string, double> params;
  std::uint64_t n = 0;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> m;  // slips only
  std::optional<double> c;         // laps only
  std::size_t shards = 1;
  std::string format;
  std::string output_path;
};

/// Serializes the manifest plus the library version and a "written_at_utc"
/// timestamp field (ISO 8601, UTC).
std::string run_manifest_json(const RunManifest& manifest);

void write_file(const std::string& path, std::string_view content);
std::string read_file(const std::string& path);

}  // namespace priorsam::io

#endif  // PRIORSAM_IO_HPP
