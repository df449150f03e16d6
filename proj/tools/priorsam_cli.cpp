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

// priorsam: draw approximate posterior samples by reweighting, copying, or
// resampling prior draws, with diagnostics and benchmark reproductions.
//
// Exit codes: 0 success, 1 usage or configuration error, 2 numeric failure
// (for example, no draw had positive likelihood).

#include <chrono>
#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "priorsam/diagnostics.hpp"
#include "priorsam/engine.hpp"
#include "priorsam/errors.hpp"
#include "priorsam/io.hpp"
#include "priorsam/models.hpp"
#include "priorsam/sampling.hpp"

namespace {

using namespace priorsam;

struct CommonOpts {
  std::string model_id = "gaussian-gaussian";
  std::vector<std::string> raw_params;
  std::optional<double> x;
  std::uint64_t n = 10000;
  std::uint64_t seed = 0;
  std::size_t shards = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--model", opts.model_id, "Model id (see --help for the list)")
      ->capture_default_str();
  cmd->add_option("--x", opts.x, "Observation; shorthand for --param x=<value>");
  cmd->add_option("--param", opts.raw_params,
                  "Model parameter as key=value; repeatable");
  cmd->add_option("--n", opts.n, "Number of prior draws")->capture_default_str();
  cmd->add_option("--seed", opts.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--shards", opts.shards,
                  "Worker shards (never changes the output bytes)")
      ->capture_default_str();
}

std::map<std::string, double> build_params(const CommonOpts& opts) {
  std::map<std::string, double> params;
  for (const std::string& kv : opts.raw_params) {
    const std::size_t eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw std::invalid_argument("--param expects key=value, got '" + kv + "'");
    }
    double v = 0.0;
    try {
      v = io::parse_double(kv.substr(eq + 1));
    } catch (const std::exception&) {
      throw std::invalid_argument("--param " + kv.substr(0, eq) +
                                  ": value is not a number");
    }
    params[kv.substr(0, eq)] = v;
  }
  if (opts.x) params["x"] = *opts.x;
  return params;
}

void check_common(const CommonOpts& opts) {
  if (opts.n == 0) throw std::invalid_argument("--n must be >= 1");
  if (opts.shards == 0) throw std::invalid_argument("--shards must be >= 1");
}

// Payload to --out (or stdout when out is "-"), manifest alongside the file.
void emit(const std::string& out, const std::string& payload,
          const io::RunManifest& manifest) {
  if (out == "-") {
    std::cout << payload;
    return;
  }
  io::write_file(out, payload);
  io::write_file(out + ".manifest.json", io::run_manifest_json(manifest) + "\n");
}

std::string model_list_footer() {
  std::string f = "Models:";
  for (const auto& id : models::model_ids()) f += " " + id;
  f += "\nModel parameters (defaults):\n"
       "  gaussian-gaussian: prior-mean=0 prior-sd=1 obs-sd=1 t=1 x=1\n"
       "  beta-bernoulli:    alpha=1 beta=1 successes=1 trials=1\n"
       "  uniform-gaussian:  half-width=10 obs-sd=1 t=1 x=1\n"
       "  gaussian-chain:    x=1\n"
       "  constant:          dim=1\n";
  return f;
}

int cmd_sample(const CommonOpts& common, const std::string& algorithm,
               const std::optional<std::uint64_t>& m, const std::optional<double>& c,
               std::uint64_t max_copies, const std::string& format,
               std::string out) {
  check_common(common);
  if (algorithm != "lips" && algorithm != "laps" && algorithm != "slips") {
    throw std::invalid_argument("--algorithm must be lips, laps, or slips");
  }
  if (m && algorithm != "slips") {
    throw std::invalid_argument("--m applies only to slips");
  }
  if (c && algorithm != "laps") {
    throw std::invalid_argument("--c applies only to laps");
  }
  if (m && *m == 0) throw std::invalid_argument("--m must be >= 1");

  const auto params = build_params(common);
  const ModelSpec model = models::make_model(common.model_id, params);

  io::SampleTable table;
  if (algorithm == "lips") {
    table = io::to_table(lips(model, common.n, common.seed, common.shards));
  } else if (algorithm == "laps") {
    table = io::to_table(laps(model, common.n, c.value_or(100.0), common.seed,
                              common.shards, max_copies));
  } else {
    table = io::to_table(slips(model, common.n, m.value_or(common.n), common.seed,
                               common.shards));
  }

  if (out.empty()) out = "samples." + format;
  io::RunManifest manifest;
  manifest.command = "sample";
  manifest.algorithm = algorithm;
  manifest.model_id = common.model_id;
  manifest.params = params;
  manifest.n = common.n;
  manifest.seed = common.seed;
  if (algorithm == "slips") manifest.m = m.value_or(common.n);
  if (algorithm == "laps") manifest.c = c.value_or(100.0);
  manifest.shards = common.shards;
  manifest.format = format;
  manifest.output_path = out;

  emit(out, format == "json" ? io::write_json(table) : io::write_csv(table),
       manifest);
  return 0;
}

int cmd_diagnose(const CommonOpts& common, const std::vector<double>& half_lines,
                 std::string out) {
  check_common(common);
  const auto params = build_params(common);
  const ModelSpec model = models::make_model(common.model_id, params);

  const WeightedPosterior post = lips(model, common.n, common.seed, common.shards);
  bool clamped = false;
  const diagnostics::DiagnosticsReport report =
      diagnostics::make_report(post, model, half_lines, &clamped);
  if (clamped) {
    std::cerr << "warning: a variance estimate was negative and clamped to 0\n";
  }

  const std::string payload = io::diagnostics_report_json(report) + "\n";
  if (out.empty()) out = "-";
  io::RunManifest manifest;
  manifest.command = "diagnose";
  manifest.algorithm = "lips";
  manifest.model_id = common.model_id;
  manifest.params = params;
  manifest.n = common.n;
  manifest.seed = common.seed;
  manifest.shards = common.shards;
  manifest.format = "json";
  manifest.output_path = out;
  emit(out, payload, manifest);
  return 0;
}

// One benchmark CSV row; empty strings render as empty cells.
struct BenchRow {
  std::string point;
  std::string ks, ess, d2, wall;
};

std::string bench_csv(const std::vector<BenchRow>& rows) {
  std::string out = "point,ks,ess,d2_hat,wall_time_s\n";
  for (const auto& r : rows) {
    out += r.point + "," + r.ks + "," + r.ess + "," + r.d2 + "," + r.wall + "\n";
  }
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_benchmark(const std::string& figure, std::uint64_t seed, std::size_t shards,
                  std::optional<std::uint64_t> n_opt, std::uint32_t seeds,
                  std::vector<double> t_grid, std::string out) {
  if (shards == 0) throw std::invalid_argument("--shards must be >= 1");
  std::vector<BenchRow> rows;

  if (figure == "fig1" || figure == "fig2") {
    // Gaussian prior and likelihood at x=1; fig2 sharpens to t=10^4
    // observations and needs the larger default n.
    const double t = figure == "fig1" ? 1.0 : 1e4;
    const std::uint64_t n = n_opt.value_or(figure == "fig1" ? 10'000 : 100'000);
    if (n == 0) throw std::invalid_argument("--n must be >= 1");
    if (seeds == 0) throw std::invalid_argument("--seeds must be >= 1");
    const ModelSpec model = models::make_gaussian_gaussian(0.0, 1.0, 1.0, t, 1.0);
    const auto& cdf = *model.posterior_cdf;

    for (std::uint32_t i = 0; i < seeds; ++i) {
      const std::uint64_t s = derive_seed(seed, purpose::kSeedSweep, i);
      const auto t0 = std::chrono::steady_clock::now();
      const WeightedPosterior wp = lips(model, n, s, shards);
      const UnweightedPosterior up =
          slips_from(wp.draws, wp.log_likelihoods, n, s);
      const double ks = diagnostics::ks_distance(
          up, [&cdf](double v) { return cdf(v, 0); }, 0);
      BenchRow row;
      row.point = "seed" + std::to_string(i);
      row.ks = io::format_double(ks);
      row.ess = io::format_double(diagnostics::ess(wp.weights));
      row.d2 = io::format_double(diagnostics::d2_hat(wp.log_likelihoods));
      row.wall = io::format_double(seconds_since(t0));
      rows.push_back(std::move(row));
    }
  } else if (figure == "sweep") {
    const std::uint64_t n = n_opt.value_or(1'000'000);
    if (n == 0) throw std::invalid_argument("--n must be >= 1");
    if (t_grid.empty()) t_grid = {10.0, 100.0, 1000.0, 10000.0};
    for (std::size_t i = 0; i + 1 < t_grid.size(); ++i) {
      if (!(t_grid[i] < t_grid[i + 1])) {
        throw std::invalid_argument("--t values must be strictly increasing");
      }
    }

    for (const double t : t_grid) {
      const ModelSpec model = models::make_gaussian_gaussian(0.0, 1.0, 1.0, t, 1.0);
      const auto& cdf = *model.posterior_cdf;
      BenchRow row;
      row.point = "t=" + io::format_double(t);
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const WeightedPosterior wp = lips(model, n, seed, shards);
        row.ks = io::format_double(diagnostics::ks_distance(
            wp, [&cdf](double v) { return cdf(v, 0); }, 0));
        row.ess = io::format_double(diagnostics::ess(wp.weights));
        row.d2 = io::format_double(diagnostics::d2_hat(wp.log_likelihoods));
      } catch (const TotalUnderflowError& e) {
        std::cerr << "t=" << io::format_double(t) << ": " << e.what()
                  << " (raise --n)\n";
      }
      row.wall = io::format_double(seconds_since(t0));
      rows.push_back(std::move(row));
    }
  } else {
    throw std::invalid_argument("benchmark target must be fig1, fig2, or sweep");
  }

  if (out.empty()) out = "-";
  io::RunManifest manifest;
  manifest.command = "benchmark";
  manifest.algorithm = figure;
  manifest.model_id = "gaussian-gaussian";
  manifest.n = n_opt.value_or(0);
  manifest.seed = seed;
  manifest.shards = shards;
  manifest.format = "csv";
  manifest.output_path = out;
  emit(out, bench_csv(rows), manifest);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "priorsam: posterior sampling by reweighting, copying, or resampling "
      "prior draws"};
  app.require_subcommand(1);
  app.footer(model_list_footer());

  CommonOpts sample_opts;
  std::string algorithm = "lips";
  std::optional<std::uint64_t> m;
  std::optional<double> c;
  std::uint64_t max_copies = kDefaultMaxCopies;
  std::string sample_format = "csv";
  std::string sample_out;
  CLI::App* sample = app.add_subcommand(
      "sample", "Draw from a model's posterior and write the samples");
  add_common(sample, sample_opts);
  sample->add_option("--algorithm", algorithm, "lips, laps, or slips")
      ->capture_default_str();
  sample->add_option("--m", m, "Resample count (slips only; default n)");
  sample->add_option("--c", c, "Copies of the best draw (laps only; default 100)");
  sample->add_option("--max-copies", max_copies, "Abort laps beyond this many copies")
      ->capture_default_str();
  sample->add_option("--format", sample_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sample->add_option("--out", sample_out,
                     "Output path; '-' for stdout (default samples.<format>)");

  CommonOpts diag_opts;
  std::vector<double> half_lines;
  std::string diag_out;
  CLI::App* diagnose = app.add_subcommand(
      "diagnose", "Run the weighted sampler and report ESS, D2, and variances");
  add_common(diagnose, diag_opts);
  diagnose->add_option("--halfline", half_lines,
                       "Report asymptotic variance for {theta0 <= a}; repeatable");
  diagnose->add_option("--out", diag_out, "Output path; default stdout");

  std::string figure;
  std::uint64_t bench_seed = 0;
  std::size_t bench_shards = 1;
  std::optional<std::uint64_t> bench_n;
  std::uint32_t bench_seeds = 10;
  std::vector<double> t_grid;
  std::string bench_out;
  CLI::App* benchmark = app.add_subcommand(
      "benchmark", "Reproduce the reference figures or run the information sweep");
  benchmark->add_option("target", figure, "fig1, fig2, or sweep")->required();
  benchmark->add_option("--seed", bench_seed, "Base seed; per-row seeds derive from it")
      ->capture_default_str();
  benchmark->add_option("--shards", bench_shards, "Worker shards")->capture_default_str();
  benchmark->add_option("--n", bench_n, "Draws per row (defaults depend on target)");
  benchmark->add_option("--seeds", bench_seeds, "Rows for fig1/fig2")
      ->capture_default_str();
  benchmark->add_option("--t", t_grid, "Sweep grid (default 10 100 1000 10000)");
  benchmark->add_option("--out", bench_out, "Output path; default stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sample->parsed()) {
      return cmd_sample(sample_opts, algorithm, m, c, max_copies, sample_format,
                        sample_out);
    }
    if (diagnose->parsed()) {
      return cmd_diagnose(diag_opts, half_lines, diag_out);
    }
    return cmd_benchmark(figure, bench_seed, bench_shards, bench_n, bench_seeds,
                         t_grid, bench_out);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
