// Copyright 2026 The dpmf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dpmf: command-line harness for differentially private matrix
// factorization.
//
// Exit codes: 0 success, 2 usage / IO / invalid parameters, 3 numerical
// failure (divergence).

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dpmf.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;

struct DataOptions {
  std::string path;
  std::string format = "auto";
  std::optional<double> scale_min;
  std::optional<double> scale_max;
  bool synth = false;
  std::uint64_t synth_seed = 7;
};

struct TrainOptions {
  dpmf::TrainConfig cfg;
  dpmf::PrivacyParams privacy;
  bool no_privacy = false;
  bool no_baseline_clip = false;
  bool no_timing = false;
  bool clipped_residual = false;
  std::optional<double> tau;
};

void AddDataOptions(CLI::App* cmd, DataOptions& d) {
  cmd->add_option("--data", d.path, "Ratings file");
  cmd->add_option("--format", d.format,
                  "auto | canonical | csv | movielens-dat (auto: canonical when "
                  "a .json sidecar exists, movielens-dat for .dat, else csv)");
  cmd->add_option("--scale-min", d.scale_min, "Declared minimum rating");
  cmd->add_option("--scale-max", d.scale_max, "Declared maximum rating");
  cmd->add_flag("--synth", d.synth,
                "Use the bundled synthetic dataset (200 items, 300 users, "
                "density 0.1, ratings 1-5)");
  cmd->add_option("--synth-seed", d.synth_seed, "Seed of the synthetic dataset");
}

void AddTrainOptions(CLI::App* cmd, TrainOptions& t) {
  cmd->add_option("--n", t.cfg.rank, "Profile dimension")->capture_default_str();
  cmd->add_option("--lambda", t.cfg.lambda, "Regularization weight")
      ->capture_default_str();
  cmd->add_option("--mu", t.cfg.mu, "Step size")->capture_default_str();
  cmd->add_option("--iters", t.cfg.max_iters, "Maximum iterations J")
      ->capture_default_str();
  cmd->add_option("--rel-tol", t.cfg.rel_tol,
                  "Relative cost tolerance for early stopping (0 = fixed J; a "
                  "data-dependent stop is not covered by the reported budget)")
      ->capture_default_str();
  cmd->add_option("--seed", t.cfg.seed, "Initialization and noise seed")
      ->capture_default_str();
  cmd->add_option("--eps-i", t.privacy.eps_i, "Per-iteration epsilon")
      ->capture_default_str();
  cmd->add_option("--delta", t.privacy.delta, "Per-iteration delta")
      ->capture_default_str();
  cmd->add_option("--delta-r", t.privacy.delta_r, "Target delta of the overall guarantee")
      ->capture_default_str();
  cmd->add_option("--clip", t.privacy.clip, "Row-norm clipping bound C")
      ->capture_default_str();
  cmd->add_option("--tau", t.tau,
                  "Override the rating range (default r_max - r_min)");
  cmd->add_flag("--no-privacy", t.no_privacy, "Train the non-private baseline");
  cmd->add_flag("--no-baseline-clip", t.no_baseline_clip,
                "Disable clipping on the non-private path");
  cmd->add_flag("--allow-large-eps", t.privacy.allow_large_eps,
                "Accept eps_i >= 1 (RDP accounting only)");
  cmd->add_flag("--clipped-residual", t.clipped_residual,
                "Evaluate gradient residuals with the clipped counterpart "
                "profiles instead of the stored ones");
  cmd->add_flag("--no-timing", t.no_timing,
                "Record wall_ms as 0 for byte-reproducible output");
}

dpmf::TrainConfig Finish(const TrainOptions& t) {
  dpmf::TrainConfig cfg = t.cfg;
  cfg.privacy = t.no_privacy ? std::nullopt
                             : std::optional<dpmf::PrivacyParams>(t.privacy);
  cfg.baseline_clip = t.no_baseline_clip ? std::nullopt
                                         : std::optional<double>(t.privacy.clip);
  cfg.tau = t.tau;
  cfg.record_timing = !t.no_timing;
  cfg.residual = t.clipped_residual ? dpmf::ResidualSource::kClipped
                                    : dpmf::ResidualSource::kStored;
  return cfg;
}

std::optional<dpmf::RatingScale> Scale(const std::optional<double>& lo,
                                       const std::optional<double>& hi) {
  if (lo.has_value() != hi.has_value())
    throw dpmf::Error(dpmf::ErrorCode::kInvalidParameter,
                      "--scale-min and --scale-max go together");
  if (!lo) return std::nullopt;
  return dpmf::RatingScale{*lo, *hi};
}

dpmf::RatingDataset ParseFile(const std::string& path, std::string format,
                              std::optional<dpmf::RatingScale> scale) {
  if (format == "auto") {
    if (fs::exists(dpmf::SidecarPath(path)))
      format = "canonical";
    else if (fs::path(path).extension() == ".dat")
      format = "movielens-dat";
    else
      format = "csv";
  }
  if (format == "canonical") return dpmf::read_canonical(path);
  const auto parsed = dpmf::ParseRatingFormat(format);
  if (!parsed)
    throw dpmf::Error(dpmf::ErrorCode::kInvalidParameter,
                      "unknown format " + format);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dpmf::Error(dpmf::ErrorCode::kIo, "cannot open " + path);
  return dpmf::parse_ratings(in, *parsed, scale);
}

dpmf::RatingDataset LoadData(const DataOptions& d) {
  if (d.synth) {
    dpmf::SynthSpec spec;
    spec.seed = d.synth_seed;
    return dpmf::synthetic_ratings(spec);
  }
  if (d.path.empty())
    throw dpmf::Error(dpmf::ErrorCode::kInvalidParameter,
                      "either --data or --synth is required");
  return ParseFile(d.path, d.format, Scale(d.scale_min, d.scale_max));
}

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw dpmf::Error(dpmf::ErrorCode::kIo, "cannot write " + path.string());
}

void EnsureDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw dpmf::Error(dpmf::ErrorCode::kIo, "cannot create " + dir.string());
}

std::string Fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

void PrintStats(const dpmf::RatingDataset& ds) {
  std::cout << "n_items=" << ds.n_items() << "\n"
            << "n_users=" << ds.n_users() << "\n"
            << "entries=" << ds.size() << "\n"
            << "density=" << Fmt(dpmf::density(ds)) << "\n"
            << "tau=" << Fmt(ds.tau()) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentially private matrix factorization"};
  app.set_config("--config", "", "TOML/INI file; command-line flags win");
  app.require_subcommand(1);

  // ingest
  struct {
    std::string input, out, format = "auto";
    std::optional<double> scale_min, scale_max;
    std::size_t min_item = 0, min_user = 0, max_user = dpmf::kUnbounded;
  } ingest;
  auto* ingest_cmd = app.add_subcommand("ingest", "Parse, condition and store a ratings file");
  ingest_cmd->add_option("--input", ingest.input, "Raw ratings file")->required();
  ingest_cmd->add_option("--out", ingest.out, "Canonical csv to write")->required();
  ingest_cmd->add_option("--format", ingest.format, "auto | csv | movielens-dat");
  ingest_cmd->add_option("--scale-min", ingest.scale_min, "Declared minimum rating");
  ingest_cmd->add_option("--scale-max", ingest.scale_max, "Declared maximum rating");
  ingest_cmd->add_option("--min-item", ingest.min_item,
                         "Keep items with at least this many ratings");
  ingest_cmd->add_option("--min-user", ingest.min_user,
                         "Keep users with more than this many ratings");
  ingest_cmd->add_option("--max-user", ingest.max_user,
                         "Keep users with fewer than this many ratings");

  // synth
  dpmf::SynthSpec synth;
  std::string synth_out;
  auto* synth_cmd = app.add_subcommand("synth", "Write the seeded synthetic dataset");
  synth_cmd->add_option("--out", synth_out, "Canonical csv to write")->required();
  synth_cmd->add_option("--items", synth.n_items)->capture_default_str();
  synth_cmd->add_option("--users", synth.n_users)->capture_default_str();
  synth_cmd->add_option("--density", synth.density)->capture_default_str();
  synth_cmd->add_option("--rank", synth.rank)->capture_default_str();
  synth_cmd->add_option("--noise", synth.noise)->capture_default_str();
  synth_cmd->add_option("--seed", synth.seed)->capture_default_str();
  synth_cmd->add_option("--scale-min", synth.scale.min)->capture_default_str();
  synth_cmd->add_option("--scale-max", synth.scale.max)->capture_default_str();

  // train
  DataOptions train_data;
  TrainOptions train_opts;
  std::string train_out = "dpmf-out";
  bool unsafe_release_items = false;
  auto* train_cmd = app.add_subcommand("train", "Train one model and write history + checkpoint");
  AddDataOptions(train_cmd, train_data);
  AddTrainOptions(train_cmd, train_opts);
  train_cmd->add_option("--out", train_out, "Output directory")->capture_default_str();
  train_cmd->add_flag("--unsafe-release-items", unsafe_release_items,
                      "Also write item profiles X (not covered by the privacy "
                      "guarantee)");

  // sweep
  DataOptions sweep_data;
  TrainOptions sweep_opts;
  std::string sweep_axis = "eps_i", sweep_out = "dpmf-sweep";
  std::vector<double> sweep_values;
  std::vector<std::uint64_t> sweep_seeds;
  std::size_t num_seeds = 0;
  unsigned jobs = 1;
  auto* sweep_cmd = app.add_subcommand("sweep", "Sweep eps_i, n or mu over several seeds");
  AddDataOptions(sweep_cmd, sweep_data);
  AddTrainOptions(sweep_cmd, sweep_opts);
  sweep_cmd->add_option("--axis", sweep_axis, "eps_i | n | mu")->capture_default_str();
  sweep_cmd->add_option("--values", sweep_values, "Strictly increasing axis values")
      ->delimiter(',')
      ->required();
  sweep_cmd->add_option("--seeds", sweep_seeds, "Seeds (comma separated)")->delimiter(',');
  sweep_cmd->add_option("--num-seeds", num_seeds, "Use seeds 1..N");
  sweep_cmd->add_option("--jobs", jobs, "Parallel training runs")->capture_default_str();
  sweep_cmd->add_option("--out", sweep_out, "Output directory")->capture_default_str();

  // account
  double acc_eps = 0.5, acc_delta = 0.01, acc_delta_r = 1e-5;
  std::size_t acc_steps = 300, curve_points = 10000;
  bool acc_large = false;
  std::string curve_path;
  auto* account_cmd = app.add_subcommand("account", "Optimal Renyi order and overall epsilon");
  account_cmd->add_option("--eps-i", acc_eps)->capture_default_str();
  account_cmd->add_option("--delta", acc_delta)->capture_default_str();
  account_cmd->add_option("--delta-r", acc_delta_r)->capture_default_str();
  account_cmd->add_option("--steps", acc_steps, "Number of iterations J")->capture_default_str();
  account_cmd->add_option("--curve", curve_path, "Write (alpha, epsilon) CSV here");
  account_cmd->add_option("--curve-points", curve_points)->capture_default_str();
  account_cmd->add_flag("--allow-large-eps", acc_large);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*ingest_cmd) {
      dpmf::RatingDataset ds = ParseFile(ingest.input, ingest.format,
                                         Scale(ingest.scale_min, ingest.scale_max));
      if (ingest.min_item > 0 || ingest.min_user > 0 ||
          ingest.max_user != dpmf::kUnbounded) {
        ds = dpmf::condition_dataset(ds, ingest.min_item, ingest.min_user,
                                     ingest.max_user);
      }
      dpmf::write_canonical(ds, ingest.out);
      PrintStats(ds);
    } else if (*synth_cmd) {
      const auto ds = dpmf::synthetic_ratings(synth);
      dpmf::write_canonical(ds, synth_out);
      PrintStats(ds);
    } else if (*train_cmd) {
      const auto ds = LoadData(train_data);
      const auto cfg = Finish(train_opts);
      const auto result = dpmf::train(ds, cfg);
      EnsureDir(train_out);
      WriteText(fs::path(train_out) / "history.csv",
                dpmf::history_to_csv(result.history));
      std::ofstream ckpt(fs::path(train_out) /
                             (unsafe_release_items ? "model.ckpt" : "theta.ckpt"),
                         std::ios::binary);
      dpmf::write_checkpoint(ckpt, result.model, unsafe_release_items);
      if (!ckpt) throw dpmf::Error(dpmf::ErrorCode::kIo, "cannot write checkpoint");
      const auto& last = result.history.back();
      std::cout << "iters=" << last.iter << " rmse=" << Fmt(last.rmse)
                << " cost=" << Fmt(last.cost) << " eps_opt="
                << (last.eps_opt ? Fmt(*last.eps_opt) : std::string("none"))
                << "\n";
    } else if (*sweep_cmd) {
      const auto axis = dpmf::ParseSweepAxis(sweep_axis);
      if (!axis)
        throw dpmf::Error(dpmf::ErrorCode::kInvalidParameter,
                          "unknown axis " + sweep_axis);
      dpmf::SweepSpec spec;
      spec.axis = *axis;
      spec.values = sweep_values;
      spec.seeds = sweep_seeds;
      for (std::size_t s = 1; s <= num_seeds; ++s) spec.seeds.push_back(s);
      if (spec.seeds.empty()) spec.seeds.push_back(1);
      spec.base = Finish(sweep_opts);
      spec.jobs = jobs;
      const auto ds = LoadData(sweep_data);
      const auto rows = dpmf::run_sweep(ds, spec);
      EnsureDir(sweep_out);
      const fs::path dir(sweep_out);
      const std::string axis_name = dpmf::ToString(*axis);
      WriteText(dir / "results.csv", dpmf::results_to_csv(rows));
      const auto charts = dpmf::sweep_charts(rows, *axis);
      WriteText(dir / ("rmse_vs_" + axis_name + ".svg"), charts.rmse);
      WriteText(dir / ("eps_vs_" + axis_name + ".svg"), charts.eps);
      WriteText(dir / ("time_vs_" + axis_name + ".svg"), charts.time);
      std::size_t diverged = 0;
      for (const auto& r : rows) diverged += r.diverged() ? 1 : 0;
      std::cout << "runs=" << rows.size() << " diverged=" << diverged << "\n";
    } else if (*account_cmd) {
      const double multiplier =
          dpmf::noise_multiplier(acc_eps, acc_delta, acc_large);
      dpmf::RdpLedger ledger(1.0, multiplier, acc_steps);
      const double alpha = dpmf::optimal_alpha(ledger, acc_delta_r);
      const double eps =
          dpmf::epsilon_opt(acc_eps, acc_delta, acc_steps, acc_delta_r, acc_large);
      std::cout << "alpha_star=" << Fmt(alpha) << "\n"
                << "eps_opt=" << Fmt(eps) << "\n";
      if (!curve_path.empty()) {
        const double spread = alpha - 1.0;
        const auto grid = dpmf::log_alpha_grid(1.0 + spread * 1e-3,
                                               1.0 + spread * 1e3, curve_points);
        std::string csv = "alpha,epsilon\n";
        for (const auto& p : dpmf::epsilon_curve(ledger, acc_delta_r, grid))
          csv += dpmf::FormatDouble(p.alpha) + "," + dpmf::FormatDouble(p.epsilon) + "\n";
        WriteText(curve_path, csv);
      }
    }
  } catch (const dpmf::DivergenceError& e) {
    std::cerr << "dpmf: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const dpmf::Error& e) {
    std::cerr << "dpmf: " << e.what() << "\n";
    return kExitUsage;
  }
  return 0;
}
