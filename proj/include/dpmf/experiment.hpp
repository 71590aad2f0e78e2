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

#pragma once

// Parameter sweeps: one training run per (axis value, seed) cell, results in
// long format, and summary charts over seeds.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "dpmf/error.hpp"
#include "dpmf/ratings.hpp"
#include "dpmf/ratings_io.hpp"
#include "dpmf/svg.hpp"
#include "dpmf/trainer.hpp"

namespace dpmf {

enum class SweepAxis { kEpsI, kRank, kMu };

inline const char* ToString(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::kEpsI: return "eps_i";
    case SweepAxis::kRank: return "n";
    case SweepAxis::kMu: return "mu";
  }
  return "?";
}

inline std::optional<SweepAxis> ParseSweepAxis(std::string_view name) {
  if (name == "eps_i") return SweepAxis::kEpsI;
  if (name == "n") return SweepAxis::kRank;
  if (name == "mu") return SweepAxis::kMu;
  return std::nullopt;
}

struct SweepSpec {
  SweepAxis axis = SweepAxis::kEpsI;
  std::vector<double> values;
  std::vector<std::uint64_t> seeds;
  TrainConfig base;
  unsigned jobs = 1;
};

struct SweepRow {
  SweepAxis axis = SweepAxis::kEpsI;
  double value = 0.0;
  std::uint64_t seed = 0;
  double final_rmse = 0.0;  // NaN when the run diverged
  std::optional<double> eps_opt;
  std::size_t iters = 0;
  double mean_wall_ms = 0.0;

  bool diverged() const { return std::isnan(final_rmse); }
};

inline void validate(const SweepSpec& spec) {
  detail::Require(!spec.values.empty() && !spec.seeds.empty(),
                  ErrorCode::kInvalidParameter,
                  "sweep needs at least one value and one seed");
  for (std::size_t k = 0; k < spec.values.size(); ++k) {
    detail::Require(spec.values[k] > 0.0 && std::isfinite(spec.values[k]),
                    ErrorCode::kInvalidParameter, "sweep values must be > 0");
    if (k > 0)
      detail::Require(spec.values[k] > spec.values[k - 1],
                      ErrorCode::kInvalidParameter,
                      "sweep values must be strictly increasing");
  }
  if (spec.axis == SweepAxis::kEpsI)
    detail::Require(spec.base.privacy.has_value(), ErrorCode::kInvalidParameter,
                    "an eps_i sweep needs privacy enabled");
  if (spec.axis == SweepAxis::kRank)
    for (double v : spec.values)
      detail::Require(v == std::floor(v), ErrorCode::kInvalidParameter,
                      "n sweep values must be integers");
}

inline TrainConfig config_for(const SweepSpec& spec, double value,
                              std::uint64_t seed) {
  TrainConfig cfg = spec.base;
  cfg.seed = seed;
  switch (spec.axis) {
    case SweepAxis::kEpsI: cfg.privacy->eps_i = value; break;
    case SweepAxis::kRank: cfg.rank = static_cast<std::size_t>(value); break;
    case SweepAxis::kMu: cfg.mu = value; break;
  }
  return cfg;
}

inline SweepRow run_cell(const RatingDataset& ds, const SweepSpec& spec,
                         double value, std::uint64_t seed) {
  const TrainConfig cfg = config_for(spec, value, seed);
  SweepRow row{spec.axis, value, seed, 0.0, std::nullopt, 0, 0.0};
  try {
    const TrainResult result = train(ds, cfg);
    const IterationRecord& last = result.history.back();
    row.final_rmse = last.rmse;
    row.eps_opt = last.eps_opt;
    row.iters = result.history.size();
    double total = 0.0;
    for (const IterationRecord& r : result.history) total += r.wall_ms;
    row.mean_wall_ms = total / static_cast<double>(row.iters);
  } catch (const DivergenceError& e) {
    row.final_rmse = std::numeric_limits<double>::quiet_NaN();
    row.iters = e.iteration();
    if (cfg.privacy) {
      const PrivacyParams& p = *cfg.privacy;
      row.eps_opt =
          epsilon_opt(p.eps_i, p.delta, e.iteration(), p.delta_r, p.allow_large_eps);
    }
  }
  return row;
}

// Rows come back ordered by (value, seed) whatever the job count.
inline std::vector<SweepRow> run_sweep(const RatingDataset& ds,
                                       const SweepSpec& spec) {
  validate(spec);
  validate(config_for(spec, spec.values.front(), spec.seeds.front()));
  std::vector<std::pair<double, std::uint64_t>> cells;
  for (double v : spec.values)
    for (std::uint64_t s : spec.seeds) cells.emplace_back(v, s);
  std::vector<SweepRow> rows(cells.size());

  const unsigned jobs = std::max(1u, std::min<unsigned>(
                                         spec.jobs, static_cast<unsigned>(cells.size())));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < cells.size(); k = next++)
      rows[k] = run_cell(ds, spec, cells[k].first, cells[k].second);
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.value, a.seed) < std::tie(b.value, b.seed);
  });
  return rows;
}

inline constexpr const char* kResultsHeader =
    "axis,value,seed,final_rmse,eps_opt,iters,mean_wall_ms";

inline std::string results_to_csv(const std::vector<SweepRow>& rows) {
  std::string out = std::string(kResultsHeader) + "\n";
  for (const SweepRow& r : rows) {
    out += std::string(ToString(r.axis)) + ',' + FormatDouble(r.value) + ',' +
           std::to_string(r.seed) + ',' +
           (r.diverged() ? std::string("nan") : FormatDouble(r.final_rmse)) +
           ',' + (r.eps_opt ? FormatDouble(*r.eps_opt) : std::string()) + ',' +
           std::to_string(r.iters) + ',' + FormatDouble(r.mean_wall_ms) + '\n';
  }
  return out;
}

inline std::vector<SweepRow> results_from_csv(std::istream& in) {
  std::vector<SweepRow> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto view = detail::Trim(line);
    if (view.empty()) continue;
    if (line_no == 1) {
      if (view != kResultsHeader) throw ParseError(line_no, "bad results header");
      continue;
    }
    const auto f = detail::Split(view, ",");
    if (f.size() != 7) throw ParseError(line_no, "expected 7 fields");
    const auto axis = ParseSweepAxis(f[0]);
    const auto value = detail::ParseDouble(f[1]);
    const auto seed = detail::ParseInt(f[2]);
    const auto iters = detail::ParseInt(f[5]);
    const auto wall = detail::ParseDouble(f[6]);
    if (!axis || !value || !seed || !iters || !wall)
      throw ParseError(line_no, "bad field");
    SweepRow r;
    r.axis = *axis;
    r.value = *value;
    r.seed = static_cast<std::uint64_t>(*seed);
    r.iters = static_cast<std::size_t>(*iters);
    r.mean_wall_ms = *wall;
    if (f[3] == "nan") {
      r.final_rmse = std::numeric_limits<double>::quiet_NaN();
    } else {
      const auto rm = detail::ParseDouble(f[3]);
      if (!rm) throw ParseError(line_no, "bad final_rmse");
      r.final_rmse = *rm;
    }
    if (!f[4].empty()) {
      const auto eps = detail::ParseDouble(f[4]);
      if (!eps) throw ParseError(line_no, "bad eps_opt");
      r.eps_opt = *eps;
    }
    rows.push_back(r);
  }
  return rows;
}

struct AxisSummary {
  std::vector<double> values;
  std::vector<double> mean;
  std::vector<double> min;
  std::vector<double> max;
};

// Per-value mean/min/max of a row metric over seeds; non-finite samples
// (diverged runs, missing eps) are skipped.
template <typename Metric>
AxisSummary summarize(const std::vector<SweepRow>& rows, Metric metric) {
  std::map<double, std::vector<double>> groups;
  for (const SweepRow& r : rows) {
    auto& g = groups[r.value];
    const double m = metric(r);
    if (std::isfinite(m)) g.push_back(m);
  }
  AxisSummary out;
  for (const auto& [value, samples] : groups) {
    out.values.push_back(value);
    if (samples.empty()) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      out.mean.push_back(nan);
      out.min.push_back(nan);
      out.max.push_back(nan);
      continue;
    }
    double sum = 0.0;
    for (double s : samples) sum += s;
    out.mean.push_back(sum / static_cast<double>(samples.size()));
    out.min.push_back(*std::min_element(samples.begin(), samples.end()));
    out.max.push_back(*std::max_element(samples.begin(), samples.end()));
  }
  return out;
}

struct SweepCharts {
  std::string rmse;
  std::string eps;
  std::string time;
};

inline SweepCharts sweep_charts(const std::vector<SweepRow>& rows,
                                SweepAxis axis) {
  auto chart = [&](const char* title, const char* y_label, const char* name,
                   const AxisSummary& s) {
    svg::Chart c;
    c.title = title;
    c.x_label = ToString(axis);
    c.y_label = y_label;
    c.series.push_back({name, s.values, s.mean, s.min, s.max});
    return svg::render(c);
  };
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const auto rmse =
      summarize(rows, [](const SweepRow& r) { return r.final_rmse; });
  const auto eps = summarize(
      rows, [&](const SweepRow& r) { return r.eps_opt.value_or(nan); });
  const auto time =
      summarize(rows, [](const SweepRow& r) { return r.mean_wall_ms; });
  const std::string axis_name = ToString(axis);
  return {chart(("Final RMSE vs " + axis_name).c_str(), "RMSE", "mean RMSE", rmse),
          chart(("Overall epsilon vs " + axis_name).c_str(), "epsilon_opt",
                "epsilon_opt", eps),
          chart(("Time per iteration vs " + axis_name).c_str(), "ms / iteration",
                "mean ms", time)};
}

}  // namespace dpmf
