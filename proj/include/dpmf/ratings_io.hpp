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

// Canonical on-disk dataset form: `<name>.csv` holding `user,item,rating`
// rows with dense 0-based indices, plus `<name>.csv.json` holding
// {n_items, n_users, r_min, r_max, entries, density}.

#include <charconv>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "dpmf/error.hpp"
#include "dpmf/ratings.hpp"
#include "json.hpp"

namespace dpmf {

// Shortest text that reads back to the same double.
inline std::string FormatDouble(double value) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

inline std::filesystem::path SidecarPath(const std::filesystem::path& csv) {
  return std::filesystem::path(csv.string() + ".json");
}

inline std::string to_canonical_csv(const RatingDataset& ds) {
  std::string out = "user,item,rating\n";
  for (const Entry& e : ds.entries()) {
    out += std::to_string(e.user);
    out += ',';
    out += std::to_string(e.item);
    out += ',';
    out += FormatDouble(e.rating);
    out += '\n';
  }
  return out;
}

inline nlohmann::json sidecar_json(const RatingDataset& ds) {
  nlohmann::json meta;
  meta["n_items"] = ds.n_items();
  meta["n_users"] = ds.n_users();
  meta["r_min"] = ds.r_min();
  meta["r_max"] = ds.r_max();
  meta["entries"] = ds.size();
  meta["density"] =
      ds.n_items() > 0 && ds.n_users() > 0 ? density(ds) : 0.0;
  return meta;
}

// Indices are taken verbatim (no re-mapping); dimensions and bounds come from
// the sidecar so rows or columns without ratings survive the round trip.
inline RatingDataset from_canonical(std::istream& csv,
                                    const nlohmann::json& meta) {
  std::size_t n_items = 0, n_users = 0;
  double r_min = 0.0, r_max = 0.0;
  try {
    n_items = meta.at("n_items").get<std::size_t>();
    n_users = meta.at("n_users").get<std::size_t>();
    r_min = meta.at("r_min").get<double>();
    r_max = meta.at("r_max").get<double>();
  } catch (const nlohmann::json::exception& e) {
    detail::Fail(ErrorCode::kParse, std::string("bad sidecar: ") + e.what());
  }
  std::vector<Entry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(csv, line)) {
    ++line_no;
    const auto view = detail::Trim(line);
    if (view.empty() || (line_no == 1 && view.starts_with("user"))) continue;
    const auto fields = detail::Split(view, ",");
    if (fields.size() != 3) throw ParseError(line_no, "expected 3 fields");
    const auto user = detail::ParseInt(fields[0]);
    const auto item = detail::ParseInt(fields[1]);
    const auto rating = detail::ParseDouble(fields[2]);
    if (!user || !item || *user < 0 || *item < 0)
      throw ParseError(line_no, "bad index");
    if (!rating) throw ParseError(line_no, "non-numeric rating");
    entries.push_back({static_cast<std::size_t>(*item),
                       static_cast<std::size_t>(*user), *rating});
  }
  return RatingDataset(n_items, n_users, std::move(entries), r_min, r_max);
}

inline void write_canonical(const RatingDataset& ds,
                            const std::filesystem::path& csv_path) {
  std::ofstream csv(csv_path, std::ios::binary);
  if (!csv) detail::Fail(ErrorCode::kIo, "cannot write " + csv_path.string());
  csv << to_canonical_csv(ds);
  std::ofstream meta(SidecarPath(csv_path), std::ios::binary);
  if (!meta)
    detail::Fail(ErrorCode::kIo, "cannot write " + SidecarPath(csv_path).string());
  meta << sidecar_json(ds).dump(2) << '\n';
  if (!csv || !meta) detail::Fail(ErrorCode::kIo, "write failed");
}

inline RatingDataset read_canonical(const std::filesystem::path& csv_path) {
  std::ifstream csv(csv_path, std::ios::binary);
  if (!csv) detail::Fail(ErrorCode::kIo, "cannot open " + csv_path.string());
  std::ifstream meta_in(SidecarPath(csv_path), std::ios::binary);
  if (!meta_in)
    detail::Fail(ErrorCode::kIo,
                 "missing sidecar " + SidecarPath(csv_path).string());
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_in);
  } catch (const nlohmann::json::exception& e) {
    detail::Fail(ErrorCode::kParse, std::string("bad sidecar: ") + e.what());
  }
  return from_canonical(csv, meta);
}

}  // namespace dpmf
