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

// Model checkpoint format (text, exact round trip):
//
//   line 1   JSON header {"format":"dpmf-checkpoint","version":1,
//            "n_m":..,"n_u":..,"n":..,"lambda":..,"matrices":[...]}
//   then for each listed matrix, a line "[theta]" or "[x]" followed by one
//   comma-separated row per profile, values in shortest round-trip form.
//
// The released artifact normally lists only "theta".

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "dpmf/error.hpp"
#include "dpmf/model.hpp"
#include "dpmf/ratings_io.hpp"
#include "json.hpp"

namespace dpmf {

struct Checkpoint {
  std::size_t n_items = 0;
  std::size_t n_users = 0;
  std::size_t rank = 0;
  double lambda = 0.0;
  std::optional<Matrix> items;
  Matrix users;
};

namespace detail {

inline void WriteMatrix(std::ostream& out, const char* tag, const Matrix& m) {
  out << '[' << tag << "]\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ',';
      out << FormatDouble(m(r, c));
    }
    out << '\n';
  }
}

inline Matrix ReadMatrix(std::istream& in, std::size_t rows, std::size_t cols) {
  Matrix m(rows, cols);
  std::string line;
  for (std::size_t r = 0; r < rows; ++r) {
    if (!std::getline(in, line))
      Fail(ErrorCode::kParse, "checkpoint truncated");
    const auto fields = Split(Trim(line), ",");
    Require(fields.size() == cols, ErrorCode::kParse,
            "checkpoint row has wrong width");
    for (std::size_t c = 0; c < cols; ++c) {
      const auto v = ParseDouble(fields[c]);
      Require(v.has_value(), ErrorCode::kParse, "non-numeric checkpoint value");
      m(r, c) = *v;
    }
  }
  return m;
}

}  // namespace detail

inline void write_checkpoint(std::ostream& out, const FactorModel& model,
                             bool include_items) {
  nlohmann::json header;
  header["format"] = "dpmf-checkpoint";
  header["version"] = 1;
  header["n_m"] = model.n_items();
  header["n_u"] = model.n_users();
  header["n"] = model.rank();
  header["lambda"] = model.lambda;
  header["matrices"] = include_items ? nlohmann::json{"theta", "x"}
                                     : nlohmann::json{"theta"};
  out << header.dump() << '\n';
  detail::WriteMatrix(out, "theta", model.users);
  if (include_items) detail::WriteMatrix(out, "x", model.items);
}

inline Checkpoint read_checkpoint(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) detail::Fail(ErrorCode::kParse, "empty checkpoint");
  Checkpoint ck;
  std::vector<std::string> matrices;
  try {
    const auto header = nlohmann::json::parse(line);
    detail::Require(header.at("format") == "dpmf-checkpoint",
                    ErrorCode::kParse, "not a dpmf checkpoint");
    ck.n_items = header.at("n_m").get<std::size_t>();
    ck.n_users = header.at("n_u").get<std::size_t>();
    ck.rank = header.at("n").get<std::size_t>();
    ck.lambda = header.at("lambda").get<double>();
    matrices = header.at("matrices").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    detail::Fail(ErrorCode::kParse, std::string("bad checkpoint header: ") + e.what());
  }
  bool have_users = false;
  for (const std::string& tag : matrices) {
    if (!std::getline(in, line) || detail::Trim(line) != "[" + tag + "]")
      detail::Fail(ErrorCode::kParse, "expected section [" + tag + "]");
    if (tag == "theta") {
      ck.users = detail::ReadMatrix(in, ck.n_users, ck.rank);
      have_users = true;
    } else if (tag == "x") {
      ck.items = detail::ReadMatrix(in, ck.n_items, ck.rank);
    } else {
      detail::Fail(ErrorCode::kParse, "unknown section " + tag);
    }
  }
  detail::Require(have_users, ErrorCode::kParse, "checkpoint lacks theta");
  return ck;
}

}  // namespace dpmf
