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

// Sparse rating storage, text parsers and dataset conditioning.
//
// The observation mask is the entry set itself; nothing here ever
// materializes a dense n_items x n_users matrix.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <vector>

#include "dpmf/error.hpp"

namespace dpmf {

struct Entry {
  std::size_t item = 0;
  std::size_t user = 0;
  double rating = 0.0;

  friend bool operator==(const Entry&, const Entry&) = default;
};

struct RatingScale {
  double min = 1.0;
  double max = 5.0;
};

// Immutable sparse rating matrix V (items x users). Entries are kept sorted
// by (item, user), which is also the iteration order of every kernel.
class RatingDataset {
 public:
  RatingDataset(std::size_t n_items, std::size_t n_users,
                std::vector<Entry> entries, double r_min, double r_max)
      : n_items_(n_items),
        n_users_(n_users),
        entries_(std::move(entries)),
        r_min_(r_min),
        r_max_(r_max) {
    detail::Require(std::isfinite(r_min) && std::isfinite(r_max) &&
                        r_min <= r_max,
                    ErrorCode::kInvalidParameter,
                    "rating bounds must be finite with r_min <= r_max");
    std::sort(entries_.begin(), entries_.end(),
              [](const Entry& a, const Entry& b) {
                return std::tie(a.item, a.user) < std::tie(b.item, b.user);
              });
    for (std::size_t k = 0; k < entries_.size(); ++k) {
      const Entry& e = entries_[k];
      detail::Require(e.item < n_items_ && e.user < n_users_,
                      ErrorCode::kIndexOutOfRange,
                      "entry index outside dataset dimensions");
      detail::Require(e.rating >= r_min_ && e.rating <= r_max_,
                      ErrorCode::kInvalidParameter,
                      "rating outside [r_min, r_max]");
      if (k > 0) {
        const Entry& p = entries_[k - 1];
        detail::Require(!(p.item == e.item && p.user == e.user),
                        ErrorCode::kInvalidParameter,
                        "duplicate (item, user) pair");
      }
    }
  }

  std::size_t n_items() const noexcept { return n_items_; }
  std::size_t n_users() const noexcept { return n_users_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }
  std::span<const Entry> entries() const noexcept { return entries_; }
  double r_min() const noexcept { return r_min_; }
  double r_max() const noexcept { return r_max_; }
  // Range of ratings; the per-entry change bound under change-one-rating
  // adjacency.
  double tau() const noexcept { return r_max_ - r_min_; }

  friend bool operator==(const RatingDataset&, const RatingDataset&) = default;

 private:
  std::size_t n_items_;
  std::size_t n_users_;
  std::vector<Entry> entries_;
  double r_min_;
  double r_max_;
};

enum class RatingFormat { kMovieLensDat, kCsv };

inline std::optional<RatingFormat> ParseRatingFormat(std::string_view name) {
  if (name == "movielens-dat" || name == "dat") return RatingFormat::kMovieLensDat;
  if (name == "csv") return RatingFormat::kCsv;
  return std::nullopt;
}

namespace detail {

inline std::string_view Trim(std::string_view s) {
  constexpr std::string_view kSpace = " \t\r\n";
  const auto first = s.find_first_not_of(kSpace);
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(kSpace);
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> Split(std::string_view line,
                                           std::string_view delimiter) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(delimiter, start);
    if (pos == std::string_view::npos) {
      fields.push_back(Trim(line.substr(start)));
      break;
    }
    fields.push_back(Trim(line.substr(start, pos - start)));
    start = pos + delimiter.size();
  }
  return fields;
}

inline std::optional<std::int64_t> ParseInt(std::string_view s) {
  std::int64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    return std::nullopt;
  return value;
}

inline std::optional<double> ParseDouble(std::string_view s) {
  double value = 0.0;
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty() ||
      !std::isfinite(value))
    return std::nullopt;
  return value;
}

// Sorted distinct ids -> dense 0-based index.
inline std::map<std::int64_t, std::size_t> DenseIndex(
    std::vector<std::int64_t> ids) {
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::map<std::int64_t, std::size_t> index;
  for (std::size_t k = 0; k < ids.size(); ++k) index.emplace(ids[k], k);
  return index;
}

}  // namespace detail

// Parses `user::item::rating::timestamp` (movielens-dat) or
// `user,item,rating[,timestamp]` (csv, header auto-detected on the first
// line). Raw ids are integers; they are re-mapped to dense 0-based indices in
// ascending id order. Without a declared scale, bounds come from the data.
inline RatingDataset parse_ratings(std::istream& in, RatingFormat format,
                                   std::optional<RatingScale> scale = {}) {
  if (scale) {
    detail::Require(std::isfinite(scale->min) && std::isfinite(scale->max) &&
                        scale->min <= scale->max,
                    ErrorCode::kInvalidParameter,
                    "declared rating scale must satisfy min <= max");
  }
  const std::string_view delimiter =
      format == RatingFormat::kMovieLensDat ? "::" : ",";

  struct Raw {
    std::int64_t user;
    std::int64_t item;
    double rating;
    std::size_t line;
  };
  std::vector<Raw> raw;
  std::string line;
  std::size_t line_no = 0;
  bool seen_content = false;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (line_no == 1 && view.starts_with("\xEF\xBB\xBF")) view.remove_prefix(3);
    view = detail::Trim(view);
    if (view.empty()) continue;
    const auto fields = detail::Split(view, delimiter);
    const bool first_content = !seen_content;
    seen_content = true;
    if (format == RatingFormat::kCsv && first_content &&
        !detail::ParseInt(fields[0]) && !detail::ParseDouble(fields[0])) {
      continue;  // header
    }
    const bool arity_ok = format == RatingFormat::kMovieLensDat
                              ? fields.size() == 4
                              : (fields.size() == 3 || fields.size() == 4);
    if (!arity_ok) throw ParseError(line_no, "unexpected number of fields");
    const auto user = detail::ParseInt(fields[0]);
    const auto item = detail::ParseInt(fields[1]);
    if (!user || !item) throw ParseError(line_no, "non-integer user or item id");
    const auto rating = detail::ParseDouble(fields[2]);
    if (!rating) throw ParseError(line_no, "non-numeric rating");
    if (scale && (*rating < scale->min || *rating > scale->max))
      throw ParseError(line_no, "rating outside declared scale");
    raw.push_back({*user, *item, *rating, line_no});
  }
  if (raw.empty()) detail::Fail(ErrorCode::kEmptyDataset, "no ratings in input");

  std::vector<std::int64_t> user_ids, item_ids;
  user_ids.reserve(raw.size());
  item_ids.reserve(raw.size());
  for (const Raw& r : raw) {
    user_ids.push_back(r.user);
    item_ids.push_back(r.item);
  }
  const auto user_index = detail::DenseIndex(std::move(user_ids));
  const auto item_index = detail::DenseIndex(std::move(item_ids));

  // Report duplicates by the line of their second occurrence.
  std::vector<std::size_t> order(raw.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(raw[a].item, raw[a].user, raw[a].line) <
           std::tie(raw[b].item, raw[b].user, raw[b].line);
  });
  for (std::size_t k = 1; k < order.size(); ++k) {
    const Raw& a = raw[order[k - 1]];
    const Raw& b = raw[order[k]];
    if (a.item == b.item && a.user == b.user)
      throw ParseError(b.line, "duplicate (user, item) pair");
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  std::vector<Entry> entries;
  entries.reserve(raw.size());
  for (const Raw& r : raw) {
    entries.push_back({item_index.at(r.item), user_index.at(r.user), r.rating});
    lo = std::min(lo, r.rating);
    hi = std::max(hi, r.rating);
  }
  if (scale) {
    lo = scale->min;
    hi = scale->max;
  }
  return RatingDataset(item_index.size(), user_index.size(), std::move(entries),
                       lo, hi);
}

inline RatingDataset parse_ratings(std::string_view text, RatingFormat format,
                                   std::optional<RatingScale> scale = {}) {
  std::istringstream in{std::string(text)};
  return parse_ratings(in, format, scale);
}

inline std::vector<std::size_t> item_counts(const RatingDataset& ds) {
  std::vector<std::size_t> counts(ds.n_items(), 0);
  for (const Entry& e : ds.entries()) ++counts[e.item];
  return counts;
}

inline std::vector<std::size_t> user_counts(const RatingDataset& ds) {
  std::vector<std::size_t> counts(ds.n_users(), 0);
  for (const Entry& e : ds.entries()) ++counts[e.user];
  return counts;
}

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

// Repeatedly drops users whose rating count is not strictly inside
// (min_user_count, max_user_count) and items with fewer than min_item_count
// ratings, until nothing changes. Surviving indices are re-densified in
// their original order; the rating bounds (and so tau) are carried over.
inline RatingDataset condition_dataset(const RatingDataset& ds,
                                       std::size_t min_item_count,
                                       std::size_t min_user_count,
                                       std::size_t max_user_count) {
  detail::Require(min_user_count < max_user_count, ErrorCode::kInvalidParameter,
                  "min_user_count must be below max_user_count");
  std::vector<bool> item_alive(ds.n_items(), true);
  std::vector<bool> user_alive(ds.n_users(), true);
  std::vector<Entry> live(ds.entries().begin(), ds.entries().end());

  while (true) {
    std::vector<std::size_t> ic(ds.n_items(), 0), uc(ds.n_users(), 0);
    for (const Entry& e : live) {
      ++ic[e.item];
      ++uc[e.user];
    }
    bool changed = false;
    for (std::size_t u = 0; u < uc.size(); ++u) {
      if (user_alive[u] && !(uc[u] > min_user_count && uc[u] < max_user_count)) {
        user_alive[u] = false;
        changed = true;
      }
    }
    for (std::size_t i = 0; i < ic.size(); ++i) {
      if (item_alive[i] && (ic[i] < min_item_count || ic[i] == 0)) {
        item_alive[i] = false;
        changed = true;
      }
    }
    if (!changed) break;
    std::erase_if(live, [&](const Entry& e) {
      return !item_alive[e.item] || !user_alive[e.user];
    });
  }
  if (live.empty())
    detail::Fail(ErrorCode::kEmptyAfterConditioning,
                 "no ratings survive the count thresholds");

  std::vector<std::size_t> item_map(ds.n_items(), 0), user_map(ds.n_users(), 0);
  std::size_t n_items = 0, n_users = 0;
  for (std::size_t i = 0; i < ds.n_items(); ++i)
    if (item_alive[i]) item_map[i] = n_items++;
  for (std::size_t u = 0; u < ds.n_users(); ++u)
    if (user_alive[u]) user_map[u] = n_users++;
  for (Entry& e : live) {
    e.item = item_map[e.item];
    e.user = user_map[e.user];
  }
  return RatingDataset(n_items, n_users, std::move(live), ds.r_min(),
                       ds.r_max());
}

inline double density(const RatingDataset& ds) {
  detail::Require(ds.n_items() > 0 && ds.n_users() > 0,
                  ErrorCode::kUndefinedDensity,
                  "dataset has a zero dimension");
  return static_cast<double>(ds.size()) /
         (static_cast<double>(ds.n_items()) * static_cast<double>(ds.n_users()));
}

}  // namespace dpmf
