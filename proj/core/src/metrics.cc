// Copyright 2026 The AFN Authors.
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
#include "afn/metrics.h"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

#include "afn/error.h"
#include "afn/wordpiece.h"

namespace afn {
namespace {

bool Retained(const Encoding& enc, std::size_t i, TokenFilter filter) {
  switch (filter) {
    case TokenFilter::kAll:
      return true;
    case TokenFilter::kNoSpecial:
      return !enc.is_special[i];
    case TokenFilter::kWordsOnly:
      return !enc.is_special[i] && !IsPunctuationToken(enc.tokens[i]);
  }
  return true;
}

}  // namespace

std::string_view ToString(TokenFilter filter) {
  switch (filter) {
    case TokenFilter::kAll:
      return "all";
    case TokenFilter::kNoSpecial:
      return "no-special";
    case TokenFilter::kWordsOnly:
      return "words";
  }
  return "all";
}

TokenFilter ParseTokenFilter(std::string_view name) {
  if (name == "all") return TokenFilter::kAll;
  if (name == "no-special") return TokenFilter::kNoSpecial;
  if (name == "words") return TokenFilter::kWordsOnly;
  throw UsageError(fmt::format("unknown token filter '{}' (expected all, no-special or words)", name));
}

std::string_view ToString(Bucket bucket) { return bucket == Bucket::kHigh ? "HIGH" : "LOW"; }

std::optional<Bucket> BucketReport::BucketOf(std::size_t index) const {
  for (const BucketEntry& e : entries) {
    if (e.index == index) return e.bucket;
  }
  return std::nullopt;
}

double TokenStrength(std::span<const float> hidden) {
  double sum = 0.0;
  for (float v : hidden) {
    if (!std::isfinite(v)) throw InputError("token strength of a non-finite hidden state");
    sum += static_cast<double>(v) * static_cast<double>(v);
  }
  return std::sqrt(sum);
}

double RowShift(std::span<const float> a, std::span<const float> b) {
  if (a.size() != b.size()) throw InputError(fmt::format("hidden sizes differ ({} vs {})", a.size(), b.size()));
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    sum += d * d;
  }
  return std::sqrt(sum);
}

std::vector<TokenActivation> Strengths(const HiddenStates& states, int layer, TokenFilter filter) {
  const Matrix& m = LayerSlice(states, layer);
  const Encoding& enc = states.encoding;
  std::vector<TokenActivation> out;
  out.reserve(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (!Retained(enc, i, filter)) continue;
    out.push_back({i, enc.tokens[i], TokenStrength(m.row(i)), static_cast<bool>(enc.is_special[i])});
  }
  return out;
}

std::vector<TokenActivation> RankTokens(std::span<const TokenActivation> activations, std::size_t k) {
  if (k == 0) throw UsageError("top-k must be at least 1");
  std::vector<TokenActivation> ranked(activations.begin(), activations.end());
  const std::size_t keep = std::min(k, ranked.size());
  std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end(),
                    [](const TokenActivation& a, const TokenActivation& b) {
                      if (a.strength != b.strength) return a.strength > b.strength;
                      return a.index < b.index;
                    });
  ranked.resize(keep);
  return ranked;
}

double QuartileThreshold(std::span<const double> strengths) {
  if (strengths.empty()) throw InputError("quartile threshold of an empty list");
  std::vector<double> sorted(strengths.begin(), strengths.end());
  std::sort(sorted.begin(), sorted.end());
  const double g = 0.75 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(g));
  const auto hi = static_cast<std::size_t>(std::ceil(g));
  return (sorted[lo] + sorted[hi]) / 2.0;
}

BucketReport AssignBuckets(std::span<const TokenActivation> activations, std::string_view filter_applied) {
  if (activations.empty()) throw InputError("bucket assignment needs at least one token");
  std::vector<double> values;
  values.reserve(activations.size());
  for (const TokenActivation& a : activations) values.push_back(a.strength);

  BucketReport report;
  report.threshold = QuartileThreshold(values);
  report.filter_applied = std::string(filter_applied);
  report.entries.reserve(activations.size());
  for (const TokenActivation& a : activations) {
    const Bucket bucket = a.strength > report.threshold ? Bucket::kHigh : Bucket::kLow;
    report.entries.push_back({a.index, a.token, a.strength, bucket});
    if (bucket == Bucket::kHigh) report.high_set.push_back(a.index);
  }
  return report;
}

ShiftReport ActivationShift(const HiddenStates& a, const HiddenStates& b, int layer) {
  const Matrix& ma = LayerSlice(a, layer);
  const Matrix& mb = LayerSlice(b, layer);
  if (ma.rows() != mb.rows()) {
    throw InputError(fmt::format("activation shift needs equal token counts (got {} and {})", ma.rows(), mb.rows()));
  }
  ShiftReport report;
  report.records.reserve(ma.rows());
  for (std::size_t i = 0; i < ma.rows(); ++i) {
    const double delta = RowShift(ma.row(i), mb.row(i));
    report.records.push_back({i, a.encoding.tokens[i], b.encoding.tokens[i], delta});
    report.total_shift += delta;
  }
  return report;
}

ShiftReport ContributionRatio(ShiftReport shift, const BucketReport& buckets) {
  std::unordered_map<std::size_t, double> delta_by_index;
  for (const ShiftRecord& r : shift.records) delta_by_index.emplace(r.index, r.delta);

  Contribution c;
  for (const BucketEntry& e : buckets.entries) {
    auto it = delta_by_index.find(e.index);
    if (it == delta_by_index.end()) {
      throw InputError(fmt::format("bucketed token index {} has no shift record", e.index));
    }
    (e.bucket == Bucket::kHigh ? c.high_sum : c.low_sum) += it->second;
  }
  const double total = c.high_sum + c.low_sum;
  c.ratio = total > 0.0 ? c.high_sum / total : 0.0;
  shift.contribution = c;
  return shift;
}

LayerComparison CompareLayers(const HiddenStates& states, std::span<const int> layers) {
  LayerComparison table;
  table.layers.assign(layers.begin(), layers.end());
  std::vector<const Matrix*> columns;
  for (int layer : layers) columns.push_back(&LayerSlice(states, layer));
  for (std::size_t i = 0; i < states.num_tokens(); ++i) {
    LayerComparisonRow row{i, states.encoding.tokens[i], {}};
    for (const Matrix* m : columns) row.strengths.push_back(TokenStrength(m->row(i)));
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace afn
