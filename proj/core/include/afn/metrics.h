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
#ifndef AFN_METRICS_H_
#define AFN_METRICS_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "afn/encoder.h"

namespace afn {

// Which tokens take part in ranking and bucketing.
enum class TokenFilter {
  kAll,         // every token, including [CLS]/[SEP]/[PAD]
  kNoSpecial,   // drops [CLS]/[SEP]/[PAD]
  kWordsOnly,   // additionally drops single-character punctuation tokens
};

std::string_view ToString(TokenFilter filter);
// Accepts "all", "no-special" and "words". Throws afn::Error (kUsage).
TokenFilter ParseTokenFilter(std::string_view name);

struct TokenActivation {
  std::size_t index = 0;
  std::string token;
  double strength = 0.0;
  bool is_special = false;

  friend bool operator==(const TokenActivation&, const TokenActivation&) = default;
};

enum class Bucket { kLow, kHigh };
std::string_view ToString(Bucket bucket);

struct BucketEntry {
  std::size_t index = 0;
  std::string token;
  double strength = 0.0;
  Bucket bucket = Bucket::kLow;
};

struct BucketReport {
  double threshold = 0.0;
  std::vector<BucketEntry> entries;   // in token order
  std::vector<std::size_t> high_set;  // token indices labelled HIGH
  std::string filter_applied;

  std::optional<Bucket> BucketOf(std::size_t index) const;
};

struct ShiftRecord {
  std::size_t index = 0;
  std::string token_a;
  std::string token_b;
  double delta = 0.0;
};

struct Contribution {
  double high_sum = 0.0;  // C_H
  double low_sum = 0.0;   // C_L
  double ratio = 0.0;     // R_H, 0 when C_H + C_L == 0
};

struct ShiftReport {
  std::vector<ShiftRecord> records;
  double total_shift = 0.0;
  std::optional<Contribution> contribution;
};

// Euclidean norm, accumulated in double. Throws afn::Error (kInputData) on
// NaN or infinite components.
double TokenStrength(std::span<const float> hidden);

// ||a - b||, accumulated in double. The spans must have equal length.
double RowShift(std::span<const float> a, std::span<const float> b);

// Row norms of one layer for the tokens retained by filter, in token order.
std::vector<TokenActivation> Strengths(const HiddenStates& states, int layer,
                                       TokenFilter filter = TokenFilter::kAll);

// Top min(k, n) activations by descending strength; ties go to the lower
// token index. Throws afn::Error (kUsage) when k == 0.
std::vector<TokenActivation> RankTokens(std::span<const TokenActivation> activations, std::size_t k);

// Upper quartile by the midpoint rule: with g = 0.75 (n - 1) over the sorted
// values, returns (x[floor g] + x[ceil g]) / 2. For the six-value list
// 17.6 17.9 18.2 18.5 21.8 22.4 this is (18.5 + 21.8) / 2 = 20.15.
// Throws afn::Error (kInputData) on an empty list.
double QuartileThreshold(std::span<const double> strengths);

// HIGH iff strength > threshold, threshold taken over the same list.
BucketReport AssignBuckets(std::span<const TokenActivation> activations,
                           std::string_view filter_applied = "none");

// Index-aligned shift between two sentences of equal token count.
ShiftReport ActivationShift(const HiddenStates& a, const HiddenStates& b, int layer);

// Fills report.contribution from the buckets. Every bucketed index must have
// a shift record; records outside the bucket set are ignored.
ShiftReport ContributionRatio(ShiftReport shift, const BucketReport& buckets);

struct LayerComparisonRow {
  std::size_t index = 0;
  std::string token;
  std::vector<double> strengths;  // one per requested layer
};

struct LayerComparison {
  std::vector<int> layers;
  std::vector<LayerComparisonRow> rows;
};

LayerComparison CompareLayers(const HiddenStates& states, std::span<const int> layers);

}  // namespace afn

#endif  // AFN_METRICS_H_
