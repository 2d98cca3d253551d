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
#ifndef AFN_PIPELINE_H_
#define AFN_PIPELINE_H_

#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "afn/encoder.h"
#include "afn/metrics.h"
#include "afn/model_config.h"
#include "afn/vocab.h"
#include "afn/wordpiece.h"

namespace afn {

inline constexpr int kDefaultLayer = 8;

enum class OutputFormat { kJson, kCsv };
std::string_view ToString(OutputFormat format);
OutputFormat ParseOutputFormat(std::string_view name);

struct AnalysisOptions {
  int layer = kDefaultLayer;
  TokenFilter filter = TokenFilter::kWordsOnly;
  std::size_t top_k = 5;
  std::size_t jobs = 1;  // worker threads for corpus runs

  // Throws afn::Error (kUsage) for layer outside [0, 12] or k == 0.
  void Validate(std::size_t num_layers = 12) const;
};

struct AnalysisConfig {
  std::filesystem::path model_path;
  std::filesystem::path vocab_path;
  // Defaults to config.json next to the checkpoint, then bert-base.
  std::optional<std::filesystem::path> config_path;
  AnalysisOptions options;
  OutputFormat format = OutputFormat::kJson;
  std::optional<std::filesystem::path> out_dir;  // stdout when unset
};

struct SentenceReport {
  std::string sentence;
  int layer = kDefaultLayer;
  TokenFilter filter = TokenFilter::kWordsOnly;
  std::size_t top_k = 0;
  std::vector<TokenActivation> activations;  // every token, unfiltered
  std::vector<TokenActivation> ranking;      // top-k of the filtered tokens
  BucketReport buckets;                      // over the filtered tokens
};

struct PairShiftReport {
  std::string sentence_a;
  std::string sentence_b;
  int layer = kDefaultLayer;
  TokenFilter filter = TokenFilter::kWordsOnly;
  ShiftReport shift;       // contribution filled from sentence A's buckets
  BucketReport buckets_a;
};

// One token of the shared input sentence (or the final [SEP]) compared
// across two prompt contexts.
struct AlignedShift {
  std::size_t index_a = 0;
  std::size_t index_b = 0;
  std::string token;
  double delta = 0.0;
};

struct PromptShiftReport {
  std::size_t prompt_a = 0;  // indices into the prompt list
  std::size_t prompt_b = 0;
  std::string text_a;
  std::string text_b;
  double cls_shift = 0.0;
  std::vector<AlignedShift> suffix_shifts;
  double sentence_drift = 0.0;  // cls_shift + sum of suffix deltas
};

struct PromptShiftAnalysis {
  std::string input_sentence;
  int layer = kDefaultLayer;
  std::vector<std::string> prompts;
  std::vector<PromptShiftReport> pairs;            // i < j, lexicographic
  std::vector<std::vector<double>> drift_matrix;   // symmetric, zero diagonal
};

struct CorpusEntry {
  std::size_t line = 0;  // 1-based line in the input file
  SentenceReport report;
};

struct CorpusFailure {
  std::size_t line = 0;
  std::string text;
  std::string error;
};

struct CorpusSummary {
  std::size_t processed = 0;
  std::size_t failed = 0;
  double mean_cls_strength = 0.0;
  double mean_sep_strength = 0.0;
  std::size_t high_tokens = 0;
  double high_word_fraction = 0.0;  // HIGH tokens that are non-special words
};

struct CorpusAnalysis {
  int layer = kDefaultLayer;
  TokenFilter filter = TokenFilter::kWordsOnly;
  std::size_t top_k = 0;
  std::vector<CorpusEntry> entries;
  std::vector<CorpusFailure> failures;
  CorpusSummary summary;
};

struct CorpusLine {
  std::size_t line = 0;
  std::string text;
};

// Non-blank lines with their 1-based line numbers. Throws afn::Error
// (kInputData) when the file cannot be read.
std::vector<CorpusLine> ReadCorpus(const std::filesystem::path& path);

// Owns the immutable vocabulary and weights; every method is const and safe
// to call concurrently.
class Analyzer {
 public:
  Analyzer(Vocab vocab, ModelConfig config, ModelWeights weights);

  // Loads vocabulary, config and checkpoint; failures are kModelLoad errors
  // carrying the file path.
  static Analyzer Load(const AnalysisConfig& config);

  const Vocab& vocab() const { return vocab_; }
  const ModelConfig& config() const { return config_; }

  Encoding Tokenize(std::string_view text) const;
  HiddenStates Run(std::string_view text) const;

  // Throws afn::Error (kInputData) for empty sentences.
  SentenceReport Strength(std::string_view sentence, const AnalysisOptions& options) const;

  // Throws afn::Error (kInputData) listing both tokenizations when the token
  // counts differ.
  PairShiftReport Shift(std::string_view sentence_a, std::string_view sentence_b,
                        const AnalysisOptions& options) const;

  // Each prompt is prepended as "<prompt> <input>". Needs at least two
  // prompts (kUsage otherwise).
  PromptShiftAnalysis PromptShift(std::string_view input_sentence, std::span<const std::string> prompts,
                                  const AnalysisOptions& options) const;

  CorpusAnalysis Corpus(std::span<const CorpusLine> lines, const AnalysisOptions& options) const;

 private:
  SentenceReport ReportFor(std::string_view sentence, const HiddenStates& states,
                           const AnalysisOptions& options) const;

  Vocab vocab_;
  ModelConfig config_;
  ModelWeights weights_;
};

}  // namespace afn

#endif  // AFN_PIPELINE_H_
