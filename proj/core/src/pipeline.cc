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
#include "afn/pipeline.h"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <fstream>
#include <mutex>
#include <thread>
#include <utility>
#include <variant>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "afn/error.h"

namespace afn {
namespace {

std::string_view DescribeFilter(TokenFilter filter) {
  switch (filter) {
    case TokenFilter::kAll:
      return "all: no tokens excluded";
    case TokenFilter::kNoSpecial:
      return "no-special: [CLS], [SEP] and [PAD] excluded";
    case TokenFilter::kWordsOnly:
      return "words: [CLS], [SEP], [PAD] and single-character punctuation excluded";
  }
  return "";
}

std::string Trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

void RequireSentence(const Encoding& enc, std::string_view label) {
  if (enc.length <= 2) throw InputError(fmt::format("empty sentence{}", label));
}

}  // namespace

std::string_view ToString(OutputFormat format) { return format == OutputFormat::kCsv ? "csv" : "json"; }

OutputFormat ParseOutputFormat(std::string_view name) {
  if (name == "json") return OutputFormat::kJson;
  if (name == "csv") return OutputFormat::kCsv;
  throw UsageError(fmt::format("unknown output format '{}' (expected json or csv)", name));
}

void AnalysisOptions::Validate(std::size_t num_layers) const {
  if (layer < 0 || static_cast<std::size_t>(layer) > num_layers) {
    throw UsageError(fmt::format("layer {} out of range [0, {}]", layer, num_layers));
  }
  if (top_k == 0) throw UsageError("top-k must be at least 1");
  if (jobs == 0) throw UsageError("jobs must be at least 1");
}

std::vector<CorpusLine> ReadCorpus(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(fmt::format("cannot read corpus file '{}'", path.string()));
  std::vector<CorpusLine> lines;
  std::string line;
  for (std::size_t number = 1; std::getline(in, line); ++number) {
    std::string text = Trim(line);
    if (!text.empty()) lines.push_back({number, std::move(text)});
  }
  if (in.bad()) throw InputError(fmt::format("error reading corpus file '{}'", path.string()));
  return lines;
}

Analyzer::Analyzer(Vocab vocab, ModelConfig config, ModelWeights weights)
    : vocab_(std::move(vocab)), config_(std::move(config)), weights_(std::move(weights)) {
  config_.Validate();
  if (vocab_.size() > config_.vocab_size) {
    throw ModelLoadError(fmt::format("vocabulary has {} tokens but the model embeds only {}", vocab_.size(),
                                     config_.vocab_size));
  }
}

Analyzer Analyzer::Load(const AnalysisConfig& config) {
  Vocab vocab = LoadVocab(config.vocab_path);
  ModelConfig model_config = ModelConfig::BertBase();
  if (config.config_path) {
    model_config = ModelConfig::FromJsonFile(*config.config_path);
  } else if (const auto sibling = config.model_path.parent_path() / "config.json"; std::filesystem::exists(sibling)) {
    model_config = ModelConfig::FromJsonFile(sibling);
  }
  ModelWeights weights = LoadWeights(config.model_path, model_config);
  return Analyzer(std::move(vocab), model_config, std::move(weights));
}

Encoding Analyzer::Tokenize(std::string_view text) const {
  return Encode(text, vocab_, EncodeOptions{.max_len = config_.max_position, .pad_to_max_len = false});
}

HiddenStates Analyzer::Run(std::string_view text) const { return Forward(Tokenize(text), weights_, config_); }

SentenceReport Analyzer::ReportFor(std::string_view sentence, const HiddenStates& states,
                                   const AnalysisOptions& options) const {
  SentenceReport report;
  report.sentence = std::string(sentence);
  report.layer = options.layer;
  report.filter = options.filter;
  report.top_k = options.top_k;
  report.activations = Strengths(states, options.layer, TokenFilter::kAll);
  const auto retained = Strengths(states, options.layer, options.filter);
  if (retained.empty()) {
    throw InputError(fmt::format("no tokens left after the '{}' filter", ToString(options.filter)));
  }
  report.ranking = RankTokens(retained, options.top_k);
  report.buckets = AssignBuckets(retained, DescribeFilter(options.filter));
  return report;
}

SentenceReport Analyzer::Strength(std::string_view sentence, const AnalysisOptions& options) const {
  options.Validate(config_.num_layers);
  Encoding enc = Tokenize(sentence);
  RequireSentence(enc, "");
  return ReportFor(sentence, Forward(enc, weights_, config_), options);
}

PairShiftReport Analyzer::Shift(std::string_view sentence_a, std::string_view sentence_b,
                                const AnalysisOptions& options) const {
  options.Validate(config_.num_layers);
  Encoding enc_a = Tokenize(sentence_a);
  Encoding enc_b = Tokenize(sentence_b);
  RequireSentence(enc_a, " (sentence A)");
  RequireSentence(enc_b, " (sentence B)");
  if (enc_a.size() != enc_b.size()) {
    throw InputError(fmt::format(
        "token counts differ; index-aligned shift needs equal lengths\n  A ({} tokens): {}\n  B ({} tokens): {}",
        enc_a.size(), fmt::join(enc_a.tokens, " "), enc_b.size(), fmt::join(enc_b.tokens, " ")));
  }
  const HiddenStates a = Forward(enc_a, weights_, config_);
  const HiddenStates b = Forward(enc_b, weights_, config_);

  PairShiftReport report;
  report.sentence_a = std::string(sentence_a);
  report.sentence_b = std::string(sentence_b);
  report.layer = options.layer;
  report.filter = options.filter;
  const auto retained = Strengths(a, options.layer, options.filter);
  if (retained.empty()) {
    throw InputError(fmt::format("no tokens left after the '{}' filter", ToString(options.filter)));
  }
  report.buckets_a = AssignBuckets(retained, DescribeFilter(options.filter));
  report.shift = ContributionRatio(ActivationShift(a, b, options.layer), report.buckets_a);
  return report;
}

PromptShiftAnalysis Analyzer::PromptShift(std::string_view input_sentence, std::span<const std::string> prompts,
                                          const AnalysisOptions& options) const {
  options.Validate(config_.num_layers);
  if (prompts.size() < 2) {
    throw UsageError(fmt::format("prompt-shift needs at least 2 prompts (got {})", prompts.size()));
  }
  const Encoding fixed = Tokenize(input_sentence);
  RequireSentence(fixed, " (input sentence)");
  const std::size_t fixed_tokens = fixed.length - 2;  // without [CLS]/[SEP]

  PromptShiftAnalysis analysis;
  analysis.input_sentence = std::string(input_sentence);
  analysis.layer = options.layer;
  analysis.prompts.assign(prompts.begin(), prompts.end());

  std::vector<std::string> texts;
  std::vector<HiddenStates> states;
  for (const std::string& prompt : prompts) {
    texts.push_back(fmt::format("{} {}", prompt, input_sentence));
    states.push_back(Run(texts.back()));
    if (states.back().encoding.length < fixed_tokens + 2) {
      throw InputError(fmt::format("prompted text '{}' was truncated past the input sentence", texts.back()));
    }
  }

  const std::size_t n = prompts.size();
  analysis.drift_matrix.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const Matrix& ma = LayerSlice(states[i], options.layer);
      const Matrix& mb = LayerSlice(states[j], options.layer);
      const Encoding& ea = states[i].encoding;
      const Encoding& eb = states[j].encoding;

      PromptShiftReport pair;
      pair.prompt_a = i;
      pair.prompt_b = j;
      pair.text_a = texts[i];
      pair.text_b = texts[j];
      pair.cls_shift = RowShift(ma.row(0), mb.row(0));
      pair.sentence_drift = pair.cls_shift;
      // Walk back from the final [SEP] over the input sentence's tokens.
      const std::size_t start_a = ea.length - 1 - fixed_tokens;
      const std::size_t start_b = eb.length - 1 - fixed_tokens;
      for (std::size_t t = 0; t <= fixed_tokens; ++t) {
        const std::size_t ia = start_a + t;
        const std::size_t ib = start_b + t;
        if (ea.tokens[ia] != eb.tokens[ib]) {
          throw InputError(fmt::format("suffix tokens disagree at offset {}: '{}' vs '{}'", t, ea.tokens[ia],
                                       eb.tokens[ib]));
        }
        const double delta = RowShift(ma.row(ia), mb.row(ib));
        pair.suffix_shifts.push_back({ia, ib, ea.tokens[ia], delta});
        pair.sentence_drift += delta;
      }
      analysis.drift_matrix[i][j] = pair.sentence_drift;
      analysis.drift_matrix[j][i] = pair.sentence_drift;
      analysis.pairs.push_back(std::move(pair));
    }
  }
  return analysis;
}

CorpusAnalysis Analyzer::Corpus(std::span<const CorpusLine> lines, const AnalysisOptions& options) const {
  options.Validate(config_.num_layers);
  using Outcome = std::variant<SentenceReport, std::string>;
  std::vector<Outcome> outcomes(lines.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < lines.size(); i = next++) {
      try {
        outcomes[i] = Strength(lines[i].text, options);
      } catch (const std::exception& e) {
        outcomes[i] = std::string(e.what());
      }
    }
  };
  const std::size_t num_workers = std::min(options.jobs, std::max<std::size_t>(lines.size(), 1));
  if (num_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < num_workers; ++w) pool.emplace_back(worker);
  }

  CorpusAnalysis analysis;
  analysis.layer = options.layer;
  analysis.filter = options.filter;
  analysis.top_k = options.top_k;
  double cls_sum = 0.0;
  double sep_sum = 0.0;
  std::size_t high_words = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (auto* error = std::get_if<std::string>(&outcomes[i])) {
      analysis.failures.push_back({lines[i].line, lines[i].text, *error});
      continue;
    }
    SentenceReport& report = std::get<SentenceReport>(outcomes[i]);
    cls_sum += report.activations.front().strength;
    sep_sum += report.activations.back().strength;  // unpadded, so the last token is [SEP]
    for (const BucketEntry& e : report.buckets.entries) {
      if (e.bucket != Bucket::kHigh) continue;
      ++analysis.summary.high_tokens;
      const TokenActivation& a = report.activations[e.index];
      if (!a.is_special && !IsPunctuationToken(a.token)) ++high_words;
    }
    analysis.entries.push_back({lines[i].line, std::move(report)});
  }
  CorpusSummary& s = analysis.summary;
  s.processed = analysis.entries.size();
  s.failed = analysis.failures.size();
  if (s.processed > 0) {
    s.mean_cls_strength = cls_sum / static_cast<double>(s.processed);
    s.mean_sep_strength = sep_sum / static_cast<double>(s.processed);
  }
  s.high_word_fraction =
      s.high_tokens > 0 ? static_cast<double>(high_words) / static_cast<double>(s.high_tokens) : 0.0;
  return analysis;
}

}  // namespace afn
