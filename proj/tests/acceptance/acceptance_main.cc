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

// Acceptance suite: one PASS/FAIL/BLOCKED line per criterion.
//
//   afn_acceptance [--group offline|real-weights|all]
//
// The real-weights group needs a bert-base-uncased checkpoint directory in
// AFN_BERT_DIR (model.safetensors, optionally config.json and vocab.txt).
// Without it every real-weights criterion is reported BLOCKED and the
// process exits with 77 so CTest records a skip rather than a pass.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "afn/fixture_io.h"
#include "afn/metrics.h"
#include "afn/pipeline.h"
#include "checks.h"
#include "synthetic_model.h"

namespace {

using afn::testing::CheckResult;
using afn::testing::FixtureDir;

// Tolerances and budgets.
constexpr double kQuartileTolerance = 1e-9;
constexpr double kContributionTolerance = 1e-6;
constexpr int kPropertyCases = 1000;
constexpr int kTinyInputs = 32;
constexpr double kGoldenHiddenTolerance = 2e-3;
constexpr double kGoldenNormTolerance = 1e-2;
constexpr int kExitBlocked = 77;

enum class Status { kPass, kFail, kBlocked };

struct Outcome {
  Status status = Status::kPass;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::string group;
  double budget_seconds;
  std::function<Outcome()> run;
};

Outcome FromCheck(const CheckResult& r) {
  if (r.ok()) return {Status::kPass, r.summary};
  std::string detail = fmt::format("{} failure(s); first: {}", r.failures.size(), r.failures.front());
  return {Status::kFail, detail};
}

Outcome Expect(bool ok, std::string detail) { return {ok ? Status::kPass : Status::kFail, std::move(detail)}; }

// Case-study sentences; the golden/ fixture ids mirror
// tools/fixtures/gen_fixtures.py.
const std::vector<std::pair<std::string, std::string>>& CaseSentences() {
  static const std::vector<std::pair<std::string, std::string>> sentences = {
      {"prime_minister_canada", "Who is the prime minister of Canada?"},
      {"president_france", "Who is the president of France?"},
      {"president_canada", "Who is the president of Canada?"},
      {"shift_a_park", "Enjoying a beautiful day at the park!"},
      {"shift_b_beach", "Enjoying a beautiful walk at the beach!"},
      {"prompt_summarize", "Summarize The weather is nice today."},
      {"prompt_translate", "Translate to French The weather is nice today."},
      {"prompt_summarize_sentence", "Summarize the sentence The weather is nice today."},
      {"prompt_classify", "Classify sentiment The weather is nice today."},
  };
  return sentences;
}

// --- offline criteria -------------------------------------------------------

Outcome QuartileExample() {
  const std::vector<double> strengths = {17.6, 17.9, 18.2, 18.5, 21.8, 22.4};
  const double tau = afn::QuartileThreshold(strengths);
  const double err = std::abs(tau - 20.15);
  return Expect(err <= kQuartileTolerance, fmt::format("tau = {:.12f}, |tau - 20.15| = {:.2e}", tau, err));
}

std::vector<afn::TokenActivation> Table4() {
  return {{1, "who", 18.2}, {2, "is", 17.9}, {3, "the", 18.5}, {4, "president", 22.4}, {5, "of", 17.6}, {6, "canada", 21.8}};
}

Outcome BucketExample() {
  const afn::BucketReport b = afn::AssignBuckets(Table4(), "words");
  std::vector<std::string> high;
  std::vector<std::string> low;
  for (const auto& e : b.entries) (e.bucket == afn::Bucket::kHigh ? high : low).push_back(e.token);
  const bool ok = high == std::vector<std::string>{"president", "canada"} &&
                  low == std::vector<std::string>{"who", "is", "the", "of"};
  return Expect(ok, fmt::format("HIGH = {{{}}}, LOW = {{{}}}", fmt::join(high, ", "), fmt::join(low, ", ")));
}

Outcome ContributionExample() {
  afn::ShiftReport shift;
  const std::vector<double> deltas = {2.1, 1.8, 1.5, 11.2, 1.2, 9.7};  // Who is the president of Canada
  for (std::size_t i = 0; i < deltas.size(); ++i) {
    shift.records.push_back({i + 1, Table4()[i].token, Table4()[i].token, deltas[i]});
    shift.total_shift += deltas[i];
  }
  const afn::ShiftReport r = afn::ContributionRatio(shift, afn::AssignBuckets(Table4()));
  const afn::Contribution& c = *r.contribution;
  const double total = c.high_sum + c.low_sum;
  const bool ok = std::abs(c.high_sum - 20.9) <= kContributionTolerance &&
                  std::abs(c.low_sum - 6.6) <= kContributionTolerance &&
                  std::abs(total - 27.5) <= kContributionTolerance &&
                  std::abs(r.total_shift - 27.5) <= kContributionTolerance &&
                  std::abs(c.ratio - 0.76) <= kContributionTolerance;
  return Expect(ok, fmt::format("C_H = {:.6f}, C_L = {:.6f}, total = {:.6f}, R_H = {:.8f}", c.high_sum, c.low_sum,
                                total, c.ratio));
}

Outcome MetricProperties() { return FromCheck(afn::testing::CheckMetricProperties(20260101, kPropertyCases)); }

Outcome TinyEquivalence() { return FromCheck(afn::testing::CheckTinyEquivalence(20260101, kTinyInputs)); }

Outcome CliContract() { return FromCheck(afn::testing::CheckCliContract(AFN_CLI_PATH)); }

// --- real-weights criteria --------------------------------------------------

struct RealModel {
  std::filesystem::path dir;
  std::optional<afn::Analyzer> analyzer;
  std::string load_error;
};

RealModel& Real() {
  static RealModel model = [] {
    RealModel m;
    const char* env = std::getenv("AFN_BERT_DIR");
    if (env == nullptr || *env == '\0') return m;
    m.dir = env;
    afn::AnalysisConfig config;
    config.model_path = m.dir / "model.safetensors";
    config.vocab_path = std::filesystem::exists(m.dir / "vocab.txt") ? m.dir / "vocab.txt" : FixtureDir() / "vocab.txt";
    try {
      m.analyzer.emplace(afn::Analyzer::Load(config));
    } catch (const std::exception& e) {
      m.load_error = e.what();
    }
    return m;
  }();
  return model;
}

std::optional<Outcome> RequireRealWeights() {
  const RealModel& m = Real();
  if (m.dir.empty()) return Outcome{Status::kBlocked, "AFN_BERT_DIR is not set; no bert-base-uncased checkpoint"};
  if (!m.analyzer) return Outcome{Status::kFail, "cannot load checkpoint: " + m.load_error};
  return std::nullopt;
}

// Tokenization half of the golden check; needs only the vocabulary.
std::string GoldenTokenization(const afn::Vocab& vocab, int& mismatches) {
  const auto golden = nlohmann::json::parse(afn::testing::ReadFile(FixtureDir() / "tokenizer_golden.json"));
  int checked = 0;
  for (const auto& [id, text] : CaseSentences()) {
    for (const auto& c : golden["cases"]) {
      if (c["text"] != text) continue;
      ++checked;
      if (afn::Encode(text, vocab).ids != c["ids"].get<std::vector<afn::TokenId>>()) ++mismatches;
    }
  }
  return fmt::format("tokenization {}/{} case sentences match", checked - mismatches, CaseSentences().size());
}

Outcome GoldenEquivalence() {
  int mismatches = 0;
  const afn::Vocab vocab = afn::LoadVocab(FixtureDir() / "vocab.txt");
  const std::string tokenization = GoldenTokenization(vocab, mismatches);
  if (auto blocked = RequireRealWeights()) {
    blocked->detail += fmt::format(" ({}; hidden-state comparison not run)", tokenization);
    if (mismatches > 0) blocked->status = Status::kFail;
    return *blocked;
  }
  const afn::Analyzer& analyzer = *Real().analyzer;
  const auto golden_dir = FixtureDir() / "golden";
  double worst_hidden = 0.0;
  double worst_norm = 0.0;
  std::vector<std::string> problems;
  for (const auto& [id, text] : CaseSentences()) {
    const auto dir = golden_dir / id;
    if (!std::filesystem::exists(dir / "layer8.json")) {
      problems.push_back("missing " + dir.string());
      continue;
    }
    const afn::FixtureMatrix fixture = afn::ReadFixtureMatrix(dir / "layer8");
    const afn::HiddenStates states = analyzer.Run(text);
    const auto fixture_ids = nlohmann::json::parse(fixture.sidecar)["ids"].get<std::vector<afn::TokenId>>();
    if (states.encoding.ids != fixture_ids) problems.push_back(id + ": token ids differ");
    const afn::Matrix& m = afn::LayerSlice(states, 8);
    if (fixture.values.size() != m.data().size()) {
      problems.push_back(id + ": shape differs");
      continue;
    }
    for (std::size_t i = 0; i < fixture.values.size(); ++i) {
      worst_hidden = std::max(worst_hidden, std::abs(static_cast<double>(m.data()[i]) - fixture.values[i]));
    }
    for (const afn::NormRow& row : afn::ReadNormsCsv(dir / "norms.csv")) {
      worst_norm = std::max(worst_norm, std::abs(afn::TokenStrength(m.row(row.index)) - row.by_layer.at(8)));
    }
  }
  const bool ok = mismatches == 0 && problems.empty() && worst_hidden <= kGoldenHiddenTolerance &&
                  worst_norm <= kGoldenNormTolerance;
  std::string detail = fmt::format("{}; max |hidden diff| {:.2e}; max |norm diff| {:.2e}", tokenization,
                                   worst_hidden, worst_norm);
  if (!problems.empty()) detail += "; " + problems.front();
  return Expect(ok, detail);
}

Outcome RankOrder() {
  if (auto blocked = RequireRealWeights()) return *blocked;
  const afn::Analyzer& analyzer = *Real().analyzer;
  afn::AnalysisOptions all;
  all.filter = afn::TokenFilter::kAll;
  all.top_k = 3;

  const std::string sentence = "Who is the prime minister of Canada?";
  const afn::SentenceReport r = analyzer.Strength(sentence, all);
  std::vector<std::string> top;
  for (const auto& a : r.ranking) top.push_back(a.token);
  std::sort(top.begin(), top.end());
  const bool top_ok = top == std::vector<std::string>{"canada", "minister", "prime"};
  const auto min_it = std::min_element(r.activations.begin(), r.activations.end(),
                                       [](const auto& a, const auto& b) { return a.strength < b.strength; });
  const bool sep_min = min_it->token == "[SEP]";

  const afn::PairShiftReport shift =
      analyzer.Shift("Enjoying a beautiful day at the park!", "Enjoying a beautiful walk at the beach!", {});
  std::vector<afn::ShiftRecord> records = shift.shift.records;
  std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.delta > b.delta; });
  std::vector<std::size_t> top2 = {records[0].index, records[1].index};
  std::sort(top2.begin(), top2.end());
  const bool shift_ok = top2 == std::vector<std::size_t>{4, 7};

  const afn::HiddenStates states = analyzer.Run(sentence);
  const std::size_t sep = states.num_tokens() - 1;
  const double sep8 = afn::TokenStrength(afn::LayerSlice(states, 8).row(sep));
  const double sep9 = afn::TokenStrength(afn::LayerSlice(states, 9).row(sep));
  const bool layer_ok = sep9 < sep8;

  // Informational only: the published reference values are not mutually consistent.
  fmt::print("  info: prime L8 = {:.4f} (reference 21.9766); [SEP] L8 = {:.4f} (reference 9.594359); park/beach total = {:.4f} "
             "(reference 73.5852)\n",
             r.activations[4].strength, sep8, shift.shift.total_shift);

  return Expect(top_ok && sep_min && shift_ok && layer_ok,
                fmt::format("(a) top-3 {{{}}}, minimum {} -> {}; (b) two largest shifts at {} and {} -> {}; "
                            "(c) [SEP] L9 {:.4f} < L8 {:.4f} -> {}",
                            fmt::join(top, ", "), min_it->token, top_ok && sep_min ? "ok" : "FAIL", top2[0], top2[1],
                            shift_ok ? "ok" : "FAIL", sep9, sep8, layer_ok ? "ok" : "FAIL"));
}

Outcome PromptDrift() {
  if (auto blocked = RequireRealWeights()) return *blocked;
  const afn::Analyzer& analyzer = *Real().analyzer;
  const std::string input = "The weather is nice today.";
  const std::vector<std::string> prompts = {"Summarize the sentence", "Classify sentiment", "Translate to French"};
  const afn::PromptShiftAnalysis a = analyzer.PromptShift(input, prompts, {});
  bool symmetric = true;
  for (std::size_t i = 0; i < prompts.size(); ++i) {
    symmetric = symmetric && a.drift_matrix[i][i] == 0.0;
    for (std::size_t j = 0; j < prompts.size(); ++j) symmetric = symmetric && a.drift_matrix[i][j] == a.drift_matrix[j][i];
  }
  const std::vector<std::string> pair = {"Summarize", "Translate to French"};
  const double cls = analyzer.PromptShift(input, pair, {}).pairs.front().cls_shift;
  return Expect(symmetric && cls > 0.0,
                fmt::format("3x3 drift matrix symmetric with zero diagonal: {}; cls_shift(Summarize, Translate to "
                            "French) = {:.6f}",
                            symmetric ? "yes" : "no", cls));
}

std::string_view Label(Status s) {
  switch (s) {
    case Status::kPass:
      return "PASS";
    case Status::kFail:
      return "FAIL";
    case Status::kBlocked:
      return "BLOCKED";
  }
  return "?";
}

}  // namespace

int main(int argc, char** argv) {
  std::string group = "all";
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--group" && i + 1 < argc) {
      group = argv[++i];
    } else {
      fmt::print(stderr, "usage: {} [--group offline|real-weights|all]\n", argv[0]);
      return 1;
    }
  }
  if (group != "offline" && group != "real-weights" && group != "all") {
    fmt::print(stderr, "unknown group '{}'\n", group);
    return 1;
  }

  const std::vector<Criterion> criteria = {
      {"quartile worked example", "offline", 0.1, QuartileExample},
      {"bucket worked example", "offline", 0.1, BucketExample},
      {"contribution worked example", "offline", 0.1, ContributionExample},
      {"metric property suite", "offline", 10.0, MetricProperties},
      {"tiny-model encoder equivalence", "offline", 5.0, TinyEquivalence},
      {"CLI contract", "offline", 120.0, CliContract},
      {"golden-fixture equivalence", "real-weights", 120.0, GoldenEquivalence},
      {"reference rank-order reproduction", "real-weights", 120.0, RankOrder},
      {"prompt-drift properties", "real-weights", 60.0, PromptDrift},
  };

  int failed = 0;
  int blocked = 0;
  int ran = 0;
  for (const Criterion& c : criteria) {
    if (group != "all" && group != c.group) continue;
    ++ran;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.run();
    } catch (const std::exception& e) {
      outcome = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (outcome.status == Status::kPass && seconds > c.budget_seconds) {
      outcome.status = Status::kFail;
      outcome.detail += fmt::format("; exceeded the {:.1f} s budget", c.budget_seconds);
    }
    failed += outcome.status == Status::kFail ? 1 : 0;
    blocked += outcome.status == Status::kBlocked ? 1 : 0;
    fmt::print("[{:<7}] {:<34} {:>8.3f} s  {}\n", Label(outcome.status), c.name, seconds, outcome.detail);
  }
  fmt::print("{} criteria: {} passed, {} failed, {} blocked\n", ran, ran - failed - blocked, failed, blocked);
  if (failed > 0) return 1;
  if (blocked > 0 && group == "real-weights") return kExitBlocked;
  return 0;
}
