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
#include "afn/report.h"

#include <map>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "json_writer.h"

namespace afn {
namespace {

using nlohmann::json;

constexpr std::string_view kSuffixAlignmentNote =
    "sep-anchored: the input sentence's tokens and the final [SEP] are aligned backwards from [SEP]; "
    "per-token suffix shifts extend the [CLS]-only comparison";

json Header(std::string_view kind) {
  return json{{"schema_version", kReportSchemaVersion}, {"kind", kind}};
}

std::string Real(double v) { return fmt::format("{:.6f}", v); }

struct TokenRow {
  bool included = false;
  std::optional<Bucket> bucket;
  std::optional<std::size_t> rank;
};

std::vector<TokenRow> TokenRows(const SentenceReport& report) {
  std::vector<TokenRow> rows(report.activations.size());
  for (const BucketEntry& e : report.buckets.entries) {
    rows[e.index].included = true;
    rows[e.index].bucket = e.bucket;
  }
  for (std::size_t r = 0; r < report.ranking.size(); ++r) rows[report.ranking[r].index].rank = r + 1;
  return rows;
}

json StrengthBody(const SentenceReport& report) {
  const auto rows = TokenRows(report);
  json tokens = json::array();
  for (std::size_t i = 0; i < report.activations.size(); ++i) {
    const TokenActivation& a = report.activations[i];
    tokens.push_back({{"index", a.index},
                      {"token", a.token},
                      {"strength", a.strength},
                      {"is_special", a.is_special},
                      {"included", rows[i].included},
                      {"bucket", rows[i].bucket ? json(ToString(*rows[i].bucket)) : json(nullptr)},
                      {"rank", rows[i].rank ? json(*rows[i].rank) : json(nullptr)}});
  }
  json ranking = json::array();
  for (std::size_t r = 0; r < report.ranking.size(); ++r) {
    const TokenActivation& a = report.ranking[r];
    ranking.push_back({{"rank", r + 1}, {"index", a.index}, {"token", a.token}, {"strength", a.strength}});
  }
  json high = json::array();
  json low = json::array();
  for (const BucketEntry& e : report.buckets.entries) (e.bucket == Bucket::kHigh ? high : low).push_back(e.index);
  return {{"sentence", report.sentence},
          {"layer", report.layer},
          {"filter", ToString(report.filter)},
          {"top_k", report.top_k},
          {"tokens", std::move(tokens)},
          {"ranking", std::move(ranking)},
          {"buckets",
           {{"threshold", report.buckets.threshold},
            {"filter_applied", report.buckets.filter_applied},
            {"high", std::move(high)},
            {"low", std::move(low)}}}};
}

void AppendStrengthRows(const SentenceReport& report, std::string_view prefix, std::string& out) {
  const auto rows = TokenRows(report);
  for (std::size_t i = 0; i < report.activations.size(); ++i) {
    const TokenActivation& a = report.activations[i];
    out += fmt::format("{}{},{},{},{},{},{},{}\n", prefix, a.index, CsvField(a.token), Real(a.strength),
                       a.is_special ? "true" : "false", rows[i].included ? "true" : "false",
                       rows[i].bucket ? ToString(*rows[i].bucket) : "",
                       rows[i].rank ? std::to_string(*rows[i].rank) : "");
  }
}

}  // namespace

std::string CsvField(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string StrengthJson(const SentenceReport& report) {
  json doc = Header("strength");
  doc.update(StrengthBody(report));
  return internal::DumpReportJson(doc);
}

std::string StrengthCsv(const SentenceReport& report) {
  std::string out = "index,token,strength,is_special,included,bucket,rank\n";
  AppendStrengthRows(report, "", out);
  return out;
}

std::string StrengthPlotCsv(const SentenceReport& report) {
  std::string out = "token,strength\n";
  for (const TokenActivation& a : report.activations) out += fmt::format("{},{}\n", CsvField(a.token), Real(a.strength));
  return out;
}

std::string ShiftJson(const PairShiftReport& report) {
  json records = json::array();
  for (const ShiftRecord& r : report.shift.records) {
    const auto bucket = report.buckets_a.BucketOf(r.index);
    records.push_back({{"index", r.index},
                       {"token_a", r.token_a},
                       {"token_b", r.token_b},
                       {"delta", r.delta},
                       {"bucket", bucket ? json(ToString(*bucket)) : json(nullptr)}});
  }
  json doc = Header("shift");
  doc["sentence_a"] = report.sentence_a;
  doc["sentence_b"] = report.sentence_b;
  doc["layer"] = report.layer;
  doc["filter"] = ToString(report.filter);
  doc["records"] = std::move(records);
  doc["total_shift"] = report.shift.total_shift;
  const Contribution c = report.shift.contribution.value_or(Contribution{});
  doc["contribution"] = {{"anchor", "sentence_a"},
                         {"threshold", report.buckets_a.threshold},
                         {"filter_applied", report.buckets_a.filter_applied},
                         {"high", report.buckets_a.high_set},
                         {"c_high", c.high_sum},
                         {"c_low", c.low_sum},
                         {"ratio", c.ratio}};
  return internal::DumpReportJson(doc);
}

std::string ShiftCsv(const PairShiftReport& report) {
  std::string out = "index,token_a,token_b,delta,bucket\n";
  for (const ShiftRecord& r : report.shift.records) {
    const auto bucket = report.buckets_a.BucketOf(r.index);
    out += fmt::format("{},{},{},{},{}\n", r.index, CsvField(r.token_a), CsvField(r.token_b), Real(r.delta),
                       bucket ? ToString(*bucket) : "");
  }
  return out;
}

std::string ShiftPlotCsv(const PairShiftReport& report) {
  std::string out = "label,delta\n";
  for (const ShiftRecord& r : report.shift.records) {
    const std::string label = r.token_a == r.token_b ? r.token_a : r.token_a + "/" + r.token_b;
    out += fmt::format("{},{}\n", CsvField(label), Real(r.delta));
  }
  return out;
}

std::string PromptShiftJson(const PromptShiftAnalysis& analysis) {
  json pairs = json::array();
  for (const PromptShiftReport& p : analysis.pairs) {
    json suffix = json::array();
    for (const AlignedShift& s : p.suffix_shifts) {
      suffix.push_back({{"index_a", s.index_a}, {"index_b", s.index_b}, {"token", s.token}, {"delta", s.delta}});
    }
    pairs.push_back({{"prompt_a", p.prompt_a},
                     {"prompt_b", p.prompt_b},
                     {"text_a", p.text_a},
                     {"text_b", p.text_b},
                     {"cls_shift", p.cls_shift},
                     {"suffix_shifts", std::move(suffix)},
                     {"sentence_drift", p.sentence_drift}});
  }
  json doc = Header("prompt_shift");
  doc["input_sentence"] = analysis.input_sentence;
  doc["layer"] = analysis.layer;
  doc["prompts"] = analysis.prompts;
  doc["suffix_alignment"] = kSuffixAlignmentNote;
  doc["pairs"] = std::move(pairs);
  doc["drift_matrix"] = analysis.drift_matrix;
  return internal::DumpReportJson(doc);
}

std::string PromptShiftCsv(const PromptShiftAnalysis& analysis) {
  std::string out = "prompt_a,prompt_b,part,index_a,index_b,token,delta\n";
  for (const PromptShiftReport& p : analysis.pairs) {
    out += fmt::format("{},{},cls,0,0,[CLS],{}\n", CsvField(analysis.prompts[p.prompt_a]),
                       CsvField(analysis.prompts[p.prompt_b]), Real(p.cls_shift));
    for (const AlignedShift& s : p.suffix_shifts) {
      out += fmt::format("{},{},suffix,{},{},{},{}\n", CsvField(analysis.prompts[p.prompt_a]),
                         CsvField(analysis.prompts[p.prompt_b]), s.index_a, s.index_b, CsvField(s.token),
                         Real(s.delta));
    }
  }
  return out;
}

std::string PromptPairPlotCsv(const PromptShiftReport& pair) {
  std::string out = "token,delta\n";
  out += fmt::format("[CLS],{}\n", Real(pair.cls_shift));
  for (const AlignedShift& s : pair.suffix_shifts) out += fmt::format("{},{}\n", CsvField(s.token), Real(s.delta));
  return out;
}

std::string DriftMatrixCsv(const PromptShiftAnalysis& analysis) {
  std::string out = "prompt";
  for (const std::string& p : analysis.prompts) out += "," + CsvField(p);
  out += "\n";
  for (std::size_t i = 0; i < analysis.prompts.size(); ++i) {
    out += CsvField(analysis.prompts[i]);
    for (double v : analysis.drift_matrix[i]) out += "," + Real(v);
    out += "\n";
  }
  return out;
}

std::string CorpusJson(const CorpusAnalysis& analysis) {
  json sentences = json::array();
  json top_tokens = json::array();
  for (const CorpusEntry& e : analysis.entries) {
    sentences.push_back({{"line", e.line}, {"report", StrengthBody(e.report)}});
    json tokens = json::array();
    for (const TokenActivation& a : e.report.ranking) tokens.push_back(a.token);
    top_tokens.push_back({{"line", e.line}, {"tokens", std::move(tokens)}});
  }
  json failures = json::array();
  for (const CorpusFailure& f : analysis.failures) {
    failures.push_back({{"line", f.line}, {"text", f.text}, {"error", f.error}});
  }
  const CorpusSummary& s = analysis.summary;
  json doc = Header("corpus");
  doc["layer"] = analysis.layer;
  doc["filter"] = ToString(analysis.filter);
  doc["top_k"] = analysis.top_k;
  doc["sentences"] = std::move(sentences);
  doc["failures"] = std::move(failures);
  doc["summary"] = {{"processed", s.processed},
                    {"failed", s.failed},
                    {"mean_cls_strength", s.mean_cls_strength},
                    {"mean_sep_strength", s.mean_sep_strength},
                    {"high_tokens", s.high_tokens},
                    {"high_word_fraction", s.high_word_fraction},
                    {"top_tokens", std::move(top_tokens)}};
  return internal::DumpReportJson(doc);
}

std::string CorpusCsv(const CorpusAnalysis& analysis) {
  std::string out = "line,index,token,strength,is_special,included,bucket,rank\n";
  for (const CorpusEntry& e : analysis.entries) AppendStrengthRows(e.report, fmt::format("{},", e.line), out);
  return out;
}

std::string CorpusSummaryCsv(const CorpusAnalysis& analysis) {
  const CorpusSummary& s = analysis.summary;
  std::string out = "metric,value\n";
  out += fmt::format("processed,{}\n", s.processed);
  out += fmt::format("failed,{}\n", s.failed);
  out += fmt::format("mean_cls_strength,{}\n", Real(s.mean_cls_strength));
  out += fmt::format("mean_sep_strength,{}\n", Real(s.mean_sep_strength));
  out += fmt::format("high_tokens,{}\n", s.high_tokens);
  out += fmt::format("high_word_fraction,{}\n", Real(s.high_word_fraction));
  return out;
}

}  // namespace afn
