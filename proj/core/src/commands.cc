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
#include "afn/commands.h"

#include <fstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "afn/error.h"
#include "afn/report.h"

namespace afn {
namespace {

// Writes the named files into config.out_dir, or the first one to out.
class Emitter {
 public:
  Emitter(const AnalysisConfig& config, std::ostream& out) : config_(config), out_(out) {
    if (config_.out_dir) {
      std::error_code ec;
      std::filesystem::create_directories(*config_.out_dir, ec);
      if (ec) {
        throw InputError(fmt::format("cannot create output directory '{}': {}", config_.out_dir->string(),
                                     ec.message()));
      }
    }
  }

  // The primary report. Without an output directory it goes to out.
  void Report(const std::string& stem, const std::string& json, const std::string& csv) {
    const bool as_csv = config_.format == OutputFormat::kCsv;
    const std::string& body = as_csv ? csv : json;
    if (!config_.out_dir) {
      out_ << body;
      return;
    }
    Write(stem + (as_csv ? ".csv" : ".json"), body);
  }

  // Auxiliary files (plot data) are only written to an output directory.
  void Extra(const std::string& name, const std::string& body) {
    if (config_.out_dir) Write(name, body);
  }

  CommandResult Finish() { return std::move(result_); }

 private:
  void Write(const std::string& name, const std::string& body) {
    const auto path = *config_.out_dir / name;
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    file << body;
    if (!file) throw InputError(fmt::format("failed writing '{}'", path.string()));
    result_.written.push_back(path);
  }

  const AnalysisConfig& config_;
  std::ostream& out_;
  CommandResult result_;
};

}  // namespace

CommandResult RunStrength(const Analyzer& analyzer, const AnalysisConfig& config, std::string_view sentence,
                          std::ostream& out) {
  const SentenceReport report = analyzer.Strength(sentence, config.options);
  Emitter emit(config, out);
  emit.Report("strength", StrengthJson(report), StrengthCsv(report));
  emit.Extra("strength_plot.csv", StrengthPlotCsv(report));
  return emit.Finish();
}

CommandResult RunShift(const Analyzer& analyzer, const AnalysisConfig& config, std::string_view sentence_a,
                       std::string_view sentence_b, std::ostream& out) {
  const PairShiftReport report = analyzer.Shift(sentence_a, sentence_b, config.options);
  Emitter emit(config, out);
  emit.Report("shift", ShiftJson(report), ShiftCsv(report));
  emit.Extra("shift_plot.csv", ShiftPlotCsv(report));
  return emit.Finish();
}

CommandResult RunPromptShift(const Analyzer& analyzer, const AnalysisConfig& config,
                             std::string_view input_sentence, std::span<const std::string> prompts,
                             std::ostream& out) {
  const PromptShiftAnalysis analysis = analyzer.PromptShift(input_sentence, prompts, config.options);
  Emitter emit(config, out);
  emit.Report("prompt_shift", PromptShiftJson(analysis), PromptShiftCsv(analysis));
  emit.Extra("drift_matrix.csv", DriftMatrixCsv(analysis));
  for (const PromptShiftReport& pair : analysis.pairs) {
    emit.Extra(fmt::format("prompt_shift_plot_{}_{}.csv", pair.prompt_a, pair.prompt_b), PromptPairPlotCsv(pair));
  }
  return emit.Finish();
}

CommandResult RunCorpus(const Analyzer& analyzer, const AnalysisConfig& config,
                        const std::filesystem::path& corpus_path, std::ostream& out, std::ostream& err) {
  const std::vector<CorpusLine> lines = ReadCorpus(corpus_path);
  if (lines.empty()) throw InputError(fmt::format("corpus '{}' contains no sentences", corpus_path.string()));
  const CorpusAnalysis analysis = analyzer.Corpus(lines, config.options);
  for (const CorpusFailure& f : analysis.failures) {
    fmt::print(err, "{}:{}: skipped: {}\n", corpus_path.string(), f.line, f.error);
  }
  if (analysis.entries.empty()) {
    throw InputError(fmt::format("no sentence in '{}' could be analyzed ({} failures)", corpus_path.string(),
                                 analysis.failures.size()));
  }
  Emitter emit(config, out);
  emit.Report("corpus", CorpusJson(analysis), CorpusCsv(analysis));
  if (config.format == OutputFormat::kCsv) emit.Extra("corpus_summary.csv", CorpusSummaryCsv(analysis));
  return emit.Finish();
}

}  // namespace afn
