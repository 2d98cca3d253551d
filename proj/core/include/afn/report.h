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
#ifndef AFN_REPORT_H_
#define AFN_REPORT_H_

#include <string>

#include "afn/pipeline.h"

namespace afn {

// Version stamped into every JSON report as "schema_version".
inline constexpr int kReportSchemaVersion = 1;

// JSON documents have sorted keys, two-space indentation and every real
// number printed with six decimals. CSV uses RFC 4180 quoting and the fixed
// column orders listed in docs/report_format.md.
std::string StrengthJson(const SentenceReport& report);
std::string StrengthCsv(const SentenceReport& report);
std::string StrengthPlotCsv(const SentenceReport& report);

std::string ShiftJson(const PairShiftReport& report);
std::string ShiftCsv(const PairShiftReport& report);
std::string ShiftPlotCsv(const PairShiftReport& report);

std::string PromptShiftJson(const PromptShiftAnalysis& analysis);
std::string PromptShiftCsv(const PromptShiftAnalysis& analysis);
std::string PromptPairPlotCsv(const PromptShiftReport& pair);
std::string DriftMatrixCsv(const PromptShiftAnalysis& analysis);

std::string CorpusJson(const CorpusAnalysis& analysis);
std::string CorpusCsv(const CorpusAnalysis& analysis);
std::string CorpusSummaryCsv(const CorpusAnalysis& analysis);

// Quotes a CSV field when it contains a comma, quote or line break.
std::string CsvField(std::string_view field);

}  // namespace afn

#endif  // AFN_REPORT_H_
