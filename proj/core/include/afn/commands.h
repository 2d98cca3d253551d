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
#ifndef AFN_COMMANDS_H_
#define AFN_COMMANDS_H_

#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "afn/pipeline.h"

namespace afn {

// Each command runs one analysis and emits it. With config.out_dir set the
// report and its plot-data files are written there (the directory is
// created); otherwise the report alone goes to out.

struct CommandResult {
  std::vector<std::filesystem::path> written;
};

CommandResult RunStrength(const Analyzer& analyzer, const AnalysisConfig& config, std::string_view sentence,
                          std::ostream& out);

CommandResult RunShift(const Analyzer& analyzer, const AnalysisConfig& config, std::string_view sentence_a,
                       std::string_view sentence_b, std::ostream& out);

CommandResult RunPromptShift(const Analyzer& analyzer, const AnalysisConfig& config,
                             std::string_view input_sentence, std::span<const std::string> prompts,
                             std::ostream& out);

// Per-sentence failures are reported on err and skipped. Throws afn::Error
// (kInputData) when the file is unreadable or no sentence succeeds.
CommandResult RunCorpus(const Analyzer& analyzer, const AnalysisConfig& config,
                        const std::filesystem::path& corpus_path, std::ostream& out, std::ostream& err);

}  // namespace afn

#endif  // AFN_COMMANDS_H_
