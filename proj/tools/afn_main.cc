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
// afn: token activation strength and activation shift reports for a BERT
// encoder checkpoint.
//
//   afn strength "Who is the prime minister of Canada?" --model m.safetensors --vocab vocab.txt
//   afn shift "..." "..."           afn prompt-shift "<input>" -p "Summarize" -p "Translate to French"
//   afn corpus sentences.txt
//
// Exit codes: 0 success, 1 usage error, 2 input-data error, 3 model-load error.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#if __has_include(<CLI/CLI.hpp>)
#include <CLI/CLI.hpp>
#else
#include <CLI11.hpp>
#endif
#include <fmt/format.h>

#include "afn/commands.h"
#include "afn/error.h"
#include "afn/pipeline.h"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;

struct Flags {
  std::string model;
  std::string vocab;
  std::string config;
  int layer = afn::kDefaultLayer;
  std::string filter = "words";
  std::size_t top_k = 5;
  std::string format = "json";
  std::string out;
  std::size_t jobs = 1;
};

afn::AnalysisConfig ToConfig(const Flags& flags) {
  afn::AnalysisConfig config;
  config.model_path = flags.model;
  config.vocab_path = flags.vocab;
  if (!flags.config.empty()) config.config_path = flags.config;
  config.options.layer = flags.layer;
  config.options.filter = afn::ParseTokenFilter(flags.filter);
  config.options.top_k = flags.top_k;
  config.options.jobs = flags.jobs;
  config.format = afn::ParseOutputFormat(flags.format);
  if (!flags.out.empty()) config.out_dir = flags.out;
  config.options.Validate();
  return config;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Token activation probing for BERT-style encoders"};
  app.require_subcommand(1);
  app.fallthrough();

  Flags flags;
  app.add_option("--model", flags.model, "Encoder checkpoint (.safetensors)")->required();
  app.add_option("--vocab", flags.vocab, "WordPiece vocabulary (vocab.txt)")->required();
  app.add_option("--config", flags.config, "Model config.json (default: next to the checkpoint, else bert-base)");
  app.add_option("--layer", flags.layer, "Hidden-state layer; 0 is the embedding output")
      ->capture_default_str()
      ->check(CLI::Range(0, 12));
  app.add_option("--filter", flags.filter, "Tokens used for ranking and buckets")
      ->capture_default_str()
      ->check(CLI::IsMember({"all", "no-special", "words"}));
  app.add_option("--top-k", flags.top_k, "Number of ranked tokens")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--format", flags.format, "Report format")
      ->capture_default_str()
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--out", flags.out, "Output directory for the report and plot data (default: stdout)");
  app.add_option("--jobs", flags.jobs, "Worker threads for corpus runs")->capture_default_str()->check(CLI::PositiveNumber);

  std::string sentence;
  auto* strength = app.add_subcommand("strength", "Per-token activation strengths of one sentence");
  strength->add_option("sentence", sentence, "Sentence to analyze")->required();

  std::string sentence_a;
  std::string sentence_b;
  auto* shift = app.add_subcommand("shift", "Token-wise activation shift between two equal-length sentences");
  shift->add_option("sentence_a", sentence_a, "Baseline sentence (anchors the buckets)")->required();
  shift->add_option("sentence_b", sentence_b, "Variant sentence")->required();

  std::string input_sentence;
  std::vector<std::string> prompts;
  auto* prompt_shift = app.add_subcommand("prompt-shift", "[CLS] and suffix drift under different prompt prefixes");
  prompt_shift->add_option("input", input_sentence, "Fixed input sentence")->required();
  prompt_shift->add_option("-p,--prompt", prompts, "Prompt prefix (repeat; at least two)")->required();

  std::string corpus_path;
  auto* corpus = app.add_subcommand("corpus", "Strength reports for every line of a text file");
  corpus->add_option("file", corpus_path, "UTF-8 file, one sentence per line")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const afn::AnalysisConfig config = ToConfig(flags);
    const afn::Analyzer analyzer = afn::Analyzer::Load(config);
    if (*strength) {
      afn::RunStrength(analyzer, config, sentence, std::cout);
    } else if (*shift) {
      afn::RunShift(analyzer, config, sentence_a, sentence_b, std::cout);
    } else if (*prompt_shift) {
      afn::RunPromptShift(analyzer, config, input_sentence, prompts, std::cout);
    } else if (*corpus) {
      afn::RunCorpus(analyzer, config, corpus_path, std::cout, std::cerr);
    }
  } catch (const afn::Error& e) {
    fmt::print(stderr, "afn: {}\n", e.what());
    return static_cast<int>(e.kind());
  } catch (const std::exception& e) {
    fmt::print(stderr, "afn: {}\n", e.what());
    return kExitInput;
  }
  return 0;
}
