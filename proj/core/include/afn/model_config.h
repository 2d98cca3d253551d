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
#ifndef AFN_MODEL_CONFIG_H_
#define AFN_MODEL_CONFIG_H_

#include <cstddef>
#include <filesystem>

namespace afn {

// Encoder hyper-parameters. Defaults are bert-base-uncased.
struct ModelConfig {
  std::size_t num_layers = 12;
  std::size_t hidden_size = 768;
  std::size_t num_heads = 12;
  std::size_t intermediate_size = 3072;
  std::size_t vocab_size = 30522;
  std::size_t max_position = 512;
  std::size_t type_vocab_size = 2;
  float layernorm_epsilon = 1e-12f;

  std::size_t head_dim() const { return hidden_size / num_heads; }

  // Throws afn::Error (kModelLoad) if a dimension is zero or the hidden size
  // does not divide evenly into heads.
  void Validate() const;

  static ModelConfig BertBase() { return {}; }

  // Reads a Hugging Face style config.json. Missing keys keep their
  // bert-base defaults; hidden_act must be "gelu".
  static ModelConfig FromJsonFile(const std::filesystem::path& path);

  friend bool operator==(const ModelConfig&, const ModelConfig&) = default;
};

}  // namespace afn

#endif  // AFN_MODEL_CONFIG_H_
