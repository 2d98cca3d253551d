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
#include "afn/model_config.h"

#include <fstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "afn/error.h"

namespace afn {

void ModelConfig::Validate() const {
  if (num_layers == 0 || hidden_size == 0 || num_heads == 0 || intermediate_size == 0 || vocab_size == 0 ||
      max_position == 0 || type_vocab_size == 0) {
    throw ModelLoadError("model config: every dimension must be positive");
  }
  if (hidden_size % num_heads != 0) {
    throw ModelLoadError(
        fmt::format("model config: hidden_size {} is not divisible by num_heads {}", hidden_size, num_heads));
  }
  if (!(layernorm_epsilon > 0.0f)) {
    throw ModelLoadError("model config: layer_norm_eps must be positive");
  }
}

ModelConfig ModelConfig::FromJsonFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ModelLoadError(fmt::format("cannot open model config '{}'", path.string()));
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ModelLoadError(fmt::format("{}: invalid JSON: {}", path.string(), e.what()));
  }

  ModelConfig config;
  auto read = [&](const char* key, std::size_t& field) {
    if (!doc.contains(key)) return;
    const auto& value = doc.at(key);
    if (!value.is_number_unsigned()) {
      throw ModelLoadError(fmt::format("{}: '{}' must be a non-negative integer", path.string(), key));
    }
    field = value.get<std::size_t>();
  };
  read("num_hidden_layers", config.num_layers);
  read("hidden_size", config.hidden_size);
  read("num_attention_heads", config.num_heads);
  read("intermediate_size", config.intermediate_size);
  read("vocab_size", config.vocab_size);
  read("max_position_embeddings", config.max_position);
  read("type_vocab_size", config.type_vocab_size);
  if (doc.contains("layer_norm_eps")) {
    if (!doc["layer_norm_eps"].is_number()) {
      throw ModelLoadError(fmt::format("{}: 'layer_norm_eps' must be a number", path.string()));
    }
    config.layernorm_epsilon = doc["layer_norm_eps"].get<float>();
  }
  if (doc.contains("hidden_act") && doc["hidden_act"] != "gelu") {
    throw ModelLoadError(fmt::format("{}: unsupported hidden_act {} (only exact \"gelu\")", path.string(),
                                     doc["hidden_act"].dump()));
  }
  config.Validate();
  return config;
}

}  // namespace afn
