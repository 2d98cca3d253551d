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
#include "afn/vocab.h"

#include <fstream>
#include <stdexcept>
#include <utility>

#include <fmt/format.h>

#include "afn/error.h"

namespace afn {

Vocab Vocab::FromTokens(std::vector<std::string> tokens) {
  Vocab vocab;
  vocab.token_to_id_.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i].empty()) {
      throw ModelLoadError(fmt::format("vocabulary: empty token at id {}", i));
    }
    auto [it, inserted] = vocab.token_to_id_.emplace(tokens[i], static_cast<TokenId>(i));
    if (!inserted) {
      throw ModelLoadError(
          fmt::format("vocabulary: duplicate token '{}' at ids {} and {}", tokens[i], it->second, i));
    }
  }
  vocab.id_to_token_ = std::move(tokens);

  auto special = [&vocab](std::string_view name) {
    auto id = vocab.Find(name);
    if (!id) throw ModelLoadError(fmt::format("vocabulary: missing special token {}", name));
    return *id;
  };
  vocab.special_ = SpecialIds{
      .cls = special(kClsToken),
      .sep = special(kSepToken),
      .unk = special(kUnkToken),
      .pad = special(kPadToken),
      .mask = special(kMaskToken),
  };
  return vocab;
}

std::optional<TokenId> Vocab::Find(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  if (it == token_to_id_.end()) return std::nullopt;
  return it->second;
}

const std::string& Vocab::Token(TokenId id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= id_to_token_.size()) {
    throw std::out_of_range(fmt::format("token id {} outside vocabulary of {}", id, id_to_token_.size()));
  }
  return id_to_token_[static_cast<std::size_t>(id)];
}

Vocab LoadVocab(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw ModelLoadError(fmt::format("cannot open vocabulary file '{}'", path.string()));
  }
  std::vector<std::string> tokens;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    tokens.push_back(std::move(line));
  }
  try {
    return Vocab::FromTokens(std::move(tokens));
  } catch (const Error& e) {
    throw ModelLoadError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

}  // namespace afn
