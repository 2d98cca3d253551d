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

#ifndef AFN_VOCAB_H_
#define AFN_VOCAB_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace afn {

using TokenId = std::int32_t;

inline constexpr std::string_view kClsToken = "[CLS]";
inline constexpr std::string_view kSepToken = "[SEP]";
inline constexpr std::string_view kUnkToken = "[UNK]";
inline constexpr std::string_view kPadToken = "[PAD]";
inline constexpr std::string_view kMaskToken = "[MASK]";

struct SpecialIds {
  TokenId cls = 0;
  TokenId sep = 0;
  TokenId unk = 0;
  TokenId pad = 0;
  TokenId mask = 0;
};

// Immutable subword vocabulary. Ids are dense: token i has id i.
class Vocab {
 public:
  // Throws afn::Error (kModelLoad) on duplicate or empty tokens and when any
  // of the five special tokens is absent.
  static Vocab FromTokens(std::vector<std::string> tokens);

  std::optional<TokenId> Find(std::string_view token) const;
  bool Contains(std::string_view token) const { return Find(token).has_value(); }

  // Throws std::out_of_range for ids outside [0, size()).
  const std::string& Token(TokenId id) const;

  std::size_t size() const { return id_to_token_.size(); }
  const SpecialIds& special() const { return special_; }

 private:
  Vocab() = default;

  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, TokenId> token_to_id_;
  SpecialIds special_;
};

// Reads a newline-delimited vocabulary; the 0-based line number is the id.
Vocab LoadVocab(const std::filesystem::path& path);

}  // namespace afn

#endif  // AFN_VOCAB_H_
