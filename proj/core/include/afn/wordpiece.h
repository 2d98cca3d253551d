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

#ifndef AFN_WORDPIECE_H_
#define AFN_WORDPIECE_H_

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "afn/vocab.h"

namespace afn {

// Words longer than this many code points become [UNK].
inline constexpr std::size_t kMaxWordChars = 100;

// Uncased BERT pre-tokenization: drops control characters, isolates CJK
// ideographs, strips accents (NFD, combining marks removed), lowercases,
// splits on whitespace and isolates every punctuation character.
std::vector<std::string> BasicTokenize(std::string_view text);

// ASCII non-alphanumeric symbols plus Unicode punctuation (category P*).
bool IsPunctuation(char32_t c);
// True for tokens consisting of exactly one punctuation code point.
bool IsPunctuationToken(std::string_view token);

// Greedy longest-match-first split of one normalized word. Continuation
// pieces carry a "##" prefix. Returns {"[UNK]"} when no split exists.
std::vector<std::string> WordpieceTokenize(std::string_view word, const Vocab& vocab);

struct Encoding {
  std::vector<std::string> tokens;
  std::vector<TokenId> ids;
  std::vector<bool> is_special;  // [CLS], [SEP] and [PAD]
  std::size_t length = 0;        // tokens before any padding

  std::size_t size() const { return tokens.size(); }
  bool is_padding(std::size_t i) const { return i >= length; }
};

struct EncodeOptions {
  std::size_t max_len = 512;
  bool pad_to_max_len = false;
};

// [CLS] + subwords (truncated to max_len - 2) + [SEP], optionally padded.
// Throws afn::Error (kUsage) when max_len < 2.
Encoding Encode(std::string_view text, const Vocab& vocab, const EncodeOptions& options = {});

}  // namespace afn

#endif  // AFN_WORDPIECE_H_
