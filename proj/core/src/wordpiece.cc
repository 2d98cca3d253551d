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
#include "afn/wordpiece.h"

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/ustring.h>
#include <unicode/utf16.h>
#include <unicode/utf8.h>

#include <stdexcept>

#include <fmt/format.h>

#include "afn/error.h"

namespace afn {
namespace {

constexpr std::string_view kContinuationPrefix = "##";

bool IsWhitespace(UChar32 c) {
  return c == '\t' || c == '\n' || c == '\r' || u_isUWhiteSpace(c);
}

// Unicode "Other" categories; tab, newline and carriage return count as
// whitespace instead.
bool IsControl(UChar32 c) {
  if (c == '\t' || c == '\n' || c == '\r') return false;
  switch (u_charType(c)) {
    case U_CONTROL_CHAR:
    case U_FORMAT_CHAR:
    case U_UNASSIGNED:
    case U_PRIVATE_USE_CHAR:
    case U_SURROGATE:
      return true;
    default:
      return false;
  }
}

// CJK Unified Ideographs and their extensions / compatibility blocks.
bool IsCjk(UChar32 c) {
  return (c >= 0x4E00 && c <= 0x9FFF) || (c >= 0x3400 && c <= 0x4DBF) || (c >= 0x20000 && c <= 0x2A6DF) ||
         (c >= 0x2A700 && c <= 0x2B73F) || (c >= 0x2B740 && c <= 0x2B81F) || (c >= 0x2B820 && c <= 0x2CEAF) ||
         (c >= 0xF900 && c <= 0xFAFF) || (c >= 0x2F800 && c <= 0x2FA1F);
}

void AppendUtf8(std::string& out, UChar32 c) {
  char buf[U8_MAX_LENGTH];
  int32_t len = 0;
  UBool error = false;
  U8_APPEND(buf, len, U8_MAX_LENGTH, c, error);
  if (!error) out.append(buf, static_cast<std::size_t>(len));
}

// Full lowercase mapping of a single code point, without context.
void AppendLower(icu::UnicodeString& out, UChar32 c) {
  UChar src[2];
  int32_t src_len = 0;
  U16_APPEND_UNSAFE(src, src_len, c);
  UChar dest[8];
  UErrorCode status = U_ZERO_ERROR;
  int32_t len = u_strToLower(dest, 8, src, src_len, "", &status);
  if (U_FAILURE(status)) {
    out.append(c);
    return;
  }
  out.append(dest, len);
}

const icu::Normalizer2& Nfd() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfd = icu::Normalizer2::getNFDInstance(status);
  if (U_FAILURE(status) || nfd == nullptr) {
    throw std::runtime_error(fmt::format("ICU NFD normalizer unavailable: {}", u_errorName(status)));
  }
  return *nfd;
}

// Control removal, whitespace canonicalization and CJK isolation.
icu::UnicodeString CleanText(std::string_view text) {
  icu::UnicodeString src = icu::UnicodeString::fromUTF8(icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  icu::UnicodeString out;
  for (int32_t i = 0; i < src.length();) {
    UChar32 c = src.char32At(i);
    i = src.moveIndex32(i, 1);
    if (c == 0 || c == 0xFFFD || IsControl(c)) continue;
    if (IsWhitespace(c)) {
      out.append(static_cast<UChar>(' '));
    } else if (IsCjk(c)) {
      out.append(static_cast<UChar>(' ')).append(c).append(static_cast<UChar>(' '));
    } else {
      out.append(c);
    }
  }
  return out;
}

icu::UnicodeString StripAccentsAndLower(const icu::UnicodeString& text) {
  UErrorCode status = U_ZERO_ERROR;
  icu::UnicodeString decomposed = Nfd().normalize(text, status);
  if (U_FAILURE(status)) {
    throw std::runtime_error(fmt::format("NFD normalization failed: {}", u_errorName(status)));
  }
  icu::UnicodeString out;
  for (int32_t i = 0; i < decomposed.length();) {
    UChar32 c = decomposed.char32At(i);
    i = decomposed.moveIndex32(i, 1);
    if (u_charType(c) == U_NON_SPACING_MARK) continue;
    AppendLower(out, c);
  }
  return out;
}

}  // namespace

bool IsPunctuation(char32_t c) {
  if ((c >= 33 && c <= 47) || (c >= 58 && c <= 64) || (c >= 91 && c <= 96) || (c >= 123 && c <= 126)) {
    return true;
  }
  switch (u_charType(static_cast<UChar32>(c))) {
    case U_CONNECTOR_PUNCTUATION:
    case U_DASH_PUNCTUATION:
    case U_START_PUNCTUATION:
    case U_END_PUNCTUATION:
    case U_INITIAL_PUNCTUATION:
    case U_FINAL_PUNCTUATION:
    case U_OTHER_PUNCTUATION:
      return true;
    default:
      return false;
  }
}

bool IsPunctuationToken(std::string_view token) {
  if (token.empty()) return false;
  int32_t i = 0;
  const auto length = static_cast<int32_t>(token.size());
  UChar32 c = 0;
  U8_NEXT(token.data(), i, length, c);
  return c >= 0 && i == length && IsPunctuation(static_cast<char32_t>(c));
}

std::vector<std::string> BasicTokenize(std::string_view text) {
  const icu::UnicodeString normalized = StripAccentsAndLower(CleanText(text));

  std::vector<std::string> words;
  std::string current;
  auto flush = [&] {
    if (!current.empty()) words.push_back(std::move(current));
    current.clear();
  };
  for (int32_t i = 0; i < normalized.length();) {
    UChar32 c = normalized.char32At(i);
    i = normalized.moveIndex32(i, 1);
    if (IsWhitespace(c)) {
      flush();
    } else if (IsPunctuation(static_cast<char32_t>(c))) {
      flush();
      AppendUtf8(current, c);
      flush();
    } else {
      AppendUtf8(current, c);
    }
  }
  flush();
  return words;
}

std::vector<std::string> WordpieceTokenize(std::string_view word, const Vocab& vocab) {
  // Byte offsets of each code point, plus the end.
  std::vector<std::size_t> bounds;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if ((static_cast<unsigned char>(word[i]) & 0xC0) != 0x80) bounds.push_back(i);
  }
  const std::size_t num_chars = bounds.size();
  bounds.push_back(word.size());
  if (num_chars == 0) return {};
  if (num_chars > kMaxWordChars) return {std::string(kUnkToken)};

  std::vector<std::string> pieces;
  std::string candidate;
  std::size_t start = 0;
  while (start < num_chars) {
    std::size_t end = num_chars;
    bool found = false;
    for (; end > start; --end) {
      candidate.clear();
      if (start > 0) candidate.append(kContinuationPrefix);
      candidate.append(word.substr(bounds[start], bounds[end] - bounds[start]));
      if (vocab.Contains(candidate)) {
        found = true;
        break;
      }
    }
    if (!found) return {std::string(kUnkToken)};
    pieces.push_back(candidate);
    start = end;
  }
  return pieces;
}

Encoding Encode(std::string_view text, const Vocab& vocab, const EncodeOptions& options) {
  if (options.max_len < 2) {
    throw UsageError(fmt::format("max_len must be at least 2 (got {})", options.max_len));
  }
  const SpecialIds& special = vocab.special();
  Encoding enc;
  auto push = [&](std::string token, TokenId id, bool is_special) {
    enc.tokens.push_back(std::move(token));
    enc.ids.push_back(id);
    enc.is_special.push_back(is_special);
  };

  push(std::string(kClsToken), special.cls, true);
  const std::size_t budget = options.max_len - 2;
  std::size_t used = 0;
  for (const std::string& word : BasicTokenize(text)) {
    for (std::string& piece : WordpieceTokenize(word, vocab)) {
      if (used == budget) break;
      const TokenId id = vocab.Find(piece).value_or(special.unk);
      push(std::move(piece), id, false);
      ++used;
    }
    if (used == budget) break;
  }
  push(std::string(kSepToken), special.sep, true);
  enc.length = enc.tokens.size();

  if (options.pad_to_max_len) {
    while (enc.tokens.size() < options.max_len) push(std::string(kPadToken), special.pad, true);
  }
  return enc;
}

}  // namespace afn
