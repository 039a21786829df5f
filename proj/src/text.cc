// Copyright 2026 The Sticktionary Authors.
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

#include "sticktionary/text.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/uscript.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <fstream>

#include "sticktionary/status.h"

namespace sticktionary {

// Defined in zh_lexicon.cc.
extern const char* const kBundledZhLexicon[];
extern const std::size_t kBundledZhLexiconSize;

namespace {

icu::UnicodeString ToUnicode(std::string_view text) {
  return icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
}

std::string ToUtf8(const icu::UnicodeString& s) {
  std::string out;
  s.toUTF8String(out);
  return out;
}

icu::UnicodeString Nfc(const icu::UnicodeString& s) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* nfc = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status)) return s;
  icu::UnicodeString out = nfc->normalize(s, status);
  return U_FAILURE(status) ? s : out;
}

// Decodes UTF-8 into code points paired with their byte slices. Invalid
// bytes decode as U+FFFD but keep their original bytes.
struct CodePoint {
  UChar32 cp;
  std::string_view bytes;
};

std::vector<CodePoint> Decode(std::string_view text) {
  std::vector<CodePoint> out;
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) c = 0xFFFD;
    out.push_back({c, text.substr(start, i - start)});
  }
  return out;
}

bool IsWhitespace(UChar32 c) { return u_isUWhiteSpace(c); }

bool IsPunct(UChar32 c) { return u_ispunct(c); }

bool IsCjk(UChar32 c) {
  UErrorCode status = U_ZERO_ERROR;
  const UScriptCode script = uscript_getScript(c, &status);
  return script == USCRIPT_HAN || script == USCRIPT_HIRAGANA ||
         script == USCRIPT_KATAKANA || script == USCRIPT_HANGUL;
}

bool IsWordChar(UChar32 c) {
  return (u_isalnum(c) || c == '\'' || c == '-' || c == '_') && !IsCjk(c);
}

}  // namespace

std::string_view LanguageName(Language lang) {
  return lang == Language::kEn ? "en" : "zh";
}

Language ParseLanguage(std::string_view name) {
  const std::string lowered = FoldCase(name);
  if (lowered == "en") return Language::kEn;
  if (lowered == "zh") return Language::kZh;
  throw InvalidArgumentError("unknown language '" + std::string(name) +
                             "' (expected en or zh)");
}

std::string Join(const TokenSequence& seq) {
  std::string out;
  for (const auto& t : seq.tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::string NormalizeNfc(std::string_view text) {
  return ToUtf8(Nfc(ToUnicode(text)));
}

std::string FoldCase(std::string_view text) {
  icu::UnicodeString s = Nfc(ToUnicode(text));
  s.foldCase();
  return ToUtf8(s);
}

std::size_t CodePointCount(std::string_view text) {
  return Decode(text).size();
}

std::string CollapseWhitespace(std::string_view text) {
  std::string out;
  bool pending_space = false;
  for (const auto& [cp, bytes] : Decode(text)) {
    if (IsWhitespace(cp)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out.append(bytes);
  }
  return out;
}

TokenSequence EnglishSplitter::Segment(std::string_view text) const {
  icu::UnicodeString s = Nfc(ToUnicode(text));
  s.toLower(icu::Locale::getRoot());
  const std::string lowered = ToUtf8(Nfc(s));

  TokenSequence seq{{}, Language::kEn};
  std::vector<CodePoint> word;
  auto flush = [&]() {
    std::size_t begin = 0;
    std::size_t end = word.size();
    while (begin < end && IsPunct(word[begin].cp)) ++begin;
    while (end > begin && IsPunct(word[end - 1].cp)) --end;
    if (begin < end) {
      std::string token;
      for (std::size_t i = begin; i < end; ++i) token.append(word[i].bytes);
      seq.tokens.push_back(std::move(token));
    }
    word.clear();
  };
  for (const auto& c : Decode(lowered)) {
    if (IsWhitespace(c.cp)) {
      flush();
    } else {
      word.push_back(c);
    }
  }
  flush();
  return seq;
}

LexiconSegmenter::LexiconSegmenter()
    : LexiconSegmenter(std::vector<std::string>(
          kBundledZhLexicon, kBundledZhLexicon + kBundledZhLexiconSize)) {}

LexiconSegmenter::LexiconSegmenter(std::vector<std::string> words) {
  for (auto& w : words) {
    std::string normalized = NormalizeNfc(CollapseWhitespace(w));
    if (normalized.empty()) continue;
    max_word_chars_ = std::max(max_word_chars_, CodePointCount(normalized));
    words_.insert(std::move(normalized));
  }
}

LexiconSegmenter LexiconSegmenter::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open lexicon file " + path);
  std::vector<std::string> words;
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.resize(hash);
    }
    std::string word = CollapseWhitespace(line);
    if (!word.empty()) words.push_back(std::move(word));
  }
  return LexiconSegmenter(std::move(words));
}

TokenSequence LexiconSegmenter::Segment(std::string_view text) const {
  const std::string normalized = NormalizeNfc(text);
  const std::vector<CodePoint> chars = Decode(normalized);
  TokenSequence seq{{}, Language::kZh};

  std::size_t i = 0;
  while (i < chars.size()) {
    const UChar32 c = chars[i].cp;
    if (IsWhitespace(c)) {
      ++i;
      continue;
    }
    if (IsWordChar(c)) {
      std::string token;
      while (i < chars.size() && IsWordChar(chars[i].cp)) {
        token.append(chars[i].bytes);
        ++i;
      }
      seq.tokens.push_back(std::move(token));
      continue;
    }
    if (!IsCjk(c)) {
      seq.tokens.emplace_back(chars[i].bytes);
      ++i;
      continue;
    }
    // Longest lexicon match over the CJK run starting at i.
    std::size_t run = 0;
    while (i + run < chars.size() && run < max_word_chars_ &&
           IsCjk(chars[i + run].cp)) {
      ++run;
    }
    std::size_t take = 1;
    for (std::size_t len = run; len >= 2; --len) {
      std::string candidate;
      for (std::size_t j = 0; j < len; ++j) candidate.append(chars[i + j].bytes);
      if (words_.contains(candidate)) {
        take = len;
        break;
      }
    }
    std::string token;
    for (std::size_t j = 0; j < take; ++j) token.append(chars[i + j].bytes);
    seq.tokens.push_back(std::move(token));
    i += take;
  }
  return seq;
}

const Segmenter& DefaultChineseSegmenter() {
  static const LexiconSegmenter* const kSegmenter = new LexiconSegmenter();
  return *kSegmenter;
}

TokenSequence Tokenize(std::string_view text, Language lang,
                       const Segmenter* zh_segmenter) {
  if (lang == Language::kEn) return EnglishSplitter().Segment(text);
  const Segmenter& segmenter =
      zh_segmenter != nullptr ? *zh_segmenter : DefaultChineseSegmenter();
  TokenSequence seq = segmenter.Segment(NormalizeNfc(text));
  seq.language = Language::kZh;
  return seq;
}

NGramCounts NGrams(const TokenSequence& seq, std::size_t n) {
  if (n == 0) throw InvalidArgumentError("n-gram order must be >= 1");
  NGramCounts counts;
  if (seq.size() < n) return counts;
  for (std::size_t i = 0; i + n <= seq.size(); ++i) {
    ++counts[NGram(seq.tokens.begin() + i, seq.tokens.begin() + i + n)];
  }
  return counts;
}

}  // namespace sticktionary
