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

// Tokenization and n-gram counting for English and Chinese query text.

#ifndef STICKTIONARY_TEXT_H_
#define STICKTIONARY_TEXT_H_

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace sticktionary {

enum class Language { kEn, kZh };

std::string_view LanguageName(Language lang);  // "en" / "zh"
// Accepts "en"/"zh" in any case; throws InvalidArgument otherwise.
Language ParseLanguage(std::string_view name);

struct TokenSequence {
  std::vector<std::string> tokens;
  Language language = Language::kEn;

  std::size_t size() const { return tokens.size(); }
  bool empty() const { return tokens.empty(); }
  bool operator==(const TokenSequence&) const = default;
};

// Joins tokens with single spaces.
std::string Join(const TokenSequence& seq);

class Segmenter {
 public:
  virtual ~Segmenter() = default;
  virtual TokenSequence Segment(std::string_view text) const = 0;
};

// Whitespace split, lowercase, strip leading/trailing punctuation. Internal
// apostrophes and hyphens survive ("can't", "laid-back").
class EnglishSplitter : public Segmenter {
 public:
  TokenSequence Segment(std::string_view text) const override;
};

// Greedy longest match over a word list with single-character fallback.
// Runs of Latin letters/digits are kept whole, punctuation becomes its own
// token and whitespace is dropped, so concatenating the output reproduces
// the (NFC) input with whitespace removed.
class LexiconSegmenter : public Segmenter {
 public:
  // The bundled lexicon of common conversational words.
  LexiconSegmenter();
  explicit LexiconSegmenter(std::vector<std::string> words);

  // One word per line, UTF-8, '#' starts a comment.
  static LexiconSegmenter FromFile(const std::string& path);

  TokenSequence Segment(std::string_view text) const override;

  std::size_t size() const { return words_.size(); }

 private:
  std::unordered_set<std::string> words_;
  std::size_t max_word_chars_ = 1;
};

const Segmenter& DefaultChineseSegmenter();

// NFC-normalizes `text` and tokenizes it. Chinese text goes through
// `zh_segmenter` (the bundled lexicon segmenter when null).
TokenSequence Tokenize(std::string_view text, Language lang,
                       const Segmenter* zh_segmenter = nullptr);

using NGram = std::vector<std::string>;
using NGramCounts = std::map<NGram, int>;

// All contiguous n-token windows with multiplicity. Throws InvalidArgument
// when n == 0.
NGramCounts NGrams(const TokenSequence& seq, std::size_t n);

// Unicode helpers shared by the other modules.
std::string NormalizeNfc(std::string_view text);
std::string FoldCase(std::string_view text);
// Number of code points in a UTF-8 string.
std::size_t CodePointCount(std::string_view text);
// Collapses runs of whitespace to one space and trims both ends.
std::string CollapseWhitespace(std::string_view text);

}  // namespace sticktionary

#endif  // STICKTIONARY_TEXT_H_
