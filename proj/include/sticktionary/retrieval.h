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

// Inverted index with Okapi BM25 ranking and the Recall@K harness.

#ifndef STICKTIONARY_RETRIEVAL_H_
#define STICKTIONARY_RETRIEVAL_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "sticktionary/text.h"

namespace sticktionary {

struct Document {
  std::string doc_id;
  std::string text;
  std::string sticker_id;
  TokenSequence tokens;  // filled by Index::Build
};

struct Posting {
  std::size_t doc = 0;  // position in Index::documents()
  int tf = 0;

  bool operator==(const Posting&) const = default;
};

struct Bm25Params {
  double k1 = 1.2;
  double b = 0.75;
};

struct ScoredDoc {
  std::string doc_id;
  double score = 0;
};

class Index {
 public:
  // Tokenizes every document. Duplicate doc ids throw InvalidArgument.
  static Index Build(std::vector<Document> docs, Language language,
                     const Segmenter* zh_segmenter = nullptr);

  Language language() const { return language_; }
  std::size_t size() const { return docs_.size(); }
  double avg_doc_len() const { return avg_doc_len_; }
  const std::vector<Document>& documents() const { return docs_; }
  const std::map<std::string, std::vector<Posting>>& postings() const {
    return postings_;
  }
  int doc_length(std::size_t doc) const { return lengths_[doc]; }
  std::size_t doc_frequency(const std::string& term) const;
  // Throws NotFound for unknown ids.
  std::size_t Position(std::string_view doc_id) const;

  TokenSequence TokenizeQuery(std::string_view text) const;

 private:
  Index() = default;

  Language language_ = Language::kEn;
  const Segmenter* zh_segmenter_ = nullptr;
  std::vector<Document> docs_;
  std::unordered_map<std::string, std::size_t> positions_;
  std::vector<int> lengths_;
  double avg_doc_len_ = 0;
  std::map<std::string, std::vector<Posting>> postings_;
};

// ln(1 + (N - df + 0.5) / (df + 0.5)); never negative.
double Bm25Idf(std::size_t num_docs, std::size_t df);

// Sum over query tokens (repeats included). Unknown doc id throws NotFound.
double Bm25Score(const Index& index, const TokenSequence& query,
                 std::string_view doc_id, const Bm25Params& params = {});

// Documents with positive score, ordered by (score desc, doc_id asc), at
// most k of them. k == 0 throws InvalidArgument.
std::vector<ScoredDoc> SearchTopK(const Index& index, std::string_view query_text,
                                  std::size_t k, const Bm25Params& params = {});

struct Trial {
  std::string query_text;
  std::string gold_sticker_id;
};

// Fraction of trials whose gold sticker is among the top-k results, for each
// k. Throws InvalidArgument on empty trials, empty ks or k == 0.
std::map<std::size_t, double> RecallAtK(const Index& index,
                                        std::span<const Trial> trials,
                                        std::span<const std::size_t> ks,
                                        const Bm25Params& params = {});

// One line per record: {"sticker_id", "query_text", "source_name"}.
struct QuerySourceRecord {
  std::string sticker_id;
  std::string query_text;
  std::string source_name;
};

std::vector<QuerySourceRecord> ReadQuerySource(const std::string& path);
void WriteQuerySource(const std::string& path,
                      std::span<const QuerySourceRecord> records);

// One document per sticker, text = that sticker's query texts joined by
// spaces in file order. doc_id = sticker_id.
std::vector<Document> CandidatePool(std::span<const QuerySourceRecord> records);

}  // namespace sticktionary

#endif  // STICKTIONARY_RETRIEVAL_H_
