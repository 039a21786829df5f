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

#include "sticktionary/retrieval.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "sticktionary/jsonl.h"
#include "sticktionary/status.h"

namespace sticktionary {

Index Index::Build(std::vector<Document> docs, Language language,
                   const Segmenter* zh_segmenter) {
  Index index;
  index.language_ = language;
  index.zh_segmenter_ = zh_segmenter;
  index.docs_ = std::move(docs);
  index.lengths_.reserve(index.docs_.size());

  long total_len = 0;
  for (std::size_t i = 0; i < index.docs_.size(); ++i) {
    Document& doc = index.docs_[i];
    if (!index.positions_.emplace(doc.doc_id, i).second) {
      throw InvalidArgumentError("duplicate doc_id '" + doc.doc_id + "'");
    }
    doc.tokens = Tokenize(doc.text, language, zh_segmenter);
    index.lengths_.push_back(static_cast<int>(doc.tokens.size()));
    total_len += static_cast<long>(doc.tokens.size());

    std::map<std::string, int> tf;
    for (const auto& t : doc.tokens.tokens) ++tf[t];
    for (const auto& [term, count] : tf) {
      index.postings_[term].push_back({i, count});
    }
  }
  if (!index.docs_.empty()) {
    index.avg_doc_len_ =
        static_cast<double>(total_len) / static_cast<double>(index.docs_.size());
  }
  return index;
}

std::size_t Index::doc_frequency(const std::string& term) const {
  const auto it = postings_.find(term);
  return it == postings_.end() ? 0 : it->second.size();
}

std::size_t Index::Position(std::string_view doc_id) const {
  const auto it = positions_.find(std::string(doc_id));
  if (it == positions_.end()) {
    throw NotFoundError("unknown doc_id '" + std::string(doc_id) + "'");
  }
  return it->second;
}

TokenSequence Index::TokenizeQuery(std::string_view text) const {
  return Tokenize(text, language_, zh_segmenter_);
}

double Bm25Idf(std::size_t num_docs, std::size_t df) {
  const auto n = static_cast<double>(num_docs);
  const auto d = static_cast<double>(df);
  return std::log(1.0 + (n - d + 0.5) / (d + 0.5));
}

namespace {

double TermWeight(const Index& index, std::size_t doc, int tf, std::size_t df,
                  const Bm25Params& p) {
  if (tf <= 0) return 0.0;
  const double len_ratio = index.avg_doc_len() > 0
                               ? index.doc_length(doc) / index.avg_doc_len()
                               : 0.0;
  const double norm = p.k1 * (1.0 - p.b + p.b * len_ratio);
  return Bm25Idf(index.size(), df) * tf * (p.k1 + 1.0) / (tf + norm);
}

}  // namespace

double Bm25Score(const Index& index, const TokenSequence& query,
                 std::string_view doc_id, const Bm25Params& params) {
  const std::size_t doc = index.Position(doc_id);
  double score = 0;
  for (const auto& term : query.tokens) {
    const auto it = index.postings().find(term);
    if (it == index.postings().end()) continue;
    const auto& list = it->second;
    const auto hit = std::lower_bound(
        list.begin(), list.end(), doc,
        [](const Posting& p, std::size_t d) { return p.doc < d; });
    if (hit != list.end() && hit->doc == doc) {
      score += TermWeight(index, doc, hit->tf, list.size(), params);
    }
  }
  return score;
}

std::vector<ScoredDoc> SearchTopK(const Index& index, std::string_view query_text,
                                  std::size_t k, const Bm25Params& params) {
  if (k == 0) throw InvalidArgumentError("k must be >= 1");
  const TokenSequence query = index.TokenizeQuery(query_text);
  std::vector<double> acc(index.size(), 0.0);
  for (const auto& term : query.tokens) {
    const auto it = index.postings().find(term);
    if (it == index.postings().end()) continue;
    for (const Posting& p : it->second) {
      acc[p.doc] += TermWeight(index, p.doc, p.tf, it->second.size(), params);
    }
  }
  std::vector<ScoredDoc> results;
  for (std::size_t i = 0; i < acc.size(); ++i) {
    if (acc[i] > 0) results.push_back({index.documents()[i].doc_id, acc[i]});
  }
  const auto order = [](const ScoredDoc& a, const ScoredDoc& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.doc_id < b.doc_id;
  };
  if (results.size() > k) {
    std::partial_sort(results.begin(), results.begin() + static_cast<long>(k),
                      results.end(), order);
    results.resize(k);
  } else {
    std::sort(results.begin(), results.end(), order);
  }
  return results;
}

std::map<std::size_t, double> RecallAtK(const Index& index,
                                        std::span<const Trial> trials,
                                        std::span<const std::size_t> ks,
                                        const Bm25Params& params) {
  if (trials.empty()) throw InvalidArgumentError("recall needs at least one trial");
  if (ks.empty()) throw InvalidArgumentError("recall needs at least one k");
  std::size_t max_k = 0;
  for (const std::size_t k : ks) {
    if (k == 0) throw InvalidArgumentError("k must be >= 1");
    max_k = std::max(max_k, k);
  }

  std::map<std::size_t, std::size_t> hits;
  for (const std::size_t k : ks) hits[k] = 0;
  for (const Trial& trial : trials) {
    const auto results = SearchTopK(index, trial.query_text, max_k, params);
    std::size_t rank = 0;
    for (; rank < results.size(); ++rank) {
      const auto& doc = index.documents()[index.Position(results[rank].doc_id)];
      if (doc.sticker_id == trial.gold_sticker_id) break;
    }
    if (rank == results.size()) continue;
    for (auto& [k, count] : hits) {
      if (rank < k) ++count;
    }
  }
  std::map<std::size_t, double> recall;
  for (const auto& [k, count] : hits) {
    recall[k] = static_cast<double>(count) / static_cast<double>(trials.size());
  }
  return recall;
}

std::vector<QuerySourceRecord> ReadQuerySource(const std::string& path) {
  std::vector<QuerySourceRecord> out;
  ForEachJsonLine(path, [&](const Json& j, std::size_t) {
    QuerySourceRecord r{RequireString(j, "sticker_id"), RequireString(j, "query_text"),
                        RequireString(j, "source_name")};
    if (r.sticker_id.empty()) throw ValidationError("empty sticker_id", "sticker_id");
    out.push_back(std::move(r));
  });
  return out;
}

void WriteQuerySource(const std::string& path,
                      std::span<const QuerySourceRecord> records) {
  std::ostringstream out;
  for (const auto& r : records) {
    Json j;
    j["sticker_id"] = r.sticker_id;
    j["query_text"] = r.query_text;
    j["source_name"] = r.source_name;
    out << j.dump() << '\n';
  }
  WriteFile(path, out.str());
}

std::vector<Document> CandidatePool(std::span<const QuerySourceRecord> records) {
  std::vector<Document> docs;
  std::unordered_map<std::string, std::size_t> by_sticker;
  for (const auto& r : records) {
    const auto [it, inserted] = by_sticker.emplace(r.sticker_id, docs.size());
    if (inserted) {
      docs.push_back({r.sticker_id, r.query_text, r.sticker_id, {}});
    } else {
      docs[it->second].text += ' ';
      docs[it->second].text += r.query_text;
    }
  }
  return docs;
}

}  // namespace sticktionary
