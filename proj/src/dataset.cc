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

#include "sticktionary/dataset.h"

#include <algorithm>
#include <array>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "sticktionary/jsonl.h"
#include "sticktionary/status.h"

namespace sticktionary {

namespace {

std::string FoldedKey(std::string_view text) { return FoldCase(CollapseWhitespace(text)); }

// Keeps the first occurrence of each case-folded text.
void DedupeQueries(std::vector<QueryEntry>& queries) {
  std::set<std::string> seen;
  std::vector<QueryEntry> kept;
  for (auto& q : queries) {
    if (seen.insert(FoldedKey(q.text)).second) kept.push_back(std::move(q));
  }
  queries = std::move(kept);
}

}  // namespace

std::string ApplyCorrections(std::string_view text, const CorrectionMap& corrections) {
  const std::string collapsed = CollapseWhitespace(text);
  if (corrections.empty()) return collapsed;
  std::istringstream words(collapsed);
  std::string word;
  std::string out;
  while (words >> word) {
    if (const auto it = corrections.find(FoldCase(word)); it != corrections.end()) {
      word = it->second;
    }
    if (word.empty()) continue;
    if (!out.empty()) out += ' ';
    out += word;
  }
  return out;
}

FinalizeResult FinalizeRecords(const EngineState& state,
                               std::span<const ReviewDecision> decisions,
                               const CorrectionMap& corrections) {
  std::map<std::string, const ReviewDecision*> by_task;
  for (const auto& d : decisions) {
    if (!state.tasks.contains(d.task_id)) {
      throw NotFoundError("review decision for unknown task '" + d.task_id + "'");
    }
    by_task[d.task_id] = &d;
  }

  FinalizeResult result;
  std::map<std::pair<std::string, Language>, QueryRecord> merged;
  for (const auto& [task_id, ts] : state.tasks) {
    const auto dit = by_task.find(task_id);
    const ReviewDecision* decision = dit == by_task.end() ? nullptr : dit->second;
    ReviewStatus status;
    if (ts.task.status == TaskStatus::kCompleted) {
      status = ReviewStatus::kAuto;
    } else if (ts.task.status == TaskStatus::kReview) {
      if (decision == nullptr) continue;
      status = ReviewStatus::kApproved;
    } else {
      continue;
    }
    if (decision != nullptr && !decision->approve) continue;

    std::set<std::string> rejected;
    if (decision != nullptr) {
      for (const auto& r : decision->rejected_queries) rejected.insert(FoldedKey(r));
    }
    QueryRecord& record = merged[{ts.task.sticker.sticker_id, ts.task.language}];
    record.sticker_id = ts.task.sticker.sticker_id;
    record.language = ts.task.language;
    if (status == ReviewStatus::kApproved) record.review_status = status;
    for (const auto& q : ts.queries) {
      if (rejected.contains(FoldedKey(q.text))) continue;
      std::string text = ApplyCorrections(q.text, corrections);
      if (text.empty()) continue;
      record.queries.push_back({std::move(text), q.annotator_id, q.origin});
    }
  }

  for (auto& [key, record] : merged) {
    DedupeQueries(record.queries);
    if (Annotators(record).size() < 2) {
      result.warnings.push_back("sticker " + record.sticker_id +
                                ": fewer than two annotators, withheld");
      continue;
    }
    result.records.push_back(std::move(record));
  }
  return result;
}

std::vector<ReviewDecision> ReadReviewDecisions(const std::string& path) {
  std::vector<ReviewDecision> out;
  ForEachJsonLine(path, [&](const Json& j, std::size_t) {
    ReviewDecision d;
    d.task_id = RequireString(j, "task_id");
    const std::string decision = RequireString(j, "decision");
    if (decision != "approve" && decision != "reject") {
      throw ValidationError("decision must be approve or reject", "decision");
    }
    d.approve = decision == "approve";
    if (const auto it = j.find("rejected_queries"); it != j.end()) {
      for (const auto& q : *it) d.rejected_queries.push_back(q.get<std::string>());
    }
    out.push_back(std::move(d));
  });
  return out;
}

std::string ReviewDecisionToJsonLine(const ReviewDecision& d) {
  Json j;
  j["task_id"] = d.task_id;
  j["decision"] = d.approve ? "approve" : "reject";
  j["rejected_queries"] = d.rejected_queries;
  return j.dump();
}

CorrectionMap ReadCorrections(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corrections file " + path);
  CorrectionMap map;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (CollapseWhitespace(line).empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ValidationError(path + ":" + std::to_string(line_no) +
                            ": expected '<misspelling>\\t<correction>'");
    }
    map[FoldCase(CollapseWhitespace(line.substr(0, tab)))] =
        CollapseWhitespace(line.substr(tab + 1));
  }
  return map;
}

std::string RecordToJsonLine(const QueryRecord& record) {
  Json j;
  j["sticker_id"] = record.sticker_id;
  j["language"] = LanguageName(record.language);
  j["review_status"] = ReviewStatusName(record.review_status);
  Json queries = Json::array();
  for (const auto& q : record.queries) {
    Json e;
    e["text"] = q.text;
    e["annotator_id"] = q.annotator_id;
    e["origin"] = QueryOriginName(q.origin);
    queries.push_back(std::move(e));
  }
  j["queries"] = std::move(queries);
  return j.dump();
}

QueryRecord RecordFromJson(const Json& j) {
  QueryRecord r;
  r.sticker_id = RequireString(j, "sticker_id");
  r.language = ParseLanguage(RequireString(j, "language"));
  r.review_status = ParseReviewStatus(j.value("review_status", "AUTO"));
  const auto it = j.find("queries");
  if (it == j.end() || !it->is_array()) {
    throw ValidationError("missing 'queries' array", "queries");
  }
  for (const auto& q : *it) {
    r.queries.push_back({RequireString(q, "text"), RequireString(q, "annotator_id"),
                         ParseQueryOrigin(q.value("origin", "LABEL"))});
  }
  return r;
}

void ExportJsonl(std::span<const QueryRecord> records, const std::string& path) {
  std::string out;
  for (const auto& r : records) {
    ValidateRecord(r);
    out += RecordToJsonLine(r);
    out += '\n';
  }
  WriteFile(path, out);
}

std::vector<QueryRecord> ImportJsonl(const std::string& path) {
  std::vector<QueryRecord> out;
  ForEachJsonLine(path, [&](const Json& j, std::size_t) {
    QueryRecord r = RecordFromJson(j);
    ValidateRecord(r);
    out.push_back(std::move(r));
  });
  return out;
}

namespace {

constexpr const char* kStickerKeys[] = {"sticker_id", "sticker", "image_id", "image",
                                        "id", "file_name", "filename", "img", "path"};
constexpr const char* kQueryKeys[] = {"queries", "query", "search_queries", "labels",
                                      "label", "annotations"};
constexpr const char* kTextKeys[] = {"text", "query", "label", "value"};
constexpr const char* kAnnotatorKeys[] = {"annotator_id", "annotator", "user_id", "user",
                                          "worker_id", "player_id"};

std::optional<std::string> FirstString(const Json& j, std::span<const char* const> keys) {
  for (const char* k : keys) {
    const auto it = j.find(k);
    if (it == j.end()) continue;
    if (it->is_string()) return it->get<std::string>();
    if (it->is_number_integer()) return std::to_string(it->get<long long>());
  }
  return std::nullopt;
}

std::vector<std::string> SplitQueryString(const std::string& s) {
  static const std::vector<std::string> kSeparators = {",", "，", ";", "；", "、", "|", "\n"};
  std::vector<std::string> parts{s};
  for (const auto& sep : kSeparators) {
    std::vector<std::string> next;
    for (const auto& p : parts) {
      std::size_t start = 0;
      for (std::size_t pos; (pos = p.find(sep, start)) != std::string::npos;
           start = pos + sep.size()) {
        next.push_back(p.substr(start, pos - start));
      }
      next.push_back(p.substr(start));
    }
    parts = std::move(next);
  }
  std::vector<std::string> out;
  for (const auto& p : parts) {
    std::string t = CollapseWhitespace(p);
    if (!t.empty()) out.push_back(std::move(t));
  }
  return out;
}

void AppendQueries(const Json& value, QueryRecord& record) {
  auto add = [&](std::string text, std::optional<std::string> annotator) {
    text = CollapseWhitespace(text);
    if (text.empty()) return;
    const std::size_t pos = record.queries.size();
    record.queries.push_back({std::move(text),
                              annotator.value_or("release-" + std::to_string(pos + 1)),
                              QueryOrigin::kLabel});
  };
  if (value.is_string()) {
    for (auto& t : SplitQueryString(value.get<std::string>())) add(std::move(t), std::nullopt);
  } else if (value.is_array()) {
    for (const auto& item : value) {
      if (item.is_string()) {
        add(item.get<std::string>(), std::nullopt);
      } else if (item.is_object()) {
        if (auto text = FirstString(item, kTextKeys)) {
          add(std::move(*text), FirstString(item, kAnnotatorKeys));
        }
      }
    }
  }
}

std::optional<QueryRecord> ReleaseItem(const Json& item, Language language,
                                       std::optional<std::string> fallback_id) {
  QueryRecord record;
  record.language = language;
  if (item.is_object()) {
    if (auto lang = FirstString(item, std::array{"language", "lang"})) {
      const std::string folded = FoldCase(*lang);
      if (folded.rfind(std::string(LanguageName(language)), 0) != 0 &&
          !(language == Language::kEn && folded.rfind("english", 0) == 0) &&
          !(language == Language::kZh && folded.rfind("chinese", 0) == 0)) {
        return std::nullopt;
      }
    }
    auto id = FirstString(item, kStickerKeys);
    if (!id) id = fallback_id;
    if (!id || id->empty()) throw ValidationError("item without a sticker id");
    record.sticker_id = *id;
    for (const char* k : kQueryKeys) {
      if (const auto it = item.find(k); it != item.end()) AppendQueries(*it, record);
    }
  } else if (fallback_id) {
    record.sticker_id = *fallback_id;
    AppendQueries(item, record);
  } else {
    throw ValidationError("unrecognized release item");
  }
  return record;
}

}  // namespace

std::vector<QueryRecord> ImportRelease(const std::string& path, Language language) {
  const std::string contents = ReadFile(path);
  const auto first = contents.find_first_not_of(" \t\r\n\xef\xbb\xbf");
  std::vector<QueryRecord> out;
  auto push = [&](std::optional<QueryRecord> r) {
    if (r && !r->queries.empty()) out.push_back(std::move(*r));
  };
  bool whole_document = false;
  Json doc;
  if (first != std::string::npos && (contents[first] == '[' || contents[first] == '{')) {
    try {
      doc = Json::parse(contents.substr(first));
      whole_document = true;
    } catch (const Json::exception&) {
      whole_document = false;  // JSON lines
    }
  }
  if (!whole_document) {
    ForEachJsonLine(path, [&](const Json& j, std::size_t) {
      push(ReleaseItem(j, language, std::nullopt));
    });
    return out;
  }
  try {
    if (doc.is_object()) {
      if (const auto it = doc.find("data"); it != doc.end() && it->is_array()) {
        doc = *it;
      }
    }
    if (doc.is_array()) {
      for (const auto& item : doc) push(ReleaseItem(item, language, std::nullopt));
    } else if (doc.is_object()) {
      if (FirstString(doc, kStickerKeys)) {
        push(ReleaseItem(doc, language, std::nullopt));
      } else {
        // {"<sticker id>": [queries...] | {...}}
        for (const auto& [key, value] : doc.items()) push(ReleaseItem(value, language, key));
      }
    }
  } catch (const Json::exception& e) {
    throw ValidationError(path + ": " + e.what());
  }
  return out;
}

DatasetStats StatsSummary(std::span<const QueryRecord> records, Language language,
                          const Segmenter* zh_segmenter) {
  DatasetStats stats;
  stats.language = language;
  std::set<std::string> terms;
  std::set<std::string> stickers;
  for (const auto& r : records) {
    if (r.language != language) {
      throw InvalidArgumentError("record " + r.sticker_id + " is not in language " +
                                 std::string(LanguageName(language)));
    }
    stickers.insert(r.sticker_id);
    stats.total_queries += r.queries.size();
    for (const auto& q : r.queries) {
      for (auto& t : Tokenize(q.text, language, zh_segmenter).tokens) {
        terms.insert(std::move(t));
      }
    }
  }
  stats.unique_pairs = records.size();
  stats.unique_terms = terms.size();
  stats.unique_stickers = stickers.size();
  if (!stickers.empty()) {
    stats.avg_queries_per_sticker =
        static_cast<double>(stats.total_queries) / static_cast<double>(stickers.size());
  }
  return stats;
}

std::vector<std::pair<std::string, std::size_t>> TermFrequency(
    std::span<const QueryRecord> records, Language language, std::size_t top_n,
    const std::set<std::string>* stopwords, const Segmenter* zh_segmenter) {
  if (top_n == 0) throw InvalidArgumentError("top_n must be >= 1");
  std::map<std::string, std::size_t> counts;
  for (const auto& r : records) {
    if (r.language != language) continue;
    for (const auto& q : r.queries) {
      for (auto& t : Tokenize(q.text, language, zh_segmenter).tokens) {
        if (stopwords != nullptr && stopwords->contains(t)) continue;
        ++counts[std::move(t)];
      }
    }
  }
  std::vector<std::pair<std::string, std::size_t>> ranked(counts.begin(), counts.end());
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > top_n) ranked.resize(top_n);
  return ranked;
}

const std::set<std::string>& BundledStopwords(Language language) {
  static const std::set<std::string> kEnglish = {
      "a",     "about", "all",   "am",    "an",    "and",   "any",  "are",  "as",
      "at",    "be",    "been",  "but",   "by",    "can",   "do",   "does", "for",
      "from",  "get",   "got",   "had",   "has",   "have",  "he",   "her",  "him",
      "his",   "how",   "i",     "i'm",   "if",    "in",    "is",   "it",   "it's",
      "its",   "just",  "me",    "my",    "no",    "not",   "of",   "on",   "or",
      "our",   "out",   "so",    "some",  "that",  "the",   "their", "them", "then",
      "there", "they",  "this",  "to",    "too",   "up",    "us",   "very", "was",
      "we",    "were",  "what",  "when",  "which", "who",   "will", "with", "you",
      "your",
  };
  static const std::set<std::string> kChinese = {
      "的", "了", "是", "我", "你", "他", "她", "它", "们", "在", "和", "就",
      "都", "也", "这", "那", "吗", "吧", "啊", "呢", "哦", "嗯", "有", "个",
      "一", "不", "很", "还", "又", "要", "会", "着", "给", "被", "把", "让",
      "我们", "你们", "他们", "这个", "那个", "就是", "还是", "一下", "，", "。",
      "！", "？", "、", "…",
  };
  return language == Language::kEn ? kEnglish : kChinese;
}

void WriteStatsCsv(std::ostream& out, std::span<const DatasetStats> stats) {
  out << "language,unique_pairs,unique_terms,total_queries,unique_stickers,"
         "avg_queries_per_sticker\n";
  for (const auto& s : stats) {
    std::ostringstream avg;
    avg << std::fixed << std::setprecision(4) << s.avg_queries_per_sticker;
    out << LanguageName(s.language) << ',' << s.unique_pairs << ',' << s.unique_terms
        << ',' << s.total_queries << ',' << s.unique_stickers << ',' << avg.str() << '\n';
  }
}

void WriteFrequencyCsv(std::ostream& out,
                       std::span<const std::pair<std::string, std::size_t>> rows) {
  out << "rank,term,count\n";
  std::size_t rank = 0;
  for (const auto& [term, count] : rows) {
    std::string quoted = term;
    if (quoted.find_first_of(",\"") != std::string::npos) {
      std::string escaped = "\"";
      for (const char c : quoted) {
        if (c == '"') escaped += '"';
        escaped += c;
      }
      quoted = escaped + "\"";
    }
    out << ++rank << ',' << quoted << ',' << count << '\n';
  }
}

}  // namespace sticktionary
