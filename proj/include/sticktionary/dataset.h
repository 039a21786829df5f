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

// Finalization of game output into dataset records, the dataset file
// format, and corpus statistics.

#ifndef STICKTIONARY_DATASET_H_
#define STICKTIONARY_DATASET_H_

#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sticktionary/game.h"
#include "sticktionary/records.h"
#include "sticktionary/text.h"

namespace sticktionary {

// An admin decision on a task. Rejected query texts are dropped whatever
// the decision (matched case-insensitively).
struct ReviewDecision {
  std::string task_id;
  bool approve = false;
  std::vector<std::string> rejected_queries;
};

// Whole-word spelling fixes, keyed by the case-folded misspelling.
using CorrectionMap = std::map<std::string, std::string>;

struct FinalizeResult {
  std::vector<QueryRecord> records;
  std::vector<std::string> warnings;
};

// COMPLETED tasks become AUTO records; REVIEW tasks are kept only when
// approved (APPROVED). Tasks sharing a sticker merge into one record.
// Records left with fewer than two annotators are withheld with a warning.
// A decision naming an unknown task throws NotFound.
FinalizeResult FinalizeRecords(const EngineState& state,
                               std::span<const ReviewDecision> decisions,
                               const CorrectionMap& corrections = {});

std::string ApplyCorrections(std::string_view text, const CorrectionMap& corrections);

// {"task_id", "decision": "approve"|"reject", "rejected_queries": [...]}
std::vector<ReviewDecision> ReadReviewDecisions(const std::string& path);
std::string ReviewDecisionToJsonLine(const ReviewDecision& decision);
// "<misspelling><TAB><correction>" per line, '#' comments.
CorrectionMap ReadCorrections(const std::string& path);

// {"sticker_id", "language", "review_status", "queries": [{"text",
// "annotator_id", "origin"}]} per line, fields in that order.
std::string RecordToJsonLine(const QueryRecord& record);
QueryRecord RecordFromJson(const Json& j);
// Both validate every record. Malformed lines throw Validation naming the
// line.
void ExportJsonl(std::span<const QueryRecord> records, const std::string& path);
std::vector<QueryRecord> ImportJsonl(const std::string& path);

// Reads the published release layout (JSON array or JSON lines, loosely
// keyed) into records. Queries without annotator ids get one synthetic
// annotator per query position. Records are not validated.
std::vector<QueryRecord> ImportRelease(const std::string& path, Language language);

struct DatasetStats {
  Language language = Language::kEn;
  std::size_t unique_pairs = 0;
  std::size_t unique_terms = 0;
  std::size_t total_queries = 0;
  std::size_t unique_stickers = 0;
  double avg_queries_per_sticker = 0;
};

// Throws InvalidArgument when a record is in another language.
DatasetStats StatsSummary(std::span<const QueryRecord> records, Language language,
                          const Segmenter* zh_segmenter = nullptr);

// Descending count, ties in lexicographic order. top_n == 0 throws
// InvalidArgument.
std::vector<std::pair<std::string, std::size_t>> TermFrequency(
    std::span<const QueryRecord> records, Language language, std::size_t top_n,
    const std::set<std::string>* stopwords = nullptr,
    const Segmenter* zh_segmenter = nullptr);

const std::set<std::string>& BundledStopwords(Language language);

void WriteStatsCsv(std::ostream& out, std::span<const DatasetStats> stats);
void WriteFrequencyCsv(std::ostream& out,
                       std::span<const std::pair<std::string, std::size_t>> rows);

}  // namespace sticktionary

#endif  // STICKTIONARY_DATASET_H_
