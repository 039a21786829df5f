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

// Finalized dataset rows: one sticker with its multi-annotator queries.

#ifndef STICKTIONARY_RECORDS_H_
#define STICKTIONARY_RECORDS_H_

#include <string>
#include <string_view>
#include <vector>

#include "sticktionary/text.h"

namespace sticktionary {

enum class QueryOrigin { kLabel, kSuggestion };
enum class ReviewStatus { kAuto, kApproved, kRejected };

std::string_view QueryOriginName(QueryOrigin origin);
QueryOrigin ParseQueryOrigin(std::string_view name);
std::string_view ReviewStatusName(ReviewStatus status);
ReviewStatus ParseReviewStatus(std::string_view name);

struct QueryEntry {
  std::string text;
  std::string annotator_id;
  QueryOrigin origin = QueryOrigin::kLabel;

  bool operator==(const QueryEntry&) const = default;
};

struct QueryRecord {
  std::string sticker_id;
  Language language = Language::kEn;
  std::vector<QueryEntry> queries;
  ReviewStatus review_status = ReviewStatus::kAuto;

  bool operator==(const QueryRecord&) const = default;
};

// Annotator ids in order of first appearance.
std::vector<std::string> Annotators(const QueryRecord& record);

// Throws Validation unless the record has >= 2 distinct annotators, no
// empty texts and no case-folded duplicate texts.
void ValidateRecord(const QueryRecord& record);

}  // namespace sticktionary

#endif  // STICKTIONARY_RECORDS_H_
