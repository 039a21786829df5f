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

#include "sticktionary/records.h"

#include <algorithm>
#include <set>

#include "sticktionary/status.h"

namespace sticktionary {

std::string_view QueryOriginName(QueryOrigin origin) {
  return origin == QueryOrigin::kLabel ? "LABEL" : "SUGGESTION";
}

QueryOrigin ParseQueryOrigin(std::string_view name) {
  if (name == "LABEL") return QueryOrigin::kLabel;
  if (name == "SUGGESTION") return QueryOrigin::kSuggestion;
  throw ValidationError("unknown query origin '" + std::string(name) + "'", "origin");
}

std::string_view ReviewStatusName(ReviewStatus status) {
  switch (status) {
    case ReviewStatus::kAuto:
      return "AUTO";
    case ReviewStatus::kApproved:
      return "APPROVED";
    case ReviewStatus::kRejected:
      return "REJECTED";
  }
  return "AUTO";
}

ReviewStatus ParseReviewStatus(std::string_view name) {
  if (name == "AUTO") return ReviewStatus::kAuto;
  if (name == "APPROVED") return ReviewStatus::kApproved;
  if (name == "REJECTED") return ReviewStatus::kRejected;
  throw ValidationError("unknown review status '" + std::string(name) + "'",
                        "review_status");
}

std::vector<std::string> Annotators(const QueryRecord& record) {
  std::vector<std::string> out;
  for (const auto& q : record.queries) {
    if (std::find(out.begin(), out.end(), q.annotator_id) == out.end()) {
      out.push_back(q.annotator_id);
    }
  }
  return out;
}

void ValidateRecord(const QueryRecord& record) {
  if (record.sticker_id.empty()) {
    throw ValidationError("record without sticker_id", "sticker_id");
  }
  std::set<std::string> seen;
  for (const auto& q : record.queries) {
    if (CollapseWhitespace(q.text).empty()) {
      throw ValidationError("sticker " + record.sticker_id + ": empty query text",
                            "queries");
    }
    if (!seen.insert(FoldCase(CollapseWhitespace(q.text))).second) {
      throw ValidationError(
          "sticker " + record.sticker_id + ": duplicate query '" + q.text + "'",
          q.text);
    }
  }
  if (Annotators(record).size() < 2) {
    throw ValidationError(
        "sticker " + record.sticker_id + ": fewer than two distinct annotators",
        "queries");
  }
}

}  // namespace sticktionary
