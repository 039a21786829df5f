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

// Conversation ingestion, context filtering and annotation task pools.

#ifndef STICKTIONARY_CURATION_H_
#define STICKTIONARY_CURATION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sticktionary/text.h"

namespace sticktionary {

struct Utterance {
  std::string speaker_id;
  std::string text;
  bool is_sticker = false;
  std::optional<std::string> sticker_id;
  std::string image_ref;

  bool operator==(const Utterance&) const = default;
};

struct Conversation {
  std::string conv_id;
  std::vector<Utterance> utterances;
  Language language = Language::kEn;
};

struct Sticker {
  std::string sticker_id;
  std::string image_ref;
  Language language_context = Language::kEn;
  std::string source_conv_id;

  bool operator==(const Sticker&) const = default;
};

enum class TaskStatus { kPending, kLabeled, kCompleted, kReview, kRetired };

std::string_view TaskStatusName(TaskStatus status);
TaskStatus ParseTaskStatus(std::string_view name);
// PENDING -> LABELED -> {COMPLETED, REVIEW}; anything -> RETIRED.
bool IsValidTransition(TaskStatus from, TaskStatus to);

struct AnnotationTask {
  std::string task_id;
  Sticker sticker;
  std::vector<Utterance> context;
  Language language = Language::kEn;
  TaskStatus status = TaskStatus::kPending;
  int skip_count = 0;
  std::string context_hash;

  bool operator==(const AnnotationTask&) const = default;
};

struct SkippedLine {
  std::size_t line = 0;
  std::string reason;
};

struct IngestResult {
  std::vector<Conversation> conversations;
  std::vector<SkippedLine> skipped;
  std::vector<std::string> warnings;
};

// One conversation per line:
//   {"conv_id", "language", "utterances": [{"speaker_id", "text",
//    "is_sticker", "sticker_id"?, "image_ref"?}]}
// Malformed lines are skipped and reported. Unreadable files throw Io.
IngestResult IngestConversations(const std::string& path);

struct FilterOptions {
  std::size_t min_context_words = 20;
  std::vector<std::string> command_prefixes = {"/", "!"};
  double min_mean_utterance = 3.0;
};

struct StickerOccurrence {
  Sticker sticker;
  std::vector<Utterance> context;  // preceding text utterances
  Language language = Language::kEn;
  std::size_t utterance_index = 0;
};

// Sticker occurrences whose preceding dialogue has at least
// min_context_words tokens, no command-prefixed utterance and a mean
// utterance length of at least min_mean_utterance tokens.
std::vector<StickerOccurrence> FilterContexts(std::span<const Conversation> convs,
                                              const FilterOptions& options = {},
                                              const Segmenter* zh_segmenter = nullptr);

std::size_t ContextWordCount(std::span<const Utterance> context, Language lang,
                             const Segmenter* zh_segmenter = nullptr);

// Hash of the NFC, case-folded, whitespace-collapsed context text.
std::string ContextHash(std::span<const Utterance> context);

// One PENDING task per occurrence, at most one per (sticker_id,
// context hash) when deduplicating. Task ids are "<conv_id>#<index>".
std::vector<AnnotationTask> BuildTaskPool(std::span<const StickerOccurrence> occurrences,
                                          bool dedupe = true);

std::vector<StickerOccurrence> OccurrencesFromTasks(std::span<const AnnotationTask> tasks);

std::string TaskPoolToJsonl(std::span<const AnnotationTask> tasks);
void WriteTaskPool(const std::string& path, std::span<const AnnotationTask> tasks);
std::vector<AnnotationTask> ReadTaskPool(const std::string& path);

}  // namespace sticktionary

#endif  // STICKTIONARY_CURATION_H_
