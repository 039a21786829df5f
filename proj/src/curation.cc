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

#include "sticktionary/curation.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <utility>

#include "sticktionary/hash.h"
#include "sticktionary/jsonl.h"
#include "sticktionary/status.h"

namespace sticktionary {

std::string_view TaskStatusName(TaskStatus status) {
  switch (status) {
    case TaskStatus::kPending:
      return "PENDING";
    case TaskStatus::kLabeled:
      return "LABELED";
    case TaskStatus::kCompleted:
      return "COMPLETED";
    case TaskStatus::kReview:
      return "REVIEW";
    case TaskStatus::kRetired:
      return "RETIRED";
  }
  return "PENDING";
}

TaskStatus ParseTaskStatus(std::string_view name) {
  for (const auto s : {TaskStatus::kPending, TaskStatus::kLabeled,
                       TaskStatus::kCompleted, TaskStatus::kReview,
                       TaskStatus::kRetired}) {
    if (TaskStatusName(s) == name) return s;
  }
  throw ValidationError("unknown task status '" + std::string(name) + "'", "status");
}

bool IsValidTransition(TaskStatus from, TaskStatus to) {
  if (to == TaskStatus::kRetired) return from != TaskStatus::kRetired;
  switch (from) {
    case TaskStatus::kPending:
      return to == TaskStatus::kLabeled;
    case TaskStatus::kLabeled:
      return to == TaskStatus::kCompleted || to == TaskStatus::kReview;
    default:
      return false;
  }
}

namespace {

Utterance ParseUtterance(const Json& j) {
  Utterance u;
  u.speaker_id = RequireString(j, "speaker_id");
  if (const auto it = j.find("is_sticker"); it != j.end()) {
    if (!it->is_boolean()) throw ValidationError("'is_sticker' must be boolean", "is_sticker");
    u.is_sticker = it->get<bool>();
  }
  if (const auto it = j.find("text"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ValidationError("'text' must be a string", "text");
    u.text = it->get<std::string>();
  }
  if (const auto it = j.find("sticker_id"); it != j.end() && !it->is_null()) {
    if (!it->is_string()) throw ValidationError("'sticker_id' must be a string", "sticker_id");
    u.sticker_id = it->get<std::string>();
  }
  if (const auto it = j.find("image_ref"); it != j.end() && it->is_string()) {
    u.image_ref = it->get<std::string>();
  }
  if (u.is_sticker && (!u.sticker_id || u.sticker_id->empty())) {
    throw ValidationError("sticker utterance without sticker_id", "sticker_id");
  }
  return u;
}

Json UtteranceToJson(const Utterance& u) {
  Json j;
  j["speaker_id"] = u.speaker_id;
  j["text"] = u.text;
  j["is_sticker"] = u.is_sticker;
  if (u.sticker_id) j["sticker_id"] = *u.sticker_id;
  if (!u.image_ref.empty()) j["image_ref"] = u.image_ref;
  return j;
}

bool StartsWithCommand(std::string_view text, std::span<const std::string> prefixes) {
  const std::string trimmed = CollapseWhitespace(text);
  return std::any_of(prefixes.begin(), prefixes.end(), [&](const std::string& p) {
    return !p.empty() && trimmed.starts_with(p);
  });
}

Json TaskToJson(const AnnotationTask& t) {
  Json j;
  j["task_id"] = t.task_id;
  Json sticker;
  sticker["sticker_id"] = t.sticker.sticker_id;
  sticker["image_ref"] = t.sticker.image_ref;
  sticker["language"] = LanguageName(t.sticker.language_context);
  sticker["source_conv_id"] = t.sticker.source_conv_id;
  j["sticker"] = std::move(sticker);
  Json context = Json::array();
  for (const auto& u : t.context) context.push_back(UtteranceToJson(u));
  j["context"] = std::move(context);
  j["language"] = LanguageName(t.language);
  j["status"] = TaskStatusName(t.status);
  j["skip_count"] = t.skip_count;
  j["context_hash"] = t.context_hash;
  return j;
}

AnnotationTask TaskFromJson(const Json& j) {
  AnnotationTask t;
  t.task_id = RequireString(j, "task_id");
  const Json& sticker = j.at("sticker");
  t.sticker.sticker_id = RequireString(sticker, "sticker_id");
  t.sticker.image_ref = sticker.value("image_ref", "");
  t.sticker.language_context = ParseLanguage(RequireString(sticker, "language"));
  t.sticker.source_conv_id = sticker.value("source_conv_id", "");
  for (const auto& u : j.at("context")) t.context.push_back(ParseUtterance(u));
  t.language = ParseLanguage(RequireString(j, "language"));
  t.status = ParseTaskStatus(j.value("status", "PENDING"));
  t.skip_count = j.value("skip_count", 0);
  t.context_hash = j.value("context_hash", "");
  if (t.context_hash.empty()) t.context_hash = ContextHash(t.context);
  return t;
}

}  // namespace

IngestResult IngestConversations(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open conversation file " + path);

  IngestResult result;
  std::set<std::string> seen_ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const Json j = Json::parse(line);
      Conversation conv;
      conv.conv_id = RequireString(j, "conv_id");
      if (conv.conv_id.empty()) throw ValidationError("empty conv_id", "conv_id");
      conv.language = ParseLanguage(RequireString(j, "language"));
      const auto it = j.find("utterances");
      if (it == j.end() || !it->is_array() || it->empty()) {
        throw ValidationError("missing or empty 'utterances'", "utterances");
      }
      for (const auto& u : *it) conv.utterances.push_back(ParseUtterance(u));
      if (!seen_ids.insert(conv.conv_id).second) {
        throw ValidationError("duplicate conv_id '" + conv.conv_id + "'", "conv_id");
      }
      result.conversations.push_back(std::move(conv));
    } catch (const Json::exception& e) {
      result.skipped.push_back({line_no, e.what()});
    } catch (const Error& e) {
      result.skipped.push_back({line_no, e.what()});
    }
  }
  if (result.conversations.empty()) {
    result.warnings.push_back(path + ": no valid conversations");
  }
  return result;
}

std::size_t ContextWordCount(std::span<const Utterance> context, Language lang,
                             const Segmenter* zh_segmenter) {
  std::size_t words = 0;
  for (const auto& u : context) {
    if (!u.is_sticker) words += Tokenize(u.text, lang, zh_segmenter).size();
  }
  return words;
}

std::string ContextHash(std::span<const Utterance> context) {
  std::string joined;
  for (const auto& u : context) {
    if (u.is_sticker) continue;
    if (!joined.empty()) joined += '\n';
    joined += FoldCase(CollapseWhitespace(u.text));
  }
  return HexDigest(Fnv1a64(joined));
}

std::vector<StickerOccurrence> FilterContexts(std::span<const Conversation> convs,
                                              const FilterOptions& options,
                                              const Segmenter* zh_segmenter) {
  std::vector<StickerOccurrence> out;
  for (const auto& conv : convs) {
    std::vector<Utterance> context;
    std::size_t words = 0;
    bool has_command = false;
    for (std::size_t i = 0; i < conv.utterances.size(); ++i) {
      const Utterance& u = conv.utterances[i];
      if (!u.is_sticker) {
        words += Tokenize(u.text, conv.language, zh_segmenter).size();
        has_command = has_command || StartsWithCommand(u.text, options.command_prefixes);
        context.push_back(u);
        continue;
      }
      if (context.empty() || has_command || words < options.min_context_words) continue;
      const double mean = static_cast<double>(words) / static_cast<double>(context.size());
      if (mean < options.min_mean_utterance) continue;

      StickerOccurrence occ;
      occ.sticker = {*u.sticker_id, u.image_ref, conv.language, conv.conv_id};
      occ.context = context;
      occ.language = conv.language;
      occ.utterance_index = i;
      out.push_back(std::move(occ));
    }
  }
  return out;
}

std::vector<AnnotationTask> BuildTaskPool(std::span<const StickerOccurrence> occurrences,
                                          bool dedupe) {
  std::vector<AnnotationTask> tasks;
  std::set<std::pair<std::string, std::string>> seen;
  std::set<std::string> ids;
  for (const auto& occ : occurrences) {
    AnnotationTask task;
    task.context_hash = ContextHash(occ.context);
    if (dedupe && !seen.emplace(occ.sticker.sticker_id, task.context_hash).second) {
      continue;
    }
    task.task_id = occ.sticker.source_conv_id + "#" + std::to_string(occ.utterance_index);
    // Re-ingested pools can repeat ids when dedupe is off.
    for (int suffix = 2; !ids.insert(task.task_id).second; ++suffix) {
      task.task_id = occ.sticker.source_conv_id + "#" +
                     std::to_string(occ.utterance_index) + "." + std::to_string(suffix);
    }
    task.sticker = occ.sticker;
    task.context = occ.context;
    task.language = occ.language;
    tasks.push_back(std::move(task));
  }
  return tasks;
}

std::vector<StickerOccurrence> OccurrencesFromTasks(std::span<const AnnotationTask> tasks) {
  std::vector<StickerOccurrence> out;
  for (const auto& t : tasks) {
    StickerOccurrence occ;
    occ.sticker = t.sticker;
    occ.context = t.context;
    occ.language = t.language;
    const auto hash = t.task_id.rfind('#');
    occ.utterance_index =
        hash == std::string::npos ? 0 : std::stoul(t.task_id.substr(hash + 1));
    out.push_back(std::move(occ));
  }
  return out;
}

std::string TaskPoolToJsonl(std::span<const AnnotationTask> tasks) {
  std::ostringstream out;
  for (const auto& t : tasks) out << TaskToJson(t).dump() << '\n';
  return out.str();
}

void WriteTaskPool(const std::string& path, std::span<const AnnotationTask> tasks) {
  WriteFile(path, TaskPoolToJsonl(tasks));
}

std::vector<AnnotationTask> ReadTaskPool(const std::string& path) {
  std::vector<AnnotationTask> tasks;
  std::set<std::string> ids;
  ForEachJsonLine(path, [&](const Json& j, std::size_t) {
    AnnotationTask t = TaskFromJson(j);
    if (!ids.insert(t.task_id).second) {
      throw ValidationError("duplicate task_id '" + t.task_id + "'", "task_id");
    }
    tasks.push_back(std::move(t));
  });
  return tasks;
}

}  // namespace sticktionary
