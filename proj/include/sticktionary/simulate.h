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

// Scripted two-bot play over a synthetic task pool, and a log-level checker
// for the game invariants.

#ifndef STICKTIONARY_SIMULATE_H_
#define STICKTIONARY_SIMULATE_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "sticktionary/dataset.h"
#include "sticktionary/game.h"

namespace sticktionary {

struct SimulationOptions {
  std::size_t tasks = 100;
  uint64_t seed = 7;
  Language language = Language::kEn;
  std::size_t background_stickers = 16;
  double skip_rate = 0.05;
  double revise_rate = 0.3;
  double suggest_rate = 0.85;
  double confusion_rate = 0.15;
};

// Synthetic stickers carry hidden descriptor words that the bots "see".
struct SyntheticWorld {
  EngineSetup setup;
  std::map<std::string, std::vector<std::string>> descriptors;
};

SyntheticWorld MakeSyntheticWorld(const SimulationOptions& options);

struct SimulationResult {
  EngineSetup setup;
  std::vector<GameEvent> events;
  EngineState state;
  FinalizeResult finalized;
  std::vector<std::string> violations;
};

// Logical clock (timestamp = seq), so equal options give byte-identical
// logs. Events also go to `sink` when given.
SimulationResult RunSimulation(const SimulationOptions& options, EventSink* sink = nullptr);

// Checks a log against its setup and the engine state it produced. Returns
// one message per violation.
std::vector<std::string> CheckInvariants(const EngineSetup& setup,
                                         std::span<const GameEvent> events,
                                         const EngineState& state);

}  // namespace sticktionary

#endif  // STICKTIONARY_SIMULATE_H_
