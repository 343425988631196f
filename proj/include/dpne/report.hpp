// Copyright 2026 The dpne Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpne/config.hpp"
#include "dpne/evaluate.hpp"

namespace dpne {

// Gram files: one line per gram, token strings joined by tabs, sorted by the
// rendered text for diff stability. Unsafe runs stamp a header line and add
// a trailing 0/1 spurious-flag column.
inline constexpr const char* kUnsafeStamp = "# unsafe-no-privacy";

std::string gram_to_line(const NGram& gram, const TokenTable& table);

void write_extraction_outputs(const std::filesystem::path& dir,
                              const RunConfig& config,
                              const NoiseSchedule& schedule,
                              const ExtractionResult& result,
                              const TokenTable& table);

struct LoadedExtraction {
  RunConfig config;
  ExtractionResult result;
};

// Reads a result directory back; gram tokens are interned into `table`.
LoadedExtraction load_extraction_outputs(const std::filesystem::path& dir,
                                         TokenTable& table);

nlohmann::json schedule_to_json(const NoiseSchedule& schedule);
nlohmann::json stats_to_json(const std::vector<LevelStats>& stats);

// Method-by-length count tables (the layout of the paper-style comparison:
// lengths across, methods down).
struct MethodCounts {
  std::string name;
  std::vector<std::uint64_t> per_length;
  bool with_total = true;  // DPSU-single rows carry no meaningful total
};

std::string render_method_table(const std::vector<MethodCounts>& rows);
std::string render_method_csv(const std::vector<MethodCounts>& rows);

nlohmann::json eval_to_json(const EvalReport& report);
std::string eval_coverage_csv(const EvalReport& report);
std::string render_eval_table(const EvalReport& report);

}  // namespace dpne
