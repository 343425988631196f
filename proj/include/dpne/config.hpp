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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "dpne/accounting.hpp"
#include "dpne/corpus.hpp"
#include "dpne/extraction.hpp"
#include "dpne/validity.hpp"

namespace dpne {

// Everything that determines a run's output. A config echo plus its seed
// reproduces the run bit-exactly; runtime knobs like the worker count are
// deliberately not part of it.
struct RunConfig {
  std::string input;
  CorpusFormat format = CorpusFormat::kJsonlText;
  std::string output_dir;
  double epsilon = 1.0;
  double delta = 1e-7;
  int max_len = 5;            // T
  int delta0 = 100;           // default per-level cap
  std::vector<int> caps;      // per-level caps; empty broadcasts delta0
  double eta = 0.01;
  double decay = 1.0;         // c
  std::optional<double> sample_p;  // fixed p; empty picks p per level
  PruningRule rule = PruningRule::kBothSide;
  ExtractMode mode = ExtractMode::kScalable;
  std::uint64_t seed = 0;
  bool lowercase = true;
  bool unsafe_no_privacy = false;
  std::optional<double> sigma_override;  // requires unsafe_no_privacy
  std::optional<double> rho_override;    // requires unsafe_no_privacy
};

std::vector<int> resolved_caps(const RunConfig& config);
NoiseSchedule schedule_from_config(const RunConfig& config);
ExtractOptions extract_options_from_config(const RunConfig& config,
                                           int threads,
                                           double probe_target = 1e6);

std::string to_string(CorpusFormat format);
std::string to_string(PruningRule rule);
std::string to_string(ExtractMode mode);
CorpusFormat parse_corpus_format(const std::string& text);
PruningRule parse_pruning_rule(const std::string& text);
ExtractMode parse_extract_mode(const std::string& text);

nlohmann::json config_to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& doc);

}  // namespace dpne
