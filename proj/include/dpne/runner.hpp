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

#include "dpne/config.hpp"
#include "dpne/report.hpp"

namespace dpne {

struct ExtractRun {
  NoiseSchedule schedule;
  ExtractionResult result;
};

// Calibrates the schedule from the config and runs the extraction.
ExtractRun run_extract(const Corpus& corpus, const RunConfig& config,
                       int threads, double probe_target = 1e6);

// run_extract plus output files under config.output_dir.
ExtractRun run_extract_to_dir(const Corpus& corpus, const RunConfig& config,
                              int threads, double probe_target = 1e6);

}  // namespace dpne
