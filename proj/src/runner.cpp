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

#include "dpne/runner.hpp"

namespace dpne {

ExtractRun run_extract(const Corpus& corpus, const RunConfig& config,
                       int threads, double probe_target) {
  ExtractRun run;
  run.schedule = schedule_from_config(config);
  const ExtractOptions options =
      extract_options_from_config(config, threads, probe_target);
  run.result = dpne_extract(corpus, run.schedule, options);
  return run;
}

ExtractRun run_extract_to_dir(const Corpus& corpus, const RunConfig& config,
                              int threads, double probe_target) {
  ExtractRun run = run_extract(corpus, config, threads, probe_target);
  write_extraction_outputs(config.output_dir, config, run.schedule, run.result,
                           corpus.tokens());
  return run;
}

}  // namespace dpne
