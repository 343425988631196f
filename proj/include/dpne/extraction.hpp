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
#include <functional>
#include <optional>
#include <vector>

#include "dpne/accounting.hpp"
#include "dpne/corpus.hpp"
#include "dpne/histogram.hpp"
#include "dpne/validity.hpp"

namespace dpne {

enum class ExtractMode {
  kReference,  // explicit V_k, zero-weight grams noised individually
  kScalable,   // implicit V_k: estimated size, binomial spurious injection
};

struct LevelStats {
  int k = 0;
  double sigma = 0.0;
  double rho = 0.0;
  std::uint64_t support = 0;       // |supp(H_k)|
  std::uint64_t valid = 0;         // |V_k|, exact or estimated
  bool valid_estimated = false;
  std::uint64_t released = 0;      // |S_k|
  // Zero-weight grams that crossed the threshold (reference) or were
  // injected (scalable). -1 unless the run allows non-private output;
  // exposing the count would leak beyond the DP guarantee.
  std::int64_t spurious_injected = -1;
};

struct ExtractionResult {
  std::vector<NGramSet> levels;    // levels[k-1] = S_k
  std::vector<LevelStats> stats;
  // Per-level zero-weight released grams; populated in debug mode only.
  std::vector<NGramSet> spurious;
  bool noise_disabled = false;     // some sigma was zero: output is not DP
};

struct ExtractOptions {
  PruningRule rule = PruningRule::kBothSide;
  ExtractMode mode = ExtractMode::kScalable;
  std::uint64_t seed = 0;
  int threads = 1;
  // Debug switches. Zero noise and threshold overrides refuse to run
  // without allow_non_private; setting it also exposes spurious counts.
  bool allow_non_private = false;
  std::optional<double> sigma_override;
  std::optional<double> rho_override;
  // Target number of validity probes per level when the schedule leaves p
  // automatic: p = min(1, probe_target / (|S_1| * |S_{k-1}|)).
  double probe_target = 1e6;
  std::uint64_t explicit_valid_limit = 50000000;
};

// One DPSU pass with the weighted-gaussian update policy: cap each user's
// item set, accumulate weight 1/sqrt(|U_i|), threshold the noised support.
struct DpsuOutput {
  NGramSet released;
  std::uint64_t support = 0;
};
DpsuOutput dpsu_release(
    const Corpus& corpus,
    const std::function<NGramSet(const UserRecord&)>& items_fn, int cap,
    double rho, double sigma, std::uint64_t seed, int threads, int level);

// Level-1 extraction (DPSU over each user's distinct tokens). Never outputs
// a gram no user holds.
NGramSet dpsu_extract_unigrams(const Corpus& corpus, int cap, double rho1,
                               double sigma1, std::uint64_t seed,
                               int threads = 1);

// The full iterative prune-and-release extraction for lengths 1..T.
ExtractionResult dpne_extract(const Corpus& corpus,
                              const NoiseSchedule& schedule,
                              const ExtractOptions& options);

}  // namespace dpne
