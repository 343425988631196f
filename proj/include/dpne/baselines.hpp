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

#include "dpne/extraction.hpp"

namespace dpne {

// DPSU baselines for the evaluation harness. All three spend the full
// (epsilon, delta) budget; none prunes, so none can output a gram no user
// holds. They reuse the extraction module's capping and noise discipline so
// measured differences isolate the algorithmic change.

// One DPSU run over grams of all lengths 1..max_len pooled, user cap
// max_len * cap0, single threshold from compute_rho1. The pooled release is
// split back into per-length sets for reporting.
ExtractionResult dpsu_all(const Corpus& corpus, const PrivacyTarget& target,
                          int max_len, int cap0, std::uint64_t seed,
                          int threads = 1);

// max_len independent per-length DPSU runs under exact Gaussian
// composition: sigma_k = sigma_star * sqrt(T) for every k, threshold delta
// split evenly (delta / 2T inside each level's rho formula).
ExtractionResult dpsu_even(const Corpus& corpus, const PrivacyTarget& target,
                           int max_len, int cap0, std::uint64_t seed,
                           int threads = 1);

// The whole budget spent on a single length k: sigma = sigma_star,
// threshold from compute_rho1 with cap0.
NGramSet dpsu_single(const Corpus& corpus, const PrivacyTarget& target, int k,
                     int cap0, std::uint64_t seed, int threads = 1);

}  // namespace dpne
