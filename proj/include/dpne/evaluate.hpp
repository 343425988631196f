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
#include <map>
#include <vector>

#include "dpne/corpus.hpp"
#include "dpne/extraction.hpp"

namespace dpne {

// Raw numerator/denominator pair for one (k, K) coverage cell, so any
// monotonicity claim stays checkable instead of assumed.
struct CoverageCell {
  std::uint64_t covered = 0;  // grams with >= K holders that were released
  std::uint64_t total = 0;    // grams with >= K holders
  double fraction() const {
    return total == 0 ? 0.0 : static_cast<double>(covered) / total;
  }
};

// coverage[k][K]; keys sorted for stable serialization.
using CoverageTable = std::map<int, std::map<std::uint64_t, CoverageCell>>;

struct EvalReport {
  std::vector<std::uint64_t> released_per_length;
  std::vector<std::uint64_t> spurious_per_length;
  std::uint64_t released_total = 0;
  std::uint64_t spurious_total = 0;
  double spurious_fraction = 0.0;  // of everything released
  CoverageTable coverage;
};

// Number of users holding each distinct k-gram (a user holding a gram in
// several places still counts once). Trusted-curator analysis over the
// cleartext corpus.
std::unordered_map<NGram, std::uint32_t, NGramHash> corpus_user_counts(
    const Corpus& corpus, std::size_t k);

// Fraction of k-grams held by >= K users that the extraction released.
CoverageTable k_anonymity_coverage(const ExtractionResult& result,
                                   const Corpus& corpus,
                                   const std::vector<std::uint64_t>& thresholds);

// Released grams absent from every user's text, per level.
std::vector<std::uint64_t> spurious_audit(const ExtractionResult& result,
                                          const Corpus& corpus);

EvalReport evaluate_extraction(const ExtractionResult& result,
                               const Corpus& corpus,
                               const std::vector<std::uint64_t>& thresholds);

}  // namespace dpne
