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

#include "dpne/evaluate.hpp"

namespace dpne {

std::unordered_map<NGram, std::uint32_t, NGramHash> corpus_user_counts(
    const Corpus& corpus, std::size_t k) {
  std::unordered_map<NGram, std::uint32_t, NGramHash> counts;
  for (const UserRecord& user : corpus.users()) {
    for (const NGram& g : user_kgrams(user, k)) {
      ++counts[g];
    }
  }
  return counts;
}

CoverageTable k_anonymity_coverage(
    const ExtractionResult& result, const Corpus& corpus,
    const std::vector<std::uint64_t>& thresholds) {
  CoverageTable table;
  for (std::size_t level = 0; level < result.levels.size(); ++level) {
    const int k = static_cast<int>(level) + 1;
    const auto counts = corpus_user_counts(corpus, k);
    const NGramSet& released = result.levels[level];
    for (std::uint64_t threshold : thresholds) {
      CoverageCell cell;
      for (const auto& [gram, holders] : counts) {
        if (holders >= threshold) {
          ++cell.total;
          if (set_contains(released, gram)) {
            ++cell.covered;
          }
        }
      }
      table[k][threshold] = cell;
    }
  }
  return table;
}

std::vector<std::uint64_t> spurious_audit(const ExtractionResult& result,
                                          const Corpus& corpus) {
  std::vector<std::uint64_t> spurious(result.levels.size(), 0);
  for (std::size_t level = 0; level < result.levels.size(); ++level) {
    const auto counts = corpus_user_counts(corpus, level + 1);
    for (const NGram& g : result.levels[level]) {
      if (!counts.contains(g)) {
        ++spurious[level];
      }
    }
  }
  return spurious;
}

EvalReport evaluate_extraction(const ExtractionResult& result,
                               const Corpus& corpus,
                               const std::vector<std::uint64_t>& thresholds) {
  EvalReport report;
  report.released_per_length.reserve(result.levels.size());
  for (const NGramSet& level : result.levels) {
    report.released_per_length.push_back(level.size());
    report.released_total += level.size();
  }
  report.spurious_per_length = spurious_audit(result, corpus);
  for (std::uint64_t s : report.spurious_per_length) {
    report.spurious_total += s;
  }
  report.spurious_fraction =
      report.released_total == 0
          ? 0.0
          : static_cast<double>(report.spurious_total) / report.released_total;
  report.coverage = k_anonymity_coverage(result, corpus, thresholds);
  return report;
}

}  // namespace dpne
