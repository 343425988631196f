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

#include "dpne/baselines.hpp"

#include <cmath>

#include "dpne/error.hpp"

namespace dpne {

ExtractionResult dpsu_all(const Corpus& corpus, const PrivacyTarget& target,
                          int max_len, int cap0, std::uint64_t seed,
                          int threads) {
  if (max_len < 1 || cap0 < 1) {
    throw InvalidArgument("dpsu_all: max_len and cap0 must be >= 1");
  }
  const double sigma = solve_sigma_star(target);
  const int cap = max_len * cap0;
  const double rho = compute_rho1(sigma, target.delta, cap);

  DpsuOutput out = dpsu_release(
      corpus,
      [max_len](const UserRecord& user) {
        return user_pooled_grams(user, max_len);
      },
      cap, rho, sigma, seed, threads, /*level=*/0);

  ExtractionResult result;
  result.levels.resize(max_len);
  result.stats.resize(max_len);
  for (const NGram& g : out.released) {
    result.levels[g.size() - 1].push_back(g);
  }
  for (int k = 1; k <= max_len; ++k) {
    LevelStats& st = result.stats[k - 1];
    st.k = k;
    st.sigma = sigma;
    st.rho = rho;
    st.released = result.levels[k - 1].size();
    st.spurious_injected = 0;  // support-only thresholding, never spurious
  }
  // Per-length support sizes are not tracked through the pooled histogram;
  // record the pooled support on every row.
  for (auto& st : result.stats) {
    st.support = out.support;
    st.valid = out.support;
  }
  return result;
}

ExtractionResult dpsu_even(const Corpus& corpus, const PrivacyTarget& target,
                           int max_len, int cap0, std::uint64_t seed,
                           int threads) {
  if (max_len < 1 || cap0 < 1) {
    throw InvalidArgument("dpsu_even: max_len and cap0 must be >= 1");
  }
  const double sigma_star = solve_sigma_star(target);
  const double sigma = sigma_star * std::sqrt(static_cast<double>(max_len));
  const double delta_per_level = target.delta / max_len;

  ExtractionResult result;
  result.levels.resize(max_len);
  result.stats.resize(max_len);
  for (int k = 1; k <= max_len; ++k) {
    const double rho = compute_rho1(sigma, delta_per_level, cap0);
    DpsuOutput out = dpsu_release(
        corpus,
        [k](const UserRecord& user) {
          return user_kgrams(user, static_cast<std::size_t>(k));
        },
        cap0, rho, sigma, seed, threads, k);
    LevelStats& st = result.stats[k - 1];
    st.k = k;
    st.sigma = sigma;
    st.rho = rho;
    st.support = out.support;
    st.valid = out.support;
    st.released = out.released.size();
    st.spurious_injected = 0;
    result.levels[k - 1] = std::move(out.released);
  }
  return result;
}

NGramSet dpsu_single(const Corpus& corpus, const PrivacyTarget& target, int k,
                     int cap0, std::uint64_t seed, int threads) {
  if (k < 1 || cap0 < 1) {
    throw InvalidArgument("dpsu_single: k and cap0 must be >= 1");
  }
  const double sigma = solve_sigma_star(target);
  const double rho = compute_rho1(sigma, target.delta, cap0);
  return dpsu_release(
             corpus,
             [k](const UserRecord& user) {
               return user_kgrams(user, static_cast<std::size_t>(k));
             },
             cap0, rho, sigma, seed, threads, k)
      .released;
}

}  // namespace dpne
