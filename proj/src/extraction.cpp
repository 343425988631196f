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

#include "dpne/extraction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dpne/error.hpp"
#include "dpne/normal.hpp"
#include "dpne/parallel.hpp"

namespace dpne {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Probability that a zero-weight gram crosses the threshold.
double zero_weight_release_prob(double rho, double sigma) {
  if (rho == kInf) {
    return 0.0;
  }
  if (sigma > 0.0) {
    return std_normal_cdf(-rho / sigma);
  }
  return rho < 0.0 ? 1.0 : 0.0;
}

WeightedHistogram build_user_histogram(
    const Corpus& corpus,
    const std::function<NGramSet(const UserRecord&)>& items_fn, int cap,
    std::uint64_t seed, int threads, int level) {
  HistogramBuilder builder(level, threads);
  const auto users = corpus.users();
  parallel_shards(users.size(), threads,
                  [&](std::size_t begin, std::size_t end, int shard) {
                    for (std::size_t i = begin; i < end; ++i) {
                      const UserRecord& user = users[i];
                      NGramSet items = items_fn(user);
                      if (items.empty()) {
                        continue;
                      }
                      if (items.size() > static_cast<std::size_t>(cap)) {
                        StreamRng rng = substream(
                            {seed, streams::kCap,
                             hash_bytes(user.user_id, streams::kUserKey)});
                        items = cap_contribution(std::move(items), cap, rng);
                      }
                      builder.add_user(shard, items);
                    }
                  });
  return std::move(builder).finalize();
}

double effective_sigma(const NoiseSchedule& sched, int k,
                       const ExtractOptions& opt) {
  return opt.sigma_override.value_or(sched.sigmas[k - 1]);
}

}  // namespace

DpsuOutput dpsu_release(
    const Corpus& corpus,
    const std::function<NGramSet(const UserRecord&)>& items_fn, int cap,
    double rho, double sigma, std::uint64_t seed, int threads, int level) {
  WeightedHistogram hist =
      build_user_histogram(corpus, items_fn, cap, seed, threads, level);
  DpsuOutput out;
  out.support = hist.size();
  out.released = threshold_release(hist, sigma, rho, release_noise(seed));
  return out;
}

NGramSet dpsu_extract_unigrams(const Corpus& corpus, int cap, double rho1,
                               double sigma1, std::uint64_t seed,
                               int threads) {
  return dpsu_release(
             corpus,
             [](const UserRecord& user) { return user_kgrams(user, 1); }, cap,
             rho1, sigma1, seed, threads, 1)
      .released;
}

ExtractionResult dpne_extract(const Corpus& corpus,
                              const NoiseSchedule& schedule,
                              const ExtractOptions& opt) {
  const int max_len = schedule.max_len;
  if (max_len < 1 || static_cast<std::size_t>(max_len) > NGram::kMaxLen) {
    throw InvalidArgument("dpne_extract: T out of range for extraction");
  }
  if (schedule.sigmas.size() != static_cast<std::size_t>(max_len) ||
      schedule.caps.size() != static_cast<std::size_t>(max_len)) {
    throw InvalidArgument("dpne_extract: schedule is not T levels long");
  }
  if ((opt.sigma_override || opt.rho_override) && !opt.allow_non_private) {
    throw InvalidArgument(
        "dpne_extract: noise/threshold overrides require the non-private "
        "debug flag");
  }
  bool noise_disabled = false;
  for (int k = 1; k <= max_len; ++k) {
    const double sigma = effective_sigma(schedule, k, opt);
    if (!(sigma >= 0.0)) {
      throw InvalidArgument("dpne_extract: negative sigma");
    }
    if (sigma == 0.0) {
      noise_disabled = true;
    }
  }
  if (noise_disabled && !opt.allow_non_private) {
    throw InvalidArgument(
        "dpne_extract: zero noise requires the non-private debug flag");
  }

  ExtractionResult result;
  result.noise_disabled = noise_disabled;
  result.levels.resize(max_len);
  result.stats.resize(max_len);
  result.spurious.resize(max_len);

  // Level 1: DPSU over each user's distinct tokens.
  {
    LevelStats& st = result.stats[0];
    st.k = 1;
    st.sigma = effective_sigma(schedule, 1, opt);
    st.rho = opt.rho_override.value_or(schedule.rho1);
    DpsuOutput out = dpsu_release(
        corpus, [](const UserRecord& user) { return user_kgrams(user, 1); },
        schedule.caps[0], st.rho, st.sigma, opt.seed, opt.threads, 1);
    st.support = out.support;
    st.valid = out.support;
    st.released = out.released.size();
    st.spurious_injected = opt.allow_non_private ? 0 : -1;
    result.levels[0] = std::move(out.released);
  }

  const NGramSet& s1 = result.levels[0];
  for (int k = 2; k <= max_len; ++k) {
    LevelStats& st = result.stats[k - 1];
    st.k = k;
    st.sigma = effective_sigma(schedule, k, opt);
    st.valid_estimated = opt.mode == ExtractMode::kScalable;
    const NGramSet& s_prev = result.levels[k - 2];
    if (s1.empty() || s_prev.empty()) {
      st.rho = kInf;
      st.spurious_injected = opt.allow_non_private ? 0 : -1;
      continue;  // this and all later levels stay empty
    }

    std::optional<NGramSet> vk;
    if (opt.mode == ExtractMode::kReference) {
      vk = compute_valid_kgrams(s1, s_prev, opt.rule,
                                opt.explicit_valid_limit);
      st.valid = vk->size();
    } else {
      const double pairs = static_cast<double>(s1.size()) *
                           static_cast<double>(s_prev.size());
      const double p = schedule.sample_p_auto
                           ? std::min(1.0, opt.probe_target / pairs)
                           : schedule.sample_p;
      StreamRng rng =
          substream({opt.seed, streams::kEstimate, static_cast<std::uint64_t>(k)});
      st.valid = estimate_valid_kgrams(s1, s_prev, opt.rule, p, rng);
    }

    st.rho = opt.rho_override.value_or(
        compute_rho_k(st.sigma, schedule.eta, s_prev.size(), st.valid));

    const ValiditySets sets(s1, s_prev);
    WeightedHistogram hist = build_user_histogram(
        corpus,
        [&](const UserRecord& user) {
          return prune_invalid(user_kgrams(user, k), sets, opt.rule);
        },
        schedule.caps[k - 1], opt.seed, opt.threads, k);
    st.support = hist.size();

    const GramNoise noise = release_noise(opt.seed);
    NGramSet released = threshold_release(hist, st.sigma, st.rho, noise);

    NGramSet injected;
    if (opt.mode == ExtractMode::kReference) {
      // The reference path keeps all of V_k in the histogram; grams no user
      // contributed sit at weight zero and are noised individually.
      if (st.rho != kInf) {
        for (const NGram& u : *vk) {
          if (hist.contains(u)) {
            continue;
          }
          const double noisy = st.sigma > 0.0 ? st.sigma * noise.standard(u) : 0.0;
          if (noisy > st.rho) {
            injected.push_back(u);
          }
        }
      }
    } else {
      // Implicit histogram: the zero-weight releases are binomial, so draw
      // the count and sample that many grams from V_k minus the support.
      const std::uint64_t population =
          st.valid > st.support ? st.valid - st.support : 0;
      const double q = zero_weight_release_prob(st.rho, st.sigma);
      StreamRng brng = substream(
          {opt.seed, streams::kBinomial, static_cast<std::uint64_t>(k)});
      const std::uint64_t draw = binomial_sample(population, q, brng);
      if (draw > 0) {
        StreamRng srng = substream(
            {opt.seed, streams::kSpurious, static_cast<std::uint64_t>(k)});
        injected = sample_spurious(s1, s_prev, opt.rule, hist.support(), draw,
                                   srng, 100 * draw + 10000);
      }
    }

    st.spurious_injected =
        opt.allow_non_private ? static_cast<std::int64_t>(injected.size()) : -1;
    if (opt.allow_non_private) {
      result.spurious[k - 1] = injected;
    }
    released.insert(released.end(), injected.begin(), injected.end());
    sort_unique(released);
    st.released = released.size();
    result.levels[k - 1] = std::move(released);
  }
  return result;
}

}  // namespace dpne
