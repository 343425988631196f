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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <string>
#include <unordered_set>
#include <vector>

#include "dpne/evaluate.hpp"
#include "dpne/extraction.hpp"
#include "dpne/normal.hpp"

#include "testutil.hpp"

using dpne::allocate_schedule;
using dpne::Corpus;
using dpne::dpne_extract;
using dpne::dpsu_extract_unigrams;
using dpne::ExtractionResult;
using dpne::ExtractMode;
using dpne::ExtractOptions;
using dpne::NGram;
using dpne::NGramSet;
using dpne::NoiseSchedule;
using dpne::PruningRule;
using dpne::TokenId;

namespace {

// A corpus whose level sets are fully forced: every user holds the same
// chain t0 t1 ... t{vocab-1}, so S_1 is the whole vocabulary and supp(H_k)
// is exactly the chain's k-grams, with weights far above any threshold.
Corpus chain_corpus(int n_users, int vocab) {
  std::string text;
  for (int t = 0; t < vocab; ++t) {
    if (t) text += ' ';
    text += "t" + std::to_string(t);
  }
  std::vector<std::pair<std::string, std::vector<std::string>>> users;
  users.reserve(n_users);
  for (int u = 0; u < n_users; ++u) {
    users.emplace_back("u" + std::to_string(u),
                       std::vector<std::string>{text});
  }
  return testutil::make_corpus(users);
}

NoiseSchedule debug_schedule(int max_len, int cap) {
  NoiseSchedule sched;
  sched.target = {1.0, 1e-7};
  sched.max_len = max_len;
  sched.sigma_star = 1.0;
  sched.sigmas.assign(max_len, 1.0);
  sched.rho1 = 0.0;
  sched.caps.assign(max_len, cap);
  sched.eta = 0.01;
  sched.decay = 1.0;
  return sched;
}

ExtractOptions noiseless_options(ExtractMode mode, std::uint64_t seed) {
  ExtractOptions opt;
  opt.mode = mode;
  opt.seed = seed;
  opt.allow_non_private = true;
  opt.sigma_override = 0.0;
  opt.rho_override = 1e-9;
  return opt;
}

// All corpus grams of length k, as rendered text.
std::unordered_set<std::string> corpus_gram_texts(const Corpus& corpus,
                                                  std::size_t k) {
  std::unordered_set<std::string> out;
  for (const auto& user : corpus.users()) {
    for (const NGram& g : dpne::user_kgrams(user, k)) {
      out.insert(testutil::gram_text(g, corpus.tokens()));
    }
  }
  return out;
}

bool downward_closed(const ExtractionResult& result) {
  for (std::size_t level = 1; level < result.levels.size(); ++level) {
    const NGramSet& prev = result.levels[level - 1];
    for (const NGram& g : result.levels[level]) {
      if (!dpne::set_contains(prev, g.prefix(g.size() - 1)) ||
          !dpne::set_contains(prev, g.suffix(g.size() - 1))) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_CASE("dpsu_extract_unigrams hand-computed noiseless case") {
  // Two users each holding only "a": weight 2 > rho = 1.5.
  Corpus corpus = testutil::make_corpus({{"u1", {"a"}}, {"u2", {"a"}}});
  const NGramSet s1 = dpsu_extract_unigrams(corpus, 5, 1.5, 0.0, 1);
  REQUIRE(s1.size() == 1);
  CHECK(corpus.tokens().text(s1[0].front()) == "a");

  // One more user with a singleton "b": weight 1 stays below 1.5.
  Corpus corpus2 =
      testutil::make_corpus({{"u1", {"a"}}, {"u2", {"a"}}, {"u3", {"b"}}});
  const NGramSet s1b = dpsu_extract_unigrams(corpus2, 5, 1.5, 0.0, 1);
  REQUIRE(s1b.size() == 1);
  CHECK(corpus2.tokens().text(s1b[0].front()) == "a");
}

TEST_CASE("dpsu_extract_unigrams on an empty corpus") {
  Corpus corpus;
  CHECK(dpsu_extract_unigrams(corpus, 5, 1.0, 1.0, 1).empty());
}

TEST_CASE("unigram extraction never outputs unseen grams") {
  dpne::StreamRng seeds(404);
  for (int trial = 0; trial < 25; ++trial) {
    const Corpus corpus =
        dpne::synth_corpus(40, 12, 30, 1.1, seeds.next());
    const NGramSet s1 =
        dpsu_extract_unigrams(corpus, 4, 0.5, 1.0, seeds.next());
    const auto held = corpus_gram_texts(corpus, 1);
    for (const NGram& g : s1) {
      CHECK(held.contains(testutil::gram_text(g, corpus.tokens())));
    }
  }
}

TEST_CASE("noiseless pipeline reproduces the exact gram sets") {
  Corpus corpus = testutil::make_corpus(
      {{"u1", {"a b c"}}, {"u2", {"a b c"}}, {"u3", {"a b c"}}});
  const NoiseSchedule sched = debug_schedule(3, 10);
  for (ExtractMode mode : {ExtractMode::kReference, ExtractMode::kScalable}) {
    CAPTURE(static_cast<int>(mode));
    const ExtractionResult result =
        dpne_extract(corpus, sched, noiseless_options(mode, 7));
    REQUIRE(result.levels.size() == 3);
    CHECK(result.noise_disabled);
    auto texts = [&](int level) {
      std::vector<std::string> out;
      for (const NGram& g : result.levels[level]) {
        out.push_back(testutil::gram_text(g, corpus.tokens()));
      }
      return out;
    };
    CHECK(texts(0) == std::vector<std::string>{"a", "b", "c"});
    CHECK(texts(1) == std::vector<std::string>{"a b", "b c"});
    CHECK(texts(2) == std::vector<std::string>{"a b c"});
    CHECK(result.stats[2].released == 1);
  }
}

TEST_CASE("zero noise requires the debug flag") {
  Corpus corpus = testutil::make_corpus({{"u", {"a b"}}});
  const NoiseSchedule sched = debug_schedule(2, 10);
  ExtractOptions opt;
  opt.sigma_override = 0.0;
  CHECK_THROWS_AS(dpne_extract(corpus, sched, opt), dpne::InvalidArgument);
  opt.sigma_override.reset();
  opt.rho_override = 0.5;
  CHECK_THROWS_AS(dpne_extract(corpus, sched, opt), dpne::InvalidArgument);
  // Hand-made schedule with a zero sigma is equally gated.
  NoiseSchedule zeroed = sched;
  zeroed.sigmas[1] = 0.0;
  ExtractOptions plain;
  CHECK_THROWS_AS(dpne_extract(corpus, zeroed, plain), dpne::InvalidArgument);
}

TEST_CASE("empty corpus yields empty levels with infinite thresholds") {
  Corpus corpus;
  const auto sched =
      allocate_schedule({1.0, 1e-7}, 3, 1.0, {10, 10, 10}, 0.01);
  ExtractOptions opt;
  const ExtractionResult result = dpne_extract(corpus, sched, opt);
  for (const auto& level : result.levels) {
    CHECK(level.empty());
  }
  CHECK(result.stats[1].rho == std::numeric_limits<double>::infinity());
}

TEST_CASE("downward closure and spurious-free level one on random corpora") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Corpus corpus = dpne::synth_corpus(150, 18, 25, 1.05, seed);
    const auto sched =
        allocate_schedule({2.0, 1e-6}, 4, 1.0, {8, 8, 8, 8}, 0.05);
    for (ExtractMode mode :
         {ExtractMode::kReference, ExtractMode::kScalable}) {
      ExtractOptions opt;
      opt.mode = mode;
      opt.seed = seed * 31 + 5;
      const ExtractionResult result = dpne_extract(corpus, sched, opt);
      CHECK(downward_closed(result));
      const auto held = corpus_gram_texts(corpus, 1);
      for (const NGram& g : result.levels[0]) {
        CHECK(held.contains(testutil::gram_text(g, corpus.tokens())));
      }
    }
  }
}

TEST_CASE("permuting corpus users leaves the result bit-identical") {
  const std::size_t n_users = 120;
  const Corpus corpus = dpne::synth_corpus(n_users, 15, 20, 1.0, 99);
  // Same interning order (vocabulary is pre-interned by rank), users
  // reversed.
  Corpus reversed;
  for (std::size_t r = 0; r < 20; ++r) {
    reversed.tokens().intern("w" + std::to_string(r));
  }
  for (std::size_t u = n_users; u-- > 0;) {
    dpne::UserRecord copy = corpus.users()[u];
    reversed.add_user(std::move(copy));
  }
  const auto sched = allocate_schedule({2.0, 1e-6}, 3, 0.9, {6, 6, 6}, 0.02);
  for (ExtractMode mode : {ExtractMode::kReference, ExtractMode::kScalable}) {
    ExtractOptions opt;
    opt.mode = mode;
    opt.seed = 31337;
    const ExtractionResult a = dpne_extract(corpus, sched, opt);
    const ExtractionResult b = dpne_extract(reversed, sched, opt);
    REQUIRE(a.levels.size() == b.levels.size());
    for (std::size_t k = 0; k < a.levels.size(); ++k) {
      CHECK(a.levels[k] == b.levels[k]);
      CHECK(a.stats[k].rho == b.stats[k].rho);
      CHECK(a.stats[k].support == b.stats[k].support);
    }
  }
}

TEST_CASE("thread count does not change the result") {
  const Corpus corpus = dpne::synth_corpus(200, 15, 30, 1.1, 5);
  const auto sched = allocate_schedule({2.0, 1e-6}, 3, 1.0, {8, 8, 8}, 0.02);
  ExtractOptions opt;
  opt.seed = 12;
  opt.threads = 1;
  const ExtractionResult one = dpne_extract(corpus, sched, opt);
  for (int threads : {2, 8}) {
    opt.threads = threads;
    const ExtractionResult many = dpne_extract(corpus, sched, opt);
    for (std::size_t k = 0; k < one.levels.size(); ++k) {
      CHECK(one.levels[k] == many.levels[k]);
    }
  }
}

TEST_CASE("reference and scalable agree on the non-spurious output") {
  // Identical-chain corpus: S_1 and supp(H_2) are forced, the validity
  // estimate is exact (every pair is a valid 2-gram), so rho_2 coincides
  // across modes and the released-from-support sets match bit for bit.
  const Corpus corpus = chain_corpus(300, 60);
  const auto sched = allocate_schedule({4.0, 1e-7}, 2, 1.0, {60, 60}, 0.5);
  const auto chain2 = corpus_gram_texts(corpus, 2);

  int spurious_ref_total = 0;
  int spurious_scal_total = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    ExtractOptions ref;
    ref.mode = ExtractMode::kReference;
    ref.seed = seed;
    ExtractOptions scal;
    scal.mode = ExtractMode::kScalable;
    scal.seed = seed;
    const ExtractionResult a = dpne_extract(corpus, sched, ref);
    const ExtractionResult b = dpne_extract(corpus, sched, scal);

    CHECK(a.levels[0] == b.levels[0]);  // level 1 has no spurious mechanism
    CHECK(a.stats[1].rho == b.stats[1].rho);
    CHECK(a.stats[1].valid == b.stats[1].valid);  // 60*60, exact both ways

    NGramSet a_used, b_used;
    for (const NGram& g : a.levels[1]) {
      if (chain2.contains(testutil::gram_text(g, corpus.tokens()))) {
        a_used.push_back(g);
      }
    }
    for (const NGram& g : b.levels[1]) {
      if (chain2.contains(testutil::gram_text(g, corpus.tokens()))) {
        b_used.push_back(g);
      }
    }
    CHECK(a_used == b_used);
    CHECK(a_used.size() == 59);  // the full chain, every run

    spurious_ref_total += static_cast<int>(a.levels[1].size() - a_used.size());
    spurious_scal_total += static_cast<int>(b.levels[1].size() - b_used.size());
  }
  // Both modes inject spurious grams at the same rate:
  // E = (3600 - 59) * Phi(-rho_2 / sigma_2) per run. The exact chi-square
  // comparison lives in the acceptance suite; here a coarse band.
  const double sigma2 = sched.sigmas[1];
  const double rho2 =
      dpne::compute_rho_k(sigma2, sched.eta, 60, 3600);
  const double expect = (3600.0 - 59.0) * dpne::std_normal_cdf(-rho2 / sigma2);
  const double sd = std::sqrt(60.0 * expect);
  CHECK(std::fabs(spurious_ref_total - 60.0 * expect) < 5 * sd);
  CHECK(std::fabs(spurious_scal_total - 60.0 * expect) < 5 * sd);
}

TEST_CASE("scalable level three matches reference when level two coincides") {
  const Corpus corpus = chain_corpus(300, 60);
  // Tiny eta: most runs see no spurious grams at level 2, making the level-3
  // inputs identical across modes; level-3 support weights sit far above the
  // threshold so the estimated rho cannot flip any release.
  const auto sched =
      allocate_schedule({4.0, 1e-7}, 3, 1.0, {60, 60, 60}, 0.001);
  const auto chain3 = corpus_gram_texts(corpus, 3);
  int compared = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    ExtractOptions ref;
    ref.mode = ExtractMode::kReference;
    ref.seed = seed;
    ExtractOptions scal;
    scal.mode = ExtractMode::kScalable;
    scal.seed = seed;
    const ExtractionResult a = dpne_extract(corpus, sched, ref);
    const ExtractionResult b = dpne_extract(corpus, sched, scal);
    if (a.levels[1] != b.levels[1]) {
      continue;  // different spurious draws at level 2
    }
    ++compared;
    NGramSet a_used, b_used;
    for (const NGram& g : a.levels[2]) {
      if (chain3.contains(testutil::gram_text(g, corpus.tokens()))) {
        a_used.push_back(g);
      }
    }
    for (const NGram& g : b.levels[2]) {
      if (chain3.contains(testutil::gram_text(g, corpus.tokens()))) {
        b_used.push_back(g);
      }
    }
    CHECK(a_used == b_used);
  }
  CHECK(compared >= 20);  // the conditional check actually ran
}

TEST_CASE("single-side pruning keeps prefix closure") {
  // Under V_k = S_{k-1} x S_1 each released gram's prefix chain is released
  // all the way down (suffixes need not be).
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Corpus corpus = dpne::synth_corpus(150, 18, 25, 1.05, seed);
    const auto sched =
        allocate_schedule({2.0, 1e-6}, 4, 1.0, {8, 8, 8, 8}, 0.05);
    for (ExtractMode mode :
         {ExtractMode::kReference, ExtractMode::kScalable}) {
      ExtractOptions opt;
      opt.rule = PruningRule::kSingleSide;
      opt.mode = mode;
      opt.seed = seed + 100;
      const ExtractionResult result = dpne_extract(corpus, sched, opt);
      for (std::size_t level = 1; level < result.levels.size(); ++level) {
        const NGramSet& prev = result.levels[level - 1];
        const NGramSet& s1 = result.levels[0];
        for (const NGram& g : result.levels[level]) {
          CHECK(dpne::set_contains(prev, g.prefix(g.size() - 1)));
          CHECK(dpne::set_contains(s1, NGram::single(g.back())));
        }
      }
    }
  }
}

TEST_CASE("reference mode refuses oversized explicit candidate sets") {
  // Forced corpus: S_1 is the whole 25-token vocabulary, so the level-2
  // candidate space (625 pairs) exceeds the tiny limit.
  const Corpus corpus = chain_corpus(300, 25);
  const auto sched = allocate_schedule({4.0, 1e-7}, 2, 1.0, {25, 25}, 0.05);
  ExtractOptions opt;
  opt.mode = ExtractMode::kReference;
  opt.seed = 3;
  opt.explicit_valid_limit = 10;
  CHECK_THROWS_AS(dpne_extract(corpus, sched, opt), dpne::InvalidArgument);
}

TEST_CASE("extraction rejects T beyond the inline gram capacity") {
  Corpus corpus = testutil::make_corpus({{"u", {"a b"}}});
  const NoiseSchedule sched = debug_schedule(static_cast<int>(NGram::kMaxLen) + 1, 4);
  ExtractOptions opt;
  opt.allow_non_private = true;
  CHECK_THROWS_AS(dpne_extract(corpus, sched, opt), dpne::InvalidArgument);
}

TEST_CASE("level metadata is populated") {
  const Corpus corpus = dpne::synth_corpus(100, 12, 20, 1.0, 3);
  const auto sched = allocate_schedule({2.0, 1e-6}, 3, 1.0, {6, 6, 6}, 0.02);
  ExtractOptions opt;
  opt.seed = 4;
  const ExtractionResult result = dpne_extract(corpus, sched, opt);
  REQUIRE(result.stats.size() == 3);
  for (int k = 1; k <= 3; ++k) {
    const auto& st = result.stats[k - 1];
    CHECK(st.k == k);
    CHECK(st.sigma == sched.sigmas[k - 1]);
    CHECK(st.released == result.levels[k - 1].size());
    // Private runs do not expose spurious counts.
    CHECK(st.spurious_injected == -1);
  }
  CHECK(!result.stats[0].valid_estimated);
  CHECK(result.stats[1].valid_estimated);
  CHECK(result.spurious[1].empty());
}

TEST_CASE("debug mode exposes spurious bookkeeping") {
  const Corpus corpus = chain_corpus(300, 40);
  const auto sched = allocate_schedule({4.0, 1e-7}, 2, 1.0, {40, 40}, 0.5);
  ExtractOptions opt;
  opt.seed = 9;
  opt.allow_non_private = true;
  const ExtractionResult result = dpne_extract(corpus, sched, opt);
  CHECK(result.stats[1].spurious_injected >= 0);
  CHECK(result.stats[1].spurious_injected ==
        static_cast<std::int64_t>(result.spurious[1].size()));
  // Injected grams are exactly the audit-spurious ones on this corpus.
  const auto audit = dpne::spurious_audit(result, corpus);
  CHECK(audit[1] == result.spurious[1].size());
  CHECK(audit[0] == 0);
}
