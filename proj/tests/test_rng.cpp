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
#include <set>
#include <vector>

#include "dpne/rng.hpp"

#include "testutil.hpp"

using dpne::binomial_sample;
using dpne::StreamRng;
using dpne::substream;

TEST_CASE("streams are deterministic and key-separated") {
  StreamRng a = substream({7, dpne::streams::kCap, 3});
  StreamRng b = substream({7, dpne::streams::kCap, 3});
  StreamRng c = substream({7, dpne::streams::kCap, 4});
  bool all_equal = true;
  bool any_diff = false;
  for (int i = 0; i < 64; ++i) {
    const auto x = a.next();
    all_equal = all_equal && (x == b.next());
    any_diff = any_diff || (x != c.next());
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("next_unit stays inside the open interval") {
  StreamRng rng(123);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.next_unit();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("next_below is in range and roughly uniform") {
  StreamRng rng(99);
  std::vector<int> counts(10, 0);
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    const auto v = rng.next_below(10);
    REQUIRE(v < 10);
    ++counts[v];
  }
  for (int c : counts) {
    CHECK(c > trials / 10 - 600);  // ~6 sigma band
    CHECK(c < trials / 10 + 600);
  }
}

TEST_CASE("hash_bytes separates close strings") {
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    seen.insert(dpne::hash_bytes("user" + std::to_string(i), 7));
  }
  CHECK(seen.size() == 1000);
}

TEST_CASE("binomial edge cases") {
  StreamRng rng(5);
  CHECK(binomial_sample(0, 0.5, rng) == 0);
  CHECK(binomial_sample(100, 0.0, rng) == 0);
  CHECK(binomial_sample(100, 1.0, rng) == 100);
  CHECK(binomial_sample(100, -0.5, rng) == 0);
}

TEST_CASE("binomial is deterministic given the stream") {
  StreamRng a(42), b(42);
  for (int i = 0; i < 32; ++i) {
    CHECK(binomial_sample(1000, 0.3, a) == binomial_sample(1000, 0.3, b));
  }
}

TEST_CASE("binomial small-n distribution matches the pmf") {
  const std::uint64_t n = 3;
  const double q = 0.5;
  const int trials = 100000;
  std::vector<int> counts(n + 1, 0);
  for (int s = 0; s < trials; ++s) {
    StreamRng rng = substream({static_cast<std::uint64_t>(s), 11});
    ++counts[binomial_sample(n, q, rng)];
  }
  for (std::uint64_t k = 0; k <= n; ++k) {
    const double p = testutil::binomial_pmf(n, k, q);
    const double se = std::sqrt(p * (1 - p) / trials);
    CHECK(std::fabs(counts[k] / static_cast<double>(trials) - p) < 5 * se);
  }
}

TEST_CASE("binomial large-mean moments (exact path)") {
  // n*q = 1e4: the CDF walk must start near the mean, not at zero.
  const std::uint64_t n = 100000;
  const double q = 0.1;
  const int trials = 2000;
  double sum = 0.0, sum2 = 0.0;
  for (int s = 0; s < trials; ++s) {
    StreamRng rng = substream({static_cast<std::uint64_t>(s), 13});
    const double x = static_cast<double>(binomial_sample(n, q, rng));
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / trials;
  const double var = sum2 / trials - mean * mean;
  const double want_mean = n * q;
  const double want_var = n * q * (1 - q);
  CHECK(std::fabs(mean - want_mean) < 5 * std::sqrt(want_var / trials));
  CHECK(std::fabs(var - want_var) / want_var < 0.2);
}

TEST_CASE("binomial samples pass a goodness-of-fit test against the pmf") {
  const std::uint64_t n = 3541;
  const double q = 0.00833;
  std::vector<std::uint64_t> draws;
  for (int s = 0; s < 500; ++s) {
    StreamRng rng = substream({static_cast<std::uint64_t>(s), 19});
    draws.push_back(binomial_sample(n, q, rng));
  }
  CHECK(testutil::binomial_chi_square_pvalue(draws, n, q) >= 0.01);
  // The same helper rejects a mis-specified distribution.
  CHECK(testutil::binomial_chi_square_pvalue(draws, n, 1.5 * q) < 0.01);
  CHECK(testutil::binomial_chi_square_pvalue(draws, n / 2, q) < 0.01);
}

TEST_CASE("binomial normal-approximation path moments") {
  const std::uint64_t n = 5000000;
  const double q = 0.001;
  const int trials = 2000;
  double sum = 0.0, sum2 = 0.0;
  for (int s = 0; s < trials; ++s) {
    StreamRng rng = substream({static_cast<std::uint64_t>(s), 17});
    const double x = static_cast<double>(binomial_sample(n, q, rng));
    sum += x;
    sum2 += x * x;
  }
  const double mean = sum / trials;
  const double var = sum2 / trials - mean * mean;
  const double want_mean = n * q;
  const double want_var = n * q * (1 - q);
  CHECK(std::fabs(mean - want_mean) < 5 * std::sqrt(want_var / trials));
  CHECK(std::fabs(var - want_var) / want_var < 0.2);
}
