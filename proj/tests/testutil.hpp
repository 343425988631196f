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

// Test-only oracles. These deliberately avoid the library's own numeric
// paths: the normal CDF is a Taylor series, quantiles come from bisection,
// and the incomplete gamma is the classic series/continued-fraction pair.

#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "dpne/corpus.hpp"

namespace testutil {

// Standard normal CDF via Marsaglia's Taylor series in long double.
// Good to ~1e-17 absolute for |x| <= 10.
inline long double oracle_phi(long double x) {
  if (x < -10.0L) return 0.0L;
  if (x > 10.0L) return 1.0L;
  long double sum = x;
  long double term = x;
  for (int n = 1; n < 400; ++n) {
    term *= x * x / (2.0L * n + 1.0L);
    sum += term;
    if (std::fabs(term) < 1e-22L * std::fabs(sum)) break;
  }
  const long double pdf = expl(-0.5L * x * x) * 0.398942280401432677939946L;
  return 0.5L + pdf * sum;
}

// Quantile by bisection on oracle_phi.
inline long double oracle_phi_inv(long double q) {
  long double lo = -12.0L, hi = 12.0L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    if (oracle_phi(mid) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5L * (lo + hi);
}

// Regularized lower incomplete gamma P(a, x) (series + continued fraction).
inline double gamma_p(double a, double x) {
  if (x <= 0.0) return 0.0;
  const double gln = std::lgamma(a);
  if (x < a + 1.0) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 500; ++i) {
      ap += 1.0;
      del *= x / ap;
      sum += del;
      if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
    }
    return sum * std::exp(-x + a * std::log(x) - gln);
  }
  // Lentz continued fraction for Q(a, x).
  double b = x + 1.0 - a;
  double c = 1e300;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < 1e-300) d = 1e-300;
    c = b + an / c;
    if (std::fabs(c) < 1e-300) c = 1e-300;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return 1.0 - std::exp(-x + a * std::log(x) - gln) * h;
}

// Chi-square CDF with df degrees of freedom.
inline double chi_square_cdf(double x, double df) {
  return gamma_p(0.5 * df, 0.5 * x);
}

inline double binomial_pmf(std::uint64_t n, std::uint64_t k, double q) {
  if (k > n) return 0.0;
  const double nd = static_cast<double>(n);
  const double kd = static_cast<double>(k);
  return std::exp(std::lgamma(nd + 1.0) - std::lgamma(kd + 1.0) -
                  std::lgamma(nd - kd + 1.0) + kd * std::log(q) +
                  (nd - kd) * std::log1p(-q));
}

// Pearson chi-square goodness-of-fit of observed counts against a
// Binomial(n, q) over pooled bins with expected mass >= 5. Returns the
// p-value.
inline double binomial_chi_square_pvalue(const std::vector<std::uint64_t>& obs,
                                         std::uint64_t n, double q) {
  const double total = static_cast<double>(obs.size());
  std::uint64_t max_k = 0;
  for (std::uint64_t v : obs) max_k = std::max(max_k, v);

  // Expected counts per outcome value, right tail folded into the last bin.
  std::vector<double> expected;
  std::vector<double> observed;
  double exp_acc = 0.0;
  double obs_acc = 0.0;
  double tail_mass = 1.0;
  for (std::uint64_t k = 0; k <= max_k + 1; ++k) {
    const double pk = k <= max_k ? binomial_pmf(n, k, q) : tail_mass;
    tail_mass -= (k <= max_k ? pk : 0.0);
    double ok = 0.0;
    for (std::uint64_t v : obs) {
      if (v == k) ok += 1.0;
    }
    if (k > max_k) {
      ok = 0.0;  // nothing observed beyond max_k by construction
    }
    exp_acc += pk * total;
    obs_acc += ok;
    if (exp_acc >= 5.0 || k == max_k + 1) {
      expected.push_back(exp_acc);
      observed.push_back(obs_acc);
      exp_acc = 0.0;
      obs_acc = 0.0;
    }
  }
  if (exp_acc > 0.0) {
    expected.push_back(exp_acc);
    observed.push_back(obs_acc);
  }
  // Fold trailing under-filled bin into its neighbor.
  while (expected.size() > 1 && expected.back() < 5.0) {
    expected[expected.size() - 2] += expected.back();
    observed[observed.size() - 2] += observed.back();
    expected.pop_back();
    observed.pop_back();
  }
  if (expected.size() < 2) {
    return 1.0;  // degenerate: everything in one bin
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) {
    const double d = observed[i] - expected[i];
    stat += d * d / expected[i];
  }
  const double df = static_cast<double>(expected.size() - 1);
  return 1.0 - chi_square_cdf(stat, df);
}

// Builds a corpus from (user_id, texts) pairs with default tokenization.
inline dpne::Corpus make_corpus(
    const std::vector<std::pair<std::string, std::vector<std::string>>>&
        users) {
  dpne::Corpus corpus;
  for (const auto& [id, texts] : users) {
    dpne::UserRecord user;
    user.user_id = id;
    for (const auto& text : texts) {
      user.sequences.push_back(dpne::tokenize(text, corpus.tokens()));
    }
    corpus.add_user(std::move(user));
  }
  return corpus;
}

// Renders a gram as space-separated token text (comparisons across corpora
// with different interning orders).
inline std::string gram_text(const dpne::NGram& g, const dpne::TokenTable& t) {
  std::string out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i) out += ' ';
    out += t.text(g[i]);
  }
  return out;
}

}  // namespace testutil
