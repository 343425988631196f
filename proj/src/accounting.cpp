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

#include "dpne/accounting.hpp"

#include <cmath>
#include <limits>
#include <utility>

#include "dpne/error.hpp"
#include "dpne/normal.hpp"

namespace dpne {

void validate(const PrivacyTarget& target) {
  if (!(target.epsilon > 0.0) || !std::isfinite(target.epsilon)) {
    throw InvalidArgument("PrivacyTarget: epsilon must be positive");
  }
  if (!(target.delta > 0.0 && target.delta < 1.0)) {
    throw InvalidArgument("PrivacyTarget: delta must lie in (0, 1)");
  }
}

double gaussian_delta(double epsilon, double sigma) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InvalidArgument("gaussian_delta: epsilon must be positive");
  }
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument("gaussian_delta: sigma must be positive");
  }
  const double a = -epsilon * sigma + 0.5 / sigma;
  const double b = -epsilon * sigma - 0.5 / sigma;
  return std_normal_cdf(a) - std::exp(epsilon) * std_normal_cdf(b);
}

double solve_sigma_star(const PrivacyTarget& target) {
  validate(target);
  const double want = 0.5 * target.delta;

  // gaussian_delta(eps, 1e-3) is 1 up to rounding, so 1e-3 always sits on
  // the high-delta side of the root; grow the bracket geometrically.
  double lo = 1e-3;
  double hi = lo;
  while (gaussian_delta(target.epsilon, hi) > want) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12) {
      throw InternalError("solve_sigma_star: bracket growth failed");
    }
  }
  // Bisect until the bracket collapses to a few ulps.
  for (int i = 0; i < 200 && (hi - lo) > 4e-16 * hi; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (gaussian_delta(target.epsilon, mid) > want) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double compute_rho1(double sigma1, double delta, int delta1_cap) {
  if (!(sigma1 > 0.0) || !std::isfinite(sigma1)) {
    throw InvalidArgument("compute_rho1: sigma1 must be positive");
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgument("compute_rho1: delta must lie in (0, 1)");
  }
  if (delta1_cap < 1) {
    throw InvalidArgument("compute_rho1: cap must be >= 1");
  }
  const double log_base = std::log1p(-0.5 * delta);
  double best = -std::numeric_limits<double>::infinity();
  for (int t = 1; t <= delta1_cap; ++t) {
    // tail = 1 - (1 - delta/2)^{1/t}, kept in full relative precision.
    const double tail = -std::expm1(log_base / t);
    const double value = 1.0 / std::sqrt(static_cast<double>(t)) +
                         sigma1 * std_normal_inv_cdf_upper(tail);
    best = std::max(best, value);
  }
  return best;
}

double compute_rho_k(double sigma_k, double eta, std::uint64_t size_prev,
                     std::uint64_t size_valid) {
  if (!(eta > 0.0 && eta < 1.0)) {
    throw InvalidArgument("compute_rho_k: eta must lie in (0, 1)");
  }
  if (!(sigma_k >= 0.0) || !std::isfinite(sigma_k)) {
    throw InvalidArgument("compute_rho_k: sigma_k must be non-negative");
  }
  if (size_prev == 0 || size_valid == 0) {
    return std::numeric_limits<double>::infinity();
  }
  const double ratio = std::min(
      1.0, static_cast<double>(size_prev) / static_cast<double>(size_valid));
  return sigma_k * std_normal_inv_cdf_upper(eta * ratio);
}

NoiseSchedule allocate_schedule(const PrivacyTarget& target, int max_len,
                                double decay, std::vector<int> caps,
                                double eta, std::optional<double> sample_p) {
  validate(target);
  if (max_len < 1) {
    throw InvalidArgument("allocate_schedule: T must be >= 1");
  }
  if (!(decay > 0.0 && decay <= 1.0)) {
    throw InvalidArgument("allocate_schedule: decay must lie in (0, 1]");
  }
  if (static_cast<int>(caps.size()) != max_len) {
    throw InvalidArgument("allocate_schedule: need one cap per level");
  }
  for (int cap : caps) {
    if (cap < 1) {
      throw InvalidArgument("allocate_schedule: caps must be >= 1");
    }
  }
  if (!(eta > 0.0 && eta < 1.0)) {
    throw InvalidArgument("allocate_schedule: eta must lie in (0, 1)");
  }
  if (sample_p && !(*sample_p > 0.0 && *sample_p <= 1.0)) {
    throw InvalidArgument("allocate_schedule: p must lie in (0, 1]");
  }

  NoiseSchedule sched;
  sched.target = target;
  sched.max_len = max_len;
  sched.decay = decay;
  sched.caps = std::move(caps);
  sched.eta = eta;
  sched.sample_p = sample_p.value_or(1.0);
  sched.sample_p_auto = !sample_p.has_value();
  sched.sigma_star = solve_sigma_star(target);

  // sum_{k=1..T} c^{-2(k-1)}; with sigma_1 = sigma_star * sqrt(geo) the
  // composition identity holds by construction.
  double geo = 0.0;
  double term = 1.0;
  const double step = 1.0 / (decay * decay);
  for (int k = 0; k < max_len; ++k) {
    geo += term;
    term *= step;
  }
  sched.sigmas.resize(max_len);
  sched.sigmas[0] = sched.sigma_star * std::sqrt(geo);
  for (int k = 1; k < max_len; ++k) {
    sched.sigmas[k] = decay * sched.sigmas[k - 1];
  }
  sched.rho1 = compute_rho1(sched.sigmas[0], target.delta, sched.caps[0]);
  return sched;
}

double composition_residual(const NoiseSchedule& schedule) {
  double sum = 0.0;
  for (double s : schedule.sigmas) {
    sum += 1.0 / (s * s);
  }
  const double want = 1.0 / (schedule.sigma_star * schedule.sigma_star);
  return std::fabs(sum - want) / want;
}

}  // namespace dpne
