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
#include <optional>
#include <vector>

namespace dpne {

// The (epsilon, delta) pair the full mechanism must satisfy.
struct PrivacyTarget {
  double epsilon = 0.0;
  double delta = 0.0;
};

void validate(const PrivacyTarget& target);

// Full noise configuration for a T-level extraction: the effective noise
// sigma_star, the per-level noise levels, the level-1 release threshold,
// per-level contribution caps, and the spurious-control parameters.
struct NoiseSchedule {
  PrivacyTarget target;
  int max_len = 1;               // T
  double sigma_star = 0.0;
  std::vector<double> sigmas;    // sigma_1 .. sigma_T
  double rho1 = 0.0;
  std::vector<int> caps;         // Delta_1 .. Delta_T
  double eta = 0.0;              // tolerated spurious fraction, in (0,1)
  double decay = 1.0;            // c with sigma_k = c * sigma_{k-1}
  double sample_p = 1.0;         // validity-estimation sampling probability
  bool sample_p_auto = true;     // pick p per level from the probe budget
};

// delta(epsilon, sigma) of the Gaussian mechanism with l2-sensitivity 1:
//   delta = Phi(-eps*sigma + 1/(2 sigma)) - e^eps * Phi(-eps*sigma - 1/(2 sigma))
// Strictly decreasing in sigma and in epsilon.
double gaussian_delta(double epsilon, double sigma);

// Solves gaussian_delta(eps, sigma) = delta/2 for sigma by bisection, with
// the initial bracket grown geometrically from sigma = 1e-3. The equation is
// strictly monotone in sigma, so the root is unique.
double solve_sigma_star(const PrivacyTarget& target);

// Level-1 threshold:
//   rho_1 = max_{1<=t<=cap} ( 1/sqrt(t) + sigma1 * Phi^{-1}((1 - delta/2)^{1/t}) )
// evaluated by direct scan over t. The quantile argument approaches 1, so the
// scan works on the upper tail 1 - (1-delta/2)^{1/t} = -expm1(log1p(-delta/2)/t).
double compute_rho1(double sigma1, double delta, int delta1_cap);

// Level-k (k >= 2) threshold:
//   rho_k = sigma_k * Phi^{-1}(1 - eta * min{1, |S_{k-1}| / |V_k|}).
// Returns +infinity when either set size is zero: no k-gram can be released
// and the extraction degrades to an empty level.
double compute_rho_k(double sigma_k, double eta, std::uint64_t size_prev,
                     std::uint64_t size_valid);

// Builds the geometric noise schedule: sigma_1 = sigma_star * sqrt(sum_k
// c^{-2(k-1)}) and sigma_k = c * sigma_{k-1}, so that
// sum_k 1/sigma_k^2 = 1/sigma_star^2 holds exactly. decay = 1 yields the even
// split sigma_k = sigma_star * sqrt(T). caps must have exactly T entries.
// sample_p: fixed sampling probability in (0,1], or nullopt to pick p per
// level from a probe budget at extraction time.
NoiseSchedule allocate_schedule(const PrivacyTarget& target, int max_len,
                                double decay, std::vector<int> caps,
                                double eta,
                                std::optional<double> sample_p = std::nullopt);

// Residual of the composition identity |sum 1/sigma_k^2 - 1/sigma_star^2|
// relative to 1/sigma_star^2. Reported by the calibrate command and asserted
// by tests.
double composition_residual(const NoiseSchedule& schedule);

}  // namespace dpne
