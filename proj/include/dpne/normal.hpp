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

namespace dpne {

// Density of the standard normal distribution.
double std_normal_pdf(double x);

// Standard normal CDF Phi(x), evaluated through the complementary error
// function so the lower tail keeps full relative precision. Absolute error
// is below 1e-15 everywhere. Throws InvalidArgument on non-finite input.
double std_normal_cdf(double x);

// Inverse standard normal CDF. Rational approximation (Wichura's AS 241)
// polished with one Newton step against std_normal_cdf, giving
// |Phi(x) - q| <~ 1e-15. Throws InvalidArgument unless 0 < q < 1.
double std_normal_inv_cdf(double q);

// Upper-tail quantile: returns Phi^{-1}(1 - tail) as -Phi^{-1}(tail).
// Callers that need quantiles extremely close to 1 must use this form;
// evaluating 1 - tail in double first would round away the tail entirely.
double std_normal_inv_cdf_upper(double tail);

}  // namespace dpne
