// Copyright 2026 The xebstats Authors
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

namespace xebstats {

/// log Q(a, x), the regularized upper incomplete gamma function, accurate where Q underflows.
double log_gamma_q(double a, double x);
/// Q(a, x) = Gamma(a, x) / Gamma(a).
double gamma_q(double a, double x);

/// Chi-square survival function P(X > x) for `df` degrees of freedom, and its logarithm.
double chi2_sf(double x, double df);
double chi2_log_sf(double x, double df);

}  // namespace xebstats
