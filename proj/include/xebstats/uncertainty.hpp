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

#include <optional>
#include <span>
#include <string_view>

#include "xebstats/estimators.hpp"
#include "xebstats/probmodel.hpp"

namespace xebstats {

inline constexpr double kZ95 = 1.96;

/// Variance of U given the realized vector:
///   (1/N)[phi (M^2 w3 - 3 M w2 + 2) - phi^2 (M w2 - 1)^2 + M w2 - 1].
double var_U_conditional(double phi, double M, double N, double w2, double w3);
/// var_U_conditional / (M w2 - 1)^2.
double var_V_conditional(double phi, double M, double N, double w2, double w3);

/// Variance over random circuits (large-M forms):
///   V: (1/N)(2 phi - phi^2 + 1); U: that plus 20 phi^2 / M; LogU: (1/N)(pi^2/6 - phi^2);
///   MLE: mle_asymptotic_var.
double var_unconditional(Method method, double phi, double M, double N);

/// Per-observation Fisher information sum (w_i - 1/M)^2 / (phi w_i + (1 - phi)/M).
double fisher_info(double phi, const ProbabilityVector &pv);

/// 1 / (N * integral (z-1)^2 e^-z / (phi z + 1 - phi) dz), by adaptive Gauss-Kronrod on [0, 40].
double mle_asymptotic_var(double phi, double N);
/// The integral itself, with the quadrature's error estimate.
double mle_information_integral(double phi, double *error_estimate = nullptr);

struct VarianceReport {
    Method method = Method::V;
    std::optional<double> conditional;
    std::optional<double> unconditional;
    double phi = 0;
    double M = 0;
    double N = 0;
    std::optional<double> w2;
    std::optional<double> w3;
};

/// Fills whichever of the conditional / unconditional variances is defined for `method`.
VarianceReport variance_report(Method method, double phi, double M, double N,
                               std::optional<MomentSummary> moments = std::nullopt);

enum class CiKind {
    ConditionalSingle,
    ConditionalCombined,
    UnconditionalU,
    UnconditionalV,
    UnconditionalMLE,
};

std::string_view ci_kind_name(CiKind kind);

struct ConfidenceInterval {
    double center = 0;
    double half_width = 0;
    double level = 0.95;
    CiKind kind = CiKind::ConditionalSingle;

    double lower() const { return center - half_width; }
    double upper() const { return center + half_width; }
    bool contains(double x) const { return lower() <= x && x <= upper(); }
};

/// estimate +- 1.96 sigma.
ConfidenceInterval ci_conditional_single(double estimate, double sigma);

/// Inverse-variance weighted combination of per-file estimates.
ConfidenceInterval ci_conditional_combined(std::span<const double> estimates, std::span<const double> sigmas);

/// Combined V interval with one plug-in pass: phi is first estimated by the plain average of the
/// V_i, which then sets each file's conditional sigma.
ConfidenceInterval ci_conditional_combined_v(std::span<const double> v_estimates,
                                             std::span<const MomentSummary> file_moments, double M, double N);

/// Interval for the average of L per-file estimates, from the unconditional variance at phi_plugin.
ConfidenceInterval ci_unconditional(Method method, double mean_estimate, double phi_plugin, double L, double N,
                                    double M);

}  // namespace xebstats
