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

#include "xebstats/uncertainty.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>

#include "kernels/neumaier.hpp"
#include "xebstats/errors.hpp"

namespace xebstats {

namespace {

constexpr double kUpper = 40.0;

void check_phi(double phi) {
    if (!(phi >= 0 && phi <= 1)) {
        throw DomainError(fmt::format("phi = {} outside [0, 1]", phi));
    }
}

void check_count(double N, const char *name) {
    if (!(N > 0)) {
        throw DomainError(fmt::format("{} = {} must be positive", name, N));
    }
}

}  // namespace

double var_U_conditional(double phi, double M, double N, double w2, double w3) {
    check_phi(phi);
    check_count(N, "N");
    const double a = M * w2 - 1;
    const double v = (phi * (M * M * w3 - 3 * M * w2 + 2) - phi * phi * a * a + a) / N;
    if (v < 0) {
        throw DomainError(fmt::format("conditional variance {} is negative for phi={}, M={}, w2={}, w3={}", v, phi, M,
                                      w2, w3));
    }
    return v;
}

double var_V_conditional(double phi, double M, double N, double w2, double w3) {
    const double a = M * w2 - 1;
    if (!(a > 1e-12)) {
        throw DegenerateDenominatorError(fmt::format("M*w2 - 1 = {} is not positive", a));
    }
    return var_U_conditional(phi, M, N, w2, w3) / (a * a);
}

double var_unconditional(Method method, double phi, double M, double N) {
    check_count(N, "N");
    switch (method) {
        case Method::V:
            return (2 * phi - phi * phi + 1) / N;
        case Method::U:
            return (2 * phi - phi * phi + 1) / N + 20 * phi * phi / M;
        case Method::LogU:
            return (std::numbers::pi * std::numbers::pi / 6 - phi * phi) / N;
        case Method::MLE:
            return mle_asymptotic_var(phi, N);
        default:
            throw UsageError(fmt::format("no unconditional variance formula for {}", method_name(method)));
    }
}

double fisher_info(double phi, const ProbabilityVector &pv) {
    if (!(phi >= 0 && phi < 1)) {
        throw DomainError(fmt::format("Fisher information needs phi in [0, 1), got {}", phi));
    }
    const double M = static_cast<double>(pv.M());
    const double floor = (1 - phi) / M;
    kernels::detail::Neumaier s;
    for (double w : pv.weights()) {
        const double d = w - 1 / M;
        s.add(d * d / (phi * w + floor));
    }
    return s.value();
}

double mle_information_integral(double phi, double *error_estimate) {
    if (!(phi >= 0 && phi < 1)) {
        throw DomainError(fmt::format("the MLE variance integral diverges for phi = {} (needs [0, 1))", phi));
    }
    auto f = [phi](double z) { return (z - 1) * (z - 1) * std::exp(-z) / (phi * z + 1 - phi); };
    // The integrand varies on the scale (1 - phi)/phi near z = 0, so panels are graded from there.
    std::vector<double> cuts = {0.0};
    const double scale = phi > 0 ? (1 - phi) / phi : 1.0;
    for (double c = scale; c < 1; c *= 4) {
        cuts.push_back(c);
    }
    // The tail beyond z = 40 is below e^-40 (39^2 + 2*39 + 2) < 1e-14 since phi z + 1 - phi >= 1 there.
    for (double c : {1.0, 5.0, kUpper}) {
        cuts.push_back(c);
    }
    double value = 0;
    double err = 0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        double e = 0;
        value += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, cuts[k], cuts[k + 1], 15, 1e-14, &e);
        err += e;
    }
    if (error_estimate != nullptr) {
        *error_estimate = err;
    }
    return value;
}

double mle_asymptotic_var(double phi, double N) {
    check_count(N, "N");
    return 1 / (N * mle_information_integral(phi));
}

VarianceReport variance_report(Method method, double phi, double M, double N, std::optional<MomentSummary> moments) {
    check_phi(phi);
    VarianceReport r;
    r.method = method;
    r.phi = phi;
    r.M = M;
    r.N = N;
    if (moments) {
        r.w2 = moments->w2;
        r.w3 = moments->w3;
        if (method == Method::U) {
            r.conditional = var_U_conditional(phi, M, N, moments->w2, moments->w3);
        } else if (method == Method::V) {
            r.conditional = var_V_conditional(phi, M, N, moments->w2, moments->w3);
        }
    }
    if (method == Method::U || method == Method::V || method == Method::LogU ||
        (method == Method::MLE && phi < 1)) {
        r.unconditional = var_unconditional(method, phi, M, N);
    }
    return r;
}

std::string_view ci_kind_name(CiKind kind) {
    switch (kind) {
        case CiKind::ConditionalSingle:
            return "ConditionalSingle";
        case CiKind::ConditionalCombined:
            return "ConditionalCombined";
        case CiKind::UnconditionalU:
            return "UnconditionalU";
        case CiKind::UnconditionalV:
            return "UnconditionalV";
        case CiKind::UnconditionalMLE:
            return "UnconditionalMLE";
    }
    return "unknown";
}

ConfidenceInterval ci_conditional_single(double estimate, double sigma) {
    if (!(sigma >= 0)) {
        throw DomainError(fmt::format("sigma = {} must be nonnegative", sigma));
    }
    return {estimate, kZ95 * sigma, 0.95, CiKind::ConditionalSingle};
}

ConfidenceInterval ci_conditional_combined(std::span<const double> estimates, std::span<const double> sigmas) {
    if (estimates.empty() || estimates.size() != sigmas.size()) {
        throw DimensionError("combined interval needs matching, nonempty estimate and sigma lists");
    }
    kernels::detail::Neumaier num, den;
    for (std::size_t i = 0; i < estimates.size(); ++i) {
        if (!(sigmas[i] > 0)) {
            throw DomainError(fmt::format("sigma[{}] = {} must be positive", i, sigmas[i]));
        }
        const double wgt = 1 / (sigmas[i] * sigmas[i]);
        num.add(estimates[i] * wgt);
        den.add(wgt);
    }
    return {num.value() / den.value(), kZ95 / std::sqrt(den.value()), 0.95, CiKind::ConditionalCombined};
}

ConfidenceInterval ci_conditional_combined_v(std::span<const double> v_estimates,
                                             std::span<const MomentSummary> file_moments, double M, double N) {
    if (v_estimates.empty() || v_estimates.size() != file_moments.size()) {
        throw DimensionError("combined interval needs one moment summary per estimate");
    }
    double avg = 0;
    for (double v : v_estimates) {
        avg += v;
    }
    avg /= static_cast<double>(v_estimates.size());
    const double phi = std::clamp(avg, 0.0, 1.0);
    std::vector<double> sigmas(v_estimates.size());
    for (std::size_t i = 0; i < sigmas.size(); ++i) {
        sigmas[i] = std::sqrt(var_V_conditional(phi, M, N, file_moments[i].w2, file_moments[i].w3));
    }
    return ci_conditional_combined(v_estimates, sigmas);
}

ConfidenceInterval ci_unconditional(Method method, double mean_estimate, double phi_plugin, double L, double N,
                                    double M) {
    check_count(L, "L");
    check_count(N, "N");
    ConfidenceInterval ci;
    ci.center = mean_estimate;
    switch (method) {
        case Method::U:
            ci.kind = CiKind::UnconditionalU;
            ci.half_width = kZ95 * std::sqrt((2 * phi_plugin - phi_plugin * phi_plugin + 1) / (L * N) +
                                            20 * phi_plugin * phi_plugin / (L * M));
            break;
        case Method::V:
            ci.kind = CiKind::UnconditionalV;
            ci.half_width = kZ95 * std::sqrt((2 * phi_plugin - phi_plugin * phi_plugin + 1) / (L * N));
            break;
        case Method::MLE:
            ci.kind = CiKind::UnconditionalMLE;
            ci.half_width = kZ95 * std::sqrt(mle_asymptotic_var(phi_plugin, L * N));
            break;
        default:
            throw UsageError(fmt::format("no unconditional interval for {}", method_name(method)));
    }
    return ci;
}

}  // namespace xebstats
