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

#include "xebstats/special.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "xebstats/errors.hpp"

namespace xebstats {

namespace {

constexpr int kMaxTerms = 100000;
constexpr double kEps = 1e-16;

// log P(a, x) by the power series, valid for x < a + 1.
double log_p_series(double a, double x) {
    double term = 1 / a;
    double sum = term;
    for (int k = 1; k < kMaxTerms; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) {
            break;
        }
    }
    return a * std::log(x) - x - std::lgamma(a) + std::log(sum);
}

// log Q(a, x) by the continued fraction (modified Lentz), valid for x >= a + 1.
double log_q_fraction(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1 - a;
    double c = 1 / tiny;
    double d = 1 / b;
    double h = d;
    for (int i = 1; i < kMaxTerms; ++i) {
        const double an = -i * (i - a);
        b += 2;
        d = an * d + b;
        if (std::abs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::abs(c) < tiny) {
            c = tiny;
        }
        d = 1 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1) < kEps) {
            break;
        }
    }
    return a * std::log(x) - x - std::lgamma(a) + std::log(h);
}

}  // namespace

double log_gamma_q(double a, double x) {
    if (!(a > 0) || !(x >= 0)) {
        throw DomainError(fmt::format("incomplete gamma needs a > 0 and x >= 0 (a={}, x={})", a, x));
    }
    if (x == 0) {
        return 0.0;
    }
    if (x < a + 1) {
        const double log_p = log_p_series(a, x);
        return std::log1p(-std::exp(log_p));
    }
    return log_q_fraction(a, x);
}

double gamma_q(double a, double x) { return std::exp(log_gamma_q(a, x)); }

double chi2_log_sf(double x, double df) {
    if (!(df > 0)) {
        throw DomainError(fmt::format("chi-square needs positive degrees of freedom, got {}", df));
    }
    if (x <= 0) {
        return 0.0;
    }
    return log_gamma_q(df / 2, x / 2);
}

double chi2_sf(double x, double df) { return std::exp(chi2_log_sf(x, df)); }

}  // namespace xebstats
