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

#include "xebstats/probmodel.hpp"

#include <cmath>

#include <fmt/format.h>

#include "kernels/neumaier.hpp"
#include "xebstats/errors.hpp"
#include "xebstats/kernels.hpp"

namespace xebstats {

namespace {

void check_qubits(unsigned n) {
    if (n < 1 || n > kMaxQubits) {
        throw DimensionError(fmt::format("qubit count {} outside [1, {}]", n, kMaxQubits));
    }
}

// (1-t)^e evaluated as exp(e * log1p(-t)); exact 1 for e = 0.
double pow_one_minus(double t, double e) {
    if (e == 0) {
        return 1.0;
    }
    if (t >= 1) {
        return 0.0;
    }
    return std::exp(e * std::log1p(-t));
}

}  // namespace

ProbabilityVector::ProbabilityVector(unsigned n, std::vector<double> weights) : n_(n) {
    check_qubits(n);
    if (weights.size() != (std::size_t{1} << n)) {
        throw DimensionError(fmt::format("expected {} weights for n={}, got {}", std::size_t{1} << n, n, weights.size()));
    }
    kernels::detail::Neumaier total;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        double w = weights[i];
        if (!(w >= 0) || !std::isfinite(w)) {
            throw DomainError(fmt::format("weight {} at index {} is not a nonnegative finite number", w, i));
        }
        total.add(w);
    }
    if (std::abs(total.value() - 1.0) > 1e-9) {
        throw DomainError(fmt::format("weights sum to {:.17g}, not 1", total.value()));
    }
    weights_ = std::make_shared<const std::vector<double>>(std::move(weights));
}

ProbabilityVector ProbabilityVector::uniform(unsigned n) {
    check_qubits(n);
    std::size_t M = std::size_t{1} << n;
    return ProbabilityVector(n, std::vector<double>(M, 1.0 / static_cast<double>(M)));
}

ProbabilityVector ProbabilityVector::point_mass(unsigned n, std::size_t index) {
    check_qubits(n);
    std::size_t M = std::size_t{1} << n;
    if (index >= M) {
        throw DimensionError(fmt::format("index {} out of range for n={}", index, n));
    }
    std::vector<double> w(M, 0.0);
    w[index] = 1.0;
    return ProbabilityVector(n, std::move(w));
}

ProbabilityVector gen_porter_thomas(unsigned n, SeedSpec seed) {
    check_qubits(n);
    std::size_t M = std::size_t{1} << n;
    std::vector<double> z(M);
    CounterRng rng(seed);
    for (std::size_t i = 0; i < M; ++i) {
        z[i] = -std::log(rng.uniform_open_closed());
    }
    double total = kernels::active().sum(z);
    double inv = 1.0 / total;
    for (double &x : z) {
        x *= inv;
    }
    return ProbabilityVector(n, std::move(z));
}

MomentSummary moments(const ProbabilityVector &pv) {
    auto s = kernels::active().power_sums(pv.weights());
    return {s.p2, s.p3, s.p4};
}

double theoretical_moment(double M, int k) {
    if (!(M >= 1) || k < 1) {
        throw DomainError(fmt::format("theoretical_moment needs M >= 1 and k >= 1 (got M={}, k={})", M, k));
    }
    if (k > 170) {
        throw DomainError(fmt::format("moment order {} too large (k! overflows)", k));
    }
    double r = 1.0;
    for (int j = 0; j < k; ++j) {
        r *= (j + 1) / (M + j);
    }
    return r;
}

double mixture_beta_density(double t, double M, double phi) {
    if (t < 0 || t > 1) {
        return 0.0;
    }
    double tail = pow_one_minus(t, M - 2);
    return (phi * M * t + (1 - phi)) * (M - 1) * tail;
}

double mixture_beta_cdf(double t, double M, double phi) {
    if (t <= 0) {
        return 0.0;
    }
    if (t >= 1) {
        return 1.0;
    }
    double s = pow_one_minus(t, M - 1);
    // Survival of Beta(2, M-1) is (1-t)^(M-1) (1 + (M-1) t); of Beta(1, M-1) it is (1-t)^(M-1).
    double survival = phi * s * (1 + (M - 1) * t) + (1 - phi) * s;
    return 1.0 - survival;
}

double mixture_exp_density(double z, double phi) {
    if (z < 0) {
        return 0.0;
    }
    return (phi * z + (1 - phi)) * std::exp(-z);
}

double mixture_exp_cdf(double z, double phi) {
    if (z <= 0) {
        return 0.0;
    }
    double e = std::exp(-z);
    return 1.0 - (phi * e * (1 + z) + (1 - phi) * e);
}

}  // namespace xebstats
