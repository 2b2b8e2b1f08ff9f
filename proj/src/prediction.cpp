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

#include "xebstats/prediction.hpp"

#include <cmath>

#include <fmt/format.h>

#include "xebstats/errors.hpp"

namespace xebstats {

double fidelity_formula77(const CircuitErrorProfile &profile) {
    double log_f = 0;
    for (const auto *list : {&profile.e_g1, &profile.e_g2, &profile.e_q}) {
        for (double e : *list) {
            if (!(e >= 0 && e < 1)) {
                throw DomainError(fmt::format("error probability {} outside [0, 1)", e));
            }
            log_f += std::log1p(-e);
        }
    }
    return std::exp(log_f);
}

double fidelity_simple(std::uint64_t n_g1, std::uint64_t n_g2, std::uint64_t n) {
    const double log_f = static_cast<double>(n_g1) * std::log1p(-kErrorGate1) +
                         static_cast<double>(n_g2) * std::log1p(-kErrorGate2) +
                         static_cast<double>(n) * std::log1p(-kErrorReadout);
    return std::exp(log_f);
}

GateFidelity total_gate_fidelity(double phi, unsigned n, double q) {
    if (!(phi >= 0 && phi <= 1)) {
        throw DomainError(fmt::format("phi = {} outside [0, 1]", phi));
    }
    if (!(q >= 0 && q < 1)) {
        throw DomainError(fmt::format("readout rate {} outside [0, 1)", q));
    }
    const double phi_g = phi / std::exp(n * std::log1p(-q));
    if (phi_g > 1) {
        throw DomainError(fmt::format("phi = {} at n = {} implies total gate fidelity {} > 1", phi, n, phi_g));
    }
    return {phi_g, phi_g - phi};
}

double reference_fidelity(unsigned n) {
    for (const auto &row : kReferenceTable) {
        if (row.n == n) {
            return row.predicted;
        }
    }
    throw DomainError(fmt::format("no reference fidelity for n = {}", n));
}

}  // namespace xebstats
