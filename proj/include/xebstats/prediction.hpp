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

#include <array>
#include <cstdint>
#include <vector>

namespace xebstats {

/// Per-component error probabilities of one circuit.
struct CircuitErrorProfile {
    std::vector<double> e_g1;  // 1-qubit gates
    std::vector<double> e_g2;  // 2-qubit gates
    std::vector<double> e_q;   // per-qubit readout
};

inline constexpr double kErrorGate1 = 0.0016;
inline constexpr double kErrorGate2 = 0.0062;
inline constexpr double kErrorReadout = 0.038;

/// Product of (1 - e) over every entry, accumulated as a sum of log1p(-e).
double fidelity_formula77(const CircuitErrorProfile &profile);

/// (1 - 0.0016)^n_g1 (1 - 0.0062)^n_g2 (1 - 0.038)^n.
double fidelity_simple(std::uint64_t n_g1, std::uint64_t n_g2, std::uint64_t n);

struct GateFidelity {
    double phi_g;   // phi / (1 - q)^n
    double phi_ro;  // phi_g - phi
};

/// Splits a fidelity into total gate fidelity and the readout-only share.
GateFidelity total_gate_fidelity(double phi, unsigned n, double q = kErrorReadout);

/// Reference fidelities by qubit count: the predicted value and the averaged MLE and T estimates.
struct ReferenceRow {
    unsigned n;
    double predicted;
    double avg_mle;
    double avg_t;
};

inline constexpr std::array<ReferenceRow, 8> kReferenceTable{{
    {12, 0.3862, 0.3687, 0.4689},
    {14, 0.3320, 0.3275, 0.4392},
    {16, 0.2828, 0.2725, 0.3917},
    {18, 0.2207, 0.2444, 0.3557},
    {20, 0.1875, 0.2184, 0.3210},
    {22, 0.1554, 0.1651, 0.2989},
    {24, 0.1256, 0.1407, 0.2838},
    {26, 0.1024, 0.1140, 0.2600},
}};

/// Predicted fidelity for `n` from the reference table; throws DomainError for other n.
double reference_fidelity(unsigned n);

}  // namespace xebstats
