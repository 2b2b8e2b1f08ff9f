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

// Data-parallel inner loops. Each kernel has a scalar reference implementation and, on x86-64,
// an AVX2 variant. The active table is chosen once at first use from the CPU's capabilities and
// can be pinned with XEBSTATS_SIMD=scalar|avx2.

#include <array>
#include <cstddef>
#include <span>
#include <string_view>

namespace xebstats::kernels {

/// 2x2 kernel applied to every (a, b) pair of a tensor-product pass:
///   a' = k00*a + k01*b,  b' = k10*a + k11*b.
struct Kernel2x2 {
    double k00, k01, k10, k11;
};

/// Neumaier-compensated power sums of a vector: sum x^2, sum x^3, sum x^4.
struct PowerSums {
    double p2 = 0, p3 = 0, p4 = 0;
};

/// Score and curvature of sum_j log(1 + phi*d_j):
///   score = sum d/(1+phi d),  curvature = -sum d^2/(1+phi d)^2.
struct MixtureDerivs {
    double score = 0, curvature = 0;
};

/// Two-direction version for sum_j log(1 + s*a_j + t*b_j).
struct MixtureDerivs2 {
    double g_a = 0, g_b = 0;
    double h_aa = 0, h_ab = 0, h_bb = 0;  // second derivatives (negative semidefinite)
};

struct KernelTable {
    std::string_view name;
    /// In-place pass over pairs (i, i + stride) with (i & stride) == 0. `stride` is a power of
    /// two and `data.size()` a multiple of 2*stride.
    void (*butterfly)(std::span<double> data, std::size_t stride, Kernel2x2 k);
    PowerSums (*power_sums)(std::span<const double> x);
    /// Neumaier-compensated plain sum.
    double (*sum)(std::span<const double> x);
    /// Compensated dot product.
    double (*dot)(std::span<const double> x, std::span<const double> y);
    MixtureDerivs (*mixture_derivs)(std::span<const double> d, double phi);
    MixtureDerivs2 (*mixture_derivs2)(std::span<const double> a, std::span<const double> b, double s, double t);
};

const KernelTable &scalar_table();
/// nullptr when the AVX2 variant is not compiled in or the CPU lacks AVX2.
const KernelTable *avx2_table();

/// The table used by the library.
const KernelTable &active();

/// Overrides the active table (tests and benchmarking). Not thread-safe with concurrent use.
void set_active(const KernelTable &table);

}  // namespace xebstats::kernels
