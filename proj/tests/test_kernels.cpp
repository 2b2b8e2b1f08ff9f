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

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>

#include "xebstats/kernels.hpp"
#include "xebstats/rng.hpp"

using namespace xebstats;
using kernels::Kernel2x2;

namespace {

std::vector<double> random_vector(std::size_t n, std::uint64_t seed, double lo = 0, double hi = 1) {
    CounterRng r(SeedSpec{seed, 0});
    std::vector<double> x(n);
    for (auto &v : x) {
        v = lo + (hi - lo) * r.uniform();
    }
    return x;
}

const kernels::KernelTable *simd_or_skip() { return kernels::avx2_table(); }

}  // namespace

TEST(Kernels, ScalarButterflyMatchesDefinition) {
    std::vector<double> x = {1, 2, 3, 4, 5, 6, 7, 8};
    Kernel2x2 k{0.9, 0.1, 0.2, 0.8};
    auto y = x;
    kernels::scalar_table().butterfly(y, 2, k);
    // pairs (0,2), (1,3), (4,6), (5,7)
    EXPECT_DOUBLE_EQ(y[0], 0.9 * 1 + 0.1 * 3);
    EXPECT_DOUBLE_EQ(y[2], 0.2 * 1 + 0.8 * 3);
    EXPECT_DOUBLE_EQ(y[5], 0.9 * 6 + 0.1 * 8);
    EXPECT_DOUBLE_EQ(y[7], 0.2 * 6 + 0.8 * 8);
}

TEST(Kernels, ButterflyBitwiseEqualAcrossVariants) {
    const auto *simd = simd_or_skip();
    if (!simd) {
        GTEST_SKIP() << "AVX2 kernels unavailable";
    }
    Kernel2x2 k{0.962, 0.038, 0.021, 0.979};
    for (std::size_t size : {2u, 4u, 8u, 64u, 1024u}) {
        for (std::size_t stride = 1; stride < size; stride *= 2) {
            auto a = random_vector(size, size * 31 + stride);
            auto b = a;
            kernels::scalar_table().butterfly(a, stride, k);
            simd->butterfly(b, stride, k);
            ASSERT_EQ(std::memcmp(a.data(), b.data(), size * sizeof(double)), 0)
                << "size " << size << " stride " << stride;
        }
    }
}

TEST(Kernels, ReductionsAgreeAcrossVariants) {
    const auto *simd = simd_or_skip();
    if (!simd) {
        GTEST_SKIP() << "AVX2 kernels unavailable";
    }
    const auto &sc = kernels::scalar_table();
    for (std::size_t n : {0u, 1u, 3u, 4u, 7u, 1000u, 4099u}) {
        auto x = random_vector(n, n + 1);
        auto y = random_vector(n, n + 2, -1, 1);
        EXPECT_NEAR(sc.sum(x), simd->sum(x), 1e-13 * (1 + n));
        EXPECT_NEAR(sc.dot(x, y), simd->dot(x, y), 1e-13 * (1 + n));
        auto ps = sc.power_sums(x), pv = simd->power_sums(x);
        EXPECT_NEAR(ps.p2, pv.p2, 1e-13 * (1 + n));
        EXPECT_NEAR(ps.p3, pv.p3, 1e-13 * (1 + n));
        EXPECT_NEAR(ps.p4, pv.p4, 1e-13 * (1 + n));
        auto d = random_vector(n, n + 3, -1, 5);
        auto ms = sc.mixture_derivs(d, 0.3), mv = simd->mixture_derivs(d, 0.3);
        EXPECT_NEAR(ms.score, mv.score, 1e-11 * (1 + std::abs(ms.score)));
        EXPECT_NEAR(ms.curvature, mv.curvature, 1e-11 * (1 + std::abs(ms.curvature)));
        auto m2s = sc.mixture_derivs2(d, y, 0.3, 0.2), m2v = simd->mixture_derivs2(d, y, 0.3, 0.2);
        EXPECT_NEAR(m2s.g_a, m2v.g_a, 1e-11 * (1 + std::abs(m2s.g_a)));
        EXPECT_NEAR(m2s.g_b, m2v.g_b, 1e-11 * (1 + std::abs(m2s.g_b)));
        EXPECT_NEAR(m2s.h_aa, m2v.h_aa, 1e-11 * (1 + std::abs(m2s.h_aa)));
        EXPECT_NEAR(m2s.h_ab, m2v.h_ab, 1e-11 * (1 + std::abs(m2s.h_ab)));
        EXPECT_NEAR(m2s.h_bb, m2v.h_bb, 1e-11 * (1 + std::abs(m2s.h_bb)));
    }
}

TEST(Kernels, CompensatedSumIsAccurate) {
    // 1 + many tiny values that a naive left-to-right sum drops
    std::vector<double> x(1 << 16, 1e-17);
    x[0] = 1;
    const double expected = 1 + (x.size() - 1) * 1e-17;
    EXPECT_NEAR(kernels::scalar_table().sum(x), expected, 1e-16);
    if (const auto *simd = kernels::avx2_table()) {
        EXPECT_NEAR(simd->sum(x), expected, 1e-16);
    }
}

TEST(Kernels, MixtureDerivsMatchClosedForm) {
    std::vector<double> d = {-0.5, 0.0, 1.5, 3.0, 0.25};
    double phi = 0.4, score = 0, curv = 0;
    for (double v : d) {
        score += v / (1 + phi * v);
        curv -= v * v / ((1 + phi * v) * (1 + phi * v));
    }
    auto m = kernels::scalar_table().mixture_derivs(d, phi);
    EXPECT_NEAR(m.score, score, 1e-14);
    EXPECT_NEAR(m.curvature, curv, 1e-14);
}

TEST(Kernels, ActiveTableCanBePinned) {
    const auto &before = kernels::active();
    kernels::set_active(kernels::scalar_table());
    EXPECT_EQ(kernels::active().name, "scalar");
    kernels::set_active(before);
    EXPECT_EQ(&kernels::active(), &before);
}
