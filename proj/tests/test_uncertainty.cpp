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

#include "oracles.hpp"
#include "xebstats/errors.hpp"
#include "xebstats/uncertainty.hpp"

using namespace xebstats;

TEST(ConditionalVariance, MatchesFormula) {
    const double phi = 0.33, M = 1024, N = 1e5, w2 = 2.1 / M, w3 = 6.5 / (M * M);
    const double a = M * w2 - 1;
    const double expected = (phi * (M * M * w3 - 3 * M * w2 + 2) - phi * phi * a * a + a) / N;
    EXPECT_NEAR(var_U_conditional(phi, M, N, w2, w3), expected, 1e-15);
    EXPECT_NEAR(var_V_conditional(phi, M, N, w2, w3), expected / (a * a), 1e-15);
    EXPECT_THROW(var_V_conditional(phi, M, N, 1 / M, w3), DegenerateDenominatorError);
    EXPECT_THROW(var_U_conditional(1.5, M, N, w2, w3), DomainError);
}

TEST(ConditionalVariance, MatchesDirectVarianceOfMw) {
    // Var(M w~) under pi, from the full vector, equals N * var_U_conditional
    auto pv = gen_porter_thomas(8, SeedSpec{2, 2});
    const double phi = 0.4, M = 256;
    long double m1 = 0, m2 = 0;
    for (double w : pv.weights()) {
        long double p = phi * w + (1 - phi) / M;
        m1 += p * M * w;
        m2 += p * M * w * M * w;
    }
    auto mom = moments(pv);
    EXPECT_NEAR(var_U_conditional(phi, M, 1, mom.w2, mom.w3), (double)(m2 - m1 * m1), 1e-12);
}

TEST(UnconditionalVariance, Forms) {
    const double phi = 0.3, M = 4096, N = 5e5;
    EXPECT_NEAR(var_unconditional(Method::V, phi, M, N), (2 * phi - phi * phi + 1) / N, 1e-20);
    EXPECT_NEAR(var_unconditional(Method::U, phi, M, N), (2 * phi - phi * phi + 1) / N + 20 * phi * phi / M, 1e-20);
    EXPECT_NEAR(var_unconditional(Method::LogU, phi, M, N), (M_PI * M_PI / 6 - phi * phi) / N, 1e-20);
    EXPECT_NEAR(var_unconditional(Method::MLE, phi, M, N), mle_asymptotic_var(phi, N), 1e-20);
    EXPECT_THROW(var_unconditional(Method::T, phi, M, N), UsageError);
}

TEST(MleQuadrature, MatchesSimpsonOracle) {
    for (double phi : {0.0, 0.1, 0.3862, 0.7, 0.95}) {
        double err = 0;
        const double I = mle_information_integral(phi, &err);
        EXPECT_NEAR(I, oracle::mle_information(phi), 1e-10) << phi;
        EXPECT_LT(err, 1e-6);
    }
    EXPECT_NEAR(mle_asymptotic_var(0.0, 1.0), 1.0, 1e-12);
    EXPECT_THROW(mle_information_integral(1.0), DomainError);
    EXPECT_THROW(mle_asymptotic_var(0.3, 0), DomainError);
}

TEST(FisherInfo, MatchesDirectSum) {
    auto pv = gen_porter_thomas(7, SeedSpec{3, 3});
    const double phi = 0.25, M = 128;
    long double s = 0;
    for (double w : pv.weights()) {
        s += (w - 1 / M) * (w - 1 / M) / (phi * w + (1 - phi) / M);
    }
    EXPECT_NEAR(fisher_info(phi, pv), (double)s, 1e-10 * (double)s);
    EXPECT_THROW(fisher_info(1.0, pv), DomainError);
}

TEST(FisherInfo, ApproachesQuadratureForLargeM) {
    auto pv = gen_porter_thomas(18, SeedSpec{4, 4});
    const double phi = 0.4;
    EXPECT_NEAR(fisher_info(phi, pv), mle_information_integral(phi), 0.02);
}

TEST(VarianceReport, FillsAvailableFields) {
    MomentSummary m{2.0 / 4097, 6.0 / (4097.0 * 4098), 0};
    auto r = variance_report(Method::V, 0.3, 4096, 1e5, m);
    ASSERT_TRUE(r.conditional && r.unconditional);
    EXPECT_NEAR(*r.conditional, var_V_conditional(0.3, 4096, 1e5, m.w2, m.w3), 1e-18);
    auto l = variance_report(Method::LogU, 0.3, 4096, 1e5);
    EXPECT_FALSE(l.conditional);
    EXPECT_TRUE(l.unconditional);
}

TEST(Intervals, SingleAndCombined) {
    auto s = ci_conditional_single(0.4, 0.01);
    EXPECT_DOUBLE_EQ(s.half_width, 1.96 * 0.01);
    EXPECT_TRUE(s.contains(0.41));
    EXPECT_FALSE(s.contains(0.42));
    EXPECT_THROW(ci_conditional_single(0.4, -1), DomainError);

    std::vector<double> est = {0.3, 0.4}, sig = {0.01, 0.02};
    auto c = ci_conditional_combined(est, sig);
    const double w1 = 1e4, w2 = 2.5e3;
    EXPECT_NEAR(c.center, (0.3 * w1 + 0.4 * w2) / (w1 + w2), 1e-15);
    EXPECT_NEAR(c.half_width, 1.96 / std::sqrt(w1 + w2), 1e-15);
    EXPECT_EQ(c.kind, CiKind::ConditionalCombined);
    std::vector<double> short_sig = {0.01};
    EXPECT_THROW(ci_conditional_combined(est, short_sig), DimensionError);
}

TEST(Intervals, CombinedVUsesPluginAverage) {
    std::vector<double> v = {0.3, 0.34};
    std::vector<MomentSummary> m = {{2.0 / 1025, 6.2 / (1025.0 * 1026), 0}, {1.9 / 1025, 5.8 / (1025.0 * 1026), 0}};
    auto c = ci_conditional_combined_v(v, m, 1024, 1e5);
    std::vector<double> sig = {std::sqrt(var_V_conditional(0.32, 1024, 1e5, m[0].w2, m[0].w3)),
                               std::sqrt(var_V_conditional(0.32, 1024, 1e5, m[1].w2, m[1].w3))};
    auto ref = ci_conditional_combined(v, sig);
    EXPECT_NEAR(c.center, ref.center, 1e-15);
    EXPECT_NEAR(c.half_width, ref.half_width, 1e-15);
}

TEST(Intervals, Unconditional) {
    auto v = ci_unconditional(Method::V, 0.39, 0.3862, 4, 1e5, 4096);
    EXPECT_NEAR(v.half_width, 1.96 * std::sqrt(var_unconditional(Method::V, 0.3862, 4096, 4e5)), 1e-15);
    auto m = ci_unconditional(Method::MLE, 0.39, 0.3862, 4, 1e5, 4096);
    EXPECT_LT(m.half_width, v.half_width);
    auto u = ci_unconditional(Method::U, 0.39, 0.3862, 4, 1e5, 4096);
    EXPECT_GT(u.half_width, v.half_width);
    EXPECT_THROW(ci_unconditional(Method::T, 0.3, 0.3, 1, 1e5, 4096), UsageError);
    EXPECT_EQ(ci_kind_name(CiKind::UnconditionalMLE), "UnconditionalMLE");
}
