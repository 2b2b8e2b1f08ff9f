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

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "oracles.hpp"
#include "xebstats/errors.hpp"
#include "xebstats/gof.hpp"
#include "xebstats/special.hpp"

using namespace xebstats;

TEST(Special, GammaQMatchesBoost) {
    for (double a : {0.5, 1.0, 3.5, 50.0, 2000.0}) {
        for (double x : {0.01, 0.7, 3.0, 48.0, 60.0, 1900.0, 2100.0}) {
            const double ref = boost::math::gamma_q(a, x);
            EXPECT_NEAR(gamma_q(a, x), ref, 1e-12 * std::max(ref, 1e-300)) << a << " " << x;
        }
    }
}

TEST(Special, LogSfStaysFiniteInTheFarTail) {
    const double lp = chi2_log_sf(5000, 10);
    EXPECT_TRUE(std::isfinite(lp));
    EXPECT_LT(lp, -2000);
    EXPECT_EQ(chi2_sf(5000, 10), 0.0);
    // continuity with the direct value where it is representable
    EXPECT_NEAR(chi2_log_sf(200, 10), std::log(boost::math::cdf(
                                          boost::math::complement(boost::math::chi_squared(10), 200.0))),
                1e-9);
}

TEST(ChiSquare, HandComputedWithoutPooling) {
    // n = 2 qubits needs four entries; put the last at zero expectation
    ProbabilityVector pi(2, {0.2, 0.3, 0.5, 0.0});
    std::vector<CountEntry> counts = {{0, 25}, {1, 25}, {2, 50}};
    auto r = chi_square(counts, pi, 100, 0, 0.0);
    // the zero-expectation cell with no counts pools into nothing
    const double expected = (25 - 20.0) * (25 - 20) / 20 + (25 - 30.0) * (25 - 30) / 30 + 0;
    EXPECT_NEAR(r.statistic, expected, 1e-12);
    EXPECT_EQ(r.cells, 3u);
    EXPECT_EQ(r.df, 2);
    EXPECT_NEAR(r.p_value, std::exp(-expected / 2), 1e-12);  // 2 df
}

TEST(ChiSquare, PoolsSmallestFirst) {
    // expectations 1, 2, 3, 10, 84 at N = 100 with min_expected 5
    ProbabilityVector pi(3, {0.01, 0.02, 0.03, 0.10, 0.84, 0, 0, 0});
    std::vector<CountEntry> counts = {{0, 2}, {1, 1}, {2, 4}, {3, 9}, {4, 84}};
    auto r = chi_square(counts, pi, 100, 0, 5.0);
    // zeros, then 1, 2, 3 pool to expected 6 and observed 7
    const double expected = 1.0 / 6 + 1.0 / 10 + 0;
    EXPECT_NEAR(r.statistic, expected, 1e-12);
    EXPECT_EQ(r.cells, 3u);
    EXPECT_EQ(r.cells_merged, 6u);
    EXPECT_EQ(r.df, 2);
}

TEST(ChiSquare, DegenerateAndMismatchedInput) {
    ProbabilityVector pi(1, {0.5, 0.5});
    std::vector<CountEntry> counts = {{0, 1}, {1, 2}};
    EXPECT_THROW(chi_square(counts, pi, 3, 0, 5.0), DegenerateBinningError);
    EXPECT_THROW(chi_square(counts, pi, 4, 0, 0.0), DimensionError);
    EXPECT_THROW(chi_square(counts, pi, 3, 1, 0.0), DegenerateBinningError);
}

TEST(ChiSquare, MinimumChiSquarePhiMatchesGrid) {
    auto pv = gen_porter_thomas(8, SeedSpec{8, 0});
    auto pi = sampling_probs(BasicModel{0.45}, pv);
    auto s = draw_sample(pi, nullptr, nullptr, 50000, SeedSpec{8, 1});
    const double best = min_chisq_phi(s.counts, pv, 50000);
    auto stat = [&](double phi) {
        return -(long double)chi_square(s.counts, sampling_probs(BasicModel{phi}, pv), 50000, 1).statistic;
    };
    const double ref = oracle::argmax_1d(stat, 0, 1, 6);
    EXPECT_NEAR(best, ref, 2e-5);
    EXPECT_NEAR(best, 0.45, 0.05);
}

TEST(Histogram, CountsAndOverlay) {
    auto pv = gen_porter_thomas(10, SeedSpec{1, 0});
    auto pi = sampling_probs(BasicModel{0.5}, pv);
    auto s = draw_sample(pi, &pv, nullptr, 20000, SeedSpec{1, 1});
    HistogramSpec spec;
    spec.bins = 50;
    auto h = histogram(s.sampled_w, spec, 1024, 0.5);
    ASSERT_EQ(h.edges.size(), 51u);
    EXPECT_DOUBLE_EQ(h.edges.back(), 10.0 / 1024);
    std::uint64_t total = 0;
    double overlay = 0;
    for (std::size_t k = 0; k < 50; ++k) {
        total += h.counts[k];
        overlay += h.overlay[k];
    }
    EXPECT_EQ(total, 20000u);
    EXPECT_NEAR(overlay, 20000, 1e-6);
    EXPECT_NEAR(h.overlay[3], 20000 * (mixture_beta_cdf(h.edges[4], 1024, 0.5) - mixture_beta_cdf(h.edges[3], 1024, 0.5)),
                1e-8);

    spec.scale = HistogramScale::Z;
    auto z = histogram(s.sampled_w, spec, 1024, 0.5);
    EXPECT_DOUBLE_EQ(z.edges.back(), 10.0);
    EXPECT_NEAR(z.density[0], mixture_exp_density(0.1, 0.5), 1e-15);

    spec.bins = 1;
    EXPECT_THROW(histogram(s.sampled_w, spec, 1024, 0.5), DomainError);
    EXPECT_THROW(histogram({}, HistogramSpec{}, 1024, 0.5), EmptyInputError);
}

TEST(FreqScatter, ExpectedAndObserved) {
    ProbabilityVector pi(2, {0.1, 0.2, 0.3, 0.4});
    std::vector<CountEntry> counts = {{1, 3}, {3, 7}};
    auto pts = freq_scatter(counts, pi, 10, 1.5);
    ASSERT_EQ(pts.size(), 3u);
    EXPECT_EQ(pts[0].index, 1u);
    EXPECT_DOUBLE_EQ(pts[0].expected, 2.0);
    EXPECT_EQ(pts[0].observed, 3u);
    EXPECT_EQ(pts[1].observed, 0u);
}
