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
#include "xebstats/estimators.hpp"
#include "xebstats/noise.hpp"

using namespace xebstats;

namespace {

struct ReadoutCase {
    ProbabilityVector pv = ProbabilityVector::uniform(1);
    ProbabilityVector v = ProbabilityVector::uniform(1);
    Sample sample;
};

ReadoutCase readout_case(unsigned n, double phi, double phi_ro, double q, std::size_t N, std::uint64_t seed) {
    ReadoutCase c;
    c.pv = gen_porter_thomas(n, SeedSpec{seed, 0});
    c.v = readout_noise_vector(c.pv, q);
    auto pi = sampling_probs(ReadoutSymmetricModel{phi, phi_ro, q}, c.pv);
    c.sample = draw_sample(pi, &c.pv, &c.v, N, SeedSpec{seed, 1});
    return c;
}

}  // namespace

TEST(ReadoutMoment, SolvesTheMomentSystem) {
    auto c = readout_case(10, 0.4, 0.2, 0.038, 50000, 4);
    const double M = 1024;
    auto e = estimator_readout_moment(c.sample.sampled_w, *c.sample.sampled_v, c.pv, c.v);
    long double ww = 0, wv = 0, vv = 0;
    for (std::size_t i = 0; i < c.pv.M(); ++i) {
        ww += (long double)c.pv[i] * c.pv[i];
        wv += (long double)c.pv[i] * c.v[i];
        vv += (long double)c.v[i] * c.v[i];
    }
    const double U = e.aux.at("U"), W = e.aux.at("W");
    EXPECT_NEAR(U, estimator_U(c.sample.sampled_w, M).scalar(), 1e-12);
    EXPECT_NEAR(W, statistic_W(*c.sample.sampled_v, M), 1e-12);
    EXPECT_NEAR((double)(M * ww - 1) * e.value[0] + (double)(M * wv - 1) * e.value[1], U, 1e-10);
    EXPECT_NEAR((double)(M * wv - 1) * e.value[0] + (double)(M * vv - 1) * e.value[1], W, 1e-10);
    ASSERT_EQ(e.variance.size(), 4u);
    EXPECT_NEAR(e.value[0], 0.4, 5 * std::sqrt(e.variance[0]));
    EXPECT_NEAR(e.value[1], 0.2, 5 * std::sqrt(e.variance[3]));
}

TEST(ReadoutMoment, SingularSystemRaises) {
    // v = w makes the two columns identical
    auto pv = gen_porter_thomas(6, SeedSpec{1, 1});
    std::vector<double> w = {pv[0], pv[1]};
    EXPECT_THROW(estimator_readout_moment(w, w, pv, pv), DegenerateDenominatorError);
}

TEST(ReadoutMle, MatchesGridOracle) {
    auto c = readout_case(9, 0.35, 0.25, 0.06, 6000, 8);
    const double M = 512;
    auto e = mle_readout(c.sample.sampled_w, *c.sample.sampled_v, M);
    const auto &w = c.sample.sampled_w;
    const auto &v = *c.sample.sampled_v;
    auto f = [&](double s, double t) {
        long double sum = 0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            sum += std::log((long double)s * (w[j] - 1 / M) + (long double)t * (v[j] - 1 / M) + 1 / M);
        }
        return sum;
    };
    auto [rs, rt] = oracle::argmax_triangle(f);
    EXPECT_NEAR(e.value[0], rs, 1e-6);
    EXPECT_NEAR(e.value[1], rt, 1e-6);
    EXPECT_NEAR(loglik_readout(w, v, M, e.value[0], e.value[1]), (double)f(e.value[0], e.value[1]),
                1e-8 * std::abs((double)f(e.value[0], e.value[1])));
    ASSERT_EQ(e.variance.size(), 4u);
    EXPECT_GT(e.variance[0], 0);
    EXPECT_NEAR(e.variance[1], e.variance[2], 1e-15);
}

TEST(ReadoutMle, HandlesBoundaryOptimum) {
    // samples drawn with phi_ro = 0 often put the optimum on the phi_ro = 0 edge
    auto c = readout_case(8, 0.5, 0.0, 0.02, 3000, 12);
    auto e = mle_readout(c.sample.sampled_w, *c.sample.sampled_v, 256);
    EXPECT_GE(e.value[1], 0.0);
    EXPECT_LE(e.value[0] + e.value[1], 1.0 + 1e-12);
    EXPECT_NEAR(e.value[0], 0.5, 0.1);
}

TEST(PhiRoTilde, ScalesW) {
    auto k = readout_constants(12, 0.038, 4096);
    auto e = estimator_phi_ro_tilde(0.1, k);
    EXPECT_NEAR(e.scalar(), 0.1 / (k.G / (k.D * k.D) - 1), 1e-15);
    ReadoutConstants bad{1, 1, 0, 0};
    EXPECT_THROW(estimator_phi_ro_tilde(0.1, bad), DegenerateDenominatorError);
}

TEST(AsymmetricMle, LoglikMatchesBruteForce) {
    const unsigned n = 5;
    auto pv = gen_porter_thomas(n, SeedSpec{5, 5});
    auto s = make_sample(n, {0, 3, 3, 17, 31, 8});
    const double phi_g = 0.6, q1 = 0.05, q2 = 0.02;
    auto S = oracle::asym_signal({pv.weights().begin(), pv.weights().end()}, n, q1, q2);
    const double q = (1 - q1 + q2) / 2;
    long double ref = 0;
    for (auto &c : s.counts) {
        int k = std::popcount(c.index);
        double b = std::pow(q, k) * std::pow(1 - q, n - k);
        ref += c.count * std::log((long double)phi_g * S[c.index] + (1 - phi_g) * b);
    }
    EXPECT_NEAR(loglik_asymmetric(s.counts, pv, phi_g, q1, q2), (double)ref, 1e-12);
}

TEST(AsymmetricMle, ReachesStationaryPoint) {
    const unsigned n = 7;
    auto pv = gen_porter_thomas(n, SeedSpec{6, 0});
    auto pi = sampling_probs(ReadoutAsymmetricModel{0.6, 0.06, 0.02}, pv);
    auto s = draw_sample(pi, nullptr, nullptr, 200000, SeedSpec{6, 1});
    auto e = mle_asymmetric(s.counts, pv);
    ASSERT_EQ(e.value.size(), 3u);
    const double base = loglik_asymmetric(s.counts, pv, e.value[0], e.value[1], e.value[2]);
    // no coordinate move improves the likelihood
    for (int k = 0; k < 3; ++k) {
        for (double h : {-1e-4, 1e-4}) {
            auto x = e.value;
            x[k] += h;
            EXPECT_LE(loglik_asymmetric(s.counts, pv, x[0], x[1], x[2]), base + 1e-7);
        }
    }
    ASSERT_EQ(e.variance.size(), 9u);
    EXPECT_NEAR(e.value[0], 0.6, 5 * std::sqrt(e.variance[0]));
    EXPECT_NEAR(e.value[1], 0.06, 5 * std::sqrt(e.variance[4]));
    EXPECT_NEAR(e.value[2], 0.02, 5 * std::sqrt(e.variance[8]));
}
