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
#include <numeric>

#include "oracles.hpp"
#include "xebstats/errors.hpp"
#include "xebstats/estimators.hpp"
#include "xebstats/noise.hpp"

using namespace xebstats;

namespace {

long double naive_loglik(const std::vector<double> &w, double M, double phi) {
    long double s = 0;
    for (double x : w) {
        s += std::log((long double)phi * x + (1 - (long double)phi) / M);
    }
    return s;
}

Sample basic_sample(unsigned n, double phi, std::size_t N, std::uint64_t seed, ProbabilityVector *out_pv = nullptr) {
    auto pv = gen_porter_thomas(n, SeedSpec{seed, 0});
    auto pi = sampling_probs(BasicModel{phi}, pv);
    if (out_pv) {
        *out_pv = pv;
    }
    return draw_sample(pi, &pv, nullptr, N, SeedSpec{seed, 1});
}

}  // namespace

TEST(Methods, NamesRoundTrip) {
    for (Method m : {Method::U, Method::V, Method::LogU, Method::MLE, Method::T, Method::GeneralMoment,
                     Method::GeneralMLE, Method::ReadoutMoment, Method::ReadoutMLE, Method::PhiRoTilde,
                     Method::AsymmetricMLE}) {
        EXPECT_EQ(parse_method(method_name(m)), m);
    }
    EXPECT_EQ(parse_method("mle"), Method::MLE);
    EXPECT_EQ(parse_method("logu"), Method::LogU);
    EXPECT_THROW(parse_method("median"), UsageError);
}

TEST(EstimatorU, HandComputed) {
    std::vector<double> w = {0.5, 0.25, 0.125};
    const double M = 4;
    auto e = estimator_U(w, M);
    EXPECT_DOUBLE_EQ(e.scalar(), M * (0.875 / 3) - 1);
    // sample variance of M w over N
    double mean = M * 0.875 / 3, ss = 0;
    for (double x : w) {
        ss += (M * x - mean) * (M * x - mean);
    }
    EXPECT_NEAR(*e.scalar_variance(), ss / 2 / 3, 1e-15);
    EXPECT_THROW(estimator_U({}, M), EmptyInputError);
}

TEST(EstimatorV, DividesByScaledSecondMoment) {
    std::vector<double> w = {0.5, 0.25, 0.125};
    auto u = estimator_U(w, 4);
    auto v = estimator_V(w, 4, 0.3);
    EXPECT_NEAR(v.scalar(), u.scalar() / (4 * 0.3 - 1), 1e-15);
    EXPECT_THROW(estimator_V(w, 4, 0.25), DegenerateDenominatorError);
}

TEST(EstimatorLog, HandComputed) {
    std::vector<double> w = {0.5, 0.25};
    auto e = estimator_log(w, 4);
    EXPECT_NEAR(e.scalar(), (std::log(0.5) + std::log(0.25)) / 2 + kEulerGamma + std::log(4.0), 1e-15);
    std::vector<double> z = {0.5, 0.0};
    EXPECT_THROW(estimator_log(z, 4), DomainError);
}

TEST(EstimatorLog, ZeroForUniformSampling) {
    // phi = 0: E log w~ = -log M - gamma for Dirichlet(1) in the large-M limit
    auto s = basic_sample(14, 0.0, 200000, 3);
    auto e = estimator_log(s.sampled_w, 1 << 14);
    EXPECT_NEAR(e.scalar(), 0.0, 5 * std::sqrt(*e.scalar_variance()));
}

TEST(MleBasic, MatchesGridOracle) {
    ProbabilityVector pv = ProbabilityVector::uniform(1);
    for (double phi : {0.05, 0.3862, 0.8}) {
        auto s = basic_sample(10, phi, 5000, static_cast<std::uint64_t>(phi * 1e4), &pv);
        const double M = 1024;
        auto e = mle_basic(s.sampled_w, M);
        double ref = oracle::argmax_1d([&](double p) { return naive_loglik(s.sampled_w, M, p); }, 0, 1);
        EXPECT_NEAR(e.scalar(), ref, 1e-7) << phi;
        EXPECT_NEAR(loglik_basic(s.sampled_w, M, e.scalar()), (double)naive_loglik(s.sampled_w, M, e.scalar()),
                    1e-8 * std::abs((double)naive_loglik(s.sampled_w, M, e.scalar())));
        ASSERT_TRUE(e.scalar_variance());
        // -1 / second derivative at the optimum
        double h = 0;
        for (double x : s.sampled_w) {
            double d = M * x - 1;
            h += d * d / ((1 + e.scalar() * d) * (1 + e.scalar() * d));
        }
        EXPECT_NEAR(*e.scalar_variance(), 1 / h, 1e-6 / h);
        EXPECT_TRUE(e.iterations.has_value());
    }
}

TEST(MleBasic, StopsAtBoundary) {
    // every draw is a low-probability outcome, so the likelihood peaks at phi = 0
    std::vector<double> w(100, 0.1 / 1024);
    w[0] = 0.5 / 1024;
    auto e = mle_basic(w, 1024);
    EXPECT_EQ(e.scalar(), 0.0);
    std::vector<double> hi(100, 5.0 / 1024);
    auto f = mle_basic(hi, 1024);
    EXPECT_EQ(f.scalar(), 1.0);
}

TEST(MleBasic, FlatLikelihoodRaises) {
    std::vector<double> w(10, 1.0 / 64);
    EXPECT_THROW(mle_basic(w, 64), FlatLikelihoodError);
}

TEST(MleBasic, RespectsCustomDomain) {
    auto s = basic_sample(8, 0.6, 3000, 21);
    MleConfig cfg;
    cfg.domain = std::vector<std::array<double, 2>>{{0.0, 0.2}};
    auto e = mle_basic(s.sampled_w, 256, cfg);
    EXPECT_DOUBLE_EQ(e.scalar(), 0.2);
}

TEST(EstimatorT, MatchesPairCountFormula) {
    std::vector<std::uint32_t> idx = {3, 3, 3, 1, 5, 5, 0, 2, 2, 2, 2};
    auto s = make_sample(3, idx);
    const double M = 8, N = idx.size();
    long double pairs = 0;  // ordered colliding pairs
    for (std::size_t a = 0; a < idx.size(); ++a) {
        for (std::size_t b = 0; b < idx.size(); ++b) {
            pairs += a != b && idx[a] == idx[b];
        }
    }
    const long double t2 = M * (M + 1) / ((N * N - N) * (M - 1)) * (pairs - (N * N - N) / M);
    auto e = estimator_T(s.counts, M, s.total());
    EXPECT_NEAR(e.aux.at("T2"), (double)t2, 1e-14);
    EXPECT_NEAR(e.scalar(), std::sqrt((double)t2), 1e-14);
    EXPECT_THROW(estimator_T(make_sample(3, {1}).counts, M, 1), EmptyInputError);
}

TEST(EstimatorT, ClampsNegativeSquare) {
    auto s = make_sample(4, {0, 1, 2, 3, 4, 5});
    auto e = estimator_T(s.counts, 16, 6);
    EXPECT_LT(e.aux.at("T2"), 0);
    EXPECT_EQ(e.scalar(), 0.0);
}

TEST(GeneralMoment, PlainMeansWithoutComponents) {
    std::vector<std::vector<double>> samples = {{0.1, 0.2}, {0.3, 0.05}};
    auto e = estimator_general_moment(samples, 8);
    ASSERT_EQ(e.value.size(), 2u);
    EXPECT_NEAR(e.value[0], 8 * 0.15 - 1, 1e-15);
    EXPECT_NEAR(e.value[1], 8 * 0.175 - 1, 1e-15);
    EXPECT_EQ(e.variance.size(), 4u);
}

TEST(GeneralMoment, GramCorrectionSolvesNormalEquations) {
    auto a = gen_porter_thomas(8, SeedSpec{1, 1});
    auto b = gen_porter_thomas(8, SeedSpec{1, 2});
    auto u = ProbabilityVector::uniform(8);
    std::vector<ProbabilityVector> comps = {a, b, u};
    auto pi = sampling_probs(GeneralPModel{{0.3, 0.2, 0.5}, comps}, a);
    auto s = draw_sample(pi, nullptr, nullptr, 20000, SeedSpec{2, 2});
    std::vector<std::vector<double>> per;
    for (auto &c : comps) {
        per.push_back(gather(c, s.indices));
    }
    const double M = 256;
    auto e = estimator_general_moment(per, M, comps);
    ASSERT_EQ(e.value.size(), 3u);
    for (std::size_t k = 0; k < 3; ++k) {
        double lhs = 0;
        for (std::size_t l = 0; l < 3; ++l) {
            long double g = 0;
            for (std::size_t i = 0; i < a.M(); ++i) {
                g += (long double)comps[k][i] * comps[l][i];
            }
            lhs += M * (double)g * e.value[l];
        }
        double mean = 0;
        for (double x : per[k]) {
            mean += M * x;
        }
        mean /= per[k].size();
        EXPECT_NEAR(lhs, mean, 1e-9);  // M G phi = U + 1
    }
    EXPECT_NEAR(e.value[0], 0.3, 5 * std::sqrt(e.variance[0]));
    EXPECT_NEAR(e.value[1], 0.2, 5 * std::sqrt(e.variance[4]));
}

TEST(MleGeneral, TwoComponentsReduceToBasicModel) {
    ProbabilityVector pv = ProbabilityVector::uniform(1);
    auto s = basic_sample(9, 0.45, 4000, 5, &pv);
    auto u = ProbabilityVector::uniform(9);
    std::vector<std::vector<double>> per = {s.sampled_w, gather(u, s.indices)};
    auto g = mle_general(per, 512);
    auto b = mle_basic(s.sampled_w, 512);
    ASSERT_EQ(g.value.size(), 2u);
    EXPECT_NEAR(g.value[0], b.scalar(), 1e-7);
    EXPECT_NEAR(g.value[0] + g.value[1], 1.0, 1e-15);
    EXPECT_NEAR(g.variance[0], *b.scalar_variance(), 1e-6 * *b.scalar_variance());
    EXPECT_NEAR(g.variance[1], -g.variance[0], 1e-12);
}

TEST(MleGeneral, ThreeComponentsMatchGridOracle) {
    auto a = gen_porter_thomas(7, SeedSpec{3, 1});
    auto b = gen_porter_thomas(7, SeedSpec{3, 2});
    auto u = ProbabilityVector::uniform(7);
    std::vector<ProbabilityVector> comps = {a, b, u};
    auto pi = sampling_probs(GeneralPModel{{0.35, 0.25, 0.4}, comps}, a);
    auto s = draw_sample(pi, nullptr, nullptr, 3000, SeedSpec{3, 3});
    std::vector<std::vector<double>> per;
    for (auto &c : comps) {
        per.push_back(gather(c, s.indices));
    }
    auto e = mle_general(per, 128);
    auto f = [&](double p0, double p1) {
        long double sum = 0;
        for (std::size_t j = 0; j < s.indices.size(); ++j) {
            sum += std::log((long double)p0 * per[0][j] + (long double)p1 * per[1][j] + (1 - p0 - p1) * per[2][j]);
        }
        return sum;
    };
    auto [r0, r1] = oracle::argmax_triangle(f);
    EXPECT_NEAR(e.value[0], r0, 1e-6);
    EXPECT_NEAR(e.value[1], r1, 1e-6);
    EXPECT_NEAR(loglik_general(per, e.value), (double)f(e.value[0], e.value[1]), 1e-7);
}

TEST(MleGeneral, RejectsMismatchedInput) {
    std::vector<std::vector<double>> one = {{0.1}};
    EXPECT_THROW(mle_general(one, 8), DimensionError);
    std::vector<std::vector<double>> ragged = {{0.1, 0.2}, {0.1}};
    EXPECT_THROW(mle_general(ragged, 8), DimensionError);
}
