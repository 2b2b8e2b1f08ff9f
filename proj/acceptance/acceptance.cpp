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

// Acceptance checks. Prints one PASS/FAIL line per criterion; `--only k` runs criterion k.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "oracles.hpp"
#include "xebstats/estimators.hpp"
#include "xebstats/gof.hpp"
#include "xebstats/noise.hpp"
#include "xebstats/prediction.hpp"
#include "xebstats/probmodel.hpp"
#include "xebstats/uncertainty.hpp"

using namespace xebstats;

namespace {

constexpr std::uint64_t kBaseSeed = 20191023;

struct Outcome {
    bool pass;
    std::string detail;
};

/// Seed for draw `k` of repetition `rep` in criterion `c`.
SeedSpec seed_for(int c, std::uint64_t rep, std::uint64_t k) {
    return SeedSpec{kBaseSeed, rep}.purpose(static_cast<std::uint64_t>(c) * 64 + k);
}

struct Stats {
    double mean = 0, sd = 0, var = 0;
    std::size_t n = 0;

    double se() const { return sd / std::sqrt(static_cast<double>(n)); }
};

Stats stats(const std::vector<double> &x) {
    Stats s;
    s.n = x.size();
    s.mean = std::accumulate(x.begin(), x.end(), 0.0) / s.n;
    double ss = 0;
    for (double v : x) {
        ss += (v - s.mean) * (v - s.mean);
    }
    s.var = ss / (s.n - 1);
    s.sd = std::sqrt(s.var);
    return s;
}

bool within_se(const Stats &s, double target, double k = 3) { return std::abs(s.mean - target) <= k * s.se(); }

double z_score(const Stats &s, double target) { return (s.mean - target) / s.se(); }

// 1. Dirichlet moment law.
Outcome c1() {
    const unsigned n = 12;
    const double M = 4096;
    std::vector<double> w2;
    for (int r = 0; r < 200; ++r) {
        w2.push_back(moments(gen_porter_thomas(n, seed_for(1, r, 0))).w2);
    }
    auto s = stats(w2);
    const double target = 2 / (M + 1);
    const double rel = std::abs(s.mean / target - 1);
    return {rel <= 0.02, fmt::format("mean w2 = {:.6e}, 2/(M+1) = {:.6e}, rel diff {:.3f}%", s.mean, target, 100 * rel)};
}

// 2. Conditional bias of U; V and MLE unbiased for phi on a fixed vector.
Outcome c2() {
    const unsigned n = 14;
    const double M = 1 << n, phi = 0.3320;
    auto pv = gen_porter_thomas(n, seed_for(2, 0, 0));
    auto mom = moments(pv);
    auto pi = sampling_probs(BasicModel{phi}, pv);
    std::vector<double> U, V, L;
    for (int r = 0; r < 100; ++r) {
        auto s = draw_sample(pi, &pv, nullptr, 500000, seed_for(2, r, 1));
        U.push_back(estimator_U(s.sampled_w, M).scalar());
        V.push_back(estimator_V(s.sampled_w, M, mom.w2).scalar());
        L.push_back(mle_basic(s.sampled_w, M).scalar());
    }
    const double u_target = phi * (M * mom.w2 - 1);
    auto su = stats(U), sv = stats(V), sl = stats(L);
    bool ok = within_se(su, u_target) && within_se(sv, phi) && within_se(sl, phi);
    return {ok, fmt::format("U {:.5f} vs phi(Mw2-1) {:.5f} (z {:+.2f}); V {:.5f} (z {:+.2f}); MLE {:.5f} (z {:+.2f})",
                            su.mean, u_target, z_score(su, u_target), sv.mean, z_score(sv, phi), sl.mean,
                            z_score(sl, phi))};
}

// 3. Conditional variance formulas.
Outcome c3() {
    const unsigned n = 14;
    const double M = 1 << n, phi = 0.332, N = 1e5;
    auto pv = gen_porter_thomas(n, seed_for(3, 0, 0));
    auto mom = moments(pv);
    auto pi = sampling_probs(BasicModel{phi}, pv);
    std::vector<double> U, V;
    for (int r = 0; r < 200; ++r) {
        auto s = draw_sample(pi, &pv, nullptr, static_cast<std::size_t>(N), seed_for(3, r, 1));
        U.push_back(estimator_U(s.sampled_w, M).scalar());
        V.push_back(estimator_V(s.sampled_w, M, mom.w2).scalar());
    }
    const double fu = var_U_conditional(phi, M, N, mom.w2, mom.w3);
    const double fv = var_V_conditional(phi, M, N, mom.w2, mom.w3);
    const double ru = stats(U).var / fu - 1, rv = stats(V).var / fv - 1;
    bool ok = std::abs(ru) <= 0.10 && std::abs(rv) <= 0.10;
    return {ok, fmt::format("Var(U) {:.4e} vs {:.4e} ({:+.1f}%); Var(V) {:.4e} vs {:.4e} ({:+.1f}%)", stats(U).var, fu,
                            100 * ru, stats(V).var, fv, 100 * rv)};
}

// 4. Log-estimator crossover. Each phi uses one fixed vector, so the spread is sampling variance.
Outcome c4() {
    const unsigned n = 12;
    const double M = 1 << n;
    std::string detail;
    bool ok = true;
    int k = 0;
    for (double phi : {0.40, 0.20}) {
        auto pv = gen_porter_thomas(n, seed_for(4, 0, k));
        auto pi = sampling_probs(BasicModel{phi}, pv);
        std::vector<double> U, LU;
        for (int r = 0; r < 200; ++r) {
            auto s = draw_sample(pi, &pv, nullptr, 500000, seed_for(4, r, 10 + k));
            U.push_back(estimator_U(s.sampled_w, M).scalar());
            LU.push_back(estimator_log(s.sampled_w, M).scalar());
        }
        const double vu = stats(U).var, vl = stats(LU).var;
        const bool expect_log_smaller = phi > 0.32;
        ok = ok && (expect_log_smaller ? vl < vu : vl > vu);
        detail += fmt::format("{}phi={:.2f}: Var(U_log)/Var(U) = {:.3f}", k ? "; " : "", phi, vl / vu);
        ++k;
    }
    return {ok, detail};
}

// 5. T estimator: unbiased square and spread growth with n.
Outcome c5() {
    std::vector<double> T2, T12;
    {
        const unsigned n = 12;
        const double M = 1 << n, phi = 0.3862;
        for (int r = 0; r < 100; ++r) {
            auto pv = gen_porter_thomas(n, seed_for(5, r, 0));
            auto pi = sampling_probs(BasicModel{phi}, pv);
            auto s = draw_sample(pi, nullptr, nullptr, 500000, seed_for(5, r, 1));
            auto e = estimator_T(s.counts, M, s.total());
            T2.push_back(e.aux.at("T2"));
            T12.push_back(e.scalar());
        }
    }
    std::vector<double> T26;
    {
        // One n = 26 vector: its circuit-to-circuit variation is negligible next to sampling noise.
        const unsigned n = 26;
        const double M = static_cast<double>(1u << n), phi = reference_fidelity(26);
        auto pv = gen_porter_thomas(n, seed_for(5, 0, 2));
        AliasTable table(sampling_probs(BasicModel{phi}, pv).weights());
        pv = ProbabilityVector::uniform(1);
        for (int r = 0; r < 100; ++r) {
            CounterRng rng(seed_for(5, r, 3));
            std::vector<std::uint32_t> idx(500000);
            for (auto &i : idx) {
                i = table.draw(rng);
            }
            auto s = make_sample(n, std::move(idx));
            T26.push_back(estimator_T(s.counts, M, s.total()).scalar());
        }
    }
    const double phi2 = 0.3862 * 0.3862;
    auto s2 = stats(T2);
    const double rel = std::abs(s2.mean / phi2 - 1);
    const double ratio = stats(T26).sd / stats(T12).sd;
    return {rel <= 0.05 && ratio >= 5,
            fmt::format("mean T2 {:.5f} vs phi^2 {:.5f} ({:.2f}%); SD(T) n=26 {:.4f} / n=12 {:.4f} = {:.1f}x", s2.mean,
                        phi2, 100 * rel, stats(T26).sd, stats(T12).sd, ratio)};
}

// 6. Fast readout transform against the brute-force sum.
Outcome c6() {
    CounterRng rng(seed_for(6, 0, 0));
    double worst = 0;
    for (int c = 0; c < 50; ++c) {
        const unsigned n = 1 + static_cast<unsigned>(rng() % 10);
        const double q = 0.5 * rng.uniform_open_closed();
        auto pv = gen_porter_thomas(n, seed_for(6, c, 1));
        auto fast = readout_noise_vector(pv, q);
        auto slow = oracle::readout_v({pv.weights().begin(), pv.weights().end()}, n, q);
        for (std::size_t i = 0; i < pv.M(); ++i) {
            worst = std::max(worst, std::abs(fast[i] - slow[i]));
        }
    }
    return {worst <= 1e-12, fmt::format("max abs difference {:.3e} over 50 cases", worst)};
}

// 7. Readout model recovery.
Outcome c7() {
    const unsigned n = 12;
    const double M = 1 << n, phi = 0.3862, phi_ro = 0.2286, q = kErrorReadout;
    std::vector<double> mle_phi, mle_ro, mom_phi, mom_ro;
    for (int r = 0; r < 100; ++r) {
        auto pv = gen_porter_thomas(n, seed_for(7, r, 0));
        auto v = readout_noise_vector(pv, q);
        auto pi = sampling_probs(ReadoutSymmetricModel{phi, phi_ro, q}, pv);
        auto s = draw_sample(pi, &pv, &v, 500000, seed_for(7, r, 1));
        auto a = mle_readout(s.sampled_w, *s.sampled_v, M);
        auto b = estimator_readout_moment(s.sampled_w, *s.sampled_v, pv, v);
        mle_phi.push_back(a.value[0]);
        mle_ro.push_back(a.value[1]);
        mom_phi.push_back(b.value[0]);
        mom_ro.push_back(b.value[1]);
    }
    auto a0 = stats(mle_phi), a1 = stats(mle_ro), b0 = stats(mom_phi), b1 = stats(mom_ro);
    bool ok = within_se(a0, phi) && within_se(a1, phi_ro) && within_se(b0, phi) && within_se(b1, phi_ro);
    return {ok, fmt::format("MLE ({:.4f} z {:+.2f}, {:.4f} z {:+.2f}); moment ({:.4f} z {:+.2f}, {:.4f} z {:+.2f})",
                            a0.mean, z_score(a0, phi), a1.mean, z_score(a1, phi_ro), b0.mean, z_score(b0, phi), b1.mean,
                            z_score(b1, phi_ro))};
}

// 8. Asymmetric readout model recovery.
Outcome c8() {
    const unsigned n = 12;
    const double phi_g = 0.6148, q1 = 0.055, q2 = 0.023;
    std::vector<double> e0, e1, e2;
    for (int r = 0; r < 30; ++r) {
        auto pv = gen_porter_thomas(n, seed_for(8, r, 0));
        auto pi = sampling_probs(ReadoutAsymmetricModel{phi_g, q1, q2}, pv);
        auto s = draw_sample(pi, nullptr, nullptr, 500000, seed_for(8, r, 1));
        auto e = mle_asymmetric(s.counts, pv);
        e0.push_back(e.value[0]);
        e1.push_back(e.value[1]);
        e2.push_back(e.value[2]);
    }
    auto s0 = stats(e0), s1 = stats(e1), s2 = stats(e2);
    bool ok = within_se(s0, phi_g) && within_se(s1, q1) && within_se(s2, q2);
    return {ok, fmt::format("phi_g {:.4f} (z {:+.2f}), q1 {:.5f} (z {:+.2f}), q2 {:.5f} (z {:+.2f})", s0.mean,
                            z_score(s0, phi_g), s1.mean, z_score(s1, q1), s2.mean, z_score(s2, q2))};
}

// 9. Chi-square calibration under the null.
Outcome c9() {
    const unsigned n = 8;
    const double phi = 0.3;
    std::vector<double> stat;
    int rejected = 0;
    int df = 0;
    for (int r = 0; r < 500; ++r) {
        auto pv = gen_porter_thomas(n, seed_for(9, r, 0));
        auto pi = sampling_probs(BasicModel{phi}, pv);
        auto s = draw_sample(pi, nullptr, nullptr, 50000, seed_for(9, r, 1));
        auto c = chi_square(s.counts, pi, 50000);
        stat.push_back(c.statistic);
        rejected += c.p_value < 0.05;
        df = c.df;
    }
    auto s = stats(stat);
    const double rel = std::abs(s.mean / df - 1);
    const double rate = rejected / 500.0;
    return {rel <= 0.05 && rate >= 0.03 && rate <= 0.07,
            fmt::format("mean statistic {:.2f} vs df {} ({:.2f}%); rejection rate {:.1f}%", s.mean, df, 100 * rel, 100 * rate)};
}

// 10. MLE asymptotic variance by quadrature.
Outcome c10() {
    const double at_zero = mle_asymptotic_var(0.0, 1.0);
    const double N = 5e5;
    const double at_zero_n = mle_asymptotic_var(0.0, N);
    double worst = 0;
    for (int k = 0; k <= 20; ++k) {
        const double phi = 0.005 * k;
        const double taylor = (2 * phi - 5 * phi * phi + 1) / N;
        worst = std::max(worst, std::abs(mle_asymptotic_var(phi, N) / taylor - 1));
    }
    const bool ok = std::abs(at_zero - 1) <= 1e-9 && std::abs(at_zero_n * N - 1) <= 1e-9 && worst <= 0.01;
    return {ok, fmt::format("N*var at phi=0: {:.12f}; max rel diff from (1/N)(2phi-5phi^2+1) on [0, 0.1]: {:.3f}%",
                            at_zero_n * N, 100 * worst)};
}

// 11. Unconditional interval coverage.
Outcome c11() {
    const unsigned n = 12;
    const double M = 1 << n, phi = 0.3862, N = 1e5;
    int cover_v = 0, cover_m = 0;
    double hw_v = 0, hw_m = 0;
    const int reps = 1000;
    for (int r = 0; r < reps; ++r) {
        auto pv = gen_porter_thomas(n, seed_for(11, r, 0));
        auto mom = moments(pv);
        auto pi = sampling_probs(BasicModel{phi}, pv);
        auto s = draw_sample(pi, &pv, nullptr, static_cast<std::size_t>(N), seed_for(11, r, 1));
        const double v = estimator_V(s.sampled_w, M, mom.w2).scalar();
        const double m = mle_basic(s.sampled_w, M).scalar();
        auto ci_v = ci_unconditional(Method::V, v, std::clamp(v, 0.0, 1.0), 1, N, M);
        auto ci_m = ci_unconditional(Method::MLE, m, std::clamp(m, 0.0, 1.0 - 1e-9), 1, N, M);
        cover_v += ci_v.contains(phi);
        cover_m += ci_m.contains(phi);
        hw_v += ci_v.half_width;
        hw_m += ci_m.half_width;
    }
    const double cv = static_cast<double>(cover_v) / reps, cm = static_cast<double>(cover_m) / reps;
    const bool ok = std::abs(cv - 0.95) <= 0.02 && std::abs(cm - 0.95) <= 0.02 && hw_m <= hw_v;
    return {ok, fmt::format("coverage V {:.1f}%, MLE {:.1f}%; mean half-width V {:.5f}, MLE {:.5f}", 100 * cv, 100 * cm, hw_v / reps,
                            hw_m / reps)};
}

// 12. Predicted fidelity of the large circuit.
Outcome c12() {
    const double f = fidelity_simple(1113, 430, 53);
    CircuitErrorProfile p{std::vector<double>(1113, kErrorGate1), std::vector<double>(430, kErrorGate2),
                          std::vector<double>(53, kErrorReadout)};
    const double g = fidelity_formula77(p);
    const bool ok = f > 0.0010 && f < 0.0020 && std::abs(f - g) <= 1e-15;
    return {ok, fmt::format("fidelity {:.6f} (per-component form {:.6f})", f, g)};
}

// 13. Robustness: the MLE on the accepted half-space with M/2 and renormalised w.
Outcome c13() {
    const unsigned n = 12;
    const std::size_t M = 1 << n;
    const double phi = 0.3862;
    std::vector<double> est, target;
    for (int r = 0; r < 100; ++r) {
        auto pv = gen_porter_thomas(n, seed_for(13, r, 0));
        auto pi = sampling_probs(BasicModel{phi}, pv);
        std::vector<std::uint32_t> order(M);
        std::iota(order.begin(), order.end(), 0u);
        CounterRng rng(seed_for(13, r, 1));
        std::shuffle(order.begin(), order.end(), rng);
        std::vector<double> tau(M, 0.0);
        double WA = 0;
        for (std::size_t k = 0; k < M / 2; ++k) {
            tau[order[k]] = 1.0;
            WA += pv[order[k]];
        }
        auto s = draw_sample_with_rejection(pi, tau, 500000, seed_for(13, r, 2), &pv);
        std::vector<double> w(s.sampled_w.size());
        std::transform(s.sampled_w.begin(), s.sampled_w.end(), w.begin(), [WA](double x) { return x / WA; });
        est.push_back(mle_basic(w, M / 2.0).scalar());
        target.push_back(phi * WA / (phi * WA + (1 - phi) / 2));
    }
    auto s = stats(est);
    return {within_se(s, phi),
            fmt::format("mean MLE {:.5f} vs phi {:.4f} (z {:+.2f}); mean half-space fidelity {:.5f}", s.mean, phi,
                        z_score(s, phi), stats(target).mean)};
}

struct Criterion {
    int id;
    const char *name;
    std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char **argv) {
    const std::vector<Criterion> all = {
        {1, "Dirichlet moment law", c1},
        {2, "conditional bias of U", c2},
        {3, "conditional variance formulas", c3},
        {4, "log-estimator crossover", c4},
        {5, "T estimator", c5},
        {6, "fast readout transform", c6},
        {7, "readout model recovery", c7},
        {8, "asymmetric model recovery", c8},
        {9, "chi-square null calibration", c9},
        {10, "MLE variance quadrature", c10},
        {11, "unconditional CI coverage", c11},
        {12, "predicted fidelity", c12},
        {13, "rejection robustness", c13},
    };
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        std::string a = argv[i];
        if (a == "--only" && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            fmt::print(stderr, "usage: {} [--only K]\n", argv[0]);
            return 2;
        }
    }
    int failed = 0;
    for (const auto &c : all) {
        if (only && c.id != only) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception &e) {
            o = {false, fmt::format("error: {}", e.what())};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        fmt::print("{} {:2d} {}: {} [{:.1f} s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail, secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    return failed ? 1 : 0;
}
