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

#include "xebstats/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "kernels/neumaier.hpp"
#include "xebstats/errors.hpp"
#include "xebstats/special.hpp"

namespace xebstats {

namespace {

std::vector<std::uint64_t> dense_counts(std::span<const CountEntry> counts, std::size_t M, std::uint64_t N) {
    std::vector<std::uint64_t> dense(M, 0);
    std::uint64_t total = 0;
    for (const auto &c : counts) {
        if (c.index >= M) {
            throw DimensionError(fmt::format("count index {} out of range for M={}", c.index, M));
        }
        dense[c.index] += c.count;
        total += c.count;
    }
    if (total != N) {
        throw DimensionError(fmt::format("counts sum to {}, expected N={}", total, N));
    }
    return dense;
}

ChiSquareResult pooled_statistic(const std::vector<std::uint64_t> &observed, std::span<const double> probs,
                                 std::uint64_t N, int estimated_params, double min_expected) {
    const std::size_t M = probs.size();
    const double n = static_cast<double>(N);
    std::vector<std::uint32_t> order(M);
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return probs[a] < probs[b]; });

    std::size_t pos = 0;
    double pool_e = 0;
    double pool_o = 0;
    std::size_t pooled = 0;
    // Zero-expectation cells are always pooled.
    while (pos < M && (!(probs[order[pos]] > 0) || n * probs[order[pos]] < min_expected ||
                       (pooled > 0 && pool_e < min_expected))) {
        pool_e += n * probs[order[pos]];
        pool_o += static_cast<double>(observed[order[pos]]);
        ++pooled;
        ++pos;
    }

    kernels::detail::Neumaier stat;
    std::size_t cells = M - pos;
    for (std::size_t k = pos; k < M; ++k) {
        const double e = n * probs[order[k]];
        const double d = static_cast<double>(observed[order[k]]) - e;
        stat.add(d * d / e);
    }
    if (pooled > 0 && (pool_e > 0 || pool_o > 0)) {
        ++cells;
        const double d = pool_o - pool_e;
        stat.add(pool_e > 0 ? d * d / pool_e : std::numeric_limits<double>::infinity());
    }
    const long df = static_cast<long>(cells) - 1 - estimated_params;
    if (cells < 2 || df < 1) {
        throw DegenerateBinningError(
            fmt::format("{} cell(s) remain after pooling, leaving {} degrees of freedom", cells, df));
    }
    ChiSquareResult r;
    r.statistic = stat.value();
    r.df = static_cast<int>(df);
    r.cells = cells;
    r.cells_merged = pooled > 1 ? pooled : 0;
    r.log_p_value = chi2_log_sf(r.statistic, static_cast<double>(r.df));
    r.p_value = std::exp(r.log_p_value);
    return r;
}

}  // namespace

ChiSquareResult chi_square(std::span<const CountEntry> counts, const ProbabilityVector &pi, std::uint64_t N,
                           int estimated_params, double min_expected) {
    auto observed = dense_counts(counts, pi.M(), N);
    return pooled_statistic(observed, pi.weights(), N, estimated_params, min_expected);
}

double min_chisq_phi(std::span<const CountEntry> counts, const ProbabilityVector &pv, std::uint64_t N,
                     double min_expected) {
    auto observed = dense_counts(counts, pv.M(), N);
    const auto w = pv.weights();
    const double M = static_cast<double>(pv.M());
    std::vector<double> pi(w.size());
    auto objective = [&](double phi) {
        for (std::size_t i = 0; i < w.size(); ++i) {
            pi[i] = phi * w[i] + (1 - phi) / M;
        }
        return pooled_statistic(observed, pi, N, 1, min_expected).statistic;
    };
    const double ratio = (std::sqrt(5.0) - 1) / 2;
    double a = 0, b = 1;
    double c = b - ratio * (b - a);
    double d = a + ratio * (b - a);
    double fc = objective(c);
    double fd = objective(d);
    while (b - a > 1e-5) {
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - ratio * (b - a);
            fc = objective(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + ratio * (b - a);
            fd = objective(d);
        }
    }
    double best = (a + b) / 2;
    // The bracket never evaluates the endpoints; check them so boundary minima are found.
    double fbest = objective(best);
    for (double edge : {0.0, 1.0}) {
        double fe = objective(edge);
        if (fe < fbest) {
            fbest = fe;
            best = edge;
        }
    }
    return best;
}

HistogramSpec histogram(std::span<const double> sampled_w, HistogramSpec spec, double M, double phi) {
    if (sampled_w.empty()) {
        throw EmptyInputError("histogram needs a nonempty sample");
    }
    if (spec.bins < 2) {
        throw DomainError(fmt::format("histogram needs at least 2 bins, got {}", spec.bins));
    }
    const bool z_scale = spec.scale == HistogramScale::Z;
    if (!(spec.t_max > 0)) {
        spec.t_max = z_scale ? 10.0 : 10.0 / M;
    }
    const std::size_t B = spec.bins;
    const double width = spec.t_max / static_cast<double>(B);
    spec.edges.resize(B + 1);
    for (std::size_t k = 0; k <= B; ++k) {
        spec.edges[k] = width * static_cast<double>(k);
    }
    spec.counts.assign(B, 0);
    for (double w : sampled_w) {
        const double t = z_scale ? M * w : w;
        auto k = static_cast<std::size_t>(std::max(0.0, t) / width);
        spec.counts[std::min(k, B - 1)] += 1;
    }
    auto cdf = [&](double t) { return z_scale ? mixture_exp_cdf(t, phi) : mixture_beta_cdf(t, M, phi); };
    const double N = static_cast<double>(sampled_w.size());
    spec.overlay.resize(B);
    spec.density.resize(B);
    for (std::size_t k = 0; k < B; ++k) {
        const double hi = k + 1 == B ? 1.0 : cdf(spec.edges[k + 1]);
        spec.overlay[k] = N * (hi - cdf(spec.edges[k]));
        const double center = spec.edges[k] + width / 2;
        spec.density[k] = z_scale ? mixture_exp_density(center, phi) : mixture_beta_density(center, M, phi);
    }
    return spec;
}

std::vector<FreqPoint> freq_scatter(std::span<const CountEntry> counts, const ProbabilityVector &pi, std::uint64_t N,
                                    double floor) {
    auto observed = dense_counts(counts, pi.M(), N);
    std::vector<FreqPoint> out;
    out.reserve(pi.M());
    const double n = static_cast<double>(N);
    for (std::size_t i = 0; i < pi.M(); ++i) {
        const double e = n * pi[i];
        if (e >= floor) {
            out.push_back({static_cast<std::uint32_t>(i), e, observed[i]});
        }
    }
    return out;
}

}  // namespace xebstats
