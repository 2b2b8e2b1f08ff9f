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

#include <algorithm>

#include <fmt/format.h>

#include "xebstats/errors.hpp"
#include "xebstats/noise.hpp"

namespace xebstats {

AliasTable::AliasTable(std::span<const double> probs) : prob_(probs.size()), alias_(probs.size()) {
    const std::size_t M = probs.size();
    if (M == 0 || M > (std::size_t{1} << 32)) {
        throw DimensionError(fmt::format("alias table size {} unsupported", M));
    }
    double total = 0;
    for (double p : probs) {
        total += p;
    }
    const double scale = static_cast<double>(M) / total;
    // One worklist: small entries grow from the front, large ones from the back.
    std::vector<std::uint32_t> work(M);
    std::size_t n_small = 0;
    std::size_t large_begin = M;
    for (std::size_t i = 0; i < M; ++i) {
        prob_[i] = probs[i] * scale;
        if (prob_[i] < 1.0) {
            work[n_small++] = static_cast<std::uint32_t>(i);
        } else {
            work[--large_begin] = static_cast<std::uint32_t>(i);
        }
    }
    while (n_small > 0 && large_begin < M) {
        std::uint32_t s = work[--n_small];
        std::uint32_t l = work[large_begin];
        alias_[s] = l;
        prob_[l] = (prob_[l] + prob_[s]) - 1.0;
        if (prob_[l] < 1.0) {
            ++large_begin;
            work[n_small++] = l;
        }
    }
    // Leftovers on either side are full columns up to rounding.
    for (std::size_t i = 0; i < n_small; ++i) {
        prob_[work[i]] = 1.0;
        alias_[work[i]] = work[i];
    }
    for (std::size_t i = large_begin; i < M; ++i) {
        prob_[work[i]] = 1.0;
        alias_[work[i]] = work[i];
    }
}

std::uint32_t AliasTable::draw(CounterRng &rng) const {
    const std::uint64_t r = rng();
    const auto column = static_cast<std::uint32_t>((static_cast<unsigned __int128>(r) * prob_.size()) >> 64);
    return rng.uniform() < prob_[column] ? column : alias_[column];
}

std::vector<double> gather(const ProbabilityVector &pv, std::span<const std::uint32_t> indices) {
    std::vector<double> out(indices.size());
    auto w = pv.weights();
    for (std::size_t j = 0; j < indices.size(); ++j) {
        out[j] = w[indices[j]];
    }
    return out;
}

Sample make_sample(unsigned n, std::vector<std::uint32_t> indices, const ProbabilityVector *w_lookup,
                   const ProbabilityVector *v_lookup) {
    const std::size_t M = std::size_t{1} << n;
    for (const auto *lookup : {w_lookup, v_lookup}) {
        if (lookup != nullptr && lookup->n() != n) {
            throw DimensionError(fmt::format("lookup vector has n={}, sample has n={}", lookup->n(), n));
        }
    }
    Sample s;
    s.n = n;
    std::vector<std::uint32_t> sorted = indices;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t j = 0; j < sorted.size();) {
        if (sorted[j] >= M) {
            throw DimensionError(fmt::format("index {} out of range for n={}", sorted[j], n));
        }
        std::size_t k = j;
        while (k < sorted.size() && sorted[k] == sorted[j]) {
            ++k;
        }
        s.counts.push_back({sorted[j], k - j});
        j = k;
    }
    if (w_lookup != nullptr) {
        s.sampled_w = gather(*w_lookup, indices);
    }
    if (v_lookup != nullptr) {
        s.sampled_v = gather(*v_lookup, indices);
    }
    s.indices = std::move(indices);
    return s;
}

Sample draw_sample(const ProbabilityVector &pi, const ProbabilityVector *pv_lookup,
                   const ProbabilityVector *v_lookup, std::size_t N, SeedSpec seed) {
    if (N == 0) {
        throw EmptyInputError("draw count must be at least 1");
    }
    AliasTable table(pi.weights());
    CounterRng rng(seed);
    std::vector<std::uint32_t> indices(N);
    for (auto &x : indices) {
        x = table.draw(rng);
    }
    return make_sample(pi.n(), std::move(indices), pv_lookup, v_lookup);
}

Sample draw_sample_with_rejection(const ProbabilityVector &pi, std::span<const double> tau, std::size_t N,
                                  SeedSpec seed, const ProbabilityVector *pv_lookup, RejectionStats *stats) {
    if (N == 0) {
        throw EmptyInputError("draw count must be at least 1");
    }
    if (tau.size() != pi.M()) {
        throw DimensionError(fmt::format("acceptance vector has {} entries, expected {}", tau.size(), pi.M()));
    }
    bool any = false;
    for (double t : tau) {
        if (!(t >= 0 && t <= 1)) {
            throw DomainError(fmt::format("acceptance probability {} outside [0, 1]", t));
        }
        any = any || t > 0;
    }
    if (!any) {
        throw NoAcceptanceError("every acceptance probability is zero");
    }
    AliasTable table(pi.weights());
    CounterRng rng(seed);
    const std::uint64_t cap = static_cast<std::uint64_t>(N) * 10000;
    std::uint64_t attempts = 0;
    std::vector<std::uint32_t> indices;
    indices.reserve(N);
    while (indices.size() < N) {
        if (attempts == cap) {
            throw NoAcceptanceError(
                fmt::format("only {} of {} draws accepted after {} attempts", indices.size(), N, attempts));
        }
        ++attempts;
        std::uint32_t x = table.draw(rng);
        double t = tau[x];
        bool keep = t >= 1 || (t > 0 && rng.uniform() < t);
        if (keep) {
            indices.push_back(x);
        }
    }
    if (stats != nullptr) {
        stats->attempts = attempts;
    }
    return make_sample(pi.n(), std::move(indices), pv_lookup, nullptr);
}

}  // namespace xebstats
