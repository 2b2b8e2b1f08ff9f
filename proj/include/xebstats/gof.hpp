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

#include <cstdint>
#include <span>
#include <vector>

#include "xebstats/noise.hpp"
#include "xebstats/probmodel.hpp"

namespace xebstats {

struct ChiSquareResult {
    double statistic = 0;
    int df = 0;
    /// Original cells absorbed into the pooled low-expectation cell (0 when nothing was pooled).
    std::size_t cells_merged = 0;
    std::size_t cells = 0;
    double p_value = 1;
    double log_p_value = 0;
};

/// Pearson statistic sum (n_i - N pi_i)^2 / (N pi_i) after pooling, smallest expectation first,
/// every cell with N pi_i < min_expected until the pool itself reaches min_expected.
/// df = cells - 1 - estimated_params.
ChiSquareResult chi_square(std::span<const CountEntry> counts, const ProbabilityVector &pi, std::uint64_t N,
                           int estimated_params = 0, double min_expected = 5.0);

/// The phi in [0, 1] minimizing the pooled statistic for pi(phi) = phi w + (1 - phi)/M
/// (golden-section search, tolerance 1e-5).
double min_chisq_phi(std::span<const CountEntry> counts, const ProbabilityVector &pv, std::uint64_t N,
                     double min_expected = 5.0);

enum class HistogramScale {
    W,  // raw sampled probability, default range [0, 10/M]
    Z,  // z = M w, default range [0, 10]
};

struct HistogramSpec {
    std::size_t bins = 200;
    HistogramScale scale = HistogramScale::W;
    /// Upper end of the range; 0 picks the scale's default. The last bin absorbs overflow.
    double t_max = 0;

    std::vector<double> edges;          // bins + 1 entries
    std::vector<std::uint64_t> counts;  // per-bin tallies
    /// Expected count per bin under the basic model: N times the mixture probability of the bin
    /// (the last bin includes the tail).
    std::vector<double> overlay;
    /// Mixture density at each bin center, on the chosen scale.
    std::vector<double> density;
};

HistogramSpec histogram(std::span<const double> sampled_w, HistogramSpec spec, double M, double phi);

struct FreqPoint {
    std::uint32_t index;
    double expected;
    std::uint64_t observed;
};

/// (N pi_i, n_i) for every index with N pi_i >= floor.
std::vector<FreqPoint> freq_scatter(std::span<const CountEntry> counts, const ProbabilityVector &pi, std::uint64_t N,
                                    double floor = 0.0);

}  // namespace xebstats
