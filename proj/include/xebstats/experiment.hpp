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
#include <optional>
#include <string>
#include <vector>

#include "xebstats/estimators.hpp"
#include "xebstats/noise.hpp"

namespace xebstats {

/// Purpose tags separating the random streams of one replicate.
inline constexpr std::uint64_t kGenerationStream = 1;
inline constexpr std::uint64_t kSamplingStream = 2;

/// Sampling model of an experiment. Component vectors are generated per file, so a general-p
/// model only carries its weights here.
struct ModelSpec {
    enum class Kind { Basic, GeneralP, ReadoutSymmetric, ReadoutAsymmetric };
    Kind kind = Kind::Basic;
    double phi = 0;
    double phi_ro = 0;
    double q = 0;
    double phi_g = 0;
    double q1 = 0;
    double q2 = 0;
    std::vector<double> phis;
};

struct ExperimentConfig {
    unsigned n = 12;
    std::uint64_t N = 500000;
    unsigned L = 1;
    unsigned reps = 1;
    ModelSpec model;
    std::vector<Method> estimators = {Method::U, Method::V, Method::MLE};
    std::uint64_t base_seed = 0;
    unsigned workers = 1;
    /// Reuse the same L vectors in every repetition (conditional studies).
    bool fixed_circuits = false;
    bool allow_large = false;
};

/// Probability vector of file `file` in repetition `rep`.
SeedSpec generation_seed(const ExperimentConfig &cfg, unsigned rep, unsigned file, std::uint64_t component = 0);
SeedSpec sampling_seed(const ExperimentConfig &cfg, unsigned rep, unsigned file);

struct ExperimentRow {
    unsigned rep;
    unsigned file;
    std::string method;  // method name, with ":component" for vector-valued estimators
    double value;
};

struct SummaryRow {
    std::string method;
    std::size_t count;
    double mean, sd, min, q25, median, q75, max;
};

struct ExperimentResult {
    std::vector<ExperimentRow> rows;        // ordered by (rep, file, method order)
    std::vector<SummaryRow> summary;        // over per-repetition averages across files
};

/// Runs reps x L independent generate -> sample -> estimate pipelines on a bounded worker pool.
/// The result does not depend on the number of workers.
ExperimentResult run_experiment(const ExperimentConfig &cfg);

/// Named values of one estimate, as they appear in the long table.
std::vector<std::pair<std::string, double>> estimate_columns(const Estimate &e);

}  // namespace xebstats
