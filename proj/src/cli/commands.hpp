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

#include "xebstats/experiment.hpp"

namespace xebstats::cli {

enum class Format { Json, Csv };

struct GlobalOptions {
    std::uint64_t seed = 0;
    bool seed_given = false;
    unsigned workers = 1;
    std::string out;
    Format format = Format::Json;
};

struct ModelFlags {
    std::optional<double> phi, phi_ro, q, q1, q2, phi_g;
    std::vector<double> phis;
};

/// Resolves model flags into one model, rejecting conflicting combinations.
ModelSpec resolve_model(const ModelFlags &flags);

struct GenOptions {
    unsigned n = 0;
    std::uint64_t stream = 0;
    bool text = false;
};

struct SampleOptions {
    std::string probs;
    ModelFlags model;
    std::vector<std::string> components;
    std::string rejection_file;
    std::uint64_t N = 0;
    std::uint64_t stream = 0;
    std::string v_out;
};

struct EstimateOptions {
    std::string probs;
    std::string sample;
    std::string v_file;
    std::optional<double> q;
    std::vector<std::string> methods;
    std::vector<std::string> components;
};

struct McOptions {
    unsigned n = 12;
    std::uint64_t N = 500000;
    unsigned L = 1;
    unsigned reps = 1;
    ModelFlags model;
    std::vector<std::string> methods;
    bool fixed_circuits = false;
    bool allow_large = false;
    std::string summary_out;
};

struct GofOptions {
    std::string probs;
    std::string sample;
    std::optional<double> phi;
    bool fit_phi = false;
    double min_expected = 5;
    std::string hist;
    std::string hist_scale = "w";
    std::size_t bins = 200;
    std::string scatter;
};

struct PredictOptions {
    std::optional<std::uint64_t> n_g1, n_g2, n;
    std::string profile;
    bool table = false;
    std::optional<double> phi;
    double q = 0.038;
};

struct CiOptions {
    std::string method;
    std::optional<double> estimate, phi, sigma;
    std::vector<double> estimates, sigmas;
    double L = 1;
    std::optional<double> N;
    std::optional<unsigned> n;
};

// Each command returns the document to emit on --out or standard output (possibly empty when the
// command writes its own files).
std::string cmd_gen(const GlobalOptions &g, const GenOptions &o);
std::string cmd_sample(const GlobalOptions &g, const SampleOptions &o);
std::string cmd_estimate(const GlobalOptions &g, const EstimateOptions &o);
std::string cmd_mc(const GlobalOptions &g, const McOptions &o);
std::string cmd_gof(const GlobalOptions &g, const GofOptions &o);
std::string cmd_predict(const GlobalOptions &g, const PredictOptions &o);
std::string cmd_ci(const GlobalOptions &g, const CiOptions &o);

}  // namespace xebstats::cli
