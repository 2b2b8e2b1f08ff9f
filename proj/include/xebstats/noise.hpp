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
#include <filesystem>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "xebstats/probmodel.hpp"
#include "xebstats/rng.hpp"

namespace xebstats {

// ---- Sampling models ----

/// pi = phi w + (1 - phi)/M.
struct BasicModel {
    double phi = 0;
};

/// pi = sum_k phi_k w_k over p component vectors of equal n.
struct GeneralPModel {
    std::vector<double> phis;
    std::vector<ProbabilityVector> components;
};

/// pi = phi w + phi_ro v + (1 - phi_g)/M with phi_g = phi + phi_ro, where v is the distribution
/// of the ideal output conditioned on at least one symmetric readout flip of rate q.
struct ReadoutSymmetricModel {
    double phi = 0;
    double phi_ro = 0;
    double q = 0.038;

    double phi_g() const { return phi + phi_ro; }
};

/// pi = phi_g (R^{(x)n} w) + (1 - phi_g) B_q with per-qubit channel R:
/// q1 = P(1 read as 0), q2 = P(0 read as 1), and q = (1 - q1 + q2)/2.
struct ReadoutAsymmetricModel {
    double phi_g = 0;
    double q1 = 0;
    double q2 = 0;

    double q_bias() const { return (1 - q1 + q2) / 2; }
};

using NoiseModel = std::variant<BasicModel, GeneralPModel, ReadoutSymmetricModel, ReadoutAsymmetricModel>;

/// Throws DomainError or DimensionError when the parameters break the model's invariants.
void validate(const NoiseModel &model);

/// The sampling distribution pi induced by `model` on `pv` (ignored for GeneralP).
ProbabilityVector sampling_probs(const NoiseModel &model, const ProbabilityVector &pv);

// ---- Readout transforms ----

/// v_i = sum_{y != 0} w_{i xor y} q^|y| (1-q)^(n-|y|) / D with D = 1 - (1-q)^n, in O(M n).
ProbabilityVector readout_noise_vector(const ProbabilityVector &pv, double q);

/// (R^{(x)n} w)(x): the read-out distribution given an error-free circuit.
ProbabilityVector asymmetric_signal_vector(const ProbabilityVector &pv, double q1, double q2);

/// B_q(x) = q^|x| (1-q)^(n-|x|) for every x.
std::vector<double> biased_uniform(unsigned n, double q);

struct ReadoutConstants {
    double D = 0;  // P(y != 0) = 1 - (1-q)^n
    double G = 0;  // M/(M+1) {[q^2 + (1-q)^2]^n - 2(1-q)^n + 1}
    double H = 0;  // [q^2 + (1-q)^2]^n - (1-q)^(2n)
    double K = 0;  // D^2 - H
};

ReadoutConstants readout_constants(unsigned n, double q, double M);

// ---- Samples ----

struct CountEntry {
    std::uint32_t index;
    std::uint64_t count;

    bool operator==(const CountEntry &) const = default;
};

/// N drawn bitstrings with their looked-up probabilities.
struct Sample {
    unsigned n = 0;
    std::vector<std::uint32_t> indices;       // in draw order
    std::vector<CountEntry> counts;           // sorted by index, zero counts omitted
    std::vector<double> sampled_w;            // w at each draw; empty when no lookup vector
    std::optional<std::vector<double>> sampled_v;

    std::size_t total() const { return indices.size(); }
};

/// Builds counts and (optionally) the looked-up arrays from drawn indices.
Sample make_sample(unsigned n, std::vector<std::uint32_t> indices, const ProbabilityVector *w_lookup = nullptr,
                   const ProbabilityVector *v_lookup = nullptr);

/// Looks up `pv` at each drawn index.
std::vector<double> gather(const ProbabilityVector &pv, std::span<const std::uint32_t> indices);

/// Walker/Vose alias table: O(M) build, O(1) draw.
class AliasTable {
   public:
    explicit AliasTable(std::span<const double> probs);

    std::size_t size() const { return prob_.size(); }
    /// One draw using two uniforms' worth of randomness from `rng`.
    std::uint32_t draw(CounterRng &rng) const;

   private:
    std::vector<double> prob_;
    std::vector<std::uint32_t> alias_;
    unsigned bits_;
};

/// N iid draws from pi. `pv_lookup` and `v_lookup` fill sampled_w and sampled_v.
Sample draw_sample(const ProbabilityVector &pi, const ProbabilityVector *pv_lookup,
                   const ProbabilityVector *v_lookup, std::size_t N, SeedSpec seed);

struct RejectionStats {
    std::uint64_t attempts = 0;
};

/// Draws from pi and keeps each draw with probability tau at the drawn index until N are kept.
/// An extra uniform is consumed only when 0 < tau < 1, so tau = 1 everywhere reproduces
/// draw_sample with the same seed. Gives up after 10^4 N attempts.
Sample draw_sample_with_rejection(const ProbabilityVector &pi, std::span<const double> tau, std::size_t N,
                                  SeedSpec seed, const ProbabilityVector *pv_lookup = nullptr,
                                  RejectionStats *stats = nullptr);

// Sample file: "n=<int>", "N=<int>", then one bitstring per line, most significant qubit first.
std::string encode_sample_text(const Sample &sample);
Sample decode_sample_text(std::string_view text);
void write_sample(const std::filesystem::path &path, const Sample &sample);
Sample read_sample(const std::filesystem::path &path);

}  // namespace xebstats
