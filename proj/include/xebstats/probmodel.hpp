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

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <vector>

#include "xebstats/rng.hpp"

namespace xebstats {

inline constexpr unsigned kMaxQubits = 30;

/// An immutable probability vector over the M = 2^n bitstrings of n qubits. Copies share
/// storage, so passing one around (or to worker threads) is cheap.
class ProbabilityVector {
   public:
    /// Validates length 2^n, nonnegativity and unit sum (within 1e-9).
    ProbabilityVector(unsigned n, std::vector<double> weights);

    static ProbabilityVector uniform(unsigned n);
    /// All mass on one index.
    static ProbabilityVector point_mass(unsigned n, std::size_t index);

    unsigned n() const { return n_; }
    std::size_t M() const { return std::size_t{1} << n_; }
    std::span<const double> weights() const { return *weights_; }
    double operator[](std::size_t i) const { return (*weights_)[i]; }

   private:
    unsigned n_;
    std::shared_ptr<const std::vector<double>> weights_;
};

struct MomentSummary {
    double w2 = 0;
    double w3 = 0;
    double w4 = 0;
};

/// Dirichlet(1) vector: w_i = z_i / sum z with z_i iid Exp(1), deterministic in `seed`.
ProbabilityVector gen_porter_thomas(unsigned n, SeedSpec seed);

/// Compensated power sums of the weights.
MomentSummary moments(const ProbabilityVector &pv);

/// E w_i^k = k! / [M (M+1) ... (M+k-1)] for a Dirichlet(1) vector of length M.
double theoretical_moment(double M, int k);

/// Density of a sampled probability t under the basic model:
///   phi M (M-1) t (1-t)^(M-2) + (1-phi) (M-1) (1-t)^(M-2).
double mixture_beta_density(double t, double M, double phi);
/// CDF of mixture_beta_density.
double mixture_beta_cdf(double t, double M, double phi);

/// Large-M limit on the z = M t scale: phi z e^-z + (1-phi) e^-z.
double mixture_exp_density(double z, double phi);
double mixture_exp_cdf(double z, double phi);

// File formats. Binary: "PTPV", u16 version = 1, u16 n, then 2^n little-endian f64.
// Text: "n=<int>" followed by one weight per line.
void write_probabilities_binary(const std::filesystem::path &path, const ProbabilityVector &pv);
void write_probabilities_text(const std::filesystem::path &path, const ProbabilityVector &pv);
/// Reads either format, detected from the first four bytes.
ProbabilityVector read_probabilities(const std::filesystem::path &path);

std::vector<unsigned char> encode_probabilities_binary(const ProbabilityVector &pv);
ProbabilityVector decode_probabilities_binary(std::span<const unsigned char> bytes);

}  // namespace xebstats
