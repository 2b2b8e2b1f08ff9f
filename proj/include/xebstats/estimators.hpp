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

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xebstats/noise.hpp"
#include "xebstats/probmodel.hpp"

namespace xebstats {

enum class Method {
    U,
    V,
    LogU,
    MLE,
    T,
    GeneralMoment,
    GeneralMLE,
    ReadoutMoment,
    ReadoutMLE,
    PhiRoTilde,
    AsymmetricMLE,
};

std::string_view method_name(Method m);
/// Case-insensitive; throws UsageError for unknown names.
Method parse_method(std::string_view name);

/// A point estimate (scalar or vector) with an optional variance (scalar, or a row-major
/// k x k covariance for k values) and a note on where the variance came from.
struct Estimate {
    Method method = Method::U;
    std::vector<double> value;
    std::vector<double> variance;
    std::optional<int> iterations;
    std::string provenance;
    std::map<std::string, double> aux;

    double scalar() const { return value.at(0); }
    std::optional<double> scalar_variance() const {
        return variance.empty() ? std::nullopt : std::optional<double>(variance.front());
    }
    /// Standard error of coordinate k, when a variance is present.
    std::optional<double> standard_error(std::size_t k = 0) const;
};

struct MleConfig {
    std::optional<std::vector<double>> init;
    double tol = 1e-10;
    int max_iter = 100;
    /// Per-parameter [lo, hi] box. Used by the basic and asymmetric MLEs; the general and readout
    /// MLEs always range over the simplex / triangle.
    std::optional<std::vector<std::array<double, 2>>> domain;
};

inline constexpr double kEulerGamma = 0.5772156649015329;

// ---- Basic model ----

/// U = (M/N) sum w~ - 1.
Estimate estimator_U(std::span<const double> sampled_w, double M);
/// V = U / (M w2 - 1).
Estimate estimator_V(std::span<const double> sampled_w, double M, double w2);
/// U_log = mean(log w~) + gamma + log M.
Estimate estimator_log(std::span<const double> sampled_w, double M);
/// Maximizes sum log(phi w~ + (1-phi)/M) over [0, 1].
Estimate mle_basic(std::span<const double> sampled_w, double M, const MleConfig &cfg = {});
/// Log-likelihood of the basic model up to the constant -N log M.
double loglik_basic(std::span<const double> sampled_w, double M, double phi);

/// Collision estimator: T^2 unbiased for phi^2, T = sqrt(max(T^2, 0)). T^2 is reported in aux["T2"].
Estimate estimator_T(std::span<const CountEntry> counts, double M, std::uint64_t N);

// ---- General-p model ----

/// U_k = mean(M w~_k - 1). With `components`, the Gram-matrix bias correction solves
/// M G phi = U + 1 instead.
Estimate estimator_general_moment(std::span<const std::vector<double>> samples, double M,
                                  std::span<const ProbabilityVector> components = {});
/// Maximizes sum log(sum_k phi_k w~_k) over the simplex.
Estimate mle_general(std::span<const std::vector<double>> samples, double M, const MleConfig &cfg = {});
double loglik_general(std::span<const std::vector<double>> samples, std::span<const double> phis);

// ---- Readout models ----

/// W = (M/N) sum v~ - 1.
double statistic_W(std::span<const double> sampled_v, double M);

/// Coefficients of the conditional-expectation system [E U; E W] = S [phi; phi_ro] + ...:
///   S = [[M sum w^2 - 1, M sum wv - 1], [M sum vw - 1, M sum v^2 - 1]].
std::array<double, 4> readout_moment_system(const ProbabilityVector &pv, const ProbabilityVector &v);

/// Solves the 2x2 moment system for (phi, phi_ro).
Estimate estimator_readout_moment(std::span<const double> sampled_w, std::span<const double> sampled_v,
                                  const ProbabilityVector &pv, const ProbabilityVector &v);
/// phi~_ro = W / (G/D^2 - 1).
Estimate estimator_phi_ro_tilde(double W, const ReadoutConstants &constants);

/// Maximizes sum log[phi (w~ - 1/M) + phi_ro (v~ - 1/M) + 1/M] over the triangle.
Estimate mle_readout(std::span<const double> sampled_w, std::span<const double> sampled_v, double M,
                     const MleConfig &cfg = {});
double loglik_readout(std::span<const double> sampled_w, std::span<const double> sampled_v, double M, double phi,
                      double phi_ro);

/// Maximizes sum_x n_x log pi(x) for the asymmetric readout model in (phi_g, q1, q2).
Estimate mle_asymmetric(std::span<const CountEntry> counts, const ProbabilityVector &pv, const MleConfig &cfg = {});
double loglik_asymmetric(std::span<const CountEntry> counts, const ProbabilityVector &pv, double phi_g, double q1,
                         double q2);

}  // namespace xebstats
