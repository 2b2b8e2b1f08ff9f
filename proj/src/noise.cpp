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

#include "xebstats/noise.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include <fmt/format.h>

#include "xebstats/errors.hpp"
#include "xebstats/kernels.hpp"

namespace xebstats {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr double kSlack = 1e-12;

void check_unit(double x, const char *name) {
    if (!(x >= 0 && x <= 1)) {
        throw DomainError(fmt::format("{} = {} outside [0, 1]", name, x));
    }
}

void check_open_unit(double x, const char *name) {
    if (!(x > 0 && x < 1)) {
        throw DomainError(fmt::format("{} = {} outside (0, 1)", name, x));
    }
}

void apply_channel(std::vector<double> &data, unsigned n, kernels::Kernel2x2 k) {
    const auto &table = kernels::active();
    for (unsigned b = 0; b < n; ++b) {
        table.butterfly(data, std::size_t{1} << b, k);
    }
}

}  // namespace

void validate(const NoiseModel &model) {
    std::visit(Overloaded{
                   [](const BasicModel &m) { check_unit(m.phi, "phi"); },
                   [](const GeneralPModel &m) {
                       if (m.phis.empty() || m.phis.size() != m.components.size()) {
                           throw DimensionError(fmt::format("general-p model has {} weights and {} components",
                                                            m.phis.size(), m.components.size()));
                       }
                       double total = 0;
                       for (double p : m.phis) {
                           check_unit(p, "phi_k");
                           total += p;
                       }
                       if (std::abs(total - 1) > kSlack) {
                           throw DomainError(fmt::format("general-p weights sum to {:.17g}, not 1", total));
                       }
                       for (const auto &c : m.components) {
                           if (c.n() != m.components.front().n()) {
                               throw DimensionError("general-p components have different n");
                           }
                       }
                   },
                   [](const ReadoutSymmetricModel &m) {
                       check_unit(m.phi, "phi");
                       check_unit(m.phi_ro, "phi_ro");
                       if (m.phi + m.phi_ro > 1 + kSlack) {
                           throw DomainError(fmt::format("phi + phi_ro = {} exceeds 1", m.phi + m.phi_ro));
                       }
                       check_open_unit(m.q, "q");
                   },
                   [](const ReadoutAsymmetricModel &m) {
                       check_unit(m.phi_g, "phi_g");
                       check_open_unit(m.q1, "q1");
                       check_open_unit(m.q2, "q2");
                   },
               },
               model);
}

ProbabilityVector readout_noise_vector(const ProbabilityVector &pv, double q) {
    check_open_unit(q, "q");
    const unsigned n = pv.n();
    auto w = pv.weights();
    std::vector<double> u(w.begin(), w.end());
    apply_channel(u, n, {1 - q, q, q, 1 - q});
    const double keep = std::pow(1 - q, n);
    const double D = -std::expm1(n * std::log1p(-q));
    for (std::size_t i = 0; i < u.size(); ++i) {
        u[i] = std::max(0.0, (u[i] - keep * w[i]) / D);
    }
    return ProbabilityVector(n, std::move(u));
}

ProbabilityVector asymmetric_signal_vector(const ProbabilityVector &pv, double q1, double q2) {
    check_open_unit(q1, "q1");
    check_open_unit(q2, "q2");
    auto w = pv.weights();
    std::vector<double> u(w.begin(), w.end());
    // Rows index the read value, columns the true value.
    apply_channel(u, pv.n(), {1 - q2, q1, q2, 1 - q1});
    return ProbabilityVector(pv.n(), std::move(u));
}

std::vector<double> biased_uniform(unsigned n, double q) {
    std::vector<double> pw(n + 1);
    for (unsigned k = 0; k <= n; ++k) {
        pw[k] = std::pow(q, k) * std::pow(1 - q, n - k);
    }
    std::vector<double> b(std::size_t{1} << n);
    for (std::size_t x = 0; x < b.size(); ++x) {
        b[x] = pw[std::popcount(x)];
    }
    return b;
}

ReadoutConstants readout_constants(unsigned n, double q, double M) {
    check_open_unit(q, "q");
    ReadoutConstants c;
    const double keep = std::pow(1 - q, n);
    const double s = std::pow(q * q + (1 - q) * (1 - q), n);
    c.D = 1 - keep;
    c.G = M / (M + 1) * (s - 2 * keep + 1);
    c.H = s - keep * keep;
    c.K = c.D * c.D - c.H;
    return c;
}

ProbabilityVector sampling_probs(const NoiseModel &model, const ProbabilityVector &pv) {
    validate(model);
    return std::visit(
        Overloaded{
            [&](const BasicModel &m) {
                auto w = pv.weights();
                const double floor = (1 - m.phi) / static_cast<double>(pv.M());
                std::vector<double> pi(w.size());
                for (std::size_t i = 0; i < w.size(); ++i) {
                    pi[i] = m.phi * w[i] + floor;
                }
                return ProbabilityVector(pv.n(), std::move(pi));
            },
            [&](const GeneralPModel &m) {
                const auto &first = m.components.front();
                std::vector<double> pi(first.M(), 0.0);
                for (std::size_t k = 0; k < m.components.size(); ++k) {
                    if (m.phis[k] == 0) {
                        continue;
                    }
                    auto wk = m.components[k].weights();
                    for (std::size_t i = 0; i < pi.size(); ++i) {
                        pi[i] += m.phis[k] * wk[i];
                    }
                }
                return ProbabilityVector(first.n(), std::move(pi));
            },
            [&](const ReadoutSymmetricModel &m) {
                auto w = pv.weights();
                auto v = readout_noise_vector(pv, m.q);
                auto vw = v.weights();
                const double floor = std::max(0.0, 1 - m.phi_g()) / static_cast<double>(pv.M());
                std::vector<double> pi(w.size());
                for (std::size_t i = 0; i < w.size(); ++i) {
                    pi[i] = m.phi * w[i] + m.phi_ro * vw[i] + floor;
                }
                return ProbabilityVector(pv.n(), std::move(pi));
            },
            [&](const ReadoutAsymmetricModel &m) {
                auto s = asymmetric_signal_vector(pv, m.q1, m.q2);
                auto b = biased_uniform(pv.n(), m.q_bias());
                auto sw = s.weights();
                for (std::size_t i = 0; i < b.size(); ++i) {
                    b[i] = m.phi_g * sw[i] + (1 - m.phi_g) * b[i];
                }
                return ProbabilityVector(pv.n(), std::move(b));
            },
        },
        model);
}

}  // namespace xebstats
