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
#include <array>
#include <bit>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "kernels/neumaier.hpp"
#include "xebstats/errors.hpp"
#include "xebstats/estimators.hpp"
#include "xebstats/kernels.hpp"
#include "xebstats/optimize.hpp"

namespace xebstats {

namespace {

constexpr double kQEdge = 1e-9;

void check_paired(std::span<const double> w, std::span<const double> v) {
    if (w.empty()) {
        throw EmptyInputError("readout estimators need a nonempty sample");
    }
    if (w.size() != v.size()) {
        throw DimensionError(fmt::format("{} sampled w values but {} sampled v values", w.size(), v.size()));
    }
}

// Value and first/second derivatives in (q1, q2) of the channel-transformed vector, propagated
// through the per-qubit passes. Index order: f, f_1, f_2, f_11, f_12, f_22.
using Jet = std::array<std::vector<double>, 6>;

Jet channel_jet(std::span<const double> w, unsigned n, double q1, double q2) {
    Jet jet;
    jet[0].assign(w.begin(), w.end());
    for (int k = 1; k < 6; ++k) {
        jet[k].assign(w.size(), 0.0);
    }
    const double r00 = 1 - q2, r01 = q1, r10 = q2, r11 = 1 - q1;
    for (unsigned bit = 0; bit < n; ++bit) {
        const std::size_t stride = std::size_t{1} << bit;
        for (std::size_t base = 0; base < w.size(); base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; ++i) {
                const std::size_t j = i + stride;
                double lo[6], hi[6];
                for (int k = 0; k < 6; ++k) {
                    lo[k] = jet[k][i];
                    hi[k] = jet[k][j];
                }
                auto R_lo = [&](int k) { return r00 * lo[k] + r01 * hi[k]; };
                auto R_hi = [&](int k) { return r10 * lo[k] + r11 * hi[k]; };
                // dR/dq1 = [[0, 1], [0, -1]], dR/dq2 = [[-1, 0], [1, 0]].
                auto A_lo = [&](int k) { return hi[k]; };
                auto A_hi = [&](int k) { return -hi[k]; };
                auto B_lo = [&](int k) { return -lo[k]; };
                auto B_hi = [&](int k) { return lo[k]; };
                jet[0][i] = R_lo(0);
                jet[0][j] = R_hi(0);
                jet[1][i] = R_lo(1) + A_lo(0);
                jet[1][j] = R_hi(1) + A_hi(0);
                jet[2][i] = R_lo(2) + B_lo(0);
                jet[2][j] = R_hi(2) + B_hi(0);
                jet[3][i] = R_lo(3) + 2 * A_lo(1);
                jet[3][j] = R_hi(3) + 2 * A_hi(1);
                jet[4][i] = R_lo(4) + A_lo(2) + B_lo(1);
                jet[4][j] = R_hi(4) + A_hi(2) + B_hi(1);
                jet[5][i] = R_lo(5) + 2 * B_lo(2);
                jet[5][j] = R_hi(5) + 2 * B_hi(2);
            }
        }
    }
    return jet;
}

double bias_prob(unsigned n, double q, std::uint32_t x) {
    const int k = std::popcount(x);
    return std::exp(k * std::log(q) + (static_cast<int>(n) - k) * std::log1p(-q));
}

}  // namespace

double statistic_W(std::span<const double> sampled_v, double M) {
    if (sampled_v.empty()) {
        throw EmptyInputError("W needs a nonempty sample");
    }
    return M * kernels::active().sum(sampled_v) / static_cast<double>(sampled_v.size()) - 1;
}

std::array<double, 4> readout_moment_system(const ProbabilityVector &pv, const ProbabilityVector &v) {
    if (pv.n() != v.n()) {
        throw DimensionError("w and v vectors differ in n");
    }
    const auto &kern = kernels::active();
    const double M = static_cast<double>(pv.M());
    const double ww = kern.dot(pv.weights(), pv.weights());
    const double wv = kern.dot(pv.weights(), v.weights());
    const double vv = kern.dot(v.weights(), v.weights());
    return {M * ww - 1, M * wv - 1, M * wv - 1, M * vv - 1};
}

Estimate estimator_readout_moment(std::span<const double> sampled_w, std::span<const double> sampled_v,
                                  const ProbabilityVector &pv, const ProbabilityVector &v) {
    check_paired(sampled_w, sampled_v);
    const double M = static_cast<double>(pv.M());
    auto s = readout_moment_system(pv, v);
    Eigen::Matrix2d S;
    S << s[0], s[1], s[2], s[3];
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(S);
    const auto sv = svd.singularValues();
    if (!(sv[0] > 0) || sv[1] / sv[0] < 1e-10) {
        throw DegenerateDenominatorError(
            fmt::format("readout moment system is singular (reciprocal condition {:.3g})", sv[0] > 0 ? sv[1] / sv[0] : 0.0));
    }
    const std::size_t N = sampled_w.size();
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (std::size_t j = 0; j < N; ++j) {
        mean += Eigen::Vector2d(M * sampled_w[j], M * sampled_v[j]);
    }
    mean /= static_cast<double>(N);
    Eigen::Vector2d rhs(mean[0] - 1, mean[1] - 1);
    Eigen::Vector2d theta = S.fullPivLu().solve(rhs);

    Estimate e;
    e.method = Method::ReadoutMoment;
    e.value = {theta[0], theta[1]};
    e.aux["U"] = rhs[0];
    e.aux["W"] = rhs[1];
    if (N > 1) {
        Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
        for (std::size_t j = 0; j < N; ++j) {
            Eigen::Vector2d dlt(M * sampled_w[j] - mean[0], M * sampled_v[j] - mean[1]);
            cov += dlt * dlt.transpose();
        }
        cov /= static_cast<double>(N - 1) * static_cast<double>(N);
        Eigen::Matrix2d inv = S.inverse();
        Eigen::Matrix2d var = inv * cov * inv.transpose();
        e.variance = {var(0, 0), var(0, 1), var(1, 0), var(1, 1)};
        e.provenance = "sample covariance of (M*w, M*v) through the moment system";
    }
    return e;
}

Estimate estimator_phi_ro_tilde(double W, const ReadoutConstants &constants) {
    const double denom = constants.G / (constants.D * constants.D) - 1;
    if (!(denom > 0)) {
        throw DegenerateDenominatorError(fmt::format("G/D^2 - 1 = {} is not positive", denom));
    }
    Estimate e;
    e.method = Method::PhiRoTilde;
    e.value = {W / denom};
    return e;
}

double loglik_readout(std::span<const double> sampled_w, std::span<const double> sampled_v, double M, double phi,
                      double phi_ro) {
    check_paired(sampled_w, sampled_v);
    kernels::detail::Neumaier s;
    const double inv_m = 1 / M;
    for (std::size_t j = 0; j < sampled_w.size(); ++j) {
        double p = phi * (sampled_w[j] - inv_m) + phi_ro * (sampled_v[j] - inv_m) + inv_m;
        if (!(p > 0)) {
            return -std::numeric_limits<double>::infinity();
        }
        s.add(std::log(p));
    }
    return s.value();
}

Estimate mle_readout(std::span<const double> sampled_w, std::span<const double> sampled_v, double M,
                     const MleConfig &cfg) {
    check_paired(sampled_w, sampled_v);
    const std::size_t N = sampled_w.size();
    std::vector<double> a(N), b(N);
    double spread = 0;
    for (std::size_t j = 0; j < N; ++j) {
        a[j] = M * sampled_w[j] - 1;
        b[j] = M * sampled_v[j] - 1;
        spread = std::max({spread, std::abs(a[j]), std::abs(b[j])});
    }
    if (spread <= 1e-12) {
        throw FlatLikelihoodError("every sampled w and v equals 1/M; parameters are not identifiable");
    }
    const auto &kern = kernels::active();

    SmoothObjective obj;
    obj.value = [&](const Eigen::VectorXd &x) {
        kernels::detail::Neumaier s;
        for (std::size_t j = 0; j < N; ++j) {
            double t = x[0] * a[j] + x[1] * b[j];
            if (!(t > -1)) {
                return -std::numeric_limits<double>::infinity();
            }
            s.add(std::log1p(t));
        }
        return s.value();
    };
    obj.derivatives = [&](const Eigen::VectorXd &x, Eigen::VectorXd &g, Eigen::MatrixXd &H) {
        auto d = kern.mixture_derivs2(a, b, x[0], x[1]);
        g.resize(2);
        g << d.g_a, d.g_b;
        H.resize(2, 2);
        H << d.h_aa, d.h_ab, d.h_ab, d.h_bb;
    };

    LinearConstraints cons;
    cons.A.resize(3, 2);
    cons.A << -1, 0, 0, -1, 1, 1;
    cons.b = Eigen::Vector3d(0, 0, 1);

    Eigen::VectorXd x(2);
    if (cfg.init && cfg.init->size() >= 2) {
        x << (*cfg.init)[0], (*cfg.init)[1];
    } else {
        x << kern.sum(a) / static_cast<double>(N), kern.sum(b) / static_cast<double>(N);
    }
    x = x.cwiseMax(0.0);
    if (x.sum() > 1) {
        x /= x.sum();
    }
    for (int k = 0; k < 200 && !std::isfinite(obj.value(x)); ++k) {
        x *= 0.5;
    }

    NewtonResult r = maximize_constrained(obj, x, cons, cfg.tol, cfg.max_iter);
    Estimate e;
    e.method = Method::ReadoutMLE;
    e.value = {std::max(0.0, r.x[0]), std::max(0.0, r.x[1])};
    e.iterations = r.iterations;
    Eigen::LLT<Eigen::MatrixXd> llt(-r.hessian);
    if (llt.info() == Eigen::Success) {
        Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(2, 2));
        e.variance = {cov(0, 0), cov(0, 1), cov(1, 0), cov(1, 1)};
        e.provenance = "inverse observed information";
    }
    return e;
}

double loglik_asymmetric(std::span<const CountEntry> counts, const ProbabilityVector &pv, double phi_g, double q1,
                         double q2) {
    if (!(q1 > 0 && q1 < 1 && q2 > 0 && q2 < 1)) {
        return -std::numeric_limits<double>::infinity();
    }
    auto signal = asymmetric_signal_vector(pv, q1, q2);
    const double q = (1 - q1 + q2) / 2;
    kernels::detail::Neumaier s;
    for (const auto &c : counts) {
        if (c.index >= pv.M()) {
            throw DimensionError(fmt::format("count index {} out of range", c.index));
        }
        double p = phi_g * signal[c.index] + (1 - phi_g) * bias_prob(pv.n(), q, c.index);
        if (!(p > 0)) {
            return -std::numeric_limits<double>::infinity();
        }
        s.add(static_cast<double>(c.count) * std::log(p));
    }
    return s.value();
}

Estimate mle_asymmetric(std::span<const CountEntry> counts, const ProbabilityVector &pv, const MleConfig &cfg) {
    if (counts.empty()) {
        throw EmptyInputError("asymmetric MLE needs a nonempty sample");
    }
    const unsigned n = pv.n();
    for (const auto &c : counts) {
        if (c.index >= pv.M()) {
            throw DimensionError(fmt::format("count index {} out of range for n={}", c.index, n));
        }
    }

    SmoothObjective obj;
    obj.value = [&](const Eigen::VectorXd &x) { return loglik_asymmetric(counts, pv, x[0], x[1], x[2]); };
    obj.derivatives = [&](const Eigen::VectorXd &x, Eigen::VectorXd &g, Eigen::MatrixXd &H) {
        const double phi = x[0], q1 = x[1], q2 = x[2];
        const double q = (1 - q1 + q2) / 2;
        Jet jet = channel_jet(pv.weights(), n, q1, q2);
        g = Eigen::VectorXd::Zero(3);
        H = Eigen::MatrixXd::Zero(3, 3);
        for (const auto &c : counts) {
            const std::uint32_t idx = c.index;
            const int k = std::popcount(idx);
            const double b = bias_prob(n, q, idx);
            const double L = k / q - (static_cast<int>(n) - k) / (1 - q);
            const double bq = b * L;
            const double bqq = b * (L * L - k / (q * q) - (static_cast<int>(n) - k) / ((1 - q) * (1 - q)));
            // dq/dq1 = -1/2, dq/dq2 = +1/2.
            const double b1 = -bq / 2, b2 = bq / 2;
            const double b11 = bqq / 4, b12 = -bqq / 4, b22 = bqq / 4;
            const double S = jet[0][idx], S1 = jet[1][idx], S2 = jet[2][idx];
            const double S11 = jet[3][idx], S12 = jet[4][idx], S22 = jet[5][idx];

            const double p = phi * S + (1 - phi) * b;
            Eigen::Vector3d dp(S - b, phi * S1 + (1 - phi) * b1, phi * S2 + (1 - phi) * b2);
            Eigen::Matrix3d ddp;
            ddp << 0, S1 - b1, S2 - b2,                                        //
                S1 - b1, phi * S11 + (1 - phi) * b11, phi * S12 + (1 - phi) * b12,  //
                S2 - b2, phi * S12 + (1 - phi) * b12, phi * S22 + (1 - phi) * b22;
            const double w = static_cast<double>(c.count);
            g += w * dp / p;
            H += w * (ddp / p - dp * dp.transpose() / (p * p));
        }
    };

    std::vector<std::array<double, 2>> box = {{0.0, 1.0}, {kQEdge, 0.5 - kQEdge}, {kQEdge, 0.5 - kQEdge}};
    if (cfg.domain && cfg.domain->size() == 3) {
        box = *cfg.domain;
    }
    LinearConstraints cons;
    cons.A = Eigen::MatrixXd::Zero(6, 3);
    cons.b.resize(6);
    for (int k = 0; k < 3; ++k) {
        cons.A(2 * k, k) = 1;
        cons.b[2 * k] = box[k][1];
        cons.A(2 * k + 1, k) = -1;
        cons.b[2 * k + 1] = -box[k][0];
    }

    Eigen::VectorXd x(3);
    if (cfg.init && cfg.init->size() >= 3) {
        x << (*cfg.init)[0], (*cfg.init)[1], (*cfg.init)[2];
    } else {
        x << 0.5, 0.05, 0.05;
    }
    for (int k = 0; k < 3; ++k) {
        x[k] = std::clamp(x[k], box[k][0], box[k][1]);
    }

    NewtonResult r = maximize_constrained(obj, x, cons, cfg.tol, cfg.max_iter);
    Estimate e;
    e.method = Method::AsymmetricMLE;
    e.value = {r.x[0], r.x[1], r.x[2]};
    e.iterations = r.iterations;
    Eigen::LLT<Eigen::MatrixXd> llt(-r.hessian);
    if (llt.info() == Eigen::Success) {
        Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(3, 3));
        e.variance.resize(9);
        for (int i = 0; i < 3; ++i) {
            for (int k = 0; k < 3; ++k) {
                e.variance[i * 3 + k] = cov(i, k);
            }
        }
        e.provenance = "inverse observed information";
    }
    return e;
}

}  // namespace xebstats
