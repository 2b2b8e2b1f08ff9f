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

#include "xebstats/estimators.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "kernels/neumaier.hpp"
#include "xebstats/errors.hpp"
#include "xebstats/kernels.hpp"
#include "xebstats/optimize.hpp"

namespace xebstats {

namespace {

constexpr std::array<std::pair<Method, std::string_view>, 11> kMethodNames{{
    {Method::U, "U"},
    {Method::V, "V"},
    {Method::LogU, "LogU"},
    {Method::MLE, "MLE"},
    {Method::T, "T"},
    {Method::GeneralMoment, "GeneralMoment"},
    {Method::GeneralMLE, "GeneralMLE"},
    {Method::ReadoutMoment, "ReadoutMoment"},
    {Method::ReadoutMLE, "ReadoutMLE"},
    {Method::PhiRoTilde, "PhiRoTilde"},
    {Method::AsymmetricMLE, "AsymmetricMLE"},
}};

void require_nonempty(std::span<const double> x, const char *what) {
    if (x.empty()) {
        throw EmptyInputError(fmt::format("{} needs at least one sampled value", what));
    }
}

// Mean and unbiased sample variance of f(x_j), compensated.
template <class F>
std::pair<double, double> mean_and_variance(std::span<const double> x, F f) {
    kernels::detail::Neumaier s;
    for (double v : x) {
        s.add(f(v));
    }
    const double mean = s.value() / static_cast<double>(x.size());
    kernels::detail::Neumaier ss;
    for (double v : x) {
        double d = f(v) - mean;
        ss.add(d * d);
    }
    const double var = x.size() > 1 ? ss.value() / static_cast<double>(x.size() - 1) : 0.0;
    return {mean, var};
}

// sum log1p(phi d_j); -inf when any factor is nonpositive.
double shifted_loglik(std::span<const double> d, double phi) {
    kernels::detail::Neumaier s;
    for (double v : d) {
        double t = phi * v;
        if (!(t > -1)) {
            return -std::numeric_limits<double>::infinity();
        }
        s.add(std::log1p(t));
    }
    return s.value();
}

}  // namespace

std::string_view method_name(Method m) {
    for (const auto &[method, name] : kMethodNames) {
        if (method == m) {
            return name;
        }
    }
    return "unknown";
}

Method parse_method(std::string_view name) {
    auto lower = [](std::string_view s) {
        std::string out(s);
        std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
        return out;
    };
    const std::string key = lower(name);
    for (const auto &[method, canonical] : kMethodNames) {
        if (lower(canonical) == key) {
            return method;
        }
    }
    throw UsageError(fmt::format("unknown estimator '{}'", name));
}

std::optional<double> Estimate::standard_error(std::size_t k) const {
    const std::size_t dim = value.size();
    if (variance.size() == dim * dim && k < dim) {
        return std::sqrt(std::max(0.0, variance[k * dim + k]));
    }
    return std::nullopt;
}

Estimate estimator_U(std::span<const double> sampled_w, double M) {
    require_nonempty(sampled_w, "U");
    auto [mean, var] = mean_and_variance(sampled_w, [M](double w) { return M * w; });
    Estimate e;
    e.method = Method::U;
    e.value = {mean - 1};
    if (sampled_w.size() > 1) {
        e.variance = {var / static_cast<double>(sampled_w.size())};
        e.provenance = "sample variance of M*w / N";
    }
    return e;
}

Estimate estimator_V(std::span<const double> sampled_w, double M, double w2) {
    const double denom = M * w2 - 1;
    if (!(denom > 1e-12)) {
        throw DegenerateDenominatorError(fmt::format("M*w2 - 1 = {} is not positive", denom));
    }
    Estimate e = estimator_U(sampled_w, M);
    e.method = Method::V;
    e.value[0] /= denom;
    if (!e.variance.empty()) {
        e.variance[0] /= denom * denom;
        e.provenance = "sample variance of M*w / (N (M*w2 - 1)^2)";
    }
    return e;
}

Estimate estimator_log(std::span<const double> sampled_w, double M) {
    require_nonempty(sampled_w, "the log estimator");
    for (double w : sampled_w) {
        if (!(w > 0)) {
            throw DomainError("the log estimator needs every sampled probability to be positive");
        }
    }
    auto [mean, var] = mean_and_variance(sampled_w, [](double w) { return std::log(w); });
    Estimate e;
    e.method = Method::LogU;
    e.value = {mean + kEulerGamma + std::log(M)};
    if (sampled_w.size() > 1) {
        e.variance = {var / static_cast<double>(sampled_w.size())};
        e.provenance = "sample variance of log w / N";
    }
    return e;
}

double loglik_basic(std::span<const double> sampled_w, double M, double phi) {
    kernels::detail::Neumaier s;
    const double floor = (1 - phi) / M;
    for (double w : sampled_w) {
        double p = phi * w + floor;
        if (!(p > 0)) {
            return -std::numeric_limits<double>::infinity();
        }
        s.add(std::log(p));
    }
    return s.value();
}

Estimate mle_basic(std::span<const double> sampled_w, double M, const MleConfig &cfg) {
    require_nonempty(sampled_w, "the MLE");
    std::vector<double> d(sampled_w.size());
    double spread = 0;
    for (std::size_t j = 0; j < d.size(); ++j) {
        d[j] = M * sampled_w[j] - 1;
        spread = std::max(spread, std::abs(d[j]));
    }
    if (spread <= 1e-12) {
        throw FlatLikelihoodError("every sampled probability equals 1/M; phi is not identifiable");
    }
    double lo = 0;
    double hi = 1;
    if (cfg.domain && !cfg.domain->empty()) {
        lo = (*cfg.domain)[0][0];
        hi = (*cfg.domain)[0][1];
    }
    const auto &kern = kernels::active();
    double phi = cfg.init && !cfg.init->empty() ? cfg.init->front() : kern.sum(d) / static_cast<double>(d.size());
    phi = std::clamp(phi, lo, hi);
    double ll = shifted_loglik(d, phi);
    while (!std::isfinite(ll) && phi - lo > 1e-15) {
        phi = lo + (phi - lo) / 2;
        ll = shifted_loglik(d, phi);
    }

    int iterations = 0;
    bool converged = false;
    for (int iter = 1; iter <= cfg.max_iter && !converged; ++iter) {
        iterations = iter;
        auto [f, J] = kern.mixture_derivs(d, phi);
        if ((phi <= lo && f <= 0) || (phi >= hi && f >= 0)) {
            converged = true;
            break;
        }
        const double target = std::clamp(phi - f / J, lo, hi);
        double step = target - phi;
        if (std::abs(step) < cfg.tol) {
            phi = target;
            converged = true;
            break;
        }
        bool accepted = false;
        for (int h = 0; h < 60; ++h) {
            double trial = phi + step;
            double lt = shifted_loglik(d, trial);
            if (std::isfinite(lt) && lt >= ll - 1e-12 * (1 + std::abs(ll))) {
                phi = trial;
                ll = lt;
                accepted = true;
                break;
            }
            step /= 2;
            if (std::abs(step) < cfg.tol) {
                break;
            }
        }
        if (!accepted) {
            converged = true;
        }
    }
    if (!converged) {
        throw ConvergenceError(fmt::format("basic MLE did not converge in {} iterations", cfg.max_iter));
    }
    auto [f, J] = kern.mixture_derivs(d, phi);
    Estimate e;
    e.method = Method::MLE;
    e.value = {phi};
    e.iterations = iterations;
    if (J < 0) {
        e.variance = {-1.0 / J};
        e.provenance = "inverse observed information";
    }
    e.aux["score"] = f * M;
    return e;
}

Estimate estimator_T(std::span<const CountEntry> counts, double M, std::uint64_t N) {
    if (N < 2) {
        throw EmptyInputError("T needs at least two draws");
    }
    std::uint64_t total = 0;
    long double sum_sq = 0;
    for (const auto &c : counts) {
        total += c.count;
        sum_sq += static_cast<long double>(c.count) * c.count;
    }
    if (total != N) {
        throw DimensionError(fmt::format("counts sum to {}, expected N={}", total, N));
    }
    const long double n = N;
    const long double pairs = n * n - n;
    const long double m = M;
    const long double t2 = m * (m + 1) / (pairs * (m - 1)) * (sum_sq - n - pairs / m);
    Estimate e;
    e.method = Method::T;
    e.value = {static_cast<double>(std::sqrt(std::max(0.0L, t2)))};
    e.aux["T2"] = static_cast<double>(t2);
    return e;
}

Estimate estimator_general_moment(std::span<const std::vector<double>> samples, double M,
                                  std::span<const ProbabilityVector> components) {
    const std::size_t p = samples.size();
    if (p < 2) {
        throw DimensionError("the general-p estimator needs at least two components");
    }
    const std::size_t N = samples[0].size();
    if (N == 0) {
        throw EmptyInputError("general-p estimator needs a nonempty sample");
    }
    for (const auto &s : samples) {
        if (s.size() != N) {
            throw DimensionError("per-component samples have different lengths");
        }
    }
    Eigen::VectorXd U(p);
    Eigen::MatrixXd centered(N, p);
    for (std::size_t k = 0; k < p; ++k) {
        auto [mean, var] = mean_and_variance(samples[k], [M](double w) { return M * w; });
        (void)var;
        U[k] = mean - 1;
        for (std::size_t j = 0; j < N; ++j) {
            centered(j, k) = M * samples[k][j] - mean;
        }
    }
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(p, p);
    if (N > 1) {
        cov = centered.transpose() * centered / static_cast<double>(N - 1) / static_cast<double>(N);
    }

    Estimate e;
    e.method = Method::GeneralMoment;
    Eigen::VectorXd phi = U;
    if (!components.empty()) {
        if (components.size() != p) {
            throw DimensionError(fmt::format("{} component vectors supplied for {} samples", components.size(), p));
        }
        Eigen::MatrixXd gram(p, p);
        const auto &kern = kernels::active();
        for (std::size_t k = 0; k < p; ++k) {
            if (static_cast<double>(components[k].M()) != M) {
                throw DimensionError("component vector size does not match M");
            }
            for (std::size_t l = 0; l <= k; ++l) {
                gram(k, l) = gram(l, k) = M * kern.dot(components[k].weights(), components[l].weights());
            }
        }
        Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
        if (!lu.isInvertible()) {
            throw DegenerateDenominatorError("component Gram matrix is singular");
        }
        phi = lu.solve((U.array() + 1).matrix());
        Eigen::MatrixXd inv = lu.inverse();
        cov = inv * cov * inv.transpose();
        e.provenance = "Gram-corrected; sample covariance propagated";
    } else {
        e.provenance = "sample covariance of M*w_k / N";
    }
    e.value.assign(phi.data(), phi.data() + p);
    if (N > 1) {
        e.variance.resize(p * p);
        for (std::size_t a = 0; a < p; ++a) {
            for (std::size_t b = 0; b < p; ++b) {
                e.variance[a * p + b] = cov(a, b);
            }
        }
    }
    return e;
}

double loglik_general(std::span<const std::vector<double>> samples, std::span<const double> phis) {
    if (samples.size() != phis.size() || samples.empty()) {
        throw DimensionError("weights and samples disagree in p");
    }
    kernels::detail::Neumaier s;
    for (std::size_t j = 0; j < samples[0].size(); ++j) {
        double m = 0;
        for (std::size_t k = 0; k < phis.size(); ++k) {
            m += phis[k] * samples[k][j];
        }
        if (!(m > 0)) {
            return -std::numeric_limits<double>::infinity();
        }
        s.add(std::log(m));
    }
    return s.value();
}

Estimate mle_general(std::span<const std::vector<double>> samples, double M, const MleConfig &cfg) {
    const std::size_t p = samples.size();
    if (p < 2) {
        throw DimensionError("the general-p MLE needs at least two components");
    }
    const std::size_t N = samples[0].size();
    if (N == 0) {
        throw EmptyInputError("general-p MLE needs a nonempty sample");
    }
    for (const auto &s : samples) {
        if (s.size() != N) {
            throw DimensionError("per-component samples have different lengths");
        }
    }
    const Eigen::Index d = static_cast<Eigen::Index>(p - 1);
    // Mixture M*pi_j = c_j + sum_k x_k a_kj with the last component eliminated.
    Eigen::MatrixXd a(N, d);
    Eigen::VectorXd c(N);
    double spread = 0;
    for (std::size_t j = 0; j < N; ++j) {
        c[j] = M * samples[p - 1][j];
        for (Eigen::Index k = 0; k < d; ++k) {
            a(j, k) = M * samples[k][j] - c[j];
            spread = std::max(spread, std::abs(a(j, k)));
        }
    }
    if (spread <= 1e-12) {
        throw FlatLikelihoodError("all components agree at every draw; weights are not identifiable");
    }

    SmoothObjective obj;
    obj.value = [&](const Eigen::VectorXd &x) {
        Eigen::VectorXd m = c + a * x;
        kernels::detail::Neumaier s;
        for (Eigen::Index j = 0; j < m.size(); ++j) {
            if (!(m[j] > 0)) {
                return -std::numeric_limits<double>::infinity();
            }
            s.add(std::log(m[j]));
        }
        return s.value();
    };
    obj.derivatives = [&](const Eigen::VectorXd &x, Eigen::VectorXd &g, Eigen::MatrixXd &H) {
        Eigen::VectorXd m = c + a * x;
        Eigen::MatrixXd scaled = a.array().colwise() / m.array();
        g = scaled.colwise().sum().transpose();
        H = -(scaled.transpose() * scaled);
    };

    LinearConstraints cons;
    cons.A = Eigen::MatrixXd::Zero(d + 1, d);
    cons.b = Eigen::VectorXd::Zero(d + 1);
    for (Eigen::Index k = 0; k < d; ++k) {
        cons.A(k, k) = -1;
        cons.A(d, k) = 1;
    }
    cons.b[d] = 1;

    Eigen::VectorXd x(d);
    if (cfg.init && cfg.init->size() >= static_cast<std::size_t>(d)) {
        for (Eigen::Index k = 0; k < d; ++k) {
            x[k] = (*cfg.init)[k];
        }
    } else {
        std::vector<double> start(p);
        double total = 0;
        for (std::size_t k = 0; k < p; ++k) {
            auto [mean, var] = mean_and_variance(samples[k], [M](double w) { return M * w; });
            (void)var;
            start[k] = std::max(0.0, mean - 1);
            total += start[k];
        }
        for (Eigen::Index k = 0; k < d; ++k) {
            x[k] = total > 0 ? start[k] / total : 1.0 / static_cast<double>(p);
        }
    }
    x = x.cwiseMax(0.0);
    if (x.sum() > 1) {
        x /= x.sum();
    }
    const Eigen::VectorXd center = Eigen::VectorXd::Constant(d, 1.0 / static_cast<double>(p));
    for (int k = 0; k < 200 && !std::isfinite(obj.value(x)); ++k) {
        x = 0.5 * (x + center);
    }

    NewtonResult r = maximize_constrained(obj, x, cons, cfg.tol, cfg.max_iter);
    Estimate e;
    e.method = Method::GeneralMLE;
    e.iterations = r.iterations;
    e.value.resize(p);
    double used = 0;
    for (Eigen::Index k = 0; k < d; ++k) {
        e.value[k] = std::clamp(r.x[k], 0.0, 1.0);
        used += e.value[k];
    }
    if (used > 1) {
        for (Eigen::Index k = 0; k < d; ++k) {
            e.value[k] /= used;
        }
        used = 1;
    }
    e.value[p - 1] = std::max(0.0, 1 - used);

    Eigen::LLT<Eigen::MatrixXd> llt(-r.hessian);
    if (llt.info() == Eigen::Success) {
        Eigen::MatrixXd inner = llt.solve(Eigen::MatrixXd::Identity(d, d));
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(p, d);
        jac.topRows(d).setIdentity();
        jac.row(d).setConstant(-1);
        Eigen::MatrixXd cov = jac * inner * jac.transpose();
        e.variance.resize(p * p);
        for (std::size_t i = 0; i < p; ++i) {
            for (std::size_t k = 0; k < p; ++k) {
                e.variance[i * p + k] = cov(i, k);
            }
        }
        e.provenance = "inverse observed information";
    }
    return e;
}

}  // namespace xebstats
