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

#include "xebstats/optimize.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "xebstats/errors.hpp"

namespace xebstats {

namespace {

constexpr int kMaxHalvings = 60;

bool is_active(double slack, double bound) { return slack <= 1e-12 * (1 + std::abs(bound)); }

// Orthonormal basis for {p : A_W p = 0}.
Eigen::MatrixXd null_space(const Eigen::MatrixXd &A, const std::vector<int> &rows) {
    const Eigen::Index d = A.cols();
    if (rows.empty()) {
        return Eigen::MatrixXd::Identity(d, d);
    }
    Eigen::MatrixXd At(d, static_cast<Eigen::Index>(rows.size()));
    for (std::size_t k = 0; k < rows.size(); ++k) {
        At.col(static_cast<Eigen::Index>(k)) = A.row(rows[k]).transpose();
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(At);
    const Eigen::Index r = qr.rank();
    Eigen::MatrixXd Q = qr.householderQ();
    return Q.rightCols(d - r);
}

// Solves (-Hr + mu I) y = gr, raising mu until the matrix is positive definite.
Eigen::VectorXd damped_newton(const Eigen::MatrixXd &Hr, const Eigen::VectorXd &gr) {
    Eigen::MatrixXd Nm = -Hr;
    Eigen::LLT<Eigen::MatrixXd> llt(Nm);
    if (llt.info() == Eigen::Success) {
        Eigen::VectorXd y = llt.solve(gr);
        if (y.allFinite()) {
            return y;
        }
    }
    double scale = std::max(1.0, Nm.diagonal().cwiseAbs().maxCoeff());
    for (double mu = 1e-10 * scale; mu < 1e30 * scale; mu *= 10) {
        Eigen::MatrixXd shifted = Nm;
        shifted.diagonal().array() += mu;
        Eigen::LLT<Eigen::MatrixXd> damped(shifted);
        if (damped.info() == Eigen::Success) {
            return damped.solve(gr);
        }
    }
    return gr / scale;
}

}  // namespace

NewtonResult maximize_constrained(const SmoothObjective &objective, Eigen::VectorXd x,
                                  const LinearConstraints &constraints, double tol, int max_iter) {
    const auto &A = constraints.A;
    const auto &b = constraints.b;
    const Eigen::Index m = A.rows();
    if (A.cols() != x.size() || b.size() != m) {
        throw DimensionError("constraint matrix does not match the parameter dimension");
    }
    Eigen::VectorXd slack = b - A * x;
    for (Eigen::Index i = 0; i < m; ++i) {
        if (slack[i] < -1e-9 * (1 + std::abs(b[i]))) {
            throw DomainError("starting point violates the feasible set");
        }
    }
    double f = objective.value(x);
    if (!std::isfinite(f)) {
        throw DomainError("objective is not finite at the starting point");
    }

    NewtonResult result;
    Eigen::VectorXd g;
    Eigen::MatrixXd H;
    for (int iter = 1; iter <= max_iter; ++iter) {
        objective.derivatives(x, g, H);
        slack = b - A * x;
        std::vector<int> working;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (is_active(slack[i], b[i])) {
                working.push_back(static_cast<int>(i));
            }
        }

        Eigen::VectorXd p = Eigen::VectorXd::Zero(x.size());
        for (;;) {
            Eigen::MatrixXd Z = null_space(A, working);
            if (Z.cols() > 0) {
                Eigen::MatrixXd Hr = Z.transpose() * H * Z;
                Eigen::VectorXd gr = Z.transpose() * g;
                p = Z * damped_newton(Hr, gr);
            } else {
                p.setZero();
            }
            if (working.empty()) {
                break;
            }
            // Multipliers of the equality-constrained model: g + H p = A_W^T lambda.
            Eigen::MatrixXd AWt(x.size(), static_cast<Eigen::Index>(working.size()));
            for (std::size_t k = 0; k < working.size(); ++k) {
                AWt.col(static_cast<Eigen::Index>(k)) = A.row(working[k]).transpose();
            }
            Eigen::VectorXd lambda = AWt.colPivHouseholderQr().solve(g + H * p);
            Eigen::Index worst = -1;
            double worst_value = -1e-12 * (1 + g.cwiseAbs().maxCoeff());
            for (Eigen::Index k = 0; k < lambda.size(); ++k) {
                if (lambda[k] < worst_value) {
                    worst_value = lambda[k];
                    worst = k;
                }
            }
            if (worst < 0) {
                break;
            }
            working.erase(working.begin() + worst);
        }

        // Longest feasible fraction of the step.
        double alpha = 1.0;
        bool blocked = false;
        Eigen::VectorXd Ap = A * p;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (Ap[i] > 0) {
                double limit = std::max(0.0, slack[i]) / Ap[i];
                if (limit < alpha) {
                    alpha = limit;
                    blocked = true;
                }
            }
        }

        result.iterations = iter;
        if (p.norm() < tol) {
            x += p;
            result.x = x;
            result.value = objective.value(x);
            objective.derivatives(x, result.gradient, result.hessian);
            return result;
        }

        bool accepted = false;
        for (int h = 0; h < kMaxHalvings; ++h) {
            Eigen::VectorXd trial = x + alpha * p;
            double ft = objective.value(trial);
            if (std::isfinite(ft) && ft >= f - 1e-12 * (1 + std::abs(f))) {
                x = trial;
                f = ft;
                accepted = true;
                break;
            }
            alpha *= 0.5;
            blocked = false;
            if (alpha * p.norm() < tol) {
                break;
            }
        }
        if (!accepted || (!blocked && alpha * p.norm() < tol)) {
            result.x = x;
            result.value = f;
            objective.derivatives(x, result.gradient, result.hessian);
            return result;
        }
    }
    throw ConvergenceError(fmt::format("Newton-Raphson did not converge in {} iterations", max_iter));
}

}  // namespace xebstats
