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

#include <functional>

#include <Eigen/Dense>

namespace xebstats {

/// Feasible set {x : A x <= b}.
struct LinearConstraints {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;
};

/// Objective to maximize. `value` may return -inf outside the objective's own domain.
struct SmoothObjective {
    std::function<double(const Eigen::VectorXd &)> value;
    std::function<void(const Eigen::VectorXd &, Eigen::VectorXd &grad, Eigen::MatrixXd &hess)> derivatives;
};

struct NewtonResult {
    Eigen::VectorXd x;
    Eigen::VectorXd gradient;
    Eigen::MatrixXd hessian;
    double value = 0;
    int iterations = 0;
};

/// Damped Newton-Raphson ascent restricted to the feasible set. Constraints that are tight and
/// block the ascent direction are held active (the step is taken in their null space); Levenberg
/// damping is added when the reduced Hessian is not negative definite; steps are shortened to stay
/// feasible and halved until the objective does not decrease. Stops when the step length falls
/// below `tol`, throwing ConvergenceError after `max_iter` iterations.
NewtonResult maximize_constrained(const SmoothObjective &objective, Eigen::VectorXd x0,
                                  const LinearConstraints &constraints, double tol, int max_iter);

}  // namespace xebstats
