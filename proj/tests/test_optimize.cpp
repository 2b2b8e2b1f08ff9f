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

#include <gtest/gtest.h>

#include <cmath>

#include "xebstats/errors.hpp"
#include "xebstats/optimize.hpp"

using namespace xebstats;

namespace {

// f(x) = -(x - c)^T (x - c), maximized at c.
SmoothObjective quadratic(Eigen::VectorXd c) {
    SmoothObjective obj;
    obj.value = [c](const Eigen::VectorXd &x) { return -(x - c).squaredNorm(); };
    obj.derivatives = [c](const Eigen::VectorXd &x, Eigen::VectorXd &g, Eigen::MatrixXd &H) {
        g = -2 * (x - c);
        H = -2 * Eigen::MatrixXd::Identity(x.size(), x.size());
    };
    return obj;
}

LinearConstraints simplex2() {
    LinearConstraints cons;
    cons.A.resize(3, 2);
    cons.A << -1, 0, 0, -1, 1, 1;
    cons.b = Eigen::Vector3d(0, 0, 1);
    return cons;
}

}  // namespace

TEST(Optimize, InteriorMaximum) {
    auto r = maximize_constrained(quadratic(Eigen::Vector2d(0.2, 0.3)), Eigen::Vector2d(0.5, 0.1), simplex2(), 1e-12,
                                  50);
    EXPECT_NEAR(r.x[0], 0.2, 1e-12);
    EXPECT_NEAR(r.x[1], 0.3, 1e-12);
    EXPECT_LE(r.iterations, 3);
}

TEST(Optimize, MaximumOnEdge) {
    // unconstrained optimum (0.8, 0.6) projects onto x + y = 1 at (0.6, 0.4)
    auto r = maximize_constrained(quadratic(Eigen::Vector2d(0.8, 0.6)), Eigen::Vector2d(0.1, 0.1), simplex2(), 1e-12,
                                  50);
    EXPECT_NEAR(r.x[0], 0.6, 1e-10);
    EXPECT_NEAR(r.x[1], 0.4, 1e-10);
}

TEST(Optimize, MaximumAtVertex) {
    auto r = maximize_constrained(quadratic(Eigen::Vector2d(-1, -2)), Eigen::Vector2d(0.3, 0.3), simplex2(), 1e-12,
                                  50);
    EXPECT_NEAR(r.x[0], 0.0, 1e-12);
    EXPECT_NEAR(r.x[1], 0.0, 1e-12);
}

TEST(Optimize, LeavesConstraintWhenMultiplierTurnsNegative) {
    // start on the x = 0 edge with the optimum inside
    auto r = maximize_constrained(quadratic(Eigen::Vector2d(0.25, 0.25)), Eigen::Vector2d(0.0, 0.9), simplex2(),
                                  1e-12, 50);
    EXPECT_NEAR(r.x[0], 0.25, 1e-10);
    EXPECT_NEAR(r.x[1], 0.25, 1e-10);
}

TEST(Optimize, NonConcaveObjectiveStillAscends) {
    // f = x^2 on [0, 1] (convex): the maximum is at the endpoint x = 1
    SmoothObjective obj;
    obj.value = [](const Eigen::VectorXd &x) { return x[0] * x[0]; };
    obj.derivatives = [](const Eigen::VectorXd &x, Eigen::VectorXd &g, Eigen::MatrixXd &H) {
        g = Eigen::VectorXd::Constant(1, 2 * x[0]);
        H = Eigen::MatrixXd::Constant(1, 1, 2.0);
    };
    LinearConstraints cons;
    cons.A.resize(2, 1);
    cons.A << -1, 1;
    cons.b = Eigen::Vector2d(0, 1);
    auto r = maximize_constrained(obj, Eigen::VectorXd::Constant(1, 0.4), cons, 1e-12, 100);
    EXPECT_NEAR(r.x[0], 1.0, 1e-12);
}

TEST(Optimize, IterationCapRaises) {
    // log-barrier-like objective whose Newton steps shrink slowly
    SmoothObjective obj;
    obj.value = [](const Eigen::VectorXd &x) { return -std::exp(-x[0]) - 1e-3 * x[0] * x[0]; };
    obj.derivatives = [](const Eigen::VectorXd &x, Eigen::VectorXd &g, Eigen::MatrixXd &H) {
        g = Eigen::VectorXd::Constant(1, std::exp(-x[0]) - 2e-3 * x[0]);
        H = Eigen::MatrixXd::Constant(1, 1, -std::exp(-x[0]) - 2e-3);
    };
    LinearConstraints cons;
    cons.A.resize(1, 1);
    cons.A << 1;
    cons.b = Eigen::VectorXd::Constant(1, 100);
    EXPECT_THROW(maximize_constrained(obj, Eigen::VectorXd::Constant(1, -30), cons, 1e-14, 2), ConvergenceError);
}
