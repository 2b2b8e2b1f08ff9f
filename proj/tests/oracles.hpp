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

// Slow, direct implementations used as references for the library's fast paths.

#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

inline int popcount(std::size_t x) { return std::popcount(static_cast<std::uint64_t>(x)); }

/// v_i = sum_{y != 0} w_{i xor y} q^|y| (1-q)^(n-|y|) / (1 - (1-q)^n), in O(M^2).
inline std::vector<double> readout_v(const std::vector<double> &w, unsigned n, double q) {
    const std::size_t M = w.size();
    const long double D = 1.0L - std::pow(1.0L - q, static_cast<long double>(n));
    std::vector<double> v(M);
    for (std::size_t i = 0; i < M; ++i) {
        long double s = 0;
        for (std::size_t y = 1; y < M; ++y) {
            const int k = popcount(y);
            s += w[i ^ y] * std::pow(static_cast<long double>(q), k) *
                 std::pow(1.0L - q, static_cast<long double>(n - k));
        }
        v[i] = static_cast<double>(s / D);
    }
    return v;
}

/// (R^{(x)n} w)(x) with R(0|0) = 1-q2, R(1|0) = q2, R(0|1) = q1, R(1|1) = 1-q1.
inline std::vector<double> asym_signal(const std::vector<double> &w, unsigned n, double q1, double q2) {
    const std::size_t M = w.size();
    std::vector<double> out(M);
    for (std::size_t x = 0; x < M; ++x) {
        long double s = 0;
        for (std::size_t y = 0; y < M; ++y) {
            long double r = 1;
            for (unsigned b = 0; b < n; ++b) {
                const bool xb = (x >> b) & 1;
                const bool yb = (y >> b) & 1;
                if (!yb) {
                    r *= xb ? q2 : 1.0L - q2;
                } else {
                    r *= xb ? 1.0L - q1 : q1;
                }
            }
            s += r * w[y];
        }
        out[x] = static_cast<double>(s);
    }
    return out;
}

/// Maximizer of f over [lo, hi] by a dense grid followed by repeated refinement.
inline double argmax_1d(const std::function<long double(double)> &f, double lo, double hi, int rounds = 12) {
    double best = lo;
    for (int r = 0; r < rounds; ++r) {
        const int steps = 200;
        long double best_val = -INFINITY;
        for (int i = 0; i <= steps; ++i) {
            double x = lo + (hi - lo) * i / steps;
            long double v = f(x);
            if (v > best_val) {
                best_val = v;
                best = x;
            }
        }
        double width = (hi - lo) / steps;
        lo = std::max(lo, best - 2 * width);
        hi = std::min(hi, best + 2 * width);
    }
    return best;
}

/// 2-d grid refinement over the triangle s, t >= 0, s + t <= 1.
inline std::pair<double, double> argmax_triangle(const std::function<long double(double, double)> &f,
                                                 int rounds = 14) {
    double s_lo = 0, s_hi = 1, t_lo = 0, t_hi = 1;
    std::pair<double, double> best{0, 0};
    for (int r = 0; r < rounds; ++r) {
        const int steps = 60;
        long double best_val = -INFINITY;
        for (int i = 0; i <= steps; ++i) {
            for (int j = 0; j <= steps; ++j) {
                double s = s_lo + (s_hi - s_lo) * i / steps;
                double t = t_lo + (t_hi - t_lo) * j / steps;
                if (s + t > 1 + 1e-15) {
                    continue;
                }
                long double v = f(s, t);
                if (v > best_val) {
                    best_val = v;
                    best = {s, t};
                }
            }
        }
        double ws = (s_hi - s_lo) / steps;
        double wt = (t_hi - t_lo) / steps;
        s_lo = std::max(0.0, best.first - 2 * ws);
        s_hi = std::min(1.0, best.first + 2 * ws);
        t_lo = std::max(0.0, best.second - 2 * wt);
        t_hi = std::min(1.0, best.second + 2 * wt);
    }
    return best;
}

/// Composite Simpson rule of f over [a, b] with `panels` (even) subintervals.
inline long double simpson(const std::function<long double(long double)> &f, long double a, long double b,
                           int panels) {
    const long double h = (b - a) / panels;
    long double s = f(a) + f(b);
    for (int i = 1; i < panels; ++i) {
        s += f(a + i * h) * (i % 2 ? 4 : 2);
    }
    return s * h / 3;
}

/// Integral of (z-1)^2 e^-z / (phi z + 1 - phi) over [0, 60], on panels graded toward z = 0 where
/// the integrand is sharpest for phi near 1.
inline double mle_information(double phi) {
    auto f = [phi](long double z) { return (z - 1) * (z - 1) * std::exp(-z) / (phi * z + 1 - phi); };
    const long double cuts[] = {0, 0.001L, 0.01L, 0.1L, 1, 60};
    long double total = 0;
    for (int k = 0; k + 1 < 6; ++k) {
        total += simpson(f, cuts[k], cuts[k + 1], 20000);
    }
    return static_cast<double>(total);
}

/// E w^k for Dirichlet(1) of length M: k! / (M (M+1) ... (M+k-1)), in long double.
inline long double dirichlet_moment(long double M, int k) {
    long double r = 1;
    for (int i = 0; i < k; ++i) {
        r *= (i + 1) / (M + i);
    }
    return r;
}

}  // namespace oracle
