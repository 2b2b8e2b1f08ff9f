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

#include "kernels/neumaier.hpp"
#include "xebstats/kernels.hpp"

namespace xebstats::kernels {

namespace {

void butterfly_scalar(std::span<double> data, std::size_t stride, Kernel2x2 k) {
    const std::size_t size = data.size();
    double *p = data.data();
    for (std::size_t base = 0; base < size; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            double a = p[i];
            double b = p[i + stride];
            p[i] = k.k00 * a + k.k01 * b;
            p[i + stride] = k.k10 * a + k.k11 * b;
        }
    }
}

PowerSums power_sums_scalar(std::span<const double> x) {
    detail::Neumaier s2, s3, s4;
    for (double v : x) {
        double v2 = v * v;
        s2.add(v2);
        s3.add(v2 * v);
        s4.add(v2 * v2);
    }
    return {s2.value(), s3.value(), s4.value()};
}

double sum_scalar(std::span<const double> x) {
    detail::Neumaier s;
    for (double v : x) {
        s.add(v);
    }
    return s.value();
}

double dot_scalar(std::span<const double> x, std::span<const double> y) {
    detail::Neumaier s;
    for (std::size_t i = 0; i < x.size(); ++i) {
        s.add(x[i] * y[i]);
    }
    return s.value();
}

MixtureDerivs mixture_derivs_scalar(std::span<const double> d, double phi) {
    MixtureDerivs out;
    for (double v : d) {
        double g = v / (1.0 + phi * v);
        out.score += g;
        out.curvature -= g * g;
    }
    return out;
}

MixtureDerivs2 mixture_derivs2_scalar(std::span<const double> a, std::span<const double> b, double s, double t) {
    MixtureDerivs2 out;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double r = 1.0 / (1.0 + s * a[j] + t * b[j]);
        double ga = a[j] * r;
        double gb = b[j] * r;
        out.g_a += ga;
        out.g_b += gb;
        out.h_aa -= ga * ga;
        out.h_ab -= ga * gb;
        out.h_bb -= gb * gb;
    }
    return out;
}

}  // namespace

const KernelTable &scalar_table() {
    static const KernelTable table{
        "scalar",          butterfly_scalar,       power_sums_scalar, sum_scalar, dot_scalar,
        mixture_derivs_scalar, mixture_derivs2_scalar,
    };
    return table;
}

}  // namespace xebstats::kernels
