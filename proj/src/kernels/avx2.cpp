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

// Compiled with -mavx2 only (no FMA) so element-wise arithmetic rounds exactly like the
// scalar kernels; only reduction order differs.

#include <immintrin.h>

#include "kernels/neumaier.hpp"
#include "xebstats/kernels.hpp"

namespace xebstats::kernels {

namespace {

inline __m256d abs_pd(__m256d x) { return _mm256_andnot_pd(_mm256_set1_pd(-0.0), x); }

/// Four independent Neumaier accumulators, one per lane.
struct NeumaierX4 {
    __m256d sum = _mm256_setzero_pd();
    __m256d comp = _mm256_setzero_pd();

    void add(__m256d x) {
        __m256d t = _mm256_add_pd(sum, x);
        __m256d big_sum = _mm256_cmp_pd(abs_pd(sum), abs_pd(x), _CMP_GE_OQ);
        __m256d c_sum = _mm256_add_pd(_mm256_sub_pd(sum, t), x);
        __m256d c_x = _mm256_add_pd(_mm256_sub_pd(x, t), sum);
        comp = _mm256_add_pd(comp, _mm256_blendv_pd(c_x, c_sum, big_sum));
        sum = t;
    }

    /// Folds the lanes into a scalar accumulator.
    void fold_into(detail::Neumaier &acc) const {
        alignas(32) double s[4];
        alignas(32) double c[4];
        _mm256_store_pd(s, sum);
        _mm256_store_pd(c, comp);
        for (int i = 0; i < 4; ++i) {
            acc.add(s[i]);
        }
        for (int i = 0; i < 4; ++i) {
            acc.add(c[i]);
        }
    }
};

inline double hsum(__m256d v) {
    alignas(32) double s[4];
    _mm256_store_pd(s, v);
    return (s[0] + s[1]) + (s[2] + s[3]);
}

void butterfly_avx2(std::span<double> data, std::size_t stride, Kernel2x2 k) {
    const std::size_t size = data.size();
    double *p = data.data();
    if (stride >= 4) {
        const __m256d k00 = _mm256_set1_pd(k.k00);
        const __m256d k01 = _mm256_set1_pd(k.k01);
        const __m256d k10 = _mm256_set1_pd(k.k10);
        const __m256d k11 = _mm256_set1_pd(k.k11);
        for (std::size_t base = 0; base < size; base += 2 * stride) {
            for (std::size_t i = base; i < base + stride; i += 4) {
                __m256d a = _mm256_loadu_pd(p + i);
                __m256d b = _mm256_loadu_pd(p + i + stride);
                _mm256_storeu_pd(p + i, _mm256_add_pd(_mm256_mul_pd(k00, a), _mm256_mul_pd(k01, b)));
                _mm256_storeu_pd(p + i + stride, _mm256_add_pd(_mm256_mul_pd(k10, a), _mm256_mul_pd(k11, b)));
            }
        }
        return;
    }
    if (size < 4) {
        scalar_table().butterfly(data, stride, k);
        return;
    }
    if (stride == 2) {
        // [a0 a1 b0 b1] -> swapped [b0 b1 a0 a1]
        const __m256d diag = _mm256_setr_pd(k.k00, k.k00, k.k11, k.k11);
        const __m256d off = _mm256_setr_pd(k.k01, k.k01, k.k10, k.k10);
        for (std::size_t i = 0; i < size; i += 4) {
            __m256d x = _mm256_loadu_pd(p + i);
            __m256d sw = _mm256_permute2f128_pd(x, x, 0x01);
            _mm256_storeu_pd(p + i, _mm256_add_pd(_mm256_mul_pd(diag, x), _mm256_mul_pd(off, sw)));
        }
        return;
    }
    // stride == 1: [a0 b0 a1 b1] -> swapped [b0 a0 b1 a1]
    const __m256d diag = _mm256_setr_pd(k.k00, k.k11, k.k00, k.k11);
    const __m256d off = _mm256_setr_pd(k.k01, k.k10, k.k01, k.k10);
    for (std::size_t i = 0; i < size; i += 4) {
        __m256d x = _mm256_loadu_pd(p + i);
        __m256d sw = _mm256_permute_pd(x, 0x5);
        _mm256_storeu_pd(p + i, _mm256_add_pd(_mm256_mul_pd(diag, x), _mm256_mul_pd(off, sw)));
    }
}

PowerSums power_sums_avx2(std::span<const double> x) {
    NeumaierX4 s2, s3, s4;
    const std::size_t n = x.size();
    const double *p = x.data();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(p + i);
        __m256d v2 = _mm256_mul_pd(v, v);
        s2.add(v2);
        s3.add(_mm256_mul_pd(v2, v));
        s4.add(_mm256_mul_pd(v2, v2));
    }
    detail::Neumaier a2, a3, a4;
    s2.fold_into(a2);
    s3.fold_into(a3);
    s4.fold_into(a4);
    for (; i < n; ++i) {
        double v2 = p[i] * p[i];
        a2.add(v2);
        a3.add(v2 * p[i]);
        a4.add(v2 * v2);
    }
    return {a2.value(), a3.value(), a4.value()};
}

double sum_avx2(std::span<const double> x) {
    NeumaierX4 s;
    const std::size_t n = x.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s.add(_mm256_loadu_pd(x.data() + i));
    }
    detail::Neumaier acc;
    s.fold_into(acc);
    for (; i < n; ++i) {
        acc.add(x[i]);
    }
    return acc.value();
}

double dot_avx2(std::span<const double> x, std::span<const double> y) {
    NeumaierX4 s;
    const std::size_t n = x.size();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        s.add(_mm256_mul_pd(_mm256_loadu_pd(x.data() + i), _mm256_loadu_pd(y.data() + i)));
    }
    detail::Neumaier acc;
    s.fold_into(acc);
    for (; i < n; ++i) {
        acc.add(x[i] * y[i]);
    }
    return acc.value();
}

MixtureDerivs mixture_derivs_avx2(std::span<const double> d, double phi) {
    const std::size_t n = d.size();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d vphi = _mm256_set1_pd(phi);
    __m256d score = _mm256_setzero_pd();
    __m256d curv = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d v = _mm256_loadu_pd(d.data() + i);
        __m256d g = _mm256_div_pd(v, _mm256_add_pd(one, _mm256_mul_pd(vphi, v)));
        score = _mm256_add_pd(score, g);
        curv = _mm256_add_pd(curv, _mm256_mul_pd(g, g));
    }
    MixtureDerivs out{hsum(score), -hsum(curv)};
    for (; i < n; ++i) {
        double g = d[i] / (1.0 + phi * d[i]);
        out.score += g;
        out.curvature -= g * g;
    }
    return out;
}

MixtureDerivs2 mixture_derivs2_avx2(std::span<const double> a, std::span<const double> b, double s, double t) {
    const std::size_t n = a.size();
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d vs = _mm256_set1_pd(s);
    const __m256d vt = _mm256_set1_pd(t);
    __m256d ga_acc = _mm256_setzero_pd();
    __m256d gb_acc = _mm256_setzero_pd();
    __m256d haa = _mm256_setzero_pd();
    __m256d hab = _mm256_setzero_pd();
    __m256d hbb = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        __m256d va = _mm256_loadu_pd(a.data() + j);
        __m256d vb = _mm256_loadu_pd(b.data() + j);
        __m256d denom = _mm256_add_pd(_mm256_add_pd(one, _mm256_mul_pd(vs, va)), _mm256_mul_pd(vt, vb));
        __m256d r = _mm256_div_pd(one, denom);
        __m256d ga = _mm256_mul_pd(va, r);
        __m256d gb = _mm256_mul_pd(vb, r);
        ga_acc = _mm256_add_pd(ga_acc, ga);
        gb_acc = _mm256_add_pd(gb_acc, gb);
        haa = _mm256_add_pd(haa, _mm256_mul_pd(ga, ga));
        hab = _mm256_add_pd(hab, _mm256_mul_pd(ga, gb));
        hbb = _mm256_add_pd(hbb, _mm256_mul_pd(gb, gb));
    }
    MixtureDerivs2 out{hsum(ga_acc), hsum(gb_acc), -hsum(haa), -hsum(hab), -hsum(hbb)};
    for (; j < n; ++j) {
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

namespace detail {
const KernelTable &avx2_table_impl() {
    static const KernelTable table{
        "avx2",   butterfly_avx2,      power_sums_avx2,     sum_avx2,
        dot_avx2, mixture_derivs_avx2, mixture_derivs2_avx2,
    };
    return table;
}
}  // namespace detail

}  // namespace xebstats::kernels
