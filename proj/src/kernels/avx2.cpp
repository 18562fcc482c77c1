// Copyright 2026-present the torusdyn project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AVX2/FMA variants. Compiled with -mavx2 -mfma in its own translation unit;
// only reached through the runtime dispatcher. Tails fall back to the scalar
// reference so the batch semantics stay identical.

#include "torusdyn/kernels/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>
#include <limits>
#include <vector>

namespace torusdyn::kernels {
namespace {

inline __m256d wrap4(__m256d x) {
    __m256d f = _mm256_floor_pd(x);
    __m256d r = _mm256_sub_pd(x, f);
    // guard the seam: r == 1.0 maps to 0.0
    __m256d one = _mm256_set1_pd(1.0);
    __m256d ge1 = _mm256_cmp_pd(r, one, _CMP_GE_OQ);
    return _mm256_andnot_pd(ge1, r);
}

inline __m256d centered4(__m256d x) {
    __m256d half = _mm256_set1_pd(0.5);
    __m256d f = _mm256_floor_pd(_mm256_add_pd(x, half));
    return _mm256_sub_pd(x, f);
}

void step2_avx2(const double a[4], double* x0, double* x1, size_t n) {
    const __m256d a00 = _mm256_set1_pd(a[0]), a01 = _mm256_set1_pd(a[1]);
    const __m256d a10 = _mm256_set1_pd(a[2]), a11 = _mm256_set1_pd(a[3]);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d u = _mm256_loadu_pd(x0 + i);
        __m256d v = _mm256_loadu_pd(x1 + i);
        __m256d y0 = _mm256_fmadd_pd(a01, v, _mm256_mul_pd(a00, u));
        __m256d y1 = _mm256_fmadd_pd(a11, v, _mm256_mul_pd(a10, u));
        _mm256_storeu_pd(x0 + i, wrap4(y0));
        _mm256_storeu_pd(x1 + i, wrap4(y1));
    }
    if (i < n) scalar_ops().step2(a, x0 + i, x1 + i, n - i);
}

void step3_avx2(const double a[9], double* x0, double* x1, double* x2, size_t n) {
    __m256d r[9];
    for (int k = 0; k < 9; ++k) r[k] = _mm256_set1_pd(a[k]);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d u = _mm256_loadu_pd(x0 + i);
        __m256d v = _mm256_loadu_pd(x1 + i);
        __m256d w = _mm256_loadu_pd(x2 + i);
        __m256d y0 = _mm256_fmadd_pd(r[2], w, _mm256_fmadd_pd(r[1], v, _mm256_mul_pd(r[0], u)));
        __m256d y1 = _mm256_fmadd_pd(r[5], w, _mm256_fmadd_pd(r[4], v, _mm256_mul_pd(r[3], u)));
        __m256d y2 = _mm256_fmadd_pd(r[8], w, _mm256_fmadd_pd(r[7], v, _mm256_mul_pd(r[6], u)));
        _mm256_storeu_pd(x0 + i, wrap4(y0));
        _mm256_storeu_pd(x1 + i, wrap4(y1));
        _mm256_storeu_pd(x2 + i, wrap4(y2));
    }
    if (i < n) scalar_ops().step3(a, x0 + i, x1 + i, x2 + i, n - i);
}

inline __m128i bin4(__m256d x, int r) {
    __m256d scaled = _mm256_mul_pd(x, _mm256_set1_pd(double(r)));
    __m128i b = _mm256_cvttpd_epi32(scaled);
    b = _mm_min_epi32(b, _mm_set1_epi32(r - 1));
    b = _mm_max_epi32(b, _mm_setzero_si128());
    return b;
}

void bin2_avx2(const double* x0, const double* x1, int r0, int r1, uint32_t* idx, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m128i b0 = bin4(_mm256_loadu_pd(x0 + i), r0);
        __m128i b1 = bin4(_mm256_loadu_pd(x1 + i), r1);
        __m128i out = _mm_add_epi32(_mm_mullo_epi32(b0, _mm_set1_epi32(r1)), b1);
        _mm_storeu_si128(reinterpret_cast<__m128i*>(idx + i), out);
    }
    if (i < n) scalar_ops().bin2(x0 + i, x1 + i, r0, r1, idx + i, n - i);
}

void bin3_avx2(const double* x0, const double* x1, const double* x2, int r0, int r1, int r2,
               uint32_t* idx, size_t n) {
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m128i b0 = bin4(_mm256_loadu_pd(x0 + i), r0);
        __m128i b1 = bin4(_mm256_loadu_pd(x1 + i), r1);
        __m128i b2 = bin4(_mm256_loadu_pd(x2 + i), r2);
        __m128i out = _mm_add_epi32(
            _mm_mullo_epi32(_mm_add_epi32(_mm_mullo_epi32(b0, _mm_set1_epi32(r1)), b1),
                            _mm_set1_epi32(r2)),
            b2);
        _mm_storeu_si128(reinterpret_cast<__m128i*>(idx + i), out);
    }
    if (i < n) scalar_ops().bin3(x0 + i, x1 + i, x2 + i, r0, r1, r2, idx + i, n - i);
}

void ball_mask2_avx2(const double* x0, const double* x1, double p0, double p1, double rr,
                     uint8_t* mask, size_t n) {
    const __m256d vp0 = _mm256_set1_pd(p0), vp1 = _mm256_set1_pd(p1);
    const __m256d vrr = _mm256_set1_pd(rr);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d0 = centered4(_mm256_sub_pd(_mm256_loadu_pd(x0 + i), vp0));
        __m256d d1 = centered4(_mm256_sub_pd(_mm256_loadu_pd(x1 + i), vp1));
        __m256d s = _mm256_fmadd_pd(d1, d1, _mm256_mul_pd(d0, d0));
        int m = _mm256_movemask_pd(_mm256_cmp_pd(s, vrr, _CMP_LT_OQ));
        mask[i + 0] = uint8_t(m & 1);
        mask[i + 1] = uint8_t((m >> 1) & 1);
        mask[i + 2] = uint8_t((m >> 2) & 1);
        mask[i + 3] = uint8_t((m >> 3) & 1);
    }
    if (i < n) scalar_ops().ball_mask2(x0 + i, x1 + i, p0, p1, rr, mask + i, n - i);
}

void ball_mask3_avx2(const double* x0, const double* x1, const double* x2, double p0, double p1,
                     double p2, double rr, uint8_t* mask, size_t n) {
    const __m256d vp0 = _mm256_set1_pd(p0), vp1 = _mm256_set1_pd(p1), vp2 = _mm256_set1_pd(p2);
    const __m256d vrr = _mm256_set1_pd(rr);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d d0 = centered4(_mm256_sub_pd(_mm256_loadu_pd(x0 + i), vp0));
        __m256d d1 = centered4(_mm256_sub_pd(_mm256_loadu_pd(x1 + i), vp1));
        __m256d d2 = centered4(_mm256_sub_pd(_mm256_loadu_pd(x2 + i), vp2));
        __m256d s = _mm256_fmadd_pd(d2, d2, _mm256_fmadd_pd(d1, d1, _mm256_mul_pd(d0, d0)));
        int m = _mm256_movemask_pd(_mm256_cmp_pd(s, vrr, _CMP_LT_OQ));
        mask[i + 0] = uint8_t(m & 1);
        mask[i + 1] = uint8_t((m >> 1) & 1);
        mask[i + 2] = uint8_t((m >> 2) & 1);
        mask[i + 3] = uint8_t((m >> 3) & 1);
    }
    if (i < n) scalar_ops().ball_mask3(x0 + i, x1 + i, x2 + i, p0, p1, p2, rr, mask + i, n - i);
}

inline double hmin4(__m256d v) {
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    __m128d m = _mm_min_pd(lo, hi);
    m = _mm_min_sd(m, _mm_unpackhi_pd(m, m));
    return _mm_cvtsd_f64(m);
}

double min_ratio2_avx2(const double a[4], const double* v0, const double* v1, size_t n) {
    const __m256d a00 = _mm256_set1_pd(a[0]), a01 = _mm256_set1_pd(a[1]);
    const __m256d a10 = _mm256_set1_pd(a[2]), a11 = _mm256_set1_pd(a[3]);
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d u = _mm256_loadu_pd(v0 + i);
        __m256d v = _mm256_loadu_pd(v1 + i);
        __m256d y0 = _mm256_fmadd_pd(a01, v, _mm256_mul_pd(a00, u));
        __m256d y1 = _mm256_fmadd_pd(a11, v, _mm256_mul_pd(a10, u));
        __m256d num = _mm256_fmadd_pd(y1, y1, _mm256_mul_pd(y0, y0));
        __m256d den = _mm256_fmadd_pd(v, v, _mm256_mul_pd(u, u));
        best = _mm256_min_pd(best, _mm256_div_pd(num, den));
    }
    double out = hmin4(best);
    if (i < n) out = std::min(out, scalar_ops().min_ratio2(a, v0 + i, v1 + i, n - i));
    return out;
}

double min_ratio3_avx2(const double a[9], const double* v0, const double* v1, const double* v2,
                       size_t n) {
    __m256d r[9];
    for (int k = 0; k < 9; ++k) r[k] = _mm256_set1_pd(a[k]);
    __m256d best = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d u = _mm256_loadu_pd(v0 + i);
        __m256d v = _mm256_loadu_pd(v1 + i);
        __m256d w = _mm256_loadu_pd(v2 + i);
        __m256d y0 = _mm256_fmadd_pd(r[2], w, _mm256_fmadd_pd(r[1], v, _mm256_mul_pd(r[0], u)));
        __m256d y1 = _mm256_fmadd_pd(r[5], w, _mm256_fmadd_pd(r[4], v, _mm256_mul_pd(r[3], u)));
        __m256d y2 = _mm256_fmadd_pd(r[8], w, _mm256_fmadd_pd(r[7], v, _mm256_mul_pd(r[6], u)));
        __m256d num =
            _mm256_fmadd_pd(y2, y2, _mm256_fmadd_pd(y1, y1, _mm256_mul_pd(y0, y0)));
        __m256d den = _mm256_fmadd_pd(w, w, _mm256_fmadd_pd(v, v, _mm256_mul_pd(u, u)));
        best = _mm256_min_pd(best, _mm256_div_pd(num, den));
    }
    double out = hmin4(best);
    if (i < n) out = std::min(out, scalar_ops().min_ratio3(a, v0 + i, v1 + i, v2 + i, n - i));
    return out;
}

inline void axis_powers(double x, int kmax, double* re, double* im) {
    double ang = -2.0 * M_PI * x;
    double cr = std::cos(ang), ci = std::sin(ang);
    re[kmax] = 1.0;
    im[kmax] = 0.0;
    double pr = 1.0, pi = 0.0;
    for (int k = 1; k <= kmax; ++k) {
        double nr = pr * cr - pi * ci;
        double ni = pr * ci + pi * cr;
        pr = nr;
        pi = ni;
        re[kmax + k] = pr;
        im[kmax + k] = pi;
        re[kmax - k] = pr;
        im[kmax - k] = -pi;
    }
}

// complex AXPY acc += (wr + i wi) * p over a contiguous k-run, 4 wide
inline void caxpy(double wr, double wi, const double* pr, const double* pi, double* ar,
                  double* ai, int nm) {
    const __m256d vwr = _mm256_set1_pd(wr), vwi = _mm256_set1_pd(wi);
    int k = 0;
    for (; k + 4 <= nm; k += 4) {
        __m256d prr = _mm256_loadu_pd(pr + k);
        __m256d pii = _mm256_loadu_pd(pi + k);
        __m256d arr = _mm256_loadu_pd(ar + k);
        __m256d aii = _mm256_loadu_pd(ai + k);
        arr = _mm256_add_pd(arr, _mm256_fmsub_pd(vwr, prr, _mm256_mul_pd(vwi, pii)));
        aii = _mm256_add_pd(aii, _mm256_fmadd_pd(vwr, pii, _mm256_mul_pd(vwi, prr)));
        _mm256_storeu_pd(ar + k, arr);
        _mm256_storeu_pd(ai + k, aii);
    }
    for (; k < nm; ++k) {
        ar[k] += wr * pr[k] - wi * pi[k];
        ai[k] += wr * pi[k] + wi * pr[k];
    }
}

void modes2_avx2(const double* x0, const double* x1, size_t n, double w, int kmax,
                 double* acc_re, double* acc_im) {
    const int nm = 2 * kmax + 1;
    const size_t nsz = size_t(nm);
    std::vector<double> p0r(nsz), p0i(nsz), p1r(nsz), p1i(nsz);
    for (size_t i = 0; i < n; ++i) {
        axis_powers(x0[i], kmax, p0r.data(), p0i.data());
        axis_powers(x1[i], kmax, p1r.data(), p1i.data());
        for (int k1 = 0; k1 < nm; ++k1) {
            caxpy(w * p0r[size_t(k1)], w * p0i[size_t(k1)], p1r.data(), p1i.data(),
                  acc_re + size_t(k1) * size_t(nm), acc_im + size_t(k1) * size_t(nm), nm);
        }
    }
}

void modes3_avx2(const double* x0, const double* x1, const double* x2, size_t n, double w,
                 int kmax, double* acc_re, double* acc_im) {
    const int nm = 2 * kmax + 1;
    const size_t nsz = size_t(nm);
    std::vector<double> p0r(nsz), p0i(nsz), p1r(nsz), p1i(nsz), p2r(nsz), p2i(nsz);
    for (size_t i = 0; i < n; ++i) {
        axis_powers(x0[i], kmax, p0r.data(), p0i.data());
        axis_powers(x1[i], kmax, p1r.data(), p1i.data());
        axis_powers(x2[i], kmax, p2r.data(), p2i.data());
        for (int k1 = 0; k1 < nm; ++k1) {
            double w1r = w * p0r[size_t(k1)], w1i = w * p0i[size_t(k1)];
            for (int k2 = 0; k2 < nm; ++k2) {
                double w2r = w1r * p1r[size_t(k2)] - w1i * p1i[size_t(k2)];
                double w2i = w1r * p1i[size_t(k2)] + w1i * p1r[size_t(k2)];
                size_t base = (size_t(k1) * size_t(nm) + size_t(k2)) * size_t(nm);
                caxpy(w2r, w2i, p2r.data(), p2i.data(), acc_re + base, acc_im + base, nm);
            }
        }
    }
}

}  // namespace

const Ops* avx2_ops_table() {
    static const Ops table{
        "avx2",          step2_avx2,      step3_avx2,      bin2_avx2,      bin3_avx2,
        ball_mask2_avx2, ball_mask3_avx2, min_ratio2_avx2, min_ratio3_avx2,
        modes2_avx2,     modes3_avx2,
    };
    return &table;
}

}  // namespace torusdyn::kernels

#else

namespace torusdyn::kernels {
const Ops* avx2_ops_table() { return nullptr; }
}  // namespace torusdyn::kernels

#endif
