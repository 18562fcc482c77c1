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

// Reference kernels. These define the semantics the SIMD variants must match.

#include <cmath>
#include <limits>
#include <vector>

#include "torusdyn/kernels/kernels.hpp"

namespace torusdyn::kernels {
namespace {

inline double wrap(double x) {
    double r = x - std::floor(x);
    return r >= 1.0 ? 0.0 : r;
}

inline double centered(double x) { return x - std::floor(x + 0.5); }

void step2_scalar(const double a[4], double* x0, double* x1, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        double u = x0[i], v = x1[i];
        x0[i] = wrap(a[0] * u + a[1] * v);
        x1[i] = wrap(a[2] * u + a[3] * v);
    }
}

void step3_scalar(const double a[9], double* x0, double* x1, double* x2, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        double u = x0[i], v = x1[i], w = x2[i];
        x0[i] = wrap(a[0] * u + a[1] * v + a[2] * w);
        x1[i] = wrap(a[3] * u + a[4] * v + a[5] * w);
        x2[i] = wrap(a[6] * u + a[7] * v + a[8] * w);
    }
}

inline uint32_t bin1(double x, int r) {
    int b = int(x * r);
    if (b >= r) b = r - 1;
    if (b < 0) b = 0;
    return uint32_t(b);
}

void bin2_scalar(const double* x0, const double* x1, int r0, int r1, uint32_t* idx, size_t n) {
    for (size_t i = 0; i < n; ++i) idx[i] = bin1(x0[i], r0) * uint32_t(r1) + bin1(x1[i], r1);
}

void bin3_scalar(const double* x0, const double* x1, const double* x2, int r0, int r1, int r2,
                 uint32_t* idx, size_t n) {
    for (size_t i = 0; i < n; ++i)
        idx[i] = (bin1(x0[i], r0) * uint32_t(r1) + bin1(x1[i], r1)) * uint32_t(r2) +
                 bin1(x2[i], r2);
}

void ball_mask2_scalar(const double* x0, const double* x1, double p0, double p1, double rr,
                       uint8_t* mask, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        double d0 = centered(x0[i] - p0), d1 = centered(x1[i] - p1);
        mask[i] = (d0 * d0 + d1 * d1 < rr) ? 1 : 0;
    }
}

void ball_mask3_scalar(const double* x0, const double* x1, const double* x2, double p0,
                       double p1, double p2, double rr, uint8_t* mask, size_t n) {
    for (size_t i = 0; i < n; ++i) {
        double d0 = centered(x0[i] - p0), d1 = centered(x1[i] - p1), d2 = centered(x2[i] - p2);
        mask[i] = (d0 * d0 + d1 * d1 + d2 * d2 < rr) ? 1 : 0;
    }
}

double min_ratio2_scalar(const double a[4], const double* v0, const double* v1, size_t n) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        double u = v0[i], v = v1[i];
        double y0 = a[0] * u + a[1] * v;
        double y1 = a[2] * u + a[3] * v;
        double r = (y0 * y0 + y1 * y1) / (u * u + v * v);
        if (r < best) best = r;
    }
    return best;
}

double min_ratio3_scalar(const double a[9], const double* v0, const double* v1,
                         const double* v2, size_t n) {
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < n; ++i) {
        double u = v0[i], v = v1[i], w = v2[i];
        double y0 = a[0] * u + a[1] * v + a[2] * w;
        double y1 = a[3] * u + a[4] * v + a[5] * w;
        double y2 = a[6] * u + a[7] * v + a[8] * w;
        double r = (y0 * y0 + y1 * y1 + y2 * y2) / (u * u + v * v + w * w);
        if (r < best) best = r;
    }
    return best;
}

// powers e^{-2 pi i k x} for k = -kmax..kmax into re/im arrays (index k+kmax)
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

void modes2_scalar(const double* x0, const double* x1, size_t n, double w, int kmax,
                   double* acc_re, double* acc_im) {
    const int nm = 2 * kmax + 1;
    const size_t nsz = size_t(nm);
    std::vector<double> p0r(nsz), p0i(nsz), p1r(nsz), p1i(nsz);
    for (size_t i = 0; i < n; ++i) {
        axis_powers(x0[i], kmax, p0r.data(), p0i.data());
        axis_powers(x1[i], kmax, p1r.data(), p1i.data());
        for (int k1 = 0; k1 < nm; ++k1) {
            double wr = w * p0r[size_t(k1)], wi = w * p0i[size_t(k1)];
            double* ar = acc_re + size_t(k1) * size_t(nm);
            double* ai = acc_im + size_t(k1) * size_t(nm);
            for (int k2 = 0; k2 < nm; ++k2) {
                ar[k2] += wr * p1r[size_t(k2)] - wi * p1i[size_t(k2)];
                ai[k2] += wr * p1i[size_t(k2)] + wi * p1r[size_t(k2)];
            }
        }
    }
}

void modes3_scalar(const double* x0, const double* x1, const double* x2, size_t n, double w,
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
                double* ar = acc_re + base;
                double* ai = acc_im + base;
                for (int k3 = 0; k3 < nm; ++k3) {
                    ar[k3] += w2r * p2r[size_t(k3)] - w2i * p2i[size_t(k3)];
                    ai[k3] += w2r * p2i[size_t(k3)] + w2i * p2r[size_t(k3)];
                }
            }
        }
    }
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops table{
        "scalar",         step2_scalar,      step3_scalar,      bin2_scalar,
        bin3_scalar,      ball_mask2_scalar, ball_mask3_scalar, min_ratio2_scalar,
        min_ratio3_scalar, modes2_scalar,    modes3_scalar,
    };
    return table;
}

}  // namespace torusdyn::kernels
