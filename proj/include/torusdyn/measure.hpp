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

// Empirical measures on a torus grid: bin weights plus truncated Fourier
// coefficients mu_hat(k) = sum_b w_b e^{-2 pi i k.c_b} for |k|_inf <= K,
// computed from the bins by separable contraction. The weak* distance is the
// weighted sum of coefficient differences with weights (1+|k|_2)^{-(d+1)}.

#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "torusdyn/errors.hpp"
#include "torusdyn/geometry.hpp"

namespace torusdyn {

template <int D>
struct EmpiricalMeasure {
    std::array<int, D> res{};
    int K = 8;
    std::vector<double> bins;
    std::vector<std::complex<double>> fourier;  // full cube (2K+1)^D, flat index

    static EmpiricalMeasure zeros(const std::array<int, D>& res, int K) {
        EmpiricalMeasure m;
        m.res = res;
        m.K = K;
        size_t nb = 1;
        for (int r : res) nb *= size_t(r);
        m.bins.assign(nb, 0.0);
        size_t nf = 1;
        for (int i = 0; i < D; ++i) nf *= size_t(2 * K + 1);
        m.fourier.assign(nf, {0.0, 0.0});
        return m;
    }

    static EmpiricalMeasure lebesgue(const std::array<int, D>& res, int K) {
        EmpiricalMeasure m = zeros(res, K);
        size_t nb = m.bins.size();
        for (double& b : m.bins) b = 1.0 / double(nb);
        m.refresh_fourier();
        return m;
    }

    static EmpiricalMeasure dirac(const TorusPoint<D>& x, const std::array<int, D>& res, int K) {
        EmpiricalMeasure m = zeros(res, K);
        m.deposit(x, 1.0);
        m.refresh_fourier();
        return m;
    }

    size_t bin_of(const TorusPoint<D>& x) const {
        size_t idx = 0;
        for (int i = 0; i < D; ++i) {
            int b = int(x[i] * res[size_t(i)]);
            if (b >= res[size_t(i)]) b = res[size_t(i)] - 1;
            idx = idx * size_t(res[size_t(i)]) + size_t(b);
        }
        return idx;
    }

    void deposit(const TorusPoint<D>& x, double w) { bins[bin_of(x)] += w; }

    double mass() const {
        double s = 0;
        for (double b : bins) s += b;
        return s;
    }

    size_t fourier_index(const std::array<int, D>& k) const {
        size_t idx = 0;
        for (int i = 0; i < D; ++i) idx = idx * size_t(2 * K + 1) + size_t(k[size_t(i)] + K);
        return idx;
    }

    std::complex<double> coeff(const std::array<int, D>& k) const {
        return fourier[fourier_index(k)];
    }

    // Recompute the Fourier cube from the bins, one axis contraction at a
    // time (cost: sum over axes of modes^axis * bins^(remaining axes)).
    void refresh_fourier() {
        const int nm = 2 * K + 1;
        std::vector<std::complex<double>> cur(bins.size());
        for (size_t i = 0; i < bins.size(); ++i) cur[i] = bins[i];
        size_t lead = 1;  // product of mode counts for processed axes
        size_t tail = bins.size();
        for (int axis = 0; axis < D; ++axis) {
            const int r = res[size_t(axis)];
            tail /= size_t(r);
            // phase table p[k][b] = e^{-2 pi i k (b+1/2)/r}
            std::vector<std::complex<double>> phase(size_t(nm) * size_t(r));
            for (int k = -K; k <= K; ++k)
                for (int b = 0; b < r; ++b) {
                    double ang = -2.0 * M_PI * k * ((b + 0.5) / r);
                    phase[size_t(k + K) * size_t(r) + size_t(b)] = {std::cos(ang), std::sin(ang)};
                }
            std::vector<std::complex<double>> nxt(lead * size_t(nm) * tail, {0.0, 0.0});
            for (size_t l = 0; l < lead; ++l)
                for (int k = 0; k < nm; ++k) {
                    const std::complex<double>* ph = &phase[size_t(k) * size_t(r)];
                    std::complex<double>* outp = &nxt[(l * size_t(nm) + size_t(k)) * tail];
                    for (int b = 0; b < r; ++b) {
                        const std::complex<double>* inp = &cur[(l * size_t(r) + size_t(b)) * tail];
                        const std::complex<double> f = ph[b];
                        for (size_t t = 0; t < tail; ++t) outp[t] += f * inp[t];
                    }
                }
            cur.swap(nxt);
            lead *= size_t(nm);
        }
        fourier.swap(cur);
    }

    // Direct point-sample accumulation of the Fourier cube (test oracle;
    // independent of the binned path).
    void accumulate_fourier_point(const TorusPoint<D>& x, double w) {
        const int nm = 2 * K + 1;
        std::array<std::vector<std::complex<double>>, D> pw;
        for (int i = 0; i < D; ++i) {
            pw[size_t(i)].resize(size_t(nm));
            for (int k = -K; k <= K; ++k) {
                double ang = -2.0 * M_PI * k * x[i];
                pw[size_t(i)][size_t(k + K)] = {std::cos(ang), std::sin(ang)};
            }
        }
        std::array<int, D> k{};
        for (size_t idx = 0; idx < fourier.size(); ++idx) {
            size_t rem = idx;
            std::complex<double> v = w;
            for (int i = D - 1; i >= 0; --i) {
                k[size_t(i)] = int(rem % size_t(nm));
                rem /= size_t(nm);
            }
            for (int i = 0; i < D; ++i) v *= pw[size_t(i)][size_t(k[size_t(i)])];
            fourier[idx] += v;
        }
    }
};

// Weight (1 + |k|_2)^{-(d+1)} metrizing weak* convergence up to truncation.
template <int D>
inline double weak_star_weight(const std::array<int, D>& k) {
    double n2 = 0;
    for (int i = 0; i < D; ++i) n2 += double(k[size_t(i)]) * double(k[size_t(i)]);
    return std::pow(1.0 + std::sqrt(n2), -(D + 1));
}

template <int D>
inline double weak_star_distance(const EmpiricalMeasure<D>& a, const EmpiricalMeasure<D>& b) {
    if (a.K != b.K) throw TruncationMismatch("weak_star_distance: different truncations");
    const int K = a.K;
    const int nm = 2 * K + 1;
    double dist = std::abs(a.mass() - b.mass());
    std::array<int, D> k{};
    size_t total = a.fourier.size();
    for (size_t idx = 0; idx < total; ++idx) {
        size_t rem = idx;
        bool zero = true;
        for (int i = D - 1; i >= 0; --i) {
            k[size_t(i)] = int(rem % size_t(nm)) - K;
            rem /= size_t(nm);
            if (k[size_t(i)] != 0) zero = false;
        }
        if (zero) continue;
        dist += weak_star_weight<D>(k) * std::abs(a.fourier[idx] - b.fourier[idx]);
    }
    return dist;
}

}  // namespace torusdyn
