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

// Lyapunov spectra by the discrete QR cocycle and the SRB entropy from the
// stable-Jacobian formula h = integral of log(|det Df| / |det Df|_{E^s}|),
// cross-checked against the sum of positive exponents.

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "torusdyn/cones.hpp"
#include "torusdyn/errors.hpp"
#include "torusdyn/measure.hpp"
#include "torusdyn/models.hpp"
#include "torusdyn/parallel.hpp"
#include "torusdyn/rng.hpp"

namespace torusdyn {

struct LyapunovSpectrum {
    std::vector<double> exponents;      // descending, one per tangent direction
    std::vector<int> multiplicities;    // from gap clustering, sum = d
    std::vector<double> distinct;       // clustered exponent values, descending
    int n_used = 0;
    double drift = 0.0;                 // change between n/2 and n estimates
};

template <int D>
inline LyapunovSpectrum lyapunov_qr(const MapModel<D>& model, const TorusPoint<D>& x, int n,
                                    double gap = 1e-2) {
    if (n < 100) throw Error("lyapunov_qr: need n >= 100");
    Basis<D> frame;
    for (int i = 0; i < D; ++i) {
        Vec<D> e{};
        e[i] = 1.0;
        frame.push(e);
    }
    std::array<double, D> logs{};
    std::array<double, D> logs_half{};
    TorusPoint<D> z = x;
    for (int j = 0; j < n; ++j) {
        Mat<D> jac = model.derivative(z);
        for (int c = 0; c < D; ++c) frame[c] = jac * frame[c];
        auto r = orthonormalize(frame);
        for (int c = 0; c < D; ++c) logs[size_t(c)] += std::log(r[size_t(c)]);
        if (j + 1 == n / 2) logs_half = logs;
        z = model.apply(z);
    }
    LyapunovSpectrum out;
    out.n_used = n;
    out.exponents.resize(D);
    for (int c = 0; c < D; ++c) out.exponents[size_t(c)] = logs[size_t(c)] / double(n);
    std::sort(out.exponents.begin(), out.exponents.end(), std::greater<>());
    std::vector<double> halfexp(D);
    for (int c = 0; c < D; ++c) halfexp[size_t(c)] = logs_half[size_t(c)] / double(n / 2);
    std::sort(halfexp.begin(), halfexp.end(), std::greater<>());
    for (int c = 0; c < D; ++c)
        out.drift = std::max(out.drift, std::abs(out.exponents[size_t(c)] - halfexp[size_t(c)]));
    // multiplicities by gap clustering
    for (size_t i = 0; i < out.exponents.size();) {
        size_t j = i + 1;
        double sum = out.exponents[i];
        while (j < out.exponents.size() && out.exponents[j - 1] - out.exponents[j] < gap) {
            sum += out.exponents[j];
            ++j;
        }
        out.distinct.push_back(sum / double(j - i));
        out.multiplicities.push_back(int(j - i));
        i = j;
    }
    return out;
}

struct EntropyReport {
    double h_formula = 0.0;
    double h_pesin = 0.0;
    double discrepancy = 0.0;
    double excluded_mass = 0.0;
};

struct EntropyOptions {
    int stable_depth = 40;
    int pesin_starts = 8;
    int pesin_iters = 4000;
    uint64_t seed = 7;
    int workers = 1;
};

// h_formula integrates log|det Dg| - log|det Dg|_{E^s}| over the measure with
// bin centers as representatives; h_pesin sums the positive Lyapunov
// exponents from a mu-distributed start ensemble.
template <int D>
inline EntropyReport entropy_from_formula(const MapModel<D>& model,
                                          const EmpiricalMeasure<D>& mu,
                                          const EntropyOptions& opt = {}) {
    double mass = mu.mass();
    if (!(mass > 0)) throw Error("entropy_from_formula: measure has no mass");

    EntropyReport rep;
    double acc = 0.0, used = 0.0, excluded = 0.0;
    const bool constant = !model.perturbed();
    double const_term = 0.0;
    if (constant) {
        const Mat<D>& a = model.matrix();
        const_term = std::log(std::abs(det(a))) -
                     (model.stable_dim() ? log_det_on(a, model.stable_frame()) : 0.0);
    }

    std::array<int, D> idx{};
    size_t flat = 0;
    while (true) {
        double w = mu.bins[flat];
        if (w > 0) {
            if (constant) {
                acc += w * const_term;
                used += w;
            } else {
                TorusPoint<D> x;
                for (int i = 0; i < D; ++i)
                    x.c[size_t(i)] = (idx[size_t(i)] + 0.5) / mu.res[size_t(i)];
                try {
                    Basis<D> es = model.stable_dim()
                                      ? estimate_stable_bundle(model, x, opt.stable_depth)
                                            .stable_frame
                                      : Basis<D>{};
                    Mat<D> jac = model.derivative(x);
                    double term = std::log(std::abs(det(jac))) -
                                  (model.stable_dim() ? log_det_on(jac, es) : 0.0);
                    acc += w * term;
                    used += w;
                } catch (const Error&) {
                    excluded += w;
                }
            }
        }
        int axis = D - 1;
        ++flat;
        while (axis >= 0) {
            if (++idx[size_t(axis)] < mu.res[size_t(axis)]) break;
            idx[size_t(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
    }
    rep.h_formula = used > 0 ? acc / used : 0.0;
    rep.excluded_mass = excluded / mass;

    // Pesin side: ensemble of starts drawn from the measure's bins.
    CounterRng root(opt.seed);
    std::vector<double> partial(size_t(opt.pesin_starts), 0.0);
    // cumulative bin distribution for sampling
    std::vector<double> cdf(mu.bins.size());
    double run = 0.0;
    for (size_t b = 0; b < mu.bins.size(); ++b) {
        run += mu.bins[b];
        cdf[b] = run;
    }
    parallel_chunks(opt.workers, size_t(opt.pesin_starts), [&](size_t s) {
        CounterRng rng = root.substream(s);
        double u = rng.next_double() * run;
        size_t b = size_t(std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        if (b >= mu.bins.size()) b = mu.bins.size() - 1;
        // bin -> representative point, jittered inside the bin
        TorusPoint<D> x;
        size_t rem = b;
        for (int i = D - 1; i >= 0; --i) {
            int r = mu.res[size_t(i)];
            x.c[size_t(i)] = (double(rem % size_t(r)) + rng.next_double()) / r;
            rem /= size_t(r);
        }
        auto spec = lyapunov_qr(model, x, opt.pesin_iters);
        double hp = 0.0;
        for (double lam : spec.exponents)
            if (lam > 0) hp += lam;
        partial[s] = hp;
    });
    double hp = 0.0;
    for (double v : partial) hp += v;
    rep.h_pesin = hp / double(opt.pesin_starts);
    rep.discrepancy = std::abs(rep.h_formula - rep.h_pesin);
    return rep;
}

}  // namespace torusdyn
