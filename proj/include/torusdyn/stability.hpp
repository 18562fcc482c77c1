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

// Statistical-stability experiments: SRB candidates across a parameter
// family, pairwise weak* distances and the refinement modulus, two-seed noise
// floors, basin coverage, and the constrained least-squares distance to the
// convex hull of cluster measures.

#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "torusdyn/certify.hpp"
#include "torusdyn/measure.hpp"
#include "torusdyn/models.hpp"
#include "torusdyn/spectrum.hpp"
#include "torusdyn/srb.hpp"

namespace torusdyn {

template <int D>
struct SweepEntry {
    double t = 0.0;
    bool certified = false;
    std::vector<std::string> certificate_violations;
    int clusters = 0;
    double entropy = 0.0;
    bool failed = false;
    std::string failure;
    EmpiricalMeasure<D> measure;  // largest-cluster measure
};

template <int D>
struct StabilityReport {
    std::vector<SweepEntry<D>> entries;
    std::vector<double> successive_distances;  // d(mu_{t_i}, mu_{t_{i+1}})
    double modulus = 0.0;                      // max successive distance
    double entropy_modulus = 0.0;              // max successive |dh|
    double max_step = 0.0;
    double noise_floor = 0.0;  // distance between two seeds at the first t
};

struct SweepOptions {
    int srb_iters = 2000;
    int srb_samples = 20000;
    double disk_radius = 0.1;
    int fourier_k = 8;
    int workers = 1;
    uint64_t seed = 1;
    uint64_t noise_seed = 2;  // second seed for the noise floor
    int cluster_starts = 0;   // when > 0, use count_physical_measures
    int certify_grid = 24;
    bool with_entropy = true;
};

// SRB candidate at one parameter value: Cesaro pushforward of a disk tangent
// to the unstable frame, the disk base drawn from the given seed.
template <int D>
inline EmpiricalMeasure<D> srb_candidate(const MapModel<D>& model, const std::array<int, D>& res,
                                         const SweepOptions& opt, uint64_t seed) {
    CounterRng rng(seed);
    TorusPoint<D> base;
    for (int i = 0; i < D; ++i) base.c[size_t(i)] = rng.next_double();
    DiskSample<D> disk =
        make_disk(base, model.unstable_frame(), opt.disk_radius, size_t(opt.srb_samples));
    PushforwardOptions popt;
    popt.workers = opt.workers;
    return cesaro_pushforward(model, disk, opt.srb_iters, res, opt.fourier_k, popt);
}

template <int D>
inline StabilityReport<D> stability_sweep(const std::function<MapModel<D>(double)>& family,
                                          const std::vector<double>& ts,
                                          const std::array<int, D>& res, double cone_width,
                                          const SweepOptions& opt = {}) {
    StabilityReport<D> rep;
    for (size_t i = 0; i + 1 < ts.size(); ++i)
        rep.max_step = std::max(rep.max_step, std::abs(ts[i + 1] - ts[i]));

    for (double t : ts) {
        SweepEntry<D> e;
        e.t = t;
        try {
            MapModel<D> model = family(t);
            CertifyOptions copt;
            copt.grid_res = opt.certify_grid;
            auto cert = certify(model, unstable_cone(model, cone_width),
                                stable_cone(model, cone_width), default_o_region(model), copt);
            e.certified = cert.valid;
            e.certificate_violations = cert.violations;
            if (opt.cluster_starts > 0) {
                ClusterOptions clopt;
                clopt.iters = opt.srb_iters;
                clopt.workers = opt.workers;
                clopt.seed = opt.seed;
                auto pmc = count_physical_measures(model, opt.cluster_starts, res, opt.fourier_k,
                                                   clopt);
                e.clusters = pmc.clusters;
                if (!pmc.cluster_measures.empty()) e.measure = pmc.cluster_measures.front();
            } else {
                e.clusters = 1;
                e.measure = srb_candidate(model, res, opt, opt.seed);
            }
            if (opt.with_entropy) {
                EntropyOptions eopt;
                eopt.workers = opt.workers;
                e.entropy = entropy_from_formula(model, e.measure, eopt).h_formula;
            }
        } catch (const std::exception& ex) {
            e.failed = true;
            e.failure = ex.what();
        }
        rep.entries.push_back(std::move(e));
    }

    for (size_t i = 0; i + 1 < rep.entries.size(); ++i) {
        const auto& a = rep.entries[i];
        const auto& b = rep.entries[i + 1];
        if (a.failed || b.failed) {
            rep.successive_distances.push_back(std::nan(""));
            continue;
        }
        double d = weak_star_distance(a.measure, b.measure);
        rep.successive_distances.push_back(d);
        rep.modulus = std::max(rep.modulus, d);
        if (opt.with_entropy)
            rep.entropy_modulus = std::max(rep.entropy_modulus, std::abs(a.entropy - b.entropy));
    }

    // seed-robustness: two independent seeds at the first parameter
    if (!rep.entries.empty() && !rep.entries.front().failed && opt.cluster_starts == 0) {
        MapModel<D> model = family(ts.front());
        auto again = srb_candidate(model, res, opt, opt.noise_seed);
        rep.noise_floor = weak_star_distance(rep.entries.front().measure, again);
    }
    return rep;
}

// Parameter-entropy table for the continuity probe; reuses the sweep
// machinery and reports the entropy modulus against the parameter step.
template <int D>
struct EntropyContinuityRow {
    double t = 0.0;
    double h = 0.0;
    bool certified = false;
    bool failed = false;
};

template <int D>
inline std::vector<EntropyContinuityRow<D>> entropy_continuity_probe(
    const std::function<MapModel<D>(double)>& family, const std::vector<double>& ts,
    const std::array<int, D>& res, double cone_width, const SweepOptions& opt = {}) {
    SweepOptions o = opt;
    o.with_entropy = true;
    auto rep = stability_sweep(family, ts, res, cone_width, o);
    std::vector<EntropyContinuityRow<D>> rows;
    for (const auto& e : rep.entries)
        rows.push_back({e.t, e.entropy, e.certified, e.failed});
    return rows;
}

// Distance from `target` to the convex hull of `components` in the weighted
// Fourier metric, minimized over simplex weights by projected gradient.
template <int D>
inline double convex_combination_distance(const EmpiricalMeasure<D>& target,
                                          const std::vector<EmpiricalMeasure<D>>& components,
                                          int iters = 2000) {
    if (components.empty()) throw Error("convex_combination_distance: no components");
    const size_t m = components.size();
    std::vector<double> w(m, 1.0 / double(m));

    auto mix_distance = [&](const std::vector<double>& weights) {
        EmpiricalMeasure<D> mix = EmpiricalMeasure<D>::zeros(target.res, target.K);
        for (size_t c = 0; c < m; ++c) {
            for (size_t b = 0; b < mix.bins.size(); ++b)
                mix.bins[b] += weights[c] * components[c].bins[b];
            for (size_t f = 0; f < mix.fourier.size(); ++f)
                mix.fourier[f] += weights[c] * components[c].fourier[f];
        }
        return weak_star_distance(target, mix);
    };

    auto project_simplex = [&](std::vector<double>& v) {
        // Euclidean projection onto the probability simplex
        std::vector<double> u = v;
        std::sort(u.begin(), u.end(), std::greater<>());
        double css = 0.0, theta = 0.0;
        int rho = 0;
        for (size_t i = 0; i < u.size(); ++i) {
            css += u[i];
            double t = (css - 1.0) / double(i + 1);
            if (u[i] - t > 0) {
                rho = int(i + 1);
                theta = t;
            }
        }
        (void)rho;
        for (double& x : v) x = std::max(0.0, x - theta);
    };

    double best = mix_distance(w);
    double step = 0.25;
    for (int it = 0; it < iters; ++it) {
        // numerical gradient
        std::vector<double> g(m, 0.0);
        const double h = 1e-4;
        for (size_t c = 0; c < m; ++c) {
            std::vector<double> wp = w;
            wp[c] += h;
            project_simplex(wp);
            g[c] = (mix_distance(wp) - best) / h;
        }
        std::vector<double> cand = w;
        for (size_t c = 0; c < m; ++c) cand[c] -= step * g[c];
        project_simplex(cand);
        double d = mix_distance(cand);
        if (d < best) {
            best = d;
            w = cand;
        } else {
            step *= 0.5;
            if (step < 1e-6) break;
        }
    }
    return best;
}

}  // namespace torusdyn
