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

// Numerical certification of the open-class conditions: grid floors for the
// stable-cone expansion of the inverse (lambda_s), the cone expansion L(x)
// with its off-O floor lambda_u, the cone-subspace Jacobian floor sigma, the
// stable contraction lambda, the visit-frequency exponent gamma_0, and the
// coupled constant c with L^{gamma_0} lambda_u^{1-gamma_0} >= e^c. Floors are
// grid minima with an explicit Lipschitz slack — an honest numerical
// certificate, not a proof.

#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "torusdyn/cones.hpp"
#include "torusdyn/errors.hpp"
#include "torusdyn/models.hpp"
#include "torusdyn/srb.hpp"

namespace torusdyn {

template <int D>
struct BallRegion {
    bool empty = true;
    TorusPoint<D> center;
    double radius = 0.0;

    bool contains(const TorusPoint<D>& x) const {
        return !empty && tor_dist2(x, center) < radius * radius;
    }

    static BallRegion none() { return BallRegion{}; }
    static BallRegion ball(const TorusPoint<D>& c, double r) { return BallRegion{false, c, r}; }
};

template <int D>
inline BallRegion<D> default_o_region(const MapModel<D>& model) {
    if (!model.perturbed()) return BallRegion<D>::none();
    return BallRegion<D>::ball(model.bump_center(), model.bump().radius);
}

struct VisitFrequencyEstimate {
    double gamma = 0.0;
    int n = 0;
    double fraction_exceeding = 0.0;  // at the final checkpoint
    double K_hat = 0.0;
    double eps_hat = 0.0;
    bool all_zero = false;
    std::vector<std::pair<int, double>> curve;  // (n, fraction) at the chosen gamma
};

template <int D>
struct ConditionCertificate {
    bool valid = false;
    double lambda_s = 0.0;   // stable-cone expansion of the inverse (> 1)
    double lambda_u = 0.0;   // cone expansion floor off O (> 1)
    double L = 0.0;          // global cone expansion floor
    double sigma = 0.0;      // Jacobian floor along cone subspaces (> 1)
    double lambda = 0.0;     // stable contraction (< 1)
    double gamma0 = 0.0;
    double c = 0.0;
    double stable_inv_margin = 0.0;   // (A1)(a) backward cone invariance slack
    double unstable_inv_margin = 0.0; // (A2)(a) forward cone invariance slack
    double lipschitz_slack = 0.0;     // grid floor uncertainty estimate
    BallRegion<D> o_region;
    BallRegion<D> excluded;  // optional certification hole (basin core)
    int grid_resolution = 0;
    std::vector<std::string> violations;
    TorusPoint<D> worst_point;
    VisitFrequencyEstimate visit;
};

struct CertifyOptions {
    int grid_res = 32;
    int stable_depth = 40;
    int sigma_tilt_grid = 5;
    int gamma_samples = 512;
    int gamma_nmax = 2000;
    std::vector<double> gamma_grid = {0.55, 0.60, 0.65, 0.70, 0.75, 0.80, 0.85, 0.90, 0.95};
    uint64_t seed = 11;
};

// Exceedance of visit frequencies to O along orbits from the disk, fitted
// log-linearly in n; gamma_0 is the smallest grid value whose exceedance
// decays.
template <int D>
inline VisitFrequencyEstimate estimate_gamma0(const MapModel<D>& model, const DiskSample<D>& disk,
                                              const BallRegion<D>& o_region,
                                              const CertifyOptions& opt = {}) {
    VisitFrequencyEstimate best;
    if (o_region.empty) {
        best.gamma = opt.gamma_grid.front();
        best.all_zero = true;
        best.eps_hat = std::numeric_limits<double>::infinity();
        return best;
    }
    std::vector<int> checkpoints;
    for (int n = 50; n <= opt.gamma_nmax; n *= 2) checkpoints.push_back(n);
    if (checkpoints.empty() || checkpoints.back() != opt.gamma_nmax)
        checkpoints.push_back(opt.gamma_nmax);

    // visit counts per sample at each checkpoint
    CounterRng root(opt.seed);
    size_t nsamples = std::min<size_t>(disk.size(), size_t(opt.gamma_samples));
    std::vector<std::vector<int>> visits(nsamples,
                                         std::vector<int>(checkpoints.size(), 0));
    for (size_t s = 0; s < nsamples; ++s) {
        size_t pick = disk.size() <= nsamples ? s : (disk.size() * s) / nsamples;
        TorusPoint<D> z = disk.point(pick);
        int count = 0, ci = 0;
        for (int j = 0; j < opt.gamma_nmax; ++j) {
            if (o_region.contains(z)) ++count;
            z = model.apply(z);
            if (ci < int(checkpoints.size()) && j + 1 == checkpoints[size_t(ci)]) {
                visits[s][size_t(ci)] = count;
                ++ci;
            }
        }
    }

    auto exceedance = [&](double gamma, size_t ci) {
        int n = checkpoints[ci];
        size_t cnt = 0;
        for (size_t s = 0; s < nsamples; ++s)
            if (double(visits[s][ci]) >= gamma * double(n)) ++cnt;
        return double(cnt) / double(nsamples);
    };

    for (double gamma : opt.gamma_grid) {
        VisitFrequencyEstimate est;
        est.gamma = gamma;
        est.n = checkpoints.back();
        for (size_t ci = 0; ci < checkpoints.size(); ++ci)
            est.curve.emplace_back(checkpoints[ci], exceedance(gamma, ci));
        est.fraction_exceeding = est.curve.back().second;
        // log-linear fit over the positive part
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int m = 0;
        for (auto [n, f] : est.curve)
            if (f > 0) {
                double lx = double(n), ly = std::log(f);
                sx += lx;
                sy += ly;
                sxx += lx * lx;
                sxy += lx * ly;
                ++m;
            }
        if (m == 0) {
            est.all_zero = true;
            est.eps_hat = std::numeric_limits<double>::infinity();
            return est;  // smallest gamma with identically-zero exceedance
        }
        if (m >= 2) {
            double slope = (sxy - sx * sy / m) / (sxx - sx * sx / m);
            est.eps_hat = -slope;
            est.K_hat = std::exp(sy / m - slope * sx / m);
        }
        bool decays = est.fraction_exceeding == 0.0 ||
                      (est.eps_hat > 0 && est.fraction_exceeding < est.curve.front().second);
        if (decays) return est;
        best = est;  // remember the last attempt for reporting
    }
    return best;  // no grid value decayed; caller flags the certificate
}

// c_bound = log(L^{gamma_0} lambda_u^{1 - gamma_0}).
template <int D>
inline double derive_birkhoff_bound(const ConditionCertificate<D>& cert) {
    if (!cert.valid) throw InvalidCertificate("derive_birkhoff_bound: invalid certificate");
    return cert.gamma0 * std::log(cert.L) + (1.0 - cert.gamma0) * std::log(cert.lambda_u);
}

template <int D>
inline ConditionCertificate<D> certify(const MapModel<D>& model, const ConeSpec<D>& ucone,
                                       const ConeSpec<D>& scone, const BallRegion<D>& o_region,
                                       const CertifyOptions& opt = {},
                                       const BallRegion<D>& excluded = BallRegion<D>::none()) {
    ConditionCertificate<D> cert;
    cert.o_region = o_region;
    cert.excluded = excluded;
    cert.grid_resolution = opt.grid_res;

    const bool has_stable = model.stable_dim() > 0;
    double lam_s = std::numeric_limits<double>::infinity();
    double L = std::numeric_limits<double>::infinity();
    double lam_u = std::numeric_limits<double>::infinity();
    double sigma = std::numeric_limits<double>::infinity();
    double lambda = 0.0;
    double s_inv_margin = std::numeric_limits<double>::infinity();
    double u_inv_margin = std::numeric_limits<double>::infinity();
    double lip = 0.0;
    Mat<D> prev_j{};
    bool have_prev = false;

    auto u_boundary = cone_boundary_directions(ucone, 32);
    if (u_boundary.empty()) u_boundary = cone_directions(ucone, 32);
    auto s_boundary = has_stable ? cone_boundary_directions(scone, 32) : std::vector<Vec<D>>{};
    if (has_stable && s_boundary.empty()) s_boundary = cone_directions(scone, 32);

    auto sigma_at = [&](const Mat<D>& j) {
        const int du = model.unstable_dim();
        if (du == D) return std::abs(det(j));
        if (du == 1) return cone_min_expansion(j, ucone);
        // du == 2, D == 3: sample tilted planes inside the cone
        Basis<D> comp = orthogonal_complement(ucone.center);
        double best = std::numeric_limits<double>::infinity();
        const int g = opt.sigma_tilt_grid;
        for (int rot = 0; rot < 4; ++rot) {
            double th = rot * M_PI / 8.0;
            Vec<D> e1 = ucone.center[0] * std::cos(th) + ucone.center[1] * std::sin(th);
            Vec<D> e2 = ucone.center[0] * -std::sin(th) + ucone.center[1] * std::cos(th);
            for (int t1 = 0; t1 < g; ++t1)
                for (int t2 = 0; t2 < g; ++t2) {
                    double a1 = ucone.width * (2.0 * t1 / (g - 1) - 1.0);
                    double a2 = ucone.width * (2.0 * t2 / (g - 1) - 1.0);
                    Basis<D> plane;
                    plane.push(e1 + comp[0] * a1);
                    plane.push(e2 + comp[0] * a2);
                    orthonormalize(plane);
                    best = std::min(best, std::exp(log_det_on(j, plane)));
                }
        }
        return best;
    };

    auto consider = [&](const TorusPoint<D>& x) {
        if (excluded.contains(x)) return;
        Mat<D> j = model.derivative(x);
        Mat<D> jinv = inverse(j);
        double lx = cone_min_expansion(j, ucone);
        if (lx < L) {
            L = lx;
            cert.worst_point = x;
        }
        if (!o_region.contains(x)) lam_u = std::min(lam_u, lx);
        sigma = std::min(sigma, sigma_at(j));
        for (const auto& v : u_boundary) u_inv_margin = std::min(u_inv_margin, ucone.margin(j * v));
        if (has_stable) {
            lam_s = std::min(lam_s, cone_min_expansion(jinv, scone));
            for (const auto& v : s_boundary)
                s_inv_margin = std::min(s_inv_margin, scone.margin(jinv * v));
            Basis<D> es = model.perturbed()
                              ? estimate_stable_bundle(model, x, opt.stable_depth).stable_frame
                              : model.stable_frame();
            lambda = std::max(lambda, op_norm_on(j, es));
        }
        if (have_prev) {
            double diff = 0;
            for (int r = 0; r < D; ++r)
                for (int cc = 0; cc < D; ++cc) {
                    double dd = j(r, cc) - prev_j(r, cc);
                    diff += dd * dd;
                }
            lip = std::max(lip, std::sqrt(diff));
        }
        prev_j = j;
        have_prev = true;
    };

    if (!model.perturbed()) {
        consider(TorusPoint<D>{});
        if (!o_region.empty) lam_u = L;  // constant derivative: off-O floor equals L
    } else {
        std::array<int, D> idx{};
        while (true) {
            TorusPoint<D> x;
            for (int i = 0; i < D; ++i) x.c[size_t(i)] = (idx[size_t(i)] + 0.5) / opt.grid_res;
            consider(x);
            int axis = D - 1;
            while (axis >= 0) {
                if (++idx[size_t(axis)] < opt.grid_res) break;
                idx[size_t(axis)] = 0;
                --axis;
            }
            if (axis < 0) break;
        }
    }

    cert.lambda_s = has_stable ? lam_s : std::numeric_limits<double>::infinity();
    cert.L = L;
    cert.lambda_u = o_region.empty ? L : lam_u;
    cert.sigma = sigma;
    cert.lambda = has_stable ? lambda : 0.0;
    cert.stable_inv_margin = has_stable ? s_inv_margin : 0.0;
    cert.unstable_inv_margin = u_inv_margin;
    // neighbor-to-neighbor derivative variation scaled to half a grid cell
    cert.lipschitz_slack = lip * 0.5;

    // visit frequency and gamma_0 (generic disk tangent to the cone field)
    TorusPoint<D> probe_base;
    for (int i = 0; i < D; ++i) probe_base.c[size_t(i)] = 0.31 + 0.07 * i;
    DiskSample<D> probe =
        make_disk(probe_base, model.unstable_frame(), 0.1, size_t(opt.gamma_samples));
    cert.visit = estimate_gamma0(model, probe, o_region, opt);
    cert.gamma0 = cert.visit.gamma;

    // coupled constant c
    double cbound = cert.gamma0 * std::log(cert.L) + (1.0 - cert.gamma0) * std::log(cert.lambda_u);
    cert.c = cbound;

    if (has_stable && !(cert.lambda_s > 1.0)) cert.violations.push_back("lambda_s <= 1");
    if (!(cert.lambda_u > 1.0)) cert.violations.push_back("lambda_u <= 1");
    if (!(cert.sigma > 1.0)) cert.violations.push_back("sigma <= 1");
    if (!(cert.L > 0.0)) cert.violations.push_back("L <= 0");
    if (has_stable && !(cert.lambda < 1.0)) cert.violations.push_back("lambda >= 1");
    if (has_stable && !(cert.L >= std::sqrt(cert.lambda)))
        cert.violations.push_back("L < sqrt(lambda)");
    if (!(cert.c > 0.0)) cert.violations.push_back("no admissible c > 0");
    if (!(cert.unstable_inv_margin > 0.0)) cert.violations.push_back("unstable cone not invariant");
    if (has_stable && !(cert.stable_inv_margin > 0.0))
        cert.violations.push_back("stable cone not backward invariant");
    if (!o_region.empty && cert.visit.curve.empty() && !cert.visit.all_zero)
        cert.violations.push_back("no gamma_0 with decaying exceedance");
    cert.valid = cert.violations.empty();
    return cert;
}

// Injectivity-domain probe for the localized-perturbation construction: the
// partition is a cube grid with the bump ball as the extra cell; for sampled
// disks tangent to the cone field, every image g(D cap V_i) cap V_j must be
// connected (components joined at twice the image lattice spacing).
template <int D>
struct InjectivityProbeResult {
    int worst_components = 0;
    int disks_checked = 0;
};

template <int D>
inline InjectivityProbeResult<D> probe_injectivity_domains(const MapModel<D>& model,
                                                           int cells_per_axis, int n_disks,
                                                           uint64_t seed) {
    InjectivityProbeResult<D> out;
    CounterRng rng(seed);
    const double disk_radius = 0.45 * std::max(model.bump().radius, 0.05);
    const int lattice = 17;

    auto cell_of = [&](const TorusPoint<D>& x) -> long {
        if (model.perturbed() && tor_dist(x, model.bump_center()) < model.bump().radius)
            return -1;  // the bump ball is its own cell
        long idx = 0;
        for (int i = 0; i < D; ++i)
            idx = idx * cells_per_axis + long(x[i] * cells_per_axis) % cells_per_axis;
        return idx;
    };

    for (int dsk = 0; dsk < n_disks; ++dsk) {
        TorusPoint<D> base;
        for (int i = 0; i < D; ++i) base.c[size_t(i)] = rng.next_double();
        DiskSample<D> disk =
            make_disk(base, model.unstable_frame(), disk_radius, size_t(lattice) * lattice);
        // image points grouped by (source cell, image cell)
        std::vector<long> src(disk.size()), dst(disk.size());
        std::vector<TorusPoint<D>> img(disk.size());
        double max_step = 0.0;
        for (size_t i = 0; i < disk.size(); ++i) {
            TorusPoint<D> x = disk.point(i);
            src[i] = cell_of(x);
            img[i] = model.apply(x);
            dst[i] = cell_of(img[i]);
        }
        // lattice spacing in the image: bound by expansion of neighbors
        double spacing = 2.0 * disk_radius / lattice;
        max_step = spacing * (largest_singular_value(model.matrix()) + 1.0);
        // connected components per (src, dst) group via union-find
        std::vector<size_t> parent(disk.size());
        for (size_t i = 0; i < disk.size(); ++i) parent[i] = i;
        std::function<size_t(size_t)> find = [&](size_t a) {
            while (parent[a] != a) a = parent[a] = parent[parent[a]];
            return a;
        };
        for (size_t i = 0; i < disk.size(); ++i)
            for (size_t j = i + 1; j < disk.size(); ++j) {
                if (src[i] != src[j] || dst[i] != dst[j]) continue;
                if (tor_dist(img[i], img[j]) <= 2.0 * max_step) parent[find(i)] = find(j);
            }
        // count components per group
        std::vector<std::tuple<long, long, size_t>> groups;
        for (size_t i = 0; i < disk.size(); ++i) {
            size_t r = find(i);
            bool found = false;
            for (auto& [s, d, root] : groups)
                if (s == src[i] && d == dst[i] && root == r) found = true;
            if (!found) groups.emplace_back(src[i], dst[i], r);
        }
        // worst component count over (src, dst) pairs
        for (size_t gi = 0; gi < groups.size(); ++gi) {
            auto [s, d, r] = groups[gi];
            int cnt = 0;
            for (auto& [s2, d2, r2] : groups)
                if (s2 == s && d2 == d) ++cnt;
            out.worst_components = std::max(out.worst_components, cnt);
        }
        ++out.disks_checked;
    }
    return out;
}

}  // namespace torusdyn
