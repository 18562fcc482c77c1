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

// Empirical SRB candidates: the Cesaro average (1/n) sum_j f^j_* Leb_D of
// Lebesgue measure on a disk tangent to the cone field, its restriction to
// hyperbolic-time iterates, hyperbolic pre-disk tracking with distortion
// ratios, and the Birkhoff-average clustering that counts physical measures.
//
// Orbits are advanced in structure-of-arrays batches through the kernel
// dispatch; samples are split into fixed-size chunks whose partial histograms
// merge in chunk order (worker-count independent results).

#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "torusdyn/errors.hpp"
#include "torusdyn/hyperbolic_times.hpp"
#include "torusdyn/kernels/kernels.hpp"
#include "torusdyn/measure.hpp"
#include "torusdyn/models.hpp"
#include "torusdyn/parallel.hpp"
#include "torusdyn/rng.hpp"

namespace torusdyn {

template <int D>
struct DiskSample {
    TorusPoint<D> base;
    Basis<D> frame;  // orthonormal tangent frame, d_u columns
    double radius = 0.1;
    std::vector<Vec<D>> offsets;   // ambient tangent offsets, |offset| <= radius
    std::vector<double> weights;   // Lebesgue cell weights, sum 1

    size_t size() const { return offsets.size(); }
    TorusPoint<D> point(size_t i) const { return base.translated(offsets[i]); }
};

// Quasi-uniform lattice on the tangent disk, realized on the torus through
// the affine chart (the torus exponential map is globally trivial).
template <int D>
inline DiskSample<D> make_disk(const TorusPoint<D>& base, const Basis<D>& frame, double radius,
                               size_t target_count) {
    DiskSample<D> d;
    d.base = base;
    d.frame = frame;
    d.radius = radius;
    const int du = frame.n;
    if (du == 1) {
        size_t m = std::max<size_t>(1, target_count);
        d.offsets.reserve(m);
        for (size_t i = 0; i < m; ++i) {
            double t = -radius + (2.0 * radius) * ((double(i) + 0.5) / double(m));
            d.offsets.push_back(frame[0] * t);
        }
    } else if (du == 2) {
        size_t g = std::max<size_t>(2, size_t(std::ceil(std::sqrt(double(target_count) * 4.0 / M_PI))));
        for (size_t iy = 0; iy < g; ++iy)
            for (size_t ix = 0; ix < g; ++ix) {
                double tx = -radius + (2.0 * radius) * ((double(ix) + 0.5) / double(g));
                double ty = -radius + (2.0 * radius) * ((double(iy) + 0.5) / double(g));
                if (tx * tx + ty * ty <= radius * radius)
                    d.offsets.push_back(frame[0] * tx + frame[1] * ty);
            }
    } else {
        throw Error("make_disk: tangent dimension must be 1 or 2");
    }
    d.weights.assign(d.offsets.size(), 1.0 / double(d.offsets.size()));
    return d;
}

namespace detail {

// SoA batch advance: one application of the model to every column. Points in
// the bump support are recomputed exactly after the linear kernel pass.
template <int D>
class BatchStepper {
  public:
    explicit BatchStepper(const MapModel<D>& model) : model_(&model) {
        const Mat<D>& a = model.matrix();
        for (int r = 0; r < D; ++r)
            for (int c = 0; c < D; ++c) a_[size_t(r * D + c)] = a(r, c);
        perturbed_ = model.perturbed();
        if (perturbed_) {
            for (int i = 0; i < D; ++i) p_[size_t(i)] = model.bump_center()[i];
            rr_ = model.bump().radius * model.bump().radius;
        }
    }

    void step(std::array<std::vector<double>, D>& x, size_t n) {
        const auto& k = kernels::ops();
        if (perturbed_) {
            mask_.resize(n);
            if constexpr (D == 2)
                k.ball_mask2(x[0].data(), x[1].data(), p_[0], p_[1], rr_, mask_.data(), n);
            else if constexpr (D == 3)
                k.ball_mask3(x[0].data(), x[1].data(), x[2].data(), p_[0], p_[1], p_[2], rr_,
                             mask_.data(), n);
            else
                for (size_t i = 0; i < n; ++i) {
                    double d0 = wrap_centered(x[0][i] - p_[0]);
                    mask_[i] = (d0 * d0 < rr_) ? 1 : 0;
                }
            saved_.clear();
            for (size_t i = 0; i < n; ++i)
                if (mask_[i]) {
                    TorusPoint<D> pt;
                    for (int a = 0; a < D; ++a) pt.c[size_t(a)] = x[size_t(a)][i];
                    saved_.emplace_back(i, pt);
                }
        }
        if constexpr (D == 1) {
            for (size_t i = 0; i < n; ++i) x[0][i] = wrap01(a_[0] * x[0][i]);
        } else if constexpr (D == 2) {
            k.step2(a_.data(), x[0].data(), x[1].data(), n);
        } else {
            k.step3(a_.data(), x[0].data(), x[1].data(), x[2].data(), n);
        }
        if (perturbed_) {
            for (auto& [i, pt] : saved_) {
                TorusPoint<D> y = model_->apply(pt);
                for (int a = 0; a < D; ++a) x[size_t(a)][i] = y[a];
            }
        }
    }

  private:
    const MapModel<D>* model_;
    std::array<double, size_t(D) * size_t(D)> a_{};
    bool perturbed_ = false;
    std::array<double, 3> p_{};
    double rr_ = 0.0;
    std::vector<uint8_t> mask_;
    std::vector<std::pair<size_t, TorusPoint<D>>> saved_;
};

template <int D>
inline void bin_batch(const std::array<std::vector<double>, D>& x, const std::array<int, D>& res,
                      std::vector<uint32_t>& idx, size_t n) {
    const auto& k = kernels::ops();
    idx.resize(n);
    if constexpr (D == 1) {
        for (size_t i = 0; i < n; ++i) {
            int b = int(x[0][i] * res[0]);
            idx[i] = uint32_t(std::min(b, res[0] - 1));
        }
    } else if constexpr (D == 2) {
        k.bin2(x[0].data(), x[1].data(), res[0], res[1], idx.data(), n);
    } else {
        k.bin3(x[0].data(), x[1].data(), x[2].data(), res[0], res[1], res[2], idx.data(), n);
    }
}

}  // namespace detail

struct PushforwardOptions {
    int workers = 1;
    size_t chunk = 4096;
};

// mu_n = (1/n) sum_{j=0}^{n-1} f^j_* Leb_D as a binned measure with Fourier
// coefficients; total mass 1 by construction.
template <int D>
inline EmpiricalMeasure<D> cesaro_pushforward(const MapModel<D>& model, const DiskSample<D>& disk,
                                              int n, const std::array<int, D>& res, int K,
                                              const PushforwardOptions& opt = {}) {
    if (n < 1) throw Error("cesaro_pushforward: n >= 1 required");
    EmpiricalMeasure<D> out = EmpiricalMeasure<D>::zeros(res, K);
    const size_t total = disk.size();
    const size_t chunk = std::max<size_t>(1, opt.chunk);
    const size_t nchunks = (total + chunk - 1) / chunk;
    std::vector<std::vector<double>> partial(nchunks);

    parallel_chunks(opt.workers, nchunks, [&](size_t ci) {
        size_t lo = ci * chunk, hi = std::min(total, lo + chunk);
        size_t m = hi - lo;
        std::array<std::vector<double>, D> x;
        for (int a = 0; a < D; ++a) {
            x[size_t(a)].resize(m);
            for (size_t i = 0; i < m; ++i) x[size_t(a)][i] = disk.point(lo + i)[a];
        }
        std::vector<double> w(m);
        for (size_t i = 0; i < m; ++i) w[i] = disk.weights[lo + i] / double(n);
        std::vector<double> bins(out.bins.size(), 0.0);
        std::vector<uint32_t> idx;
        detail::BatchStepper<D> stepper(model);
        for (int j = 0; j < n; ++j) {
            detail::bin_batch<D>(x, res, idx, m);
            for (size_t i = 0; i < m; ++i) bins[idx[i]] += w[i];
            if (j + 1 < n) stepper.step(x, m);
        }
        partial[ci] = std::move(bins);
    });

    for (size_t ci = 0; ci < nchunks; ++ci)
        for (size_t b = 0; b < out.bins.size(); ++b) out.bins[b] += partial[ci][b];
    out.refresh_fourier();
    return out;
}

template <int D>
struct NuRestrictedResult {
    EmpiricalMeasure<D> measure;  // subprobability
    double alpha_hat = 0.0;       // total mass
};

// nu_n: deposits f^j(x) only at the c-cone-hyperbolic times j of the sample
// (j <= n-1; the detector counts times from 1, so the j = 0 term of mu_n is
// never included and nu_n <= mu_n binwise).
template <int D>
inline NuRestrictedResult<D> nu_restricted_pushforward(const MapModel<D>& model,
                                                       const DiskSample<D>& disk, int n, double c,
                                                       const ConeSpec<D>& cone,
                                                       const std::array<int, D>& res, int K,
                                                       const PushforwardOptions& opt = {}) {
    NuRestrictedResult<D> out;
    out.measure = EmpiricalMeasure<D>::zeros(res, K);
    const size_t total = disk.size();
    const size_t chunk = std::max<size_t>(1, opt.chunk);
    const size_t nchunks = (total + chunk - 1) / chunk;
    std::vector<std::vector<double>> partial(nchunks);

    parallel_chunks(opt.workers, nchunks, [&](size_t ci) {
        size_t lo = ci * chunk, hi = std::min(total, lo + chunk);
        std::vector<double> bins(out.measure.bins.size(), 0.0);
        ConeNormEvaluator<D> ev(model, cone);
        std::vector<TorusPoint<D>> orbit(size_t(n));
        std::vector<double> lognorms(size_t(n));
        for (size_t s = lo; s < hi; ++s) {
            TorusPoint<D> z = disk.point(s);
            for (int j = 0; j < n; ++j) {
                orbit[size_t(j)] = z;
                lognorms[size_t(j)] = ev.log_conorm_inverse(z);
                z = model.apply(z);
            }
            auto rep = detect_hyperbolic_times(lognorms, c);
            double w = disk.weights[s] / double(n);
            for (int t : rep.times)
                if (t <= n - 1) bins[out.measure.bin_of(orbit[size_t(t)])] += w;
        }
        partial[ci] = std::move(bins);
    });

    for (size_t ci = 0; ci < nchunks; ++ci)
        for (size_t b = 0; b < out.measure.bins.size(); ++b)
            out.measure.bins[b] += partial[ci][b];
    out.measure.refresh_fourier();
    out.alpha_hat = out.measure.mass();
    return out;
}

template <int D>
struct TrackedDisk {
    DiskSample<D> image;                 // the n-th image disk around f^n(x)
    std::vector<double> contraction_log;  // per-step max ratio d_{m-1}/d_m
    double delta_prime = 0.0;             // achieved image radius before trim
    size_t survivors = 0;
    std::vector<double> log_jacobians;    // log|det Df^n|_{T_y D}| per survivor
};

// Forward-iterates a fine sub-grid of the disk around x, trimming to the
// points whose whole trajectory stays within 8 delta of the reference; the
// survivors' images form the n-hyperbolic disk, and the per-step backward
// contraction ratios and tangent Jacobians are logged along the way.
template <int D>
inline TrackedDisk<D> track_hyperbolic_disk(const MapModel<D>& model, const Basis<D>& frame,
                                            const TorusPoint<D>& x, int n, double delta,
                                            int grid_per_axis = 33) {
    const double big = 8.0 * delta;
    DiskSample<D> sub = make_disk(x, frame, big, size_t(grid_per_axis) * size_t(grid_per_axis));
    if (frame.n == 1) sub = make_disk(x, frame, big, size_t(grid_per_axis) * 8);
    const size_t m = sub.size();

    std::vector<TorusPoint<D>> pos(m);
    std::vector<double> dist_prev(m);
    std::vector<char> alive(m, 1);
    std::vector<Basis<D>> tangent(m);
    std::vector<double> logjac(m, 0.0);
    for (size_t i = 0; i < m; ++i) {
        pos[i] = sub.point(i);
        dist_prev[i] = tor_dist(pos[i], x);
        tangent[i] = frame;
    }
    TorusPoint<D> ref = x;
    TrackedDisk<D> out;
    out.contraction_log.reserve(size_t(n));

    for (int step = 1; step <= n; ++step) {
        TorusPoint<D> ref_next = model.apply(ref);
        double worst_ratio = 0.0;
        for (size_t i = 0; i < m; ++i) {
            if (!alive[i]) continue;
            Mat<D> jac = model.derivative(pos[i]);
            pos[i] = model.apply(pos[i]);
            double d = tor_dist(pos[i], ref_next);
            if (d >= big) {
                alive[i] = 0;
                continue;
            }
            if (d > 0 && dist_prev[i] > 0) worst_ratio = std::max(worst_ratio, dist_prev[i] / d);
            dist_prev[i] = d;
            for (int c = 0; c < tangent[i].n; ++c) tangent[i][c] = jac * tangent[i][c];
            auto r = orthonormalize(tangent[i]);
            for (int c = 0; c < tangent[i].n; ++c) logjac[i] += std::log(r[size_t(c)]);
        }
        ref = ref_next;
        out.contraction_log.push_back(worst_ratio);
    }

    // achieved radius: largest distance seen among survivors; trim to delta
    double dp = 0.0;
    for (size_t i = 0; i < m; ++i)
        if (alive[i]) dp = std::max(dp, dist_prev[i]);
    out.delta_prime = dp;
    if (n > 0 && dp < delta)
        throw DiskTooSmall("track_hyperbolic_disk: image radius " + std::to_string(dp) +
                           " below requested " + std::to_string(delta));

    out.image.base = ref;
    out.image.frame = frame;
    out.image.radius = std::min(dp, delta);
    for (size_t i = 0; i < m; ++i) {
        if (!alive[i]) continue;
        if (n > 0 && dist_prev[i] > delta) continue;  // trim to the requested radius
        out.image.offsets.push_back(tor_displacement(pos[i], ref));
        out.log_jacobians.push_back(logjac[i]);
        ++out.survivors;
    }
    if (out.survivors == 0) throw DiskTooSmall("track_hyperbolic_disk: no survivors");
    out.image.weights.assign(out.survivors, 1.0 / double(out.survivors));
    return out;
}

// Empirical bounded-distortion constant: max over survivor pairs of the ratio
// of tangent Jacobians along the tracked disk.
template <int D>
inline double distortion_ratio(const TrackedDisk<D>& tracked) {
    if (tracked.log_jacobians.empty()) throw Error("distortion_ratio: empty tracked disk");
    auto [mn, mx] =
        std::minmax_element(tracked.log_jacobians.begin(), tracked.log_jacobians.end());
    return std::exp(*mx - *mn);
}

struct ClusterOptions {
    int iters = 20000;
    double burn_fraction = 0.10;
    double cluster_radius = 0.05;  // sup-norm over the observable dictionary
    int observable_kmax = 3;
    int workers = 1;
    uint64_t seed = 1;
};

// 1-d mode accumulation used by count_physical_measures on T^1.
inline void scalar_modes_1d(const double* x, size_t n, int kmax, double* acc_re,
                            double* acc_im) {
    const int nm = 2 * kmax + 1;
    std::vector<double> pr(size_t(nm)), pi(size_t(nm));
    for (size_t i = 0; i < n; ++i) {
        double ang = -2.0 * M_PI * x[i];
        double cr = std::cos(ang), ci = std::sin(ang);
        pr[size_t(kmax)] = 1.0;
        pi[size_t(kmax)] = 0.0;
        double ar = 1.0, ai = 0.0;
        for (int k = 1; k <= kmax; ++k) {
            double nr = ar * cr - ai * ci, ni = ar * ci + ai * cr;
            ar = nr;
            ai = ni;
            pr[size_t(kmax + k)] = ar;
            pi[size_t(kmax + k)] = ai;
            pr[size_t(kmax - k)] = ar;
            pi[size_t(kmax - k)] = -ai;
        }
        for (int k = 0; k < nm; ++k) {
            acc_re[k] += pr[size_t(k)];
            acc_im[k] += pi[size_t(k)];
        }
    }
}

template <int D>
struct PhysicalMeasureCount {
    int clusters = 0;
    std::vector<std::vector<int>> members;      // start indices per cluster, deterministic order
    std::vector<EmpiricalMeasure<D>> cluster_measures;
    std::vector<double> coverage;               // fraction of starts per cluster
    int nonconverged = 0;
    double unassigned_fraction = 0.0;
};

// Per-start Birkhoff averages of the Fourier-mode dictionary, greedy
// single-linkage clustering at a fixed sup-norm radius (permutation
// invariant), and one time-average histogram per cluster.
template <int D>
inline PhysicalMeasureCount<D> count_physical_measures(const MapModel<D>& model, int n_starts,
                                                       const std::array<int, D>& res, int K,
                                                       const ClusterOptions& opt = {}) {
    const int nm = 2 * opt.observable_kmax + 1;
    size_t cube = 1;
    for (int i = 0; i < D; ++i) cube *= size_t(nm);
    const int n = opt.iters;
    const int burn = std::max(1, int(std::lround(double(n) * opt.burn_fraction)));
    const int live = n - burn;
    const int half = live / 2;

    struct StartStat {
        std::vector<double> re, im;       // full-window averages
        std::vector<double> re1, im1;     // first-half averages
        bool converged = false;
    };
    std::vector<StartStat> stats(size_t(n_starts));
    CounterRng root(opt.seed);

    const size_t block = 2048;
    parallel_chunks(opt.workers, size_t(n_starts), [&](size_t si) {
        CounterRng rng = root.substream(si);
        TorusPoint<D> z;
        for (int a = 0; a < D; ++a) z.c[size_t(a)] = rng.next_double();
        StartStat st;
        st.re.assign(cube, 0.0);
        st.im.assign(cube, 0.0);
        st.re1.assign(cube, 0.0);
        st.im1.assign(cube, 0.0);
        for (int j = 0; j < burn; ++j) z = model.apply(z);
        std::array<std::vector<double>, D> buf;
        for (int a = 0; a < D; ++a) buf[size_t(a)].resize(block);
        const auto& kops = kernels::ops();
        int done = 0;
        while (done < live) {
            size_t take = std::min(block, size_t(live - done));
            for (size_t i = 0; i < take; ++i) {
                for (int a = 0; a < D; ++a) buf[size_t(a)][i] = z[a];
                z = model.apply(z);
            }
            // split the block at the half-window boundary if it straddles it
            size_t first_part = 0;
            if (done < half) first_part = std::min(take, size_t(half - done));
            auto accumulate = [&](size_t off, size_t cnt, std::vector<double>& ar,
                                  std::vector<double>& ai) {
                if (cnt == 0) return;
                if constexpr (D == 1) {
                    scalar_modes_1d(buf[0].data() + off, cnt, opt.observable_kmax, ar.data(),
                                    ai.data());
                } else if constexpr (D == 2) {
                    kops.modes2(buf[0].data() + off, buf[1].data() + off, cnt, 1.0,
                                opt.observable_kmax, ar.data(), ai.data());
                } else {
                    kops.modes3(buf[0].data() + off, buf[1].data() + off, buf[2].data() + off,
                                cnt, 1.0, opt.observable_kmax, ar.data(), ai.data());
                }
            };
            accumulate(0, first_part, st.re1, st.im1);
            accumulate(0, take, st.re, st.im);
            done += int(take);
        }
        double sup = 0.0;
        for (size_t kf = 0; kf < cube; ++kf) {
            // mean over halves: first = re1/half, second = (re - re1)/(live - half)
            double m1r = st.re1[kf] / double(half);
            double m1i = st.im1[kf] / double(half);
            double m2r = (st.re[kf] - st.re1[kf]) / double(live - half);
            double m2i = (st.im[kf] - st.im1[kf]) / double(live - half);
            sup = std::max(sup, std::abs(m1r - m2r));
            sup = std::max(sup, std::abs(m1i - m2i));
            st.re[kf] /= double(live);
            st.im[kf] /= double(live);
        }
        st.converged = sup <= opt.cluster_radius;
        stats[si] = std::move(st);
    });

    // single-linkage clustering over converged starts
    std::vector<int> parent(size_t(n_starts));
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int a) {
        while (parent[size_t(a)] != a) a = parent[size_t(a)] = parent[size_t(parent[size_t(a)])];
        return a;
    };
    auto supdist = [&](const StartStat& a, const StartStat& b) {
        double s = 0;
        for (size_t kf = 0; kf < cube; ++kf) {
            s = std::max(s, std::abs(a.re[kf] - b.re[kf]));
            s = std::max(s, std::abs(a.im[kf] - b.im[kf]));
        }
        return s;
    };
    for (int i = 0; i < n_starts; ++i) {
        if (!stats[size_t(i)].converged) continue;
        for (int j = i + 1; j < n_starts; ++j) {
            if (!stats[size_t(j)].converged) continue;
            if (supdist(stats[size_t(i)], stats[size_t(j)]) <= opt.cluster_radius)
                parent[size_t(find(i))] = find(j);
        }
    }

    PhysicalMeasureCount<D> out;
    std::vector<int> roots;
    std::vector<std::vector<int>> groups;
    for (int i = 0; i < n_starts; ++i) {
        if (!stats[size_t(i)].converged) {
            ++out.nonconverged;
            continue;
        }
        int r = find(i);
        auto it = std::find(roots.begin(), roots.end(), r);
        if (it == roots.end()) {
            roots.push_back(r);
            groups.emplace_back();
            it = roots.end() - 1;
        }
        groups[size_t(it - roots.begin())].push_back(i);
    }
    // deterministic ordering: by size descending, then smallest member
    std::vector<size_t> order(groups.size());
    std::iota(order.begin(), order.end(), size_t(0));
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        if (groups[a].size() != groups[b].size()) return groups[a].size() > groups[b].size();
        return groups[a].front() < groups[b].front();
    });

    out.clusters = int(groups.size());
    out.unassigned_fraction = double(out.nonconverged) / double(n_starts);
    for (size_t oi = 0; oi < order.size(); ++oi) {
        const auto& g = groups[order[oi]];
        out.members.push_back(g);
        out.coverage.push_back(double(g.size()) / double(n_starts));
        // second pass: time-average histogram of the members (identical
        // substreams reproduce the orbits)
        EmpiricalMeasure<D> m = EmpiricalMeasure<D>::zeros(res, K);
        double w = 1.0 / (double(g.size()) * double(live));
        for (int gi : g) {
            CounterRng rng = root.substream(size_t(gi));
            TorusPoint<D> z;
            for (int a = 0; a < D; ++a) z.c[size_t(a)] = rng.next_double();
            for (int j = 0; j < burn; ++j) z = model.apply(z);
            for (int j = 0; j < live; ++j) {
                m.deposit(z, w);
                z = model.apply(z);
            }
        }
        m.refresh_fourier();
        out.cluster_measures.push_back(std::move(m));
    }
    return out;
}

}  // namespace torusdyn
