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

// Cone fields of width a around a center subspace, the operator norm of the
// restricted inverse sup_{w in J(C)} |J^{-1}w|/|w| (equivalently the
// reciprocal of the minimal expansion of J over the cone), invariance and
// domination checks, and the pullback estimate of the stable bundle.
//
// For d <= 3 the cone boundary is a union of one-parameter circles of planar
// wedges, so the extremization reduces to the exact two-dimensional closed
// form swept along one angle; the sweep is refined by golden-section around
// every sampled local minimum.

#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "torusdyn/errors.hpp"
#include "torusdyn/geometry.hpp"
#include "torusdyn/models.hpp"

namespace torusdyn {

template <int D>
struct ConeSpec {
    Basis<D> center;  // orthonormal basis of the center subspace
    double width = 0.5;

    int dim() const { return center.n; }

    // split v against the center: returns (norm of center part, norm of the
    // orthogonal part)
    std::pair<double, double> split_norms(const Vec<D>& v) const {
        Vec<D> ve{};
        for (int i = 0; i < center.n; ++i) ve += center[i] * dot(center[i], v);
        return {norm(ve), norm(v - ve)};
    }

    bool contains(const Vec<D>& v, double slack = 0.0) const {
        auto [ne, np] = split_norms(v);
        return np <= (width + slack) * ne;
    }

    // relative slack of the membership inequality, positive strictly inside
    double margin(const Vec<D>& v) const {
        auto [ne, np] = split_norms(v);
        double n = norm(v);
        if (n == 0) return 0;
        return (width * ne - np) / n;
    }
};

template <int D>
inline ConeSpec<D> unstable_cone(const MapModel<D>& model, double width) {
    ConeSpec<D> c;
    c.center = model.unstable_frame();
    c.width = width;
    return c;
}

template <int D>
inline ConeSpec<D> stable_cone(const MapModel<D>& model, double width) {
    ConeSpec<D> c;
    c.center = model.stable_frame();
    c.width = width;
    return c;
}

namespace detail {

// Exact minimum of |J v|^2 over unit v = cos(phi) e + sin(phi) w with
// |phi| <= atan(width): the quadratic form restricted to a planar wedge is a
// single harmonic in 2 phi.
template <int D>
inline double wedge_min_expansion2(const Mat<D>& j, const Vec<D>& e, const Vec<D>& w,
                                   double width) {
    Vec<D> je = j * e, jw = j * w;
    double alpha = norm2(je), beta = norm2(jw), gamma = dot(je, jw);
    double c0 = 0.5 * (alpha + beta);
    double cx = 0.5 * (alpha - beta);
    double phimax = std::atan(width);
    double best = std::numeric_limits<double>::infinity();
    auto eval = [&](double phi) {
        double g = c0 + cx * std::cos(2 * phi) + gamma * std::sin(2 * phi);
        best = std::min(best, g);
    };
    eval(-phimax);
    eval(phimax);
    double psi = std::atan2(gamma, cx);
    for (int k = -1; k <= 1; ++k) {
        double phi = 0.5 * (psi + M_PI + 2 * M_PI * k);
        if (phi >= -phimax && phi <= phimax) eval(phi);
    }
    return best;
}

// Golden-section minimization of a smooth 1-d function on [a, b].
template <class F>
inline double golden_min(F&& f, double a, double b, int iters = 90) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    for (int i = 0; i < iters && (b - a) > 1e-13; ++i) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - gr * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + gr * (b - a);
            f2 = f(x2);
        }
    }
    return std::min(f1, f2);
}

// Sweep q(angle) over a grid, then refine every sampled local minimum.
template <class F>
inline double sweep_refine_min(F&& q, int samples) {
    std::vector<double> vals(size_t(samples));
    double step = 2.0 * M_PI / samples;
    for (int i = 0; i < samples; ++i) vals[size_t(i)] = q(i * step);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        double prev = vals[size_t((i + samples - 1) % samples)];
        double next = vals[size_t((i + 1) % samples)];
        if (vals[size_t(i)] <= prev && vals[size_t(i)] <= next) {
            double lo = (i - 1) * step, hi = (i + 1) * step;
            best = std::min(best, golden_min(q, lo, hi));
        }
        best = std::min(best, vals[size_t(i)]);
    }
    return best;
}

}  // namespace detail

// Minimal expansion inf_{0 != v in cone} |J v| / |v|.
template <int D>
inline double cone_min_expansion(const Mat<D>& j, const ConeSpec<D>& cone) {
    int dc = cone.dim();
    if (dc == 0) throw Error("cone_min_expansion: empty cone");
    if (dc == D) return smallest_singular_value(j);

    if constexpr (D == 2) {
        Basis<2> comp = orthogonal_complement(cone.center);
        return std::sqrt(detail::wedge_min_expansion2(j, cone.center[0], comp[0], cone.width));
    } else if constexpr (D == 3) {
        if (dc == 1) {
            Basis<3> comp = orthogonal_complement(cone.center);
            const Vec<3> e = cone.center[0];
            auto q = [&](double psi) {
                Vec<3> w = comp[0] * std::cos(psi) + comp[1] * std::sin(psi);
                return detail::wedge_min_expansion2(j, e, w, cone.width);
            };
            return std::sqrt(detail::sweep_refine_min(q, 2048));
        }
        // dc == 2: sweep the center circle against the one-dimensional complement
        Basis<3> comp = orthogonal_complement(cone.center);
        const Vec<3> n = comp[0];
        auto q = [&](double theta) {
            Vec<3> e = cone.center[0] * std::cos(theta) + cone.center[1] * std::sin(theta);
            return detail::wedge_min_expansion2(j, e, n, cone.width);
        };
        return std::sqrt(detail::sweep_refine_min(q, 2048));
    } else {
        // D == 1 with 0 < dc < 1 cannot happen
        return smallest_singular_value(j);
    }
}

// ||(J|_C)^{-1}|| = sup_{0 != w in J(C)} |J^{-1} w| / |w|.
template <int D>
inline double cone_conorm_inverse(const Mat<D>& j, const ConeSpec<D>& cone) {
    if (std::abs(det(j)) < 1e-300) throw SingularMatrix("cone_conorm_inverse: singular matrix");
    return 1.0 / cone_min_expansion(j, cone);
}

// Deterministic direction samples covering the cone (boundary and interior).
template <int D>
inline std::vector<Vec<D>> cone_directions(const ConeSpec<D>& cone, int count) {
    std::vector<Vec<D>> dirs;
    int dc = cone.dim();
    double phimax = std::atan(cone.width);
    if (dc == 0) return dirs;
    if (dc == D) {
        // sample the whole unit sphere deterministically
        if constexpr (D == 1) {
            dirs.push_back(Vec<1>{{1.0}});
            dirs.push_back(Vec<1>{{-1.0}});
        } else if constexpr (D == 2) {
            for (int i = 0; i < count; ++i) {
                double th = 2 * M_PI * i / count;
                dirs.push_back(Vec<2>{{std::cos(th), std::sin(th)}});
            }
        } else {
            // Fibonacci sphere
            const double ga = M_PI * (3.0 - std::sqrt(5.0));
            for (int i = 0; i < count; ++i) {
                double z = 1.0 - 2.0 * (i + 0.5) / count;
                double r = std::sqrt(std::max(0.0, 1.0 - z * z));
                dirs.push_back(Vec<3>{{r * std::cos(ga * i), r * std::sin(ga * i), z}});
            }
        }
        return dirs;
    }
    if constexpr (D == 2) {
        const Basis<2> comp = orthogonal_complement(cone.center);
        for (int i = 0; i < count; ++i) {
            double phi = -phimax + 2 * phimax * i / (count - 1);
            dirs.push_back(cone.center[0] * std::cos(phi) + comp[0] * std::sin(phi));
        }
    } else if constexpr (D == 3) {
        const Basis<3> comp = orthogonal_complement(cone.center);
        int na = std::max(4, int(std::sqrt(double(count))));
        int nr = std::max(3, count / na);
        if (dc == 1) {
            for (int ia = 0; ia < na; ++ia) {
                double psi = 2 * M_PI * ia / na;
                Vec<3> w = comp[0] * std::cos(psi) + comp[1] * std::sin(psi);
                for (int ir = 0; ir < nr; ++ir) {
                    double phi = phimax * (2.0 * ir / (nr - 1) - 1.0);
                    dirs.push_back(cone.center[0] * std::cos(phi) + w * std::sin(phi));
                }
            }
        } else {
            for (int ia = 0; ia < na; ++ia) {
                double theta = 2 * M_PI * ia / na;
                Vec<3> e = cone.center[0] * std::cos(theta) + cone.center[1] * std::sin(theta);
                for (int ir = 0; ir < nr; ++ir) {
                    double phi = phimax * (2.0 * ir / (nr - 1) - 1.0);
                    dirs.push_back(e * std::cos(phi) + comp[0] * std::sin(phi));
                }
            }
        }
    }
    return dirs;
}

// Boundary directions only (|v_perp| = width * |v_center|).
template <int D>
inline std::vector<Vec<D>> cone_boundary_directions(const ConeSpec<D>& cone, int count) {
    std::vector<Vec<D>> dirs;
    int dc = cone.dim();
    if (dc == 0 || dc == D) return dirs;
    double phimax = std::atan(cone.width);
    double cp = std::cos(phimax), sp = std::sin(phimax);
    if constexpr (D == 2) {
        const Basis<2> comp = orthogonal_complement(cone.center);
        dirs.push_back(cone.center[0] * cp + comp[0] * sp);
        dirs.push_back(cone.center[0] * cp - comp[0] * sp);
    } else if constexpr (D == 3) {
        const Basis<3> comp = orthogonal_complement(cone.center);
        if (dc == 1) {
            for (int i = 0; i < count; ++i) {
                double psi = 2 * M_PI * i / count;
                Vec<3> w = comp[0] * std::cos(psi) + comp[1] * std::sin(psi);
                dirs.push_back(cone.center[0] * cp + w * sp);
            }
        } else {
            for (int i = 0; i < count; ++i) {
                double theta = 2 * M_PI * i / count;
                Vec<3> e = cone.center[0] * std::cos(theta) + cone.center[1] * std::sin(theta);
                dirs.push_back(e * cp + comp[0] * sp);
                dirs.push_back(e * cp - comp[0] * sp);
            }
        }
    }
    return dirs;
}

template <int D>
struct InvarianceReport {
    bool holds = false;
    double margin = 0.0;  // minimal relative slack of the image inside the cone
    int grid_resolution = 0;
    TorusPoint<D> worst_point;
};

// Checks Dg(x)(C(x)) inside C(g(x)) over a uniform grid; the cone field is
// constant, so only the derivative varies.
template <int D>
inline InvarianceReport<D> check_cone_invariance(const MapModel<D>& model,
                                                 const ConeSpec<D>& cone, int grid_res,
                                                 int dirs_per_point = 64) {
    InvarianceReport<D> rep;
    rep.grid_resolution = grid_res;
    rep.margin = std::numeric_limits<double>::infinity();

    auto dirs = cone_boundary_directions(cone, dirs_per_point);
    if (dirs.empty()) dirs = cone_directions(cone, std::max(dirs_per_point, 8));

    auto consider = [&](const TorusPoint<D>& x) {
        Mat<D> j = model.derivative(x);
        for (const auto& v : dirs) {
            double m = cone.margin(j * v);
            if (m < rep.margin) {
                rep.margin = m;
                rep.worst_point = x;
            }
        }
    };

    if (!model.perturbed()) {
        consider(TorusPoint<D>{});
    } else {
        std::array<int, D> idx{};
        while (true) {
            TorusPoint<D> x;
            for (int i = 0; i < D; ++i) x.c[size_t(i)] = (idx[size_t(i)] + 0.5) / grid_res;
            consider(x);
            int axis = D - 1;
            while (axis >= 0) {
                if (++idx[size_t(axis)] < grid_res) break;
                idx[size_t(axis)] = 0;
                --axis;
            }
            if (axis < 0) break;
        }
    }
    rep.holds = rep.margin > 0.0;
    return rep;
}

template <int D>
struct SplittingEstimate {
    TorusPoint<D> base;
    Basis<D> stable_frame;
    Basis<D> unstable_frame;
    double residual = 0.0;
};

// E^s(x) as the pullback limit of the stable-cone center along the forward
// orbit: a frame at f^n(x) is pulled back by Dg^{-1} with re-orthonormalization
// at each step. residual = subspace drift between depths n-1 and n.
template <int D>
inline SplittingEstimate<D> estimate_stable_bundle(const MapModel<D>& model,
                                                   const TorusPoint<D>& x, int depth,
                                                   double tol = 1e-6) {
    SplittingEstimate<D> est;
    est.base = x;
    if (model.stable_dim() == 0) return est;

    std::vector<Mat<D>> derivs;
    derivs.reserve(size_t(depth));
    TorusPoint<D> z = x;
    for (int i = 0; i < depth; ++i) {
        derivs.push_back(model.derivative(z));
        z = model.apply(z);
    }

    auto pullback = [&](int from) {
        Basis<D> fr = model.stable_frame();
        for (int i = from - 1; i >= 0; --i) {
            for (int c = 0; c < fr.n; ++c) fr[c] = solve(derivs[size_t(i)], fr[c]);
            orthonormalize(fr);
        }
        return fr;
    };

    Basis<D> fn = pullback(depth);
    Basis<D> fn1 = pullback(depth - 1);
    est.stable_frame = fn;
    est.residual = subspace_distance(fn, fn1);
    if (est.residual > tol)
        throw DepthTooSmall("estimate_stable_bundle: residual " + std::to_string(est.residual) +
                            " above tolerance at depth " + std::to_string(depth));
    return est;
}

// Operator norm of J restricted to the span of an orthonormal frame.
template <int D>
inline double op_norm_on(const Mat<D>& j, const Basis<D>& frame) {
    if (frame.n == 0) return 0.0;
    // top eigenvalue of the Gram matrix (J F)^T (J F)
    Mat<3> g;
    for (int a = 0; a < frame.n; ++a)
        for (int b = 0; b < frame.n; ++b) g(a, b) = dot(j * frame[a], j * frame[b]);
    for (int i = frame.n; i < 3; ++i) g(i, i) = 0.0;
    auto ev = sym_eigenvalues<3>(g);
    return std::sqrt(std::max(0.0, ev[2]));
}

// log |det(J restricted to the span of an orthonormal frame)|.
template <int D>
inline double log_det_on(const Mat<D>& j, const Basis<D>& frame) {
    if (frame.n == 0) return 0.0;
    Basis<D> img;
    for (int c = 0; c < frame.n; ++c) img.push(j * frame[c]);
    auto r = orthonormalize(img);
    double s = 0;
    for (int c = 0; c < frame.n; ++c) s += std::log(r[size_t(c)]);
    return s;
}

template <int D>
struct DominationReport {
    bool holds = false;
    double lambda_hat = 0.0;
    TorusPoint<D> worst_point;
};

// (H4): lambda_hat = max over grid of ||Dg|_{E^s}|| * ||(Dg|_C)^{-1}||; the
// second factor is exactly the cone conorm of the inverse over the image cone.
template <int D>
inline DominationReport<D> check_domination(const MapModel<D>& model, const ConeSpec<D>& cone,
                                            int grid_res, int stable_depth = 40) {
    DominationReport<D> rep;
    if (model.stable_dim() == 0) {
        rep.holds = true;
        rep.lambda_hat = 0.0;
        return rep;
    }
    auto consider = [&](const TorusPoint<D>& x) {
        Mat<D> j = model.derivative(x);
        Basis<D> es = model.perturbed()
                          ? estimate_stable_bundle(model, x, stable_depth).stable_frame
                          : model.stable_frame();
        double lh = op_norm_on(j, es) * cone_conorm_inverse(j, cone);
        if (lh > rep.lambda_hat) {
            rep.lambda_hat = lh;
            rep.worst_point = x;
        }
    };
    if (!model.perturbed()) {
        consider(TorusPoint<D>{});
    } else {
        std::array<int, D> idx{};
        while (true) {
            TorusPoint<D> x;
            for (int i = 0; i < D; ++i) x.c[size_t(i)] = (idx[size_t(i)] + 0.5) / grid_res;
            consider(x);
            int axis = D - 1;
            while (axis >= 0) {
                if (++idx[size_t(axis)] < grid_res) break;
                idx[size_t(axis)] = 0;
                --axis;
            }
            if (axis < 0) break;
        }
    }
    rep.holds = rep.lambda_hat < 1.0;
    return rep;
}

}  // namespace torusdyn
