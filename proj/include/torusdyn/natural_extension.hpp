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

// Finite-depth pre-orbits coded by inverse-branch words, the truncated
// natural-extension metric, and the unstable direction along a pre-orbit as
// the forward-image limit of the cone (with its backward-contraction
// certificate).

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "torusdyn/cones.hpp"
#include "torusdyn/errors.hpp"
#include "torusdyn/hyperbolic_times.hpp"
#include "torusdyn/models.hpp"
#include "torusdyn/rng.hpp"

namespace torusdyn {

// Backward branch: points[j] = x_{-j}, f(x_{-j}) = x_{-j+1}; word symbols are
// 1-based branch indices, word[j-1] selects x_{-j} from x_{-j+1}.
template <int D>
struct PreOrbit {
    std::vector<int> word;
    std::vector<TorusPoint<D>> points;

    int depth() const { return int(word.size()); }
    const TorusPoint<D>& base() const { return points.front(); }
    const TorusPoint<D>& deepest() const { return points.back(); }
};

template <int D>
inline PreOrbit<D> extend_preorbit(const MapModel<D>& model, const TorusPoint<D>& x,
                                   const std::vector<int>& word) {
    PreOrbit<D> pre;
    pre.word = word;
    pre.points.reserve(word.size() + 1);
    pre.points.push_back(x);
    for (int s : word) pre.points.push_back(model.inverse_branch(pre.points.back(), s));
    return pre;
}

template <int D>
inline PreOrbit<D> random_preorbit(const MapModel<D>& model, const TorusPoint<D>& x, int depth,
                                   CounterRng& rng) {
    std::vector<int> word(size_t(depth));
    for (int& s : word) s = 1 + int(rng.next_below(uint64_t(model.degree())));
    return extend_preorbit(model, x, word);
}

// Truncated natural-extension metric: sum_j 2^{-j} dist(x_{-j}, y_{-j}).
template <int D>
inline double preorbit_distance(const PreOrbit<D>& a, const PreOrbit<D>& b) {
    size_t m = std::min(a.points.size(), b.points.size());
    double s = 0, w = 1;
    for (size_t j = 0; j < m; ++j, w *= 0.5) s += w * tor_dist(a.points[j], b.points[j]);
    return s;
}

// Drop the first symbol: the pre-orbit of x_{-1} with the shifted word.
template <int D>
inline PreOrbit<D> shift_preorbit(const PreOrbit<D>& pre) {
    PreOrbit<D> out;
    out.word.assign(pre.word.begin() + 1, pre.word.end());
    out.points.assign(pre.points.begin() + 1, pre.points.end());
    return out;
}

template <int D>
struct UnstableDirectionEstimate {
    TorusPoint<D> base;
    Basis<D> frame;  // orthonormal, inside the unstable cone
    // (m, max over frame vectors of ||(Df^m(x_{-m}))^{-1} v|| / ||v||)
    std::vector<std::pair<int, double>> contraction_certificate;
    double drift = 0.0;
};

// Pushes the cone-center frame forward from depth n with QR
// re-orthonormalization; the limit spans the intersection of the forward
// cone images. The certificate applies the accumulated inverse derivatives
// to the limit frame.
template <int D>
inline UnstableDirectionEstimate<D> unstable_direction(const MapModel<D>& model,
                                                       const PreOrbit<D>& pre,
                                                       const ConeSpec<D>& cone,
                                                       double tol = 1e-8) {
    const int n = pre.depth();
    if (n < 2) throw DepthTooSmall("unstable_direction: depth must be >= 2");
    std::vector<Mat<D>> derivs(size_t(n));  // derivs[j] = Dg(x_{-(j+1)})
    for (int j = 0; j < n; ++j) derivs[size_t(j)] = model.derivative(pre.points[size_t(j + 1)]);

    auto push_from = [&](int from) {
        Basis<D> fr = cone.center;
        for (int j = from - 1; j >= 0; --j) {
            for (int c = 0; c < fr.n; ++c) fr[c] = derivs[size_t(j)] * fr[c];
            orthonormalize(fr);
        }
        return fr;
    };

    UnstableDirectionEstimate<D> est;
    est.base = pre.base();
    est.frame = push_from(n);
    est.drift = subspace_distance(est.frame, push_from(n - 1));
    if (est.drift > tol)
        throw DepthTooSmall("unstable_direction: frame drift " + std::to_string(est.drift) +
                            " above tolerance at depth " + std::to_string(n));

    // backward-contraction certificate on the limit frame
    Basis<D> z = est.frame;
    for (int m = 1; m <= n; ++m) {
        double worst = 0.0;
        for (int c = 0; c < z.n; ++c) {
            z[c] = solve(derivs[size_t(m - 1)], z[c]);
            worst = std::max(worst, norm(z[c]));
        }
        est.contraction_certificate.emplace_back(m, worst);
    }
    return est;
}

// Max positive defect of ||(Df^m(x_{-m}))^{-1} v|| <= e^{-(c/2) m} ||v|| over
// the certificate; 0 means certified.
template <int D>
inline double verify_backward_contraction(const UnstableDirectionEstimate<D>& est, double c) {
    double worst = 0.0;
    for (auto [m, ratio] : est.contraction_certificate)
        worst = std::max(worst, ratio - std::exp(-0.5 * c * m));
    return worst;
}

// Backward hyperbolicity filter: every depth-m prefix of the pre-orbit must
// satisfy sum_{j=1..m} log||(Dg(x_{-j})|_C)^{-1}|| <= -c m. Pre-orbits passing
// the filter carry the e^{-cm} contraction bound on all cone vectors, hence
// certify at rate c/2 with slack.
template <int D>
inline bool passes_backward_hyperbolicity(const MapModel<D>& model, const PreOrbit<D>& pre,
                                          const ConeSpec<D>& cone, double c) {
    ConeNormEvaluator<D> ev(model, cone);
    double s = 0;
    for (int m = 1; m <= pre.depth(); ++m) {
        s += ev.log_conorm_inverse(pre.points[size_t(m)]);
        if (s > -c * m) return false;
    }
    return true;
}

enum class DiskRelation { Coincide, Disjoint, Violation };

inline const char* disk_relation_name(DiskRelation r) {
    switch (r) {
        case DiskRelation::Coincide: return "coincide";
        case DiskRelation::Disjoint: return "disjoint";
        case DiskRelation::Violation: return "violation";
    }
    return "?";
}

// Compares two accumulation-disk point clouds: coincide when the symmetric
// Hausdorff distance is below tol, disjoint when the minimal pairwise
// distance exceeds tol, violation otherwise (transversal crossing).
template <int D>
inline DiskRelation disk_disjointness_probe(const std::vector<TorusPoint<D>>& a,
                                            const std::vector<TorusPoint<D>>& b, double tol) {
    double min_pair = std::numeric_limits<double>::infinity();
    double hausdorff = 0.0;
    for (const auto& pa : a) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& pb : b) best = std::min(best, tor_dist(pa, pb));
        hausdorff = std::max(hausdorff, best);
        min_pair = std::min(min_pair, best);
    }
    for (const auto& pb : b) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& pa : a) best = std::min(best, tor_dist(pa, pb));
        hausdorff = std::max(hausdorff, best);
    }
    if (hausdorff < tol) return DiskRelation::Coincide;
    if (min_pair > tol) return DiskRelation::Disjoint;
    return DiskRelation::Violation;
}

}  // namespace torusdyn
