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

// Cone-hyperbolic times: n is a c-hyperbolic time when every suffix sum of
// the per-step log conorms a_j = log ||(Dg(f^j x)|_C)^{-1}|| satisfies
// sum_{j=n-k}^{n-1} a_j <= -c k. Detection is the single-pass Pliss scan on
// the prefix sums of (a_j + c).

#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "torusdyn/cones.hpp"
#include "torusdyn/errors.hpp"
#include "torusdyn/models.hpp"

namespace torusdyn {

// Caches the cone conorm where the derivative is constant (linear models and
// points off the bump support).
template <int D>
class ConeNormEvaluator {
  public:
    ConeNormEvaluator(const MapModel<D>& model, const ConeSpec<D>& cone)
        : model_(&model), cone_(&cone) {
        constant_value_ = std::log(cone_conorm_inverse(model.matrix(), cone));
    }

    double log_conorm_inverse(const TorusPoint<D>& x) const {
        if (model_->constant_derivative_at(x)) return constant_value_;
        return std::log(cone_conorm_inverse(model_->derivative(x), *cone_));
    }

    double constant_value() const { return constant_value_; }

  private:
    const MapModel<D>* model_;
    const ConeSpec<D>* cone_;
    double constant_value_;
};

template <int D>
struct OrbitRecord {
    TorusPoint<D> start;
    int length = 0;
    std::vector<TorusPoint<D>> points;      // length + 1 entries
    std::vector<double> cone_lognorms;      // a_j, length entries
    std::vector<double> jac_logs;           // log|det Dg(f^j x)|
    std::vector<double> stable_lognorms;    // log||Dg(f^j x)|_{E^s}||, optional
};

template <int D>
inline OrbitRecord<D> record_orbit(const MapModel<D>& model, const ConeSpec<D>& cone,
                                   const TorusPoint<D>& start, int n,
                                   bool with_stable = false, int stable_depth = 40) {
    OrbitRecord<D> rec;
    rec.start = start;
    rec.length = n;
    rec.points.reserve(size_t(n) + 1);
    rec.cone_lognorms.reserve(size_t(n));
    rec.jac_logs.reserve(size_t(n));
    ConeNormEvaluator<D> ev(model, cone);
    double const_jac = std::log(std::abs(det(model.matrix())));
    TorusPoint<D> x = start;
    for (int j = 0; j < n; ++j) {
        rec.points.push_back(x);
        rec.cone_lognorms.push_back(ev.log_conorm_inverse(x));
        if (model.constant_derivative_at(x)) {
            rec.jac_logs.push_back(const_jac);
        } else {
            rec.jac_logs.push_back(std::log(std::abs(det(model.derivative(x)))));
        }
        if (with_stable) {
            Basis<D> es = model.perturbed()
                              ? estimate_stable_bundle(model, x, stable_depth).stable_frame
                              : model.stable_frame();
            rec.stable_lognorms.push_back(model.stable_dim() ? std::log(op_norm_on(
                                                                   model.derivative(x), es))
                                                             : 0.0);
        }
        x = model.apply(x);
    }
    rec.points.push_back(x);
    return rec;
}

struct HyperbolicTimeReport {
    double c = 0.0;
    std::vector<int> times;  // ascending, 1-based iterate indices
    double frequency_hat = 0.0;
};

// Single-pass Pliss scan: n is a hyperbolic time iff the prefix sum of
// (a_j + c) at n is <= the running minimum over 0..n-1.
inline HyperbolicTimeReport detect_hyperbolic_times(const std::vector<double>& cone_lognorms,
                                                    double c) {
    if (!(c > 0.0)) throw NonpositiveC("detect_hyperbolic_times: c must be positive");
    HyperbolicTimeReport rep;
    rep.c = c;
    double prefix = 0.0, run_min = 0.0;  // S_0 = 0
    for (size_t j = 0; j < cone_lognorms.size(); ++j) {
        prefix += cone_lognorms[j] + c;
        if (prefix <= run_min) rep.times.push_back(int(j) + 1);
        run_min = std::min(run_min, prefix);
    }
    rep.frequency_hat =
        cone_lognorms.empty() ? 0.0 : double(rep.times.size()) / double(cone_lognorms.size());
    return rep;
}

template <int D>
inline HyperbolicTimeReport detect_hyperbolic_times(const OrbitRecord<D>& rec, double c) {
    return detect_hyperbolic_times(rec.cone_lognorms, c);
}

// Reference O(n^2) oracle used by the test-suite.
inline std::vector<int> hyperbolic_times_bruteforce(const std::vector<double>& a, double c) {
    std::vector<int> times;
    for (size_t n = 1; n <= a.size(); ++n) {
        bool ok = true;
        for (size_t k = 1; k <= n && ok; ++k) {
            double s = 0;
            for (size_t j = n - k; j < n; ++j) s += a[j];
            if (s > -c * double(k)) ok = false;
        }
        if (ok) times.push_back(int(n));
    }
    return times;
}

// Checks the uniform-expansion consequence |Df^{n-j}(f^j x) v| >= e^{c(n-j)}|v|
// for cone directions v; returns the largest positive violation (0 if none).
// At most max_pairs (j, n) pairs are checked, deterministically strided.
template <int D>
inline double verify_expansion_at_times(const OrbitRecord<D>& rec,
                                        const HyperbolicTimeReport& rep,
                                        const MapModel<D>& model, const ConeSpec<D>& cone,
                                        int max_pairs = 64, int dirs_count = 64) {
    std::vector<std::pair<int, int>> pairs;  // (j, n)
    for (int n : rep.times)
        for (int j = 0; j < n; ++j) pairs.emplace_back(j, n);
    if (int(pairs.size()) > max_pairs) {
        std::vector<std::pair<int, int>> sub;
        double stride = double(pairs.size()) / max_pairs;
        for (int i = 0; i < max_pairs; ++i) sub.push_back(pairs[size_t(i * stride)]);
        pairs.swap(sub);
    }
    auto dirs = cone_directions(cone, dirs_count);
    double worst = 0.0;
    for (auto [j, n] : pairs) {
        Mat<D> prod = Mat<D>::identity();
        for (int i = j; i < n; ++i) prod = model.derivative(rec.points[size_t(i)]) * prod;
        double factor = std::exp(rep.c * (n - j));
        for (const auto& v : dirs) {
            double violation = factor * norm(v) - norm(prod * v);
            worst = std::max(worst, violation);
        }
    }
    return worst;
}

// Empirical Birkhoff average of the log conorms; its limsup is bounded by -2c
// on the non-uniformly expanding set, which calibrates admissible c.
template <int D>
inline double birkhoff_limsup_estimate(const OrbitRecord<D>& rec) {
    if (rec.length < 100) throw Error("birkhoff_limsup_estimate: need n >= 100");
    double s = 0;
    for (double a : rec.cone_lognorms) s += a;
    return s / double(rec.length);
}

inline double birkhoff_average(const std::vector<double>& a) {
    double s = 0;
    for (double x : a) s += x;
    return a.empty() ? 0.0 : s / double(a.size());
}

}  // namespace torusdyn
