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

// Torus endomorphism families: linear maps given by an integer matrix A, and
// two derived-from-Anosov families obtained by a localized smooth perturbation
// at a fixed point p:
//   pitchfork — the weakest unstable eigenvalue lambda_w is moved to rho
//               (|rho| < 1) inside B(p, radius);
//   hopf      — the modulus of a complex expanding pair is moved below 1 near
//               p, creating an attracting fixed point surrounded by a
//               repelling invariant circle.
// Both are the identity-perturbation g_t(x) = A x + t * (localized term), so
// g_0 is the linear map and g_t == A off the bump support.

#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "torusdyn/bump.hpp"
#include "torusdyn/errors.hpp"
#include "torusdyn/geometry.hpp"

namespace torusdyn {

enum class Family { Linear, Pitchfork, Hopf };

inline const char* family_name(Family f) {
    switch (f) {
        case Family::Linear: return "linear";
        case Family::Pitchfork: return "pitchfork";
        case Family::Hopf: return "hopf";
    }
    return "?";
}

template <int D>
struct Jet {
    TorusPoint<D> point;
    TorusPoint<D> value;
    Mat<D> derivative;
};

struct BumpSpec {
    std::array<double, 3> center{};  // first D entries used
    double radius = 0.1;
    double rho = 0.7;             // target eigenvalue modulus at p
    double t = 1.0;               // isotopy parameter in [0,1]
    double plane_radius = 0.06;   // hopf only: radial transition scale in plane coords
};

template <int D>
class MapModel {
  public:
    static MapModel linear(const Mat<D>& a) { return MapModel(Family::Linear, a, BumpSpec{}); }

    static MapModel pitchfork(const Mat<D>& a, const BumpSpec& bump) {
        static_assert(D >= 2, "pitchfork needs an eigenvalue to spare");
        return MapModel(Family::Pitchfork, a, bump);
    }

    static MapModel hopf(const Mat<D>& a, const BumpSpec& bump) {
        static_assert(D == 3, "hopf family is realized on T^3");
        return MapModel(Family::Hopf, a, bump);
    }

    Family family() const { return family_; }
    const Mat<D>& matrix() const { return A_; }
    const BumpSpec& bump() const { return bump_; }
    int degree() const { return degree_; }
    int unstable_dim() const { return d_u_; }
    int stable_dim() const { return d_s_; }
    const Basis<D>& unstable_frame() const { return unstable_frame_; }
    const Basis<D>& stable_frame() const { return stable_frame_; }
    double weak_unstable_modulus() const { return weak_modulus_; }
    double stable_modulus() const { return stable_modulus_; }
    TorusPoint<D> bump_center() const { return p_; }

    bool perturbed() const { return family_ != Family::Linear && bump_.t != 0.0; }

    // True when Dg(x) == A exactly (off the bump support, or linear family).
    bool constant_derivative_at(const TorusPoint<D>& x) const {
        if (!perturbed()) return true;
        return tor_dist2(x, p_) >= bump_.radius * bump_.radius;
    }

    TorusPoint<D> apply(const TorusPoint<D>& x) const {
        Vec<D> y = A_ * x.as_vec();
        if (perturbed()) y += perturbation_value(x);
        return TorusPoint<D>::from_vec(y);
    }

    Mat<D> derivative(const TorusPoint<D>& x) const {
        if (constant_derivative_at(x)) return A_;
        Mat<D> j = A_;
        add_perturbation_derivative(x, j);
        return j;
    }

    Jet<D> eval(const TorusPoint<D>& x) const {
        return Jet<D>{x, apply(x), derivative(x)};
    }

    // All g-preimages of y in canonical order: sorted lexicographically by the
    // integer lattice representative of the corresponding linear preimage.
    std::vector<TorusPoint<D>> preimages(const TorusPoint<D>& y) const {
        std::vector<std::array<long, D>> reps = lattice_representatives(y);
        std::vector<TorusPoint<D>> out;
        out.reserve(reps.size());
        for (const auto& k : reps) {
            TorusPoint<D> x = linear_preimage(y, k);
            if (perturbed()) x = newton_refine(y, x);
            out.push_back(x);
        }
        return out;
    }

    // branch in {1, ..., degree}; ordering as in preimages().
    TorusPoint<D> inverse_branch(const TorusPoint<D>& y, int branch) const {
        if (branch < 1 || branch > degree_)
            throw BranchOutOfRange("inverse_branch: branch " + std::to_string(branch) +
                                   " not in 1.." + std::to_string(degree_));
        return preimages(y)[size_t(branch - 1)];
    }

    // Minimal torus distance between distinct branches over a sample grid;
    // +inf for degree-1 maps. Computed once at construction.
    double min_branch_separation() const { return min_branch_sep_; }
    double inverse_branch_radius() const { return inv_branch_radius_; }

    // Admissible open interval for the pitchfork target rho given this matrix
    // (both of the defining inequalities evaluated at the eigenvalues).
    static std::pair<double, double> pitchfork_rho_interval(const Mat<D>& a) {
        auto spec = analyze_spectrum(a);
        if (spec.stable_moduli.empty() || spec.unstable_moduli.size() < 2)
            throw Error("pitchfork_rho_interval: need d_s >= 1 and d_u >= 2");
        double lam1 = spec.stable_moduli.back();     // largest stable modulus
        double lam2 = spec.unstable_moduli.back();   // strongest unstable modulus
        return {std::max(lam1, 1.0 / lam2), 1.0};
    }

  private:
    struct Spectrum {
        std::vector<double> stable_moduli;    // ascending
        std::vector<double> unstable_moduli;  // ascending
        Basis<D> stable_frame;
        Basis<D> unstable_frame;
        // weak unstable data (smallest modulus > 1)
        double weak_modulus = 0.0;
        Vec<D> weak_right{};
        Vec<D> weak_left{};
        bool weak_is_real = false;
        // complex expanding pair (for hopf): real basis columns and dual rows
        bool has_complex_pair = false;
        double pair_modulus = 0.0;
        Vec<D> pair_b0{}, pair_b1{};  // A * [b0 b1] = [b0 b1] * R
        Vec<D> pair_w0{}, pair_w1{};  // dual rows: w(u) = (w0.u, w1.u)
        double rot_c = 0.0, rot_s = 0.0;  // R = modulus * [[c, s], [-s, c]] form
    };

    MapModel(Family fam, const Mat<D>& a, const BumpSpec& bump)
        : family_(fam), A_(a), bump_(bump) {
        double dA = det(a);
        if (std::abs(std::round(dA) - dA) > 1e-9 || std::abs(dA) < 0.5)
            throw Error("MapModel: matrix must be integer with |det| >= 1");
        degree_ = int(std::llabs(std::llround(dA)));
        Ainv_ = inverse(a);

        auto spec = analyze_spectrum(a);
        d_u_ = int(spec.unstable_moduli.size());
        d_s_ = int(spec.stable_moduli.size());
        if (d_u_ + d_s_ != D) throw Error("MapModel: eigenvalue on the unit circle");
        stable_frame_ = spec.stable_frame;
        unstable_frame_ = spec.unstable_frame;
        weak_modulus_ = spec.weak_modulus;
        stable_modulus_ = spec.stable_moduli.empty() ? 0.0 : spec.stable_moduli.back();

        if (family_ == Family::Pitchfork) {
            if (!spec.weak_is_real || d_u_ < 2 || d_s_ < 1)
                throw Error("pitchfork: need a real weak unstable eigenvalue, d_u >= 2, d_s >= 1");
            auto iv = pitchfork_rho_interval(a);
            if (!(bump_.rho > iv.first && bump_.rho < iv.second))
                throw Error("pitchfork: rho outside admissible interval");
            // spectral projector Pi_w = r l^T / (l^T r)
            double rl = dot(spec.weak_left, spec.weak_right);
            proj_w_ = Mat<D>{};
            for (int i = 0; i < D; ++i)
                for (int j = 0; j < D; ++j)
                    proj_w_(i, j) = spec.weak_right[i] * spec.weak_left[j] / rl;
            amp_ = bump_.rho - (weak_modulus_sign_ = weak_sign(a, spec)) * weak_modulus_;
        } else if (family_ == Family::Hopf) {
            if (!spec.has_complex_pair || d_s_ < 1)
                throw Error("hopf: matrix needs an expanding complex pair and a stable direction");
            if (!(bump_.rho > 0.0 && bump_.rho < 1.0))
                throw Error("hopf: rho must lie in (0,1)");
            pair_modulus_ = spec.pair_modulus;
            b0_ = spec.pair_b0;
            b1_ = spec.pair_b1;
            w0_ = spec.pair_w0;
            w1_ = spec.pair_w1;
            // PlaneA = B R W, the plane component of A on the pair plane, with
            // R = [[Re l, -Im l], [Im l, Re l]] in the basis [b0 b1]
            Mat<D> brw{};
            double m = spec.pair_modulus, rc = spec.rot_c, rs = spec.rot_s;
            for (int i = 0; i < D; ++i)
                for (int j = 0; j < D; ++j) {
                    double rw0 = m * (rc * w0_[j] - rs * w1_[j]);
                    double rw1 = m * (rs * w0_[j] + rc * w1_[j]);
                    brw(i, j) = b0_[i] * rw0 + b1_[i] * rw1;
                }
            plane_a_ = brw;
            // consistency: PlaneA must reproduce A on the pair plane and kill
            // the stable direction
            for (const Vec<D>& bb : {b0_, b1_}) {
                Vec<D> lhs = plane_a_ * bb;
                Vec<D> rhs = A_ * bb;
                if (norm(lhs - rhs) > 1e-8 * norm(rhs))
                    throw Error("hopf: plane factorization inconsistent");
            }
        }

        for (int i = 0; i < D; ++i) p_.c[size_t(i)] = wrap01(bump_.center[size_t(i)]);
        if (family_ != Family::Linear) {
            // p must be a fixed point of the linear map
            if (tor_dist(apply_linear(p_), p_) > 1e-12)
                throw Error("bump center must be a fixed point of the linear map");
            if (!(bump_.radius > 0.0 && bump_.radius <= 0.25))
                throw Error("bump radius must lie in (0, 0.25]");
            check_local_diffeo();
        }
        compute_branch_separation();
    }

    TorusPoint<D> apply_linear(const TorusPoint<D>& x) const {
        return TorusPoint<D>::from_vec(A_ * x.as_vec());
    }

    static double weak_sign(const Mat<D>& a, const Spectrum& spec) {
        // sign of the weak eigenvalue: lambda_w = sign * modulus
        Vec<D> img = a * spec.weak_right;
        return dot(img, spec.weak_right) >= 0 ? 1.0 : -1.0;
    }

    Vec<D> perturbation_value(const TorusPoint<D>& x) const {
        Vec<D> u = tor_displacement(x, p_);
        double r = norm(u);
        if (r >= bump_.radius) return Vec<D>{};
        double beta = bump_profile(r / bump_.radius);
        if (family_ == Family::Pitchfork) {
            return (bump_.t * amp_ * beta) * (proj_w_ * u);
        }
        // hopf: coefficient c(u) = beta * kappa(|w|), applied to PlaneA u
        Vec<2> w{{dot_w0(u), dot_w1(u)}};
        double rw = norm(w);
        double kap = kappa(rw);
        return (beta * kap) * (plane_a_ * u);
    }

    double dot_w0(const Vec<D>& u) const { return dot(w0_, u); }
    double dot_w1(const Vec<D>& u) const { return dot(w1_, u); }

    // hopf radial coefficient: kappa(rw) = t (rho - rhoA)/rhoA * beta(rw/r1)
    double kappa(double rw) const {
        return bump_.t * (bump_.rho - pair_modulus_) / pair_modulus_ *
               bump_profile(rw / bump_.plane_radius);
    }
    double kappa_deriv(double rw) const {
        return bump_.t * (bump_.rho - pair_modulus_) / pair_modulus_ *
               bump_profile_deriv(rw / bump_.plane_radius) / bump_.plane_radius;
    }

    void add_perturbation_derivative(const TorusPoint<D>& x, Mat<D>& j) const {
        Vec<D> u = tor_displacement(x, p_);
        double r = norm(u);
        if (r >= bump_.radius) return;
        double s = r / bump_.radius;
        double beta = bump_profile(s);
        double dbeta = bump_profile_deriv(s) / bump_.radius;  // d beta / d r
        if (family_ == Family::Pitchfork) {
            Vec<D> pw = proj_w_ * u;
            double c = bump_.t * amp_;
            for (int i = 0; i < D; ++i)
                for (int k = 0; k < D; ++k) {
                    double term = beta * proj_w_(i, k);
                    if (r > 0 && dbeta != 0.0) term += dbeta / r * pw[i] * u[k];
                    j(i, k) += c * term;
                }
            return;
        }
        // hopf
        Vec<2> w{{dot_w0(u), dot_w1(u)}};
        double rw = norm(w);
        double kap = kappa(rw);
        double dkap = kappa_deriv(rw);
        Vec<D> pa_u = plane_a_ * u;
        // gradient of c(u) = beta(|u|/delta) * kappa(|Wu|)
        Vec<D> grad{};
        if (r > 0 && dbeta != 0.0) grad += (dbeta * kap / r) * u;
        if (rw > 0 && dkap != 0.0) {
            Vec<D> gw{};
            for (int i = 0; i < D; ++i) gw[i] = (w0_[i] * w[0] + w1_[i] * w[1]) / rw;
            grad += (beta * dkap) * gw;
        }
        for (int i = 0; i < D; ++i)
            for (int k = 0; k < D; ++k) j(i, k) += pa_u[i] * grad[k] + beta * kap * plane_a_(i, k);
    }

    // integer lattice representatives k with A^{-1}(y + k) in [0,1)^D,
    // deduplicated per coset, sorted lexicographically
    std::vector<std::array<long, D>> lattice_representatives(const TorusPoint<D>& y) const {
        std::array<long, D> lo{}, hi{};
        for (int i = 0; i < D; ++i) {
            double l = -y[i], h = -y[i];
            for (int jj = 0; jj < D; ++jj) {
                double a = A_(i, jj);
                if (a < 0)
                    l += a;
                else
                    h += a;
            }
            lo[size_t(i)] = long(std::floor(l)) - 1;
            hi[size_t(i)] = long(std::ceil(h)) + 1;
        }
        std::vector<std::array<long, D>> reps;
        std::vector<TorusPoint<D>> pts;
        std::array<long, D> k = lo;
        while (true) {
            TorusPoint<D> x = linear_preimage(y, k);
            // the lattice representative that maps exactly into [0,1)^D
            std::array<long, D> krep{};
            Vec<D> ax = A_ * x.as_vec();
            bool ok = true;
            for (int i = 0; i < D; ++i) {
                double kk = ax[i] - y[i];
                krep[size_t(i)] = long(std::llround(kk));
                if (std::abs(kk - double(krep[size_t(i)])) > 1e-7) ok = false;
            }
            if (ok && krep == k) {
                bool dup = false;
                for (const auto& q : pts)
                    if (tor_dist2(q, x) < 1e-18) {
                        dup = true;
                        break;
                    }
                if (!dup) {
                    pts.push_back(x);
                    reps.push_back(k);
                }
            }
            // advance odometer
            int axis = D - 1;
            while (axis >= 0) {
                if (++k[size_t(axis)] <= hi[size_t(axis)]) break;
                k[size_t(axis)] = lo[size_t(axis)];
                --axis;
            }
            if (axis < 0) break;
        }
        if (int(reps.size()) != degree_)
            throw Error("preimages: lattice enumeration found " + std::to_string(reps.size()) +
                        " branches, expected " + std::to_string(degree_));
        std::sort(reps.begin(), reps.end());
        return reps;
    }

    TorusPoint<D> linear_preimage(const TorusPoint<D>& y, const std::array<long, D>& k) const {
        Vec<D> yk = y.as_vec();
        for (int i = 0; i < D; ++i) yk[i] += double(k[size_t(i)]);
        return TorusPoint<D>::from_vec(Ainv_ * yk);
    }

    TorusPoint<D> newton_refine(const TorusPoint<D>& y, TorusPoint<D> x) const {
        constexpr int kMaxIter = 50;
        constexpr double kTol = 1e-12;
        double res = tor_dist(apply(x), y);
        for (int it = 0; it < kMaxIter; ++it) {
            if (res <= kTol) return x;
            Vec<D> r = tor_displacement(apply(x), y);
            Vec<D> step = solve(derivative(x), r);
            double lam = 1.0;
            for (int h = 0; h < 30; ++h) {
                TorusPoint<D> xn = x.translated(step * (-lam));
                double rn = tor_dist(apply(xn), y);
                if (rn < res) {
                    x = xn;
                    res = rn;
                    break;
                }
                lam *= 0.5;
                if (h == 29)
                    throw NewtonDivergence("inverse branch Newton stalled at residual " +
                                           std::to_string(res));
            }
        }
        throw NewtonDivergence("inverse branch Newton did not reach tolerance");
    }

    void check_local_diffeo() const {
        // sample the bump support; outside it the derivative is A
        const int n = (D == 3) ? 13 : 41;
        double mind = std::abs(det(A_));
        std::array<int, D> idx{};
        while (true) {
            Vec<D> off;
            for (int i = 0; i < D; ++i)
                off[i] = (2.0 * idx[size_t(i)] / (n - 1) - 1.0) * bump_.radius;
            if (norm(off) < bump_.radius) {
                double dd = std::abs(det(derivative(p_.translated(off))));
                mind = std::min(mind, dd);
            }
            int axis = D - 1;
            while (axis >= 0) {
                if (++idx[size_t(axis)] < n) break;
                idx[size_t(axis)] = 0;
                --axis;
            }
            if (axis < 0) break;
        }
        if (mind < 1e-6)
            throw Error("model is not a local diffeomorphism: min |det Dg| = " +
                        std::to_string(mind));
    }

    // Lower bound on the distance between distinct branches. Linear branches
    // of a common target form the subgroup A^{-1}Z^D / Z^D, so the linear
    // separation is the minimal distance between its elements (exact); the
    // perturbation moves each branch by at most ||A^{-1}|| sup|g - A|.
    void compute_branch_separation() {
        if (degree_ < 2) {
            min_branch_sep_ = std::numeric_limits<double>::infinity();
            inv_branch_radius_ = 0.25;
            return;
        }
        Family keep = family_;
        family_ = Family::Linear;  // enumerate the linear subgroup
        auto group = preimages(TorusPoint<D>{});
        family_ = keep;
        double sep = std::numeric_limits<double>::infinity();
        for (size_t a = 0; a < group.size(); ++a)
            for (size_t b = a + 1; b < group.size(); ++b)
                sep = std::min(sep, tor_dist(group[a], group[b]));
        if (perturbed()) {
            double pert_max = 0.0;
            const int n = 21;
            std::array<int, D> idx{};
            while (true) {
                Vec<D> off;
                for (int i = 0; i < D; ++i)
                    off[i] = (2.0 * idx[size_t(i)] / (n - 1) - 1.0) * bump_.radius;
                if (norm(off) < bump_.radius)
                    pert_max = std::max(pert_max, norm(perturbation_value(p_.translated(off))));
                int axis = D - 1;
                while (axis >= 0) {
                    if (++idx[size_t(axis)] < n) break;
                    idx[size_t(axis)] = 0;
                    --axis;
                }
                if (axis < 0) break;
            }
            double allowance = 2.0 * pert_max * 1.1 / smallest_singular_value(A_);
            sep -= allowance;
            if (sep <= 0)
                throw Error("perturbation too large: branch separation bound non-positive");
        }
        min_branch_sep_ = sep;
        inv_branch_radius_ = 0.5 * sep;
    }

    static Spectrum analyze_spectrum(const Mat<D>& a) {
        Eigen::Matrix<double, D, D> ea;
        for (int i = 0; i < D; ++i)
            for (int j = 0; j < D; ++j) ea(i, j) = a(i, j);
        Eigen::EigenSolver<Eigen::Matrix<double, D, D>> es(ea);
        if (es.info() != Eigen::Success) throw Error("eigen decomposition failed");

        Spectrum out;
        std::vector<int> order(D);
        for (int i = 0; i < D; ++i) order[size_t(i)] = i;
        auto modulus = [&](int i) { return std::abs(es.eigenvalues()[i]); };
        std::sort(order.begin(), order.end(), [&](int x, int y) { return modulus(x) < modulus(y); });

        std::vector<int> used(D, 0);
        for (int oi = 0; oi < D; ++oi) {
            int i = order[size_t(oi)];
            if (used[size_t(i)]) continue;
            double m = modulus(i);
            if (std::abs(m - 1.0) < 1e-12) throw Error("matrix is not hyperbolic");
            std::complex<double> lam = es.eigenvalues()[i];
            if (std::abs(lam.imag()) < 1e-12) {
                used[size_t(i)] = 1;
                Vec<D> v;
                for (int r = 0; r < D; ++r) v[r] = es.eigenvectors().col(i)[r].real();
                v = normalized(v);
                if (m < 1.0) {
                    out.stable_moduli.push_back(m);
                    out.stable_frame.push(v);
                } else {
                    out.unstable_moduli.push_back(m);
                    out.unstable_frame.push(v);
                    if (out.weak_modulus == 0.0) {
                        out.weak_modulus = m;
                        out.weak_right = v;
                        out.weak_is_real = true;
                        // left eigenvector: eigenvector of A^T for the same eigenvalue
                        Eigen::EigenSolver<Eigen::Matrix<double, D, D>> est(ea.transpose());
                        int best = 0;
                        double bd = 1e300;
                        for (int q = 0; q < D; ++q) {
                            double dd = std::abs(est.eigenvalues()[q] - lam);
                            if (dd < bd) {
                                bd = dd;
                                best = q;
                            }
                        }
                        Vec<D> l;
                        for (int r = 0; r < D; ++r) l[r] = est.eigenvectors().col(best)[r].real();
                        out.weak_left = normalized(l);
                    }
                }
            } else {
                // complex pair: find the conjugate partner
                int jpartner = -1;
                for (int q = 0; q < D; ++q) {
                    if (q != i && !used[size_t(q)] &&
                        std::abs(es.eigenvalues()[q] - std::conj(lam)) < 1e-9)
                        jpartner = q;
                }
                if (jpartner < 0) throw Error("unpaired complex eigenvalue");
                used[size_t(i)] = used[size_t(jpartner)] = 1;
                Vec<D> u, w;
                for (int r = 0; r < D; ++r) {
                    u[r] = es.eigenvectors().col(i)[r].real();
                    w[r] = -es.eigenvectors().col(i)[r].imag();
                }
                Basis<D> pf;
                pf.push(u);
                pf.push(w);
                auto pfo = pf;
                orthonormalize(pfo);
                if (m < 1.0) {
                    out.stable_moduli.push_back(m);
                    out.stable_moduli.push_back(m);
                    out.stable_frame.push(pfo[0]);
                    out.stable_frame.push(pfo[1]);
                } else {
                    out.unstable_moduli.push_back(m);
                    out.unstable_moduli.push_back(m);
                    out.unstable_frame.push(pfo[0]);
                    out.unstable_frame.push(pfo[1]);
                    if (!out.has_complex_pair) {
                        out.has_complex_pair = true;
                        out.pair_modulus = m;
                        if (out.weak_modulus == 0.0) out.weak_modulus = m;
                        // A [u w] = [u w] * m*[[c, s], [-s, c]] with lam = m e^{i theta}
                        out.rot_c = lam.real() / m;
                        out.rot_s = lam.imag() / m;
                        out.pair_b0 = u;
                        out.pair_b1 = w;
                        // dual rows from inverting the full eigenbasis [u w | rest]
                        if constexpr (D == 3) {
                            // remaining real eigenvector
                            int rest = 0;
                            for (int q = 0; q < D; ++q)
                                if (q != i && q != jpartner) rest = q;
                            Mat<3> basis;
                            for (int r = 0; r < 3; ++r) {
                                basis(r, 0) = u[r];
                                basis(r, 1) = w[r];
                                basis(r, 2) = es.eigenvectors().col(rest)[r].real();
                            }
                            Mat<3> binv = inverse(basis);
                            for (int cc = 0; cc < 3; ++cc) {
                                out.pair_w0[cc] = binv(0, cc);
                                out.pair_w1[cc] = binv(1, cc);
                            }
                        }
                    }
                }
            }
        }
        return out;
    }

    Family family_;
    Mat<D> A_;
    Mat<D> Ainv_;
    BumpSpec bump_;
    int degree_ = 1;
    int d_u_ = 0, d_s_ = 0;
    Basis<D> stable_frame_, unstable_frame_;
    double weak_modulus_ = 0.0;
    double weak_modulus_sign_ = 1.0;
    double stable_modulus_ = 0.0;
    TorusPoint<D> p_;
    // pitchfork data
    Mat<D> proj_w_{};
    double amp_ = 0.0;
    // hopf data
    double pair_modulus_ = 0.0;
    Vec<D> b0_{}, b1_{}, w0_{}, w1_{};
    Mat<D> plane_a_{};
    double min_branch_sep_ = 0.0;
    double inv_branch_radius_ = 0.0;
};

// The standard example models used throughout the test-suite and docs.
inline Mat<1> doubling_matrix() {
    Mat<1> a;
    a(0, 0) = 2;
    return a;
}

inline Mat<2> cat_matrix() {
    Mat<2> a;
    a(0, 0) = 2;
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 1;
    return a;
}

inline Mat<3> anosov3_matrix(int n = 2) {
    Mat<3> a;
    a(0, 0) = n;
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 1;
    a(2, 2) = 2;
    return a;
}

// Companion matrix of x^3 - x^2 + 2x - 1: one real contracting eigenvalue
// (~0.5698) and an expanding complex pair of modulus ~1.3247.
inline Mat<3> hopf3_matrix() {
    Mat<3> a;
    a(0, 1) = 1;
    a(1, 2) = 1;
    a(2, 0) = 1;
    a(2, 1) = -2;
    a(2, 2) = 1;
    return a;
}

}  // namespace torusdyn
