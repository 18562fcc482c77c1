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

// Small fixed-dimension linear algebra and torus geometry for d in {1,2,3}.
// Points on T^d are stored as fractional coordinates in [0,1); displacements
// between nearby points use the minimal integer-translate representative.

#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace torusdyn {

template <int D>
struct Vec {
    std::array<double, D> v{};

    double& operator[](int i) { return v[static_cast<size_t>(i)]; }
    double operator[](int i) const { return v[static_cast<size_t>(i)]; }

    Vec operator+(const Vec& o) const {
        Vec r;
        for (int i = 0; i < D; ++i) r[i] = v[size_t(i)] + o[i];
        return r;
    }
    Vec operator-(const Vec& o) const {
        Vec r;
        for (int i = 0; i < D; ++i) r[i] = v[size_t(i)] - o[i];
        return r;
    }
    Vec operator*(double s) const {
        Vec r;
        for (int i = 0; i < D; ++i) r[i] = v[size_t(i)] * s;
        return r;
    }
    Vec& operator+=(const Vec& o) {
        for (int i = 0; i < D; ++i) v[size_t(i)] += o[i];
        return *this;
    }
    Vec& operator-=(const Vec& o) {
        for (int i = 0; i < D; ++i) v[size_t(i)] -= o[i];
        return *this;
    }
};

template <int D>
inline Vec<D> operator*(double s, const Vec<D>& a) {
    return a * s;
}

template <int D>
inline double dot(const Vec<D>& a, const Vec<D>& b) {
    double s = 0;
    for (int i = 0; i < D; ++i) s += a[i] * b[i];
    return s;
}

template <int D>
inline double norm2(const Vec<D>& a) {
    return dot(a, a);
}

template <int D>
inline double norm(const Vec<D>& a) {
    return std::sqrt(norm2(a));
}

template <int D>
inline Vec<D> normalized(const Vec<D>& a) {
    double n = norm(a);
    if (n == 0.0) throw std::invalid_argument("normalized: zero vector");
    return a * (1.0 / n);
}

inline Vec<3> cross(const Vec<3>& a, const Vec<3>& b) {
    return Vec<3>{{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
                   a[0] * b[1] - a[1] * b[0]}};
}

// Row-major d x d matrix.
template <int D>
struct Mat {
    std::array<double, size_t(D) * size_t(D)> m{};

    double& operator()(int r, int c) { return m[size_t(r) * D + size_t(c)]; }
    double operator()(int r, int c) const { return m[size_t(r) * D + size_t(c)]; }

    static Mat identity() {
        Mat I;
        for (int i = 0; i < D; ++i) I(i, i) = 1.0;
        return I;
    }

    Vec<D> operator*(const Vec<D>& x) const {
        Vec<D> y;
        for (int r = 0; r < D; ++r) {
            double s = 0;
            for (int c = 0; c < D; ++c) s += (*this)(r, c) * x[c];
            y[r] = s;
        }
        return y;
    }

    Mat operator*(const Mat& o) const {
        Mat r;
        for (int i = 0; i < D; ++i)
            for (int j = 0; j < D; ++j) {
                double s = 0;
                for (int k = 0; k < D; ++k) s += (*this)(i, k) * o(k, j);
                r(i, j) = s;
            }
        return r;
    }

    Mat operator+(const Mat& o) const {
        Mat r;
        for (size_t i = 0; i < m.size(); ++i) r.m[i] = m[i] + o.m[i];
        return r;
    }

    Mat operator*(double s) const {
        Mat r;
        for (size_t i = 0; i < m.size(); ++i) r.m[i] = m[i] * s;
        return r;
    }

    Mat transposed() const {
        Mat r;
        for (int i = 0; i < D; ++i)
            for (int j = 0; j < D; ++j) r(j, i) = (*this)(i, j);
        return r;
    }
};

template <int D>
inline double det(const Mat<D>& a) {
    if constexpr (D == 1) {
        return a(0, 0);
    } else if constexpr (D == 2) {
        return a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0);
    } else {
        return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
               a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
               a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
    }
}

template <int D>
inline Mat<D> inverse(const Mat<D>& a) {
    double d = det(a);
    if (d == 0.0) throw std::domain_error("inverse: singular matrix");
    Mat<D> r;
    if constexpr (D == 1) {
        r(0, 0) = 1.0 / d;
    } else if constexpr (D == 2) {
        r(0, 0) = a(1, 1) / d;
        r(0, 1) = -a(0, 1) / d;
        r(1, 0) = -a(1, 0) / d;
        r(1, 1) = a(0, 0) / d;
    } else {
        r(0, 0) = (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) / d;
        r(0, 1) = (a(0, 2) * a(2, 1) - a(0, 1) * a(2, 2)) / d;
        r(0, 2) = (a(0, 1) * a(1, 2) - a(0, 2) * a(1, 1)) / d;
        r(1, 0) = (a(1, 2) * a(2, 0) - a(1, 0) * a(2, 2)) / d;
        r(1, 1) = (a(0, 0) * a(2, 2) - a(0, 2) * a(2, 0)) / d;
        r(1, 2) = (a(0, 2) * a(1, 0) - a(0, 0) * a(1, 2)) / d;
        r(2, 0) = (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)) / d;
        r(2, 1) = (a(0, 1) * a(2, 0) - a(0, 0) * a(2, 1)) / d;
        r(2, 2) = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)) / d;
    }
    return r;
}

template <int D>
inline Vec<D> solve(const Mat<D>& a, const Vec<D>& b) {
    return inverse(a) * b;
}

// Eigenvalues of a symmetric matrix, ascending. Closed form for d <= 3.
template <int D>
inline std::array<double, D> sym_eigenvalues(const Mat<D>& s) {
    std::array<double, D> ev{};
    if constexpr (D == 1) {
        ev[0] = s(0, 0);
    } else if constexpr (D == 2) {
        double tr = s(0, 0) + s(1, 1);
        double dd = det(s);
        double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - dd));
        ev[0] = tr / 2.0 - disc;
        ev[1] = tr / 2.0 + disc;
    } else {
        // Trigonometric solution of the characteristic cubic.
        double p1 = s(0, 1) * s(0, 1) + s(0, 2) * s(0, 2) + s(1, 2) * s(1, 2);
        double q = (s(0, 0) + s(1, 1) + s(2, 2)) / 3.0;
        double p2 = (s(0, 0) - q) * (s(0, 0) - q) + (s(1, 1) - q) * (s(1, 1) - q) +
                    (s(2, 2) - q) * (s(2, 2) - q) + 2.0 * p1;
        double p = std::sqrt(std::max(0.0, p2 / 6.0));
        if (p == 0.0) {
            ev = {q, q, q};
            return ev;
        }
        Mat<3> b;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) b(i, j) = (s(i, j) - (i == j ? q : 0.0)) / p;
        double r = det(b) / 2.0;
        r = std::min(1.0, std::max(-1.0, r));
        double phi = std::acos(r) / 3.0;
        ev[2] = q + 2.0 * p * std::cos(phi);
        ev[0] = q + 2.0 * p * std::cos(phi + 2.0 * M_PI / 3.0);
        ev[1] = 3.0 * q - ev[0] - ev[2];
    }
    return ev;
}

// Smallest/largest singular value of a (d x d) matrix.
template <int D>
inline double smallest_singular_value(const Mat<D>& a) {
    auto ev = sym_eigenvalues<D>(a.transposed() * a);
    return std::sqrt(std::max(0.0, ev[0]));
}

template <int D>
inline double largest_singular_value(const Mat<D>& a) {
    auto ev = sym_eigenvalues<D>(a.transposed() * a);
    return std::sqrt(std::max(0.0, ev[D - 1]));
}

// A set of k <= D column vectors in R^D (frames, partial bases).
template <int D>
struct Basis {
    std::array<Vec<D>, D> col{};
    int n = 0;

    void push(const Vec<D>& v) {
        if (n >= D) throw std::length_error("Basis: full");
        col[size_t(n++)] = v;
    }
    Vec<D>& operator[](int i) { return col[size_t(i)]; }
    const Vec<D>& operator[](int i) const { return col[size_t(i)]; }
};

// Modified Gram-Schmidt in place; returns the diagonal of R (column norms
// after projection). Throws if a column degenerates.
template <int D>
inline std::array<double, D> orthonormalize(Basis<D>& b) {
    std::array<double, D> rdiag{};
    for (int i = 0; i < b.n; ++i) {
        for (int j = 0; j < i; ++j) b[i] -= b[j] * dot(b[j], b[i]);
        double nv = norm(b[i]);
        if (nv < 1e-300) throw std::domain_error("orthonormalize: degenerate frame");
        rdiag[size_t(i)] = nv;
        b[i] = b[i] * (1.0 / nv);
    }
    return rdiag;
}

// Orthogonal complement of an orthonormal partial basis.
template <int D>
inline Basis<D> orthogonal_complement(const Basis<D>& b) {
    Basis<D> full = b;
    // Greedily extend with coordinate axes, then orthonormalize the new part.
    for (int axis = 0; axis < D && full.n < D; ++axis) {
        Vec<D> e{};
        e[axis] = 1.0;
        for (int j = 0; j < full.n; ++j) e -= full[j] * dot(full[j], e);
        if (norm(e) > 1e-8) {
            full.push(normalized(e));
        }
    }
    if (full.n != D) throw std::domain_error("orthogonal_complement: could not extend");
    Basis<D> comp;
    for (int i = b.n; i < D; ++i) comp.push(full[i]);
    return comp;
}

// Frobenius distance between the orthogonal projectors of two orthonormal
// frames; 0 iff they span the same subspace.
template <int D>
inline double subspace_distance(const Basis<D>& a, const Basis<D>& b) {
    Mat<D> pa, pb;
    for (int i = 0; i < a.n; ++i)
        for (int r = 0; r < D; ++r)
            for (int c = 0; c < D; ++c) pa(r, c) += a[i][r] * a[i][c];
    for (int i = 0; i < b.n; ++i)
        for (int r = 0; r < D; ++r)
            for (int c = 0; c < D; ++c) pb(r, c) += b[i][r] * b[i][c];
    double s = 0;
    for (int r = 0; r < D; ++r)
        for (int c = 0; c < D; ++c) {
            double dd = pa(r, c) - pb(r, c);
            s += dd * dd;
        }
    return std::sqrt(s);
}

// Smallest principal angle (radians) between two subspaces given by
// orthonormal frames. Returned as the minimal angle between any unit vectors,
// i.e. small when the subspaces nearly intersect.
template <int D>
inline double min_principal_angle(const Basis<D>& a, const Basis<D>& b) {
    // Largest singular value of A^T B equals cos(min angle).
    double best = 0.0;
    // Power iteration on (A^T B)(A^T B)^T, dimension a.n <= 3: direct scan of
    // the tiny Gram matrix eigenvalues.
    std::array<std::array<double, 3>, 3> g{};
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < b.n; ++j) g[size_t(i)][size_t(j)] = dot(a[i], b[j]);
    // Build M = G G^T (a.n x a.n symmetric), take its largest eigenvalue.
    Mat<3> m;
    for (int i = 0; i < a.n; ++i)
        for (int j = 0; j < a.n; ++j) {
            double s = 0;
            for (int k = 0; k < b.n; ++k) s += g[size_t(i)][size_t(k)] * g[size_t(j)][size_t(k)];
            m(i, j) = s;
        }
    for (int i = a.n; i < 3; ++i) m(i, i) = -1.0;  // pad below the spectrum
    auto ev = sym_eigenvalues<3>(m);
    best = std::sqrt(std::min(1.0, std::max(0.0, ev[2])));
    return std::acos(best);
}

// --- Torus ---

inline double wrap01(double x) {
    double r = x - std::floor(x);
    if (r >= 1.0) r = 0.0;  // guard against floor rounding at the seam
    return r;
}

// Minimal representative of x in [-1/2, 1/2).
inline double wrap_centered(double x) {
    return x - std::floor(x + 0.5);
}

template <int D>
struct TorusPoint {
    std::array<double, D> c{};

    TorusPoint() = default;

    template <class... Ts>
    static TorusPoint at(Ts... xs) {
        static_assert(sizeof...(Ts) == D, "coordinate count must match the dimension");
        TorusPoint p;
        int i = 0;
        ((p.c[size_t(i++)] = wrap01(double(xs))), ...);
        return p;
    }

    static TorusPoint from_vec(const Vec<D>& v) {
        TorusPoint p;
        for (int i = 0; i < D; ++i) p.c[size_t(i)] = wrap01(v[i]);
        return p;
    }

    double operator[](int i) const { return c[size_t(i)]; }
    Vec<D> as_vec() const {
        Vec<D> v;
        for (int i = 0; i < D; ++i) v[i] = c[size_t(i)];
        return v;
    }
    TorusPoint translated(const Vec<D>& d) const {
        TorusPoint p;
        for (int i = 0; i < D; ++i) p.c[size_t(i)] = wrap01(c[size_t(i)] + d[i]);
        return p;
    }
};

// Displacement a - b as the minimal integer-translate representative.
template <int D>
inline Vec<D> tor_displacement(const TorusPoint<D>& a, const TorusPoint<D>& b) {
    Vec<D> d;
    for (int i = 0; i < D; ++i) d[i] = wrap_centered(a[i] - b[i]);
    return d;
}

template <int D>
inline double tor_dist2(const TorusPoint<D>& a, const TorusPoint<D>& b) {
    return norm2(tor_displacement(a, b));
}

template <int D>
inline double tor_dist(const TorusPoint<D>& a, const TorusPoint<D>& b) {
    return std::sqrt(tor_dist2(a, b));
}

}  // namespace torusdyn
