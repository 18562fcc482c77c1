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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "torusdyn/geometry.hpp"
#include "torusdyn/rng.hpp"

using namespace torusdyn;

TEST_CASE("wrap01 maps into [0,1) including negatives and the seam") {
    CHECK(wrap01(0.0) == 0.0);
    CHECK(wrap01(1.0) == 0.0);
    CHECK(wrap01(-0.25) == doctest::Approx(0.75));
    CHECK(wrap01(3.75) == doctest::Approx(0.75));
    CHECK(wrap01(-1e-17) < 1.0);
    CHECK(wrap01(-1e-17) >= 0.0);
}

TEST_CASE("torus distance is the minimum over integer translates") {
    auto a = TorusPoint<1>::at(0.95), b = TorusPoint<1>::at(0.05);
    CHECK(tor_dist(a, b) == doctest::Approx(0.1));
    auto c = TorusPoint<2>::at(0.9, 0.9), d = TorusPoint<2>::at(0.1, 0.1);
    CHECK(tor_dist(c, d) == doctest::Approx(std::sqrt(0.08)));
}

TEST_CASE("torus distance bounded by sqrt(d)/2") {
    CounterRng rng(42);
    for (int i = 0; i < 1000; ++i) {
        auto a = TorusPoint<3>::at(rng.next_double(), rng.next_double(), rng.next_double());
        auto b = TorusPoint<3>::at(rng.next_double(), rng.next_double(), rng.next_double());
        CHECK(tor_dist(a, b) <= std::sqrt(3.0) / 2.0 + 1e-15);
        CHECK(tor_dist(a, b) == doctest::Approx(tor_dist(b, a)));
    }
}

TEST_CASE("matrix inverse and determinant for d = 2, 3") {
    Mat<2> a;
    a(0, 0) = 2;
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 1;
    CHECK(det(a) == doctest::Approx(1.0));
    Mat<2> ai = inverse(a);
    CHECK(ai(0, 0) == doctest::Approx(1.0));
    CHECK(ai(0, 1) == doctest::Approx(-1.0));
    CHECK(ai(1, 0) == doctest::Approx(-1.0));
    CHECK(ai(1, 1) == doctest::Approx(2.0));

    CounterRng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        Mat<3> m;
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) m(r, c) = rng.next_in(-2, 2);
        if (std::abs(det(m)) < 0.1) continue;
        Mat<3> prod = m * inverse(m);
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                CHECK(prod(r, c) == doctest::Approx(r == c ? 1.0 : 0.0).epsilon(1e-9));
    }
}

TEST_CASE("symmetric eigenvalues against known spectra") {
    Mat<2> cat;
    cat(0, 0) = 2;
    cat(0, 1) = 1;
    cat(1, 0) = 1;
    cat(1, 1) = 1;
    auto ev = sym_eigenvalues<2>(cat);
    CHECK(ev[0] == doctest::Approx(0.3819660113));
    CHECK(ev[1] == doctest::Approx(2.6180339887));

    Mat<3> diag;
    diag(0, 0) = 4;
    diag(1, 1) = 1;
    diag(2, 2) = 9;
    auto ev3 = sym_eigenvalues<3>(diag);
    CHECK(ev3[0] == doctest::Approx(1.0));
    CHECK(ev3[1] == doctest::Approx(4.0));
    CHECK(ev3[2] == doctest::Approx(9.0));
}

TEST_CASE("singular values via symmetric eigenvalues") {
    Mat<2> j;
    j(0, 0) = 0.5;
    j(1, 1) = 3.0;
    CHECK(smallest_singular_value(j) == doctest::Approx(0.5));
    CHECK(largest_singular_value(j) == doctest::Approx(3.0));
}

TEST_CASE("orthonormalize produces an orthonormal frame with R diagonal") {
    Basis<3> b;
    b.push(Vec<3>{{2, 0, 0}});
    b.push(Vec<3>{{1, 1, 0}});
    auto r = orthonormalize(b);
    CHECK(r[0] == doctest::Approx(2.0));
    CHECK(r[1] == doctest::Approx(1.0));
    CHECK(dot(b[0], b[1]) == doctest::Approx(0.0));
    CHECK(norm(b[0]) == doctest::Approx(1.0));
    CHECK(norm(b[1]) == doctest::Approx(1.0));
}

TEST_CASE("subspace distance and principal angle") {
    Basis<3> a, b;
    a.push(Vec<3>{{1, 0, 0}});
    b.push(Vec<3>{{0, 1, 0}});
    CHECK(subspace_distance(a, b) == doctest::Approx(std::sqrt(2.0)));
    CHECK(min_principal_angle(a, b) == doctest::Approx(M_PI / 2));
    Basis<3> c;
    c.push(Vec<3>{{1, 0, 0}});
    CHECK(subspace_distance(a, c) == doctest::Approx(0.0));
    CHECK(min_principal_angle(a, c) == doctest::Approx(0.0));
}

TEST_CASE("orthogonal complement spans the rest") {
    Basis<3> b;
    b.push(normalized(Vec<3>{{1, 1, 0}}));
    auto comp = orthogonal_complement(b);
    CHECK(comp.n == 2);
    CHECK(dot(comp[0], b[0]) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dot(comp[1], b[0]) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(dot(comp[0], comp[1]) == doctest::Approx(0.0).epsilon(1e-12));
}
