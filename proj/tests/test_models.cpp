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

#include <algorithm>
#include <cmath>

#include "torusdyn/models.hpp"
#include "torusdyn/rng.hpp"

using namespace torusdyn;

namespace {
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;  // 0.618034

MapModel<3> default_pitchfork(double rho = 0.7, double t = 1.0) {
    BumpSpec b;
    b.center = {0, 0, 0};
    b.radius = 0.1;
    b.rho = rho;
    b.t = t;
    return MapModel<3>::pitchfork(anosov3_matrix(2), b);
}

MapModel<3> default_hopf(double rho = 0.85, double t = 1.0) {
    BumpSpec b;
    b.center = {0, 0, 0};
    b.radius = 0.2;
    b.rho = rho;
    b.t = t;
    b.plane_radius = 0.06;
    return MapModel<3>::hopf(hopf3_matrix(), b);
}
}  // namespace

TEST_CASE("linear map fixes the origin with its matrix as derivative") {
    auto m = MapModel<2>::linear(cat_matrix());
    auto jet = m.eval(TorusPoint<2>{});
    CHECK(tor_dist(jet.value, TorusPoint<2>{}) == 0.0);
    CHECK(jet.derivative(0, 0) == 2);
    CHECK(jet.derivative(0, 1) == 1);
    CHECK(jet.derivative(1, 0) == 1);
    CHECK(jet.derivative(1, 1) == 1);
    CHECK(m.degree() == 1);
}

TEST_CASE("3d linear evaluation wraps correctly") {
    auto m = MapModel<3>::linear(anosov3_matrix(2));
    auto jet = m.eval(TorusPoint<3>::at(0.25, 0.5, 0.5));
    CHECK(jet.value[0] == doctest::Approx(0.0));
    CHECK(jet.value[1] == doctest::Approx(0.75));
    CHECK(jet.value[2] == doctest::Approx(0.0));
    CHECK(m.degree() == 2);
    CHECK(m.unstable_dim() == 2);
    CHECK(m.stable_dim() == 1);
}

TEST_CASE("pitchfork derivative at p has the bifurcated spectrum") {
    // rho = 0.6 sits inside the admissible interval (0.381966, 1) and moves
    // the weak eigenvalue 2 -> 0.6 at t = 1
    auto m = default_pitchfork(0.6, 1.0);
    Mat<3> j = m.derivative(m.bump_center());
    // block structure: xy-plane keeps the cat-map block, z-axis gets rho
    CHECK(j(2, 2) == doctest::Approx(0.6));
    CHECK(j(0, 0) == doctest::Approx(2.0));
    CHECK(j(2, 0) == doctest::Approx(0.0));
    double lam1 = 1.0 - kGolden;  // 0.381966
    CHECK(std::abs(lam1 / 0.6) == doctest::Approx(0.636610).epsilon(1e-5));
    CHECK(std::abs(2.618034 * 0.6) == doctest::Approx(1.570820).epsilon(1e-5));
}

TEST_CASE("pitchfork admissible rho interval for n = 2") {
    auto iv = MapModel<3>::pitchfork_rho_interval(anosov3_matrix(2));
    CHECK(iv.first == doctest::Approx(0.38196601).epsilon(1e-7));
    CHECK(iv.second == doctest::Approx(1.0));
    CHECK_THROWS(default_pitchfork(0.3, 1.0));
}

TEST_CASE("pitchfork reduces to the linear map at t = 0 and off support") {
    auto m = default_pitchfork(0.7, 0.0);
    auto lin = MapModel<3>::linear(anosov3_matrix(2));
    CounterRng rng(3);
    for (int i = 0; i < 200; ++i) {
        auto x = TorusPoint<3>::at(rng.next_double(), rng.next_double(), rng.next_double());
        CHECK(tor_dist(m.apply(x), lin.apply(x)) < 1e-15);
    }
    auto mt = default_pitchfork(0.7, 1.0);
    auto far = TorusPoint<3>::at(0.5, 0.5, 0.5);
    CHECK(tor_dist(mt.apply(far), lin.apply(far)) < 1e-15);
    CHECK(mt.constant_derivative_at(far));
    CHECK(!mt.constant_derivative_at(TorusPoint<3>::at(0.01, 0.0, 0.02)));
}

TEST_CASE("pitchfork has two repelling fixed points on the weak axis") {
    auto m = default_pitchfork(0.7, 1.0);
    // multiplier m(z) = 2 + (0.7-2) beta(|z|/0.1) crosses 1 inside (0.05, 0.1)
    int sign_changes = 0;
    double prev = 0.7 - 1.0;
    for (int i = 1; i <= 100; ++i) {
        double z = 0.1 * i / 100.0;
        auto x = TorusPoint<3>::at(0.0, 0.0, z);
        auto y = m.apply(x);
        double g = wrap_centered(y[2]) - z;  // (multiplier - 1) * z
        if (g * prev < 0) ++sign_changes;
        prev = g;
    }
    CHECK(sign_changes == 1);
}

TEST_CASE("derivative matches finite differences inside the bump") {
    auto m = default_pitchfork(0.7, 1.0);
    auto h = default_hopf(0.85, 1.0);
    CounterRng rng(17);
    auto check_fd = [&](auto& model, const TorusPoint<3>& x) {
        Mat<3> j = model.derivative(x);
        const double eps = 1e-7;
        for (int cax = 0; cax < 3; ++cax) {
            Vec<3> dv{};
            dv[cax] = eps;
            auto plus = model.apply(x.translated(dv));
            dv[cax] = -eps;
            auto minus = model.apply(x.translated(dv));
            Vec<3> fd = tor_displacement(plus, minus) * (1.0 / (2 * eps));
            for (int r = 0; r < 3; ++r) CHECK(j(r, cax) == doctest::Approx(fd[r]).epsilon(5e-5));
        }
    };
    for (int i = 0; i < 40; ++i) {
        double r = 0.099 * rng.next_double();
        double th = 2 * M_PI * rng.next_double(), ph = M_PI * rng.next_double();
        auto x = TorusPoint<3>::at(r * std::sin(ph) * std::cos(th),
                                   r * std::sin(ph) * std::sin(th), r * std::cos(ph));
        check_fd(m, x);
    }
    for (int i = 0; i < 40; ++i) {
        double r = 0.199 * rng.next_double();
        double th = 2 * M_PI * rng.next_double(), ph = M_PI * rng.next_double();
        auto x = TorusPoint<3>::at(r * std::sin(ph) * std::cos(th),
                                   r * std::sin(ph) * std::sin(th), r * std::cos(ph));
        check_fd(h, x);
    }
}

TEST_CASE("hopf at t=1 contracts at p; far orbits stay linear") {
    auto m = default_hopf(0.85, 1.0);
    auto x = TorusPoint<3>::at(0.004, 0.003, 0.002);
    for (int i = 0; i < 400; ++i) x = m.apply(x);
    CHECK(tor_dist(x, m.bump_center()) < 1e-6);
}

TEST_CASE("preimage lattice enumeration on worked examples") {
    Mat<2> a;
    a(0, 0) = 3;
    a(0, 1) = 1;
    a(1, 0) = 1;
    a(1, 1) = 1;
    auto m = MapModel<2>::linear(a);
    CHECK(m.degree() == 2);
    auto pre = m.preimages(TorusPoint<2>{});
    REQUIRE(pre.size() == 2);
    CHECK(tor_dist(pre[0], TorusPoint<2>{}) < 1e-12);
    CHECK(tor_dist(pre[1], TorusPoint<2>::at(0.5, 0.5)) < 1e-12);

    auto cat = MapModel<2>::linear(cat_matrix());
    auto pre1 = cat.preimages(TorusPoint<2>::at(0.3, 0.7));
    REQUIRE(pre1.size() == 1);
    CHECK(pre1[0][0] == doctest::Approx(0.6));
    CHECK(pre1[0][1] == doctest::Approx(0.1));

    auto dbl = MapModel<1>::linear(doubling_matrix());
    auto pred = dbl.preimages(TorusPoint<1>::at(0.5));
    REQUIRE(pred.size() == 2);
    CHECK(pred[0][0] == doctest::Approx(0.25));
    CHECK(pred[1][0] == doctest::Approx(0.75));
    CHECK(dbl.inverse_branch(TorusPoint<1>::at(0.5), 1)[0] == doctest::Approx(0.25));
    CHECK(dbl.inverse_branch(TorusPoint<1>::at(0.5), 2)[0] == doctest::Approx(0.75));
    CHECK_THROWS_AS(dbl.inverse_branch(TorusPoint<1>::at(0.5), 3), BranchOutOfRange);
    CHECK_THROWS_AS(dbl.inverse_branch(TorusPoint<1>::at(0.5), 0), BranchOutOfRange);
}

TEST_CASE("inverse branch round-trip and disjointness properties") {
    auto m3 = default_pitchfork(0.7, 1.0);
    CounterRng rng(5);
    double min_sep = m3.min_branch_separation();
    CHECK(min_sep > 0);
    for (int i = 0; i < 300; ++i) {
        auto y = TorusPoint<3>::at(rng.next_double(), rng.next_double(), rng.next_double());
        auto pre = m3.preimages(y);
        REQUIRE(int(pre.size()) == m3.degree());
        for (size_t b = 0; b < pre.size(); ++b) {
            CHECK(tor_dist(m3.apply(pre[b]), y) < 1e-10);
            for (size_t c = b + 1; c < pre.size(); ++c)
                CHECK(tor_dist(pre[b], pre[c]) >= min_sep - 1e-9);
        }
    }
}

TEST_CASE("perturbed inverse branch equals linear branch off the bump support") {
    auto m = default_pitchfork(0.7, 1.0);
    auto lin = MapModel<3>::linear(anosov3_matrix(2));
    auto y = TorusPoint<3>::at(0.52, 0.48, 0.5);
    auto pm = m.preimages(y);
    auto pl = lin.preimages(y);
    REQUIRE(pm.size() == pl.size());
    for (size_t i = 0; i < pm.size(); ++i) {
        if (tor_dist(pl[i], m.bump_center()) > m.bump().radius + 0.05)
            CHECK(tor_dist(pm[i], pl[i]) < 1e-12);
    }
}

TEST_CASE("degree conservation over a sample grid") {
    auto m = default_pitchfork(0.7, 1.0);
    const int g = 10;
    for (int i = 0; i < g; ++i)
        for (int jj = 0; jj < g; ++jj)
            for (int kk = 0; kk < g; ++kk) {
                auto y = TorusPoint<3>::at((i + 0.5) / g, (jj + 0.5) / g, (kk + 0.5) / g);
                CHECK(int(m.preimages(y).size()) == m.degree());
            }
    auto cat = MapModel<2>::linear(cat_matrix());
    const int g2 = 100;
    for (int i = 0; i < g2; ++i)
        for (int jj = 0; jj < g2; ++jj) {
            auto y = TorusPoint<2>::at((i + 0.5) / g2, (jj + 0.5) / g2);
            CHECK(cat.preimages(y).size() == 1);
        }
}

TEST_CASE("model rejects non-hyperbolic or singular matrices") {
    Mat<2> id = Mat<2>::identity();
    CHECK_THROWS(MapModel<2>::linear(id));
    Mat<2> sing;
    sing(0, 0) = 1;
    sing(0, 1) = 1;
    sing(1, 0) = 1;
    sing(1, 1) = 1;
    CHECK_THROWS(MapModel<2>::linear(sing));
}

TEST_CASE("hopf spectral data") {
    auto m = default_hopf(0.85, 1.0);
    CHECK(m.degree() == 1);
    CHECK(m.unstable_dim() == 2);
    CHECK(m.stable_dim() == 1);
    CHECK(m.weak_unstable_modulus() == doctest::Approx(1.3247179572).epsilon(1e-8));
    CHECK(m.stable_modulus() == doctest::Approx(0.5698402910).epsilon(1e-8));
}
