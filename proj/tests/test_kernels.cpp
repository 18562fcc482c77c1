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

// Scalar/SIMD equivalence on every kernel in the dispatch table. Tolerances
// allow only for FMA contraction differences.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "torusdyn/kernels/kernels.hpp"
#include "torusdyn/rng.hpp"

using namespace torusdyn;
namespace k = torusdyn::kernels;

namespace {
struct Batch {
    std::vector<double> x0, x1, x2;
    size_t n;
    explicit Batch(size_t n, uint64_t seed) : n(n) {
        CounterRng rng(seed);
        x0.resize(n);
        x1.resize(n);
        x2.resize(n);
        for (size_t i = 0; i < n; ++i) {
            x0[i] = rng.next_double();
            x1[i] = rng.next_double();
            x2[i] = rng.next_double();
        }
    }
};
}  // namespace

TEST_CASE("dispatch table selects and reports") {
    k::select_isa(k::Isa::Scalar);
    CHECK(std::string(k::active_name()) == "scalar");
    if (k::avx2_supported()) {
        k::select_isa(k::Isa::Avx2);
        CHECK(std::string(k::active_name()) == "avx2");
    }
    k::select_isa(k::Isa::Auto);
}

TEST_CASE("step kernels agree between scalar and simd") {
    if (!k::avx2_supported()) return;
    const double a2[4] = {2, 1, 1, 1};
    const double a3[9] = {2, 1, 0, 1, 1, 0, 0, 0, 2};
    Batch ref(1003, 5), simd(1003, 5);
    k::scalar_ops().step2(a2, ref.x0.data(), ref.x1.data(), ref.n);
    k::select_isa(k::Isa::Avx2);
    k::ops().step2(a2, simd.x0.data(), simd.x1.data(), simd.n);
    for (size_t i = 0; i < ref.n; ++i) {
        CHECK(std::abs(ref.x0[i] - simd.x0[i]) < 1e-12);
        CHECK(std::abs(ref.x1[i] - simd.x1[i]) < 1e-12);
    }
    Batch r3(1003, 6), s3(1003, 6);
    k::scalar_ops().step3(a3, r3.x0.data(), r3.x1.data(), r3.x2.data(), r3.n);
    k::ops().step3(a3, s3.x0.data(), s3.x1.data(), s3.x2.data(), s3.n);
    for (size_t i = 0; i < r3.n; ++i) {
        CHECK(std::abs(r3.x0[i] - s3.x0[i]) < 1e-12);
        CHECK(std::abs(r3.x2[i] - s3.x2[i]) < 1e-12);
    }
    k::select_isa(k::Isa::Auto);
}

TEST_CASE("bin kernels agree exactly") {
    if (!k::avx2_supported()) return;
    Batch b(2011, 9);
    std::vector<uint32_t> i1(b.n), i2(b.n);
    k::scalar_ops().bin2(b.x0.data(), b.x1.data(), 128, 128, i1.data(), b.n);
    k::select_isa(k::Isa::Avx2);
    k::ops().bin2(b.x0.data(), b.x1.data(), 128, 128, i2.data(), b.n);
    CHECK(i1 == i2);
    k::scalar_ops().bin3(b.x0.data(), b.x1.data(), b.x2.data(), 48, 48, 48, i1.data(), b.n);
    k::ops().bin3(b.x0.data(), b.x1.data(), b.x2.data(), 48, 48, 48, i2.data(), b.n);
    CHECK(i1 == i2);
    k::select_isa(k::Isa::Auto);
}

TEST_CASE("ball masks agree exactly") {
    if (!k::avx2_supported()) return;
    Batch b(997, 13);
    std::vector<uint8_t> m1(b.n), m2(b.n);
    k::scalar_ops().ball_mask2(b.x0.data(), b.x1.data(), 0.0, 0.0, 0.01, m1.data(), b.n);
    k::select_isa(k::Isa::Avx2);
    k::ops().ball_mask2(b.x0.data(), b.x1.data(), 0.0, 0.0, 0.01, m2.data(), b.n);
    CHECK(m1 == m2);
    k::scalar_ops().ball_mask3(b.x0.data(), b.x1.data(), b.x2.data(), 0.1, 0.2, 0.3, 0.04,
                               m1.data(), b.n);
    k::ops().ball_mask3(b.x0.data(), b.x1.data(), b.x2.data(), 0.1, 0.2, 0.3, 0.04, m2.data(),
                        b.n);
    CHECK(m1 == m2);
    k::select_isa(k::Isa::Auto);
}

TEST_CASE("min ratio kernels agree to fma tolerance") {
    if (!k::avx2_supported()) return;
    CounterRng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        double a2[4], a3[9];
        for (double& v : a2) v = rng.next_in(-2, 2);
        for (double& v : a3) v = rng.next_in(-2, 2);
        Batch b(4096, 100 + uint64_t(trial));
        double s = k::scalar_ops().min_ratio2(a2, b.x0.data(), b.x1.data(), b.n);
        k::select_isa(k::Isa::Avx2);
        double v = k::ops().min_ratio2(a2, b.x0.data(), b.x1.data(), b.n);
        CHECK(v == doctest::Approx(s).epsilon(1e-12));
        s = k::scalar_ops().min_ratio3(a3, b.x0.data(), b.x1.data(), b.x2.data(), b.n);
        v = k::ops().min_ratio3(a3, b.x0.data(), b.x1.data(), b.x2.data(), b.n);
        CHECK(v == doctest::Approx(s).epsilon(1e-12));
        k::select_isa(k::Isa::Auto);
    }
}

TEST_CASE("mode accumulation kernels agree to fma tolerance") {
    if (!k::avx2_supported()) return;
    const int kmax = 3;
    const int nm = 2 * kmax + 1;
    Batch b(513, 21);
    std::vector<double> r1(size_t(nm) * nm, 0.0), i1(size_t(nm) * nm, 0.0);
    std::vector<double> r2(size_t(nm) * nm, 0.0), i2(size_t(nm) * nm, 0.0);
    k::scalar_ops().modes2(b.x0.data(), b.x1.data(), b.n, 0.5, kmax, r1.data(), i1.data());
    k::select_isa(k::Isa::Avx2);
    k::ops().modes2(b.x0.data(), b.x1.data(), b.n, 0.5, kmax, r2.data(), i2.data());
    for (size_t q = 0; q < r1.size(); ++q) {
        CHECK(r1[q] == doctest::Approx(r2[q]).epsilon(1e-10));
        CHECK(i1[q] == doctest::Approx(i2[q]).epsilon(1e-10));
    }
    std::vector<double> r3(size_t(nm) * nm * nm, 0.0), i3(size_t(nm) * nm * nm, 0.0);
    std::vector<double> r4(size_t(nm) * nm * nm, 0.0), i4(size_t(nm) * nm * nm, 0.0);
    k::scalar_ops().modes3(b.x0.data(), b.x1.data(), b.x2.data(), b.n, 1.0, kmax, r3.data(),
                           i3.data());
    k::ops().modes3(b.x0.data(), b.x1.data(), b.x2.data(), b.n, 1.0, kmax, r4.data(), i4.data());
    for (size_t q = 0; q < r3.size(); ++q) {
        CHECK(r3[q] == doctest::Approx(r4[q]).epsilon(1e-10));
        CHECK(i3[q] == doctest::Approx(i4[q]).epsilon(1e-10));
    }
    k::select_isa(k::Isa::Auto);
}

TEST_CASE("mode accumulation matches a direct complex-exponential sum") {
    const int kmax = 2;
    const int nm = 2 * kmax + 1;
    Batch b(101, 31);
    std::vector<double> re(size_t(nm) * nm, 0.0), im(size_t(nm) * nm, 0.0);
    k::scalar_ops().modes2(b.x0.data(), b.x1.data(), b.n, 1.0, kmax, re.data(), im.data());
    for (int k1 = -kmax; k1 <= kmax; ++k1)
        for (int k2 = -kmax; k2 <= kmax; ++k2) {
            double sr = 0, si = 0;
            for (size_t i = 0; i < b.n; ++i) {
                double ang = -2.0 * M_PI * (k1 * b.x0[i] + k2 * b.x1[i]);
                sr += std::cos(ang);
                si += std::sin(ang);
            }
            size_t idx = size_t(k1 + kmax) * size_t(nm) + size_t(k2 + kmax);
            CHECK(re[idx] == doctest::Approx(sr).epsilon(1e-9));
            CHECK(im[idx] == doctest::Approx(si).epsilon(1e-9));
        }
}
