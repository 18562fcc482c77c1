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
#include <set>

#include "torusdyn/rng.hpp"

using namespace torusdyn;

TEST_CASE("same seed reproduces the stream") {
    CounterRng a(123), b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("substreams are independent of draw order") {
    CounterRng root(9);
    CounterRng s0 = root.substream(0);
    CounterRng s1 = root.substream(1);
    double a0 = s0.next_double();
    CounterRng root2(9);
    CounterRng t1 = root2.substream(1);
    CounterRng t0 = root2.substream(0);
    CHECK(t0.next_double() == a0);
    CHECK(t1.next_double() == s1.next_double());
}

TEST_CASE("doubles lie in [0,1) and look uniform") {
    CounterRng rng(2026);
    double sum = 0, sum2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double x = rng.next_double();
        CHECK(x >= 0.0);
        CHECK(x < 1.0);
        sum += x;
        sum2 += x * x;
    }
    double mean = sum / n;
    double var = sum2 / n - mean * mean;
    CHECK(std::abs(mean - 0.5) < 0.005);
    CHECK(std::abs(var - 1.0 / 12.0) < 0.005);
}

TEST_CASE("different seeds differ") {
    CounterRng a(1), b(2);
    std::set<uint64_t> seen;
    for (int i = 0; i < 32; ++i) {
        seen.insert(a.next_u64());
        seen.insert(b.next_u64());
    }
    CHECK(seen.size() == 64);
}
