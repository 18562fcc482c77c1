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

// Counter-based random numbers: output i of stream s is a pure function of
// (seed, s, i), so parallel tasks draw from disjoint substreams and results
// do not depend on scheduling or worker count.

#pragma once

#include <cstdint>

namespace torusdyn {

namespace detail {
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}
}  // namespace detail

class CounterRng {
  public:
    CounterRng() : key_(0) {}
    explicit CounterRng(uint64_t seed, uint64_t stream = 0)
        : key_(detail::mix64(detail::mix64(seed) ^ (0xda3e39cb94b95bdbULL * (stream + 1)))) {}

    CounterRng substream(uint64_t stream) const {
        CounterRng r;
        r.key_ = detail::mix64(key_ ^ (0xd1b54a32d192ed03ULL * (stream + 1)));
        return r;
    }

    uint64_t next_u64() { return detail::mix64(key_ + 0x9e3779b97f4a7c15ULL * (++ctr_)); }

    // Uniform in [0,1).
    double next_double() { return double(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0,n).
    uint64_t next_below(uint64_t n) { return next_u64() % n; }

    double next_in(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  private:
    uint64_t key_ = 0;
    uint64_t ctr_ = 0;
};

}  // namespace torusdyn
