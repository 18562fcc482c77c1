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

#include "torusdyn/kernels/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace torusdyn::kernels {

const Ops* avx2_ops_table();  // defined in avx2.cpp; nullptr off x86

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return avx2_ops_table() != nullptr && __builtin_cpu_supports("avx2") &&
           __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

namespace {

const Ops* resolve(Isa isa) {
    switch (isa) {
        case Isa::Scalar:
            return &scalar_ops();
        case Isa::Avx2:
            if (!avx2_supported()) throw std::runtime_error("avx2 kernels not supported here");
            return avx2_ops_table();
        case Isa::Auto:
        default:
            return avx2_supported() ? avx2_ops_table() : &scalar_ops();
    }
}

const Ops*& active_slot() {
    static const Ops* active = [] {
        const char* env = std::getenv("TORUSDYN_KERNEL");
        if (env != nullptr) {
            if (std::strcmp(env, "scalar") == 0) return resolve(Isa::Scalar);
            if (std::strcmp(env, "avx2") == 0) return resolve(Isa::Avx2);
        }
        return resolve(Isa::Auto);
    }();
    return active;
}

}  // namespace

const Ops& ops() { return *active_slot(); }

void select_isa(Isa isa) { active_slot() = resolve(isa); }

const char* active_name() { return ops().name; }

}  // namespace torusdyn::kernels
