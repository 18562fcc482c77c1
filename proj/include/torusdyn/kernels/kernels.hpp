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

// Data-parallel inner loops shared by the measure-construction and
// certification pipelines, with scalar reference implementations and AVX2
// variants selected at runtime. Positions are structure-of-arrays; all
// kernels are single-step batch operations so scalar/SIMD equivalence is
// testable pointwise.

#pragma once

#include <cstddef>
#include <cstdint>

namespace torusdyn::kernels {

struct Ops {
    const char* name;

    // x := wrap01(A x), batched; A row-major.
    void (*step2)(const double a[4], double* x0, double* x1, size_t n);
    void (*step3)(const double a[9], double* x0, double* x1, double* x2, size_t n);

    // flat bin index idx = (int(x0*r0))*r1 + int(x1*r1), clamped to the grid.
    void (*bin2)(const double* x0, const double* x1, int r0, int r1, uint32_t* idx, size_t n);
    void (*bin3)(const double* x0, const double* x1, const double* x2, int r0, int r1, int r2,
                 uint32_t* idx, size_t n);

    // mask[i] = 1 when the torus displacement from p has squared norm < rr.
    void (*ball_mask2)(const double* x0, const double* x1, double p0, double p1, double rr,
                       uint8_t* mask, size_t n);
    void (*ball_mask3)(const double* x0, const double* x1, const double* x2, double p0,
                       double p1, double p2, double rr, uint8_t* mask, size_t n);

    // min over i of |A v_i|^2 / |v_i|^2 over a batch of directions.
    double (*min_ratio2)(const double a[4], const double* v0, const double* v1, size_t n);
    double (*min_ratio3)(const double a[9], const double* v0, const double* v1,
                         const double* v2, size_t n);

    // acc(k) += w * e^{-2 pi i k.x} for every |k|_inf <= kmax (full cube,
    // row-major over k+kmax), accumulated over the point batch.
    void (*modes2)(const double* x0, const double* x1, size_t n, double w, int kmax,
                   double* acc_re, double* acc_im);
    void (*modes3)(const double* x0, const double* x1, const double* x2, size_t n, double w,
                   int kmax, double* acc_re, double* acc_im);
};

enum class Isa { Auto, Scalar, Avx2 };

const Ops& scalar_ops();
bool avx2_supported();

// Active table; resolved once from TORUSDYN_KERNEL or CPU detection, and
// overridable (tests, --kernel flag).
const Ops& ops();
void select_isa(Isa isa);
const char* active_name();

}  // namespace torusdyn::kernels
