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

#pragma once

#include <cmath>

namespace torusdyn {

// Smooth (C-infinity) cutoff: beta(s) = 1 for s <= 1/2, 0 for s >= 1,
// strictly decreasing in between. Built from h(t) = exp(-1/t).
inline double bump_profile(double s) {
    if (s <= 0.5) return 1.0;
    if (s >= 1.0) return 0.0;
    double a = std::exp(-1.0 / (1.0 - s));
    double b = std::exp(-1.0 / (s - 0.5));
    return a / (a + b);
}

// Derivative of bump_profile; identically zero outside (1/2, 1).
inline double bump_profile_deriv(double s) {
    if (s <= 0.5 || s >= 1.0) return 0.0;
    double u = 1.0 - s, w = s - 0.5;
    double a = std::exp(-1.0 / u);
    double b = std::exp(-1.0 / w);
    double da = -a / (u * u);  // d/ds exp(-1/(1-s))
    double db = b / (w * w);   // d/ds exp(-1/(s-1/2))
    double denom = a + b;
    return (da * denom - a * (da + db)) / (denom * denom);
}

}  // namespace torusdyn
