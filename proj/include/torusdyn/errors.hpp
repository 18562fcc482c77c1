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

#include <stdexcept>
#include <string>

namespace torusdyn {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NewtonDivergence : Error {
    using Error::Error;
};
struct BranchOutOfRange : Error {
    using Error::Error;
};
struct SingularMatrix : Error {
    using Error::Error;
};
struct NonpositiveC : Error {
    using Error::Error;
};
struct DepthTooSmall : Error {
    using Error::Error;
};
struct DiskTooSmall : Error {
    using Error::Error;
};
struct StableBundleFailure : Error {
    using Error::Error;
};
struct TruncationMismatch : Error {
    using Error::Error;
};
struct InvalidCertificate : Error {
    using Error::Error;
};

}  // namespace torusdyn
