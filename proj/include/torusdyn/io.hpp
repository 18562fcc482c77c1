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

// Deterministic file output: shortest round-trip float formatting, CSV and
// JSON writers, and the run manifest. All data outputs are byte-stable for a
// fixed (config, seed); the manifest additionally records wall time.

#pragma once

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "torusdyn/errors.hpp"
#include "torusdyn/measure.hpp"

namespace torusdyn {

inline std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

inline uint64_t fnv1a64(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open for writing: " + path.string());
    out << text;
}

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header) {
        for (size_t i = 0; i < header.size(); ++i) {
            if (i) body_ += ',';
            body_ += header[i];
        }
        body_ += '\n';
    }
    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i) {
            if (i) body_ += ',';
            body_ += cells[i];
        }
        body_ += '\n';
    }
    const std::string& text() const { return body_; }
    void save(const std::filesystem::path& path) const { write_text_file(path, body_); }

  private:
    std::string body_;
};

// CSV of bin centers and weights (zero bins skipped).
template <int D>
inline std::string measure_bins_csv(const EmpiricalMeasure<D>& m) {
    std::vector<std::string> header;
    for (int i = 0; i < D; ++i) header.push_back("x" + std::to_string(i));
    header.push_back("weight");
    CsvWriter csv(header);
    std::array<int, D> idx{};
    size_t flat = 0;
    while (true) {
        if (m.bins[flat] != 0.0) {
            std::vector<std::string> cells;
            for (int i = 0; i < D; ++i)
                cells.push_back(format_double((idx[size_t(i)] + 0.5) / m.res[size_t(i)]));
            cells.push_back(format_double(m.bins[flat]));
            csv.row(cells);
        }
        ++flat;
        int axis = D - 1;
        while (axis >= 0) {
            if (++idx[size_t(axis)] < m.res[size_t(axis)]) break;
            idx[size_t(axis)] = 0;
            --axis;
        }
        if (axis < 0) break;
    }
    return csv.text();
}

// JSON of the truncated Fourier coefficients (flat row-major cube).
template <int D>
inline nlohmann::json measure_fourier_json(const EmpiricalMeasure<D>& m) {
    nlohmann::json j;
    j["dimension"] = D;
    j["truncation"] = m.K;
    std::vector<int> res(m.res.begin(), m.res.end());
    j["grid"] = res;
    j["mass"] = m.mass();
    std::vector<double> re, im;
    re.reserve(m.fourier.size());
    im.reserve(m.fourier.size());
    for (auto& c : m.fourier) {
        re.push_back(c.real());
        im.push_back(c.imag());
    }
    j["fourier_re"] = re;
    j["fourier_im"] = im;
    return j;
}

struct RunManifest {
    std::string config_hash;
    uint64_t seed = 0;
    std::string tool_version;
    double wall_seconds = 0.0;
    std::vector<std::string> outputs;

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["config_hash"] = config_hash;
        j["seed"] = seed;
        j["tool_version"] = tool_version;
        j["wall_seconds"] = wall_seconds;  // timing only; excluded from byte comparisons
        j["outputs"] = outputs;
        return j;
    }
};

}  // namespace torusdyn
