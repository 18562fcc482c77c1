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

// Experiment configuration: JSON with strict validation. Unknown keys are
// rejected and all validation errors are reported together, with key paths.
// The schema is documented in the repository README.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "torusdyn/models.hpp"

namespace torusdyn {

struct ModelConfig {
    std::string family = "linear";
    int dimension = 2;
    std::vector<std::vector<long>> matrix = {{2, 1}, {1, 1}};
    BumpSpec bump;
};

struct ConesConfig {
    double unstable_width = 0.5;
    double stable_width = 0.5;
};

struct ConstantsConfig {
    double c = 0.0;  // 0 = calibrate from the certificate
    double delta = 0.02;
    std::vector<int> grid;  // histogram resolution per axis; default by dimension
    int fourier_k = 8;
    int cert_grid = 32;
    int depth = 40;
};

struct RunConfig {
    int iters = 2000;
    long samples = 100000;
    double disk_radius = 0.1;
    int starts = 500;
    uint64_t seed = 1;
    int workers = 1;
    std::string out = "out";
    std::string kernel = "auto";
};

struct SweepConfig {
    double t_start = 0.0;
    double t_stop = 1.0;
    double t_step = 0.25;
    int cluster_starts = 0;
};

struct ExperimentConfig {
    ModelConfig model;
    ConesConfig cones;
    ConstantsConfig constants;
    RunConfig run;
    SweepConfig sweep;
    std::string experiment;  // set by the CLI subcommand when absent
    std::string canonical;   // canonical serialization, hashed into manifests

    std::array<int, 1> grid1() const { return {constants.grid[0]}; }
    std::array<int, 2> grid2() const { return {constants.grid[0], constants.grid[1]}; }
    std::array<int, 3> grid3() const {
        return {constants.grid[0], constants.grid[1], constants.grid[2]};
    }
};

struct ConfigResult {
    std::optional<ExperimentConfig> config;
    std::vector<std::string> errors;

    bool ok() const { return errors.empty() && config.has_value(); }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& obj, const std::string& path,
                                const std::vector<std::string>& allowed,
                                std::vector<std::string>& errors) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const auto& k : allowed)
            if (it.key() == k) known = true;
        if (!known) errors.push_back(path + ": unknown key '" + it.key() + "'");
    }
}

inline std::pair<int, int> line_col_of_offset(const std::string& text, size_t byte) {
    int line = 1, col = 1;
    for (size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

}  // namespace detail

inline ConfigResult parse_config(const std::string& text) {
    ConfigResult result;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        auto [line, col] = detail::line_col_of_offset(text, e.byte > 0 ? e.byte - 1 : 0);
        result.errors.push_back("parse error at line " + std::to_string(line) + ", column " +
                                std::to_string(col) + ": " + e.what());
        return result;
    }
    auto& errors = result.errors;
    if (!j.is_object()) {
        errors.push_back("top level: expected an object");
        return result;
    }
    detail::reject_unknown_keys(
        j, "top level", {"model", "cones", "constants", "run", "sweep", "experiment"}, errors);

    ExperimentConfig cfg;

    // --- model ---
    if (j.contains("model")) {
        const auto& m = j["model"];
        if (!m.is_object()) {
            errors.push_back("model: expected an object");
        } else {
            detail::reject_unknown_keys(m, "model", {"family", "dimension", "matrix", "bump"},
                                        errors);
            if (m.contains("family")) {
                cfg.model.family = m["family"].is_string() ? m["family"].get<std::string>() : "";
                if (cfg.model.family != "linear" && cfg.model.family != "pitchfork" &&
                    cfg.model.family != "hopf")
                    errors.push_back("model.family: must be linear, pitchfork or hopf");
            }
            if (m.contains("dimension")) {
                if (!m["dimension"].is_number_integer())
                    errors.push_back("model.dimension: expected integer");
                else
                    cfg.model.dimension = m["dimension"].get<int>();
            }
            if (cfg.model.dimension < 1 || cfg.model.dimension > 3)
                errors.push_back("model.dimension: must be 1, 2 or 3");
            if (m.contains("matrix")) {
                cfg.model.matrix.clear();
                if (!m["matrix"].is_array()) {
                    errors.push_back("model.matrix: expected an array of rows");
                } else {
                    for (const auto& row : m["matrix"]) {
                        std::vector<long> r;
                        if (!row.is_array()) {
                            errors.push_back("model.matrix: rows must be arrays");
                            break;
                        }
                        for (const auto& v : row) {
                            if (!v.is_number_integer()) {
                                errors.push_back("model.matrix: entries must be integers");
                                break;
                            }
                            r.push_back(v.get<long>());
                        }
                        cfg.model.matrix.push_back(std::move(r));
                    }
                }
            }
            if (m.contains("bump")) {
                const auto& b = m["bump"];
                if (!b.is_object()) {
                    errors.push_back("model.bump: expected an object");
                } else {
                    detail::reject_unknown_keys(
                        b, "model.bump", {"center", "radius", "rho", "t", "plane_radius"},
                        errors);
                    if (b.contains("center")) {
                        if (!b["center"].is_array() ||
                            int(b["center"].size()) != cfg.model.dimension) {
                            errors.push_back("model.bump.center: expected " +
                                             std::to_string(cfg.model.dimension) + " numbers");
                        } else {
                            for (size_t i = 0; i < b["center"].size(); ++i)
                                cfg.model.bump.center[i] = b["center"][i].get<double>();
                        }
                    }
                    if (b.contains("radius")) cfg.model.bump.radius = b["radius"].get<double>();
                    if (b.contains("rho")) cfg.model.bump.rho = b["rho"].get<double>();
                    if (b.contains("t")) cfg.model.bump.t = b["t"].get<double>();
                    if (b.contains("plane_radius"))
                        cfg.model.bump.plane_radius = b["plane_radius"].get<double>();
                }
            }
        }
    }

    // dimension/matrix shape
    const int d = cfg.model.dimension;
    if (int(cfg.model.matrix.size()) != d) {
        errors.push_back("model.matrix: expected " + std::to_string(d) + " rows");
    } else {
        for (const auto& r : cfg.model.matrix)
            if (int(r.size()) != d) {
                errors.push_back("model.matrix: expected " + std::to_string(d) + " columns");
                break;
            }
    }

    // --- cones ---
    if (j.contains("cones")) {
        const auto& c = j["cones"];
        if (!c.is_object()) {
            errors.push_back("cones: expected an object");
        } else {
            detail::reject_unknown_keys(c, "cones", {"unstable_width", "stable_width"}, errors);
            if (c.contains("unstable_width"))
                cfg.cones.unstable_width = c["unstable_width"].get<double>();
            if (c.contains("stable_width"))
                cfg.cones.stable_width = c["stable_width"].get<double>();
            if (!(cfg.cones.unstable_width > 0))
                errors.push_back("cones.unstable_width: must be positive");
            if (!(cfg.cones.stable_width > 0))
                errors.push_back("cones.stable_width: must be positive");
        }
    }

    // --- constants ---
    if (j.contains("constants")) {
        const auto& c = j["constants"];
        if (!c.is_object()) {
            errors.push_back("constants: expected an object");
        } else {
            detail::reject_unknown_keys(
                c, "constants", {"c", "delta", "grid", "fourier_k", "cert_grid", "depth"},
                errors);
            if (c.contains("c")) cfg.constants.c = c["c"].get<double>();
            if (c.contains("delta")) cfg.constants.delta = c["delta"].get<double>();
            if (c.contains("grid")) {
                cfg.constants.grid.clear();
                for (const auto& g : c["grid"]) cfg.constants.grid.push_back(g.get<int>());
            }
            if (c.contains("fourier_k")) cfg.constants.fourier_k = c["fourier_k"].get<int>();
            if (c.contains("cert_grid")) cfg.constants.cert_grid = c["cert_grid"].get<int>();
            if (c.contains("depth")) cfg.constants.depth = c["depth"].get<int>();
        }
    }
    if (cfg.constants.grid.empty()) {
        if (d == 1) cfg.constants.grid = {1024};
        if (d == 2) cfg.constants.grid = {128, 128};
        if (d == 3) cfg.constants.grid = {48, 48, 48};
    }
    if (int(cfg.constants.grid.size()) != d)
        errors.push_back("constants.grid: expected " + std::to_string(d) + " entries");
    for (int g : cfg.constants.grid)
        if (g < 8) {
            errors.push_back("constants.grid: resolutions must be >= 8");
            break;
        }
    if (cfg.constants.fourier_k < 1) errors.push_back("constants.fourier_k: must be >= 1");
    if (cfg.constants.cert_grid < 8) errors.push_back("constants.cert_grid: must be >= 8");
    if (cfg.constants.depth < 2) errors.push_back("constants.depth: must be >= 2");

    // --- run ---
    if (j.contains("run")) {
        const auto& r = j["run"];
        if (!r.is_object()) {
            errors.push_back("run: expected an object");
        } else {
            detail::reject_unknown_keys(r, "run",
                                        {"iters", "samples", "disk_radius", "starts", "seed",
                                         "workers", "out", "kernel"},
                                        errors);
            if (r.contains("iters")) cfg.run.iters = r["iters"].get<int>();
            if (r.contains("samples")) cfg.run.samples = r["samples"].get<long>();
            if (r.contains("disk_radius")) cfg.run.disk_radius = r["disk_radius"].get<double>();
            if (r.contains("starts")) cfg.run.starts = r["starts"].get<int>();
            if (r.contains("seed")) cfg.run.seed = r["seed"].get<uint64_t>();
            if (r.contains("workers")) cfg.run.workers = r["workers"].get<int>();
            if (r.contains("out")) cfg.run.out = r["out"].get<std::string>();
            if (r.contains("kernel")) cfg.run.kernel = r["kernel"].get<std::string>();
        }
    }
    if (cfg.run.iters < 1) errors.push_back("run.iters: must be >= 1");
    if (cfg.run.samples < 1) errors.push_back("run.samples: must be >= 1");
    if (cfg.run.starts < 0) errors.push_back("run.starts: must be >= 0");
    if (cfg.run.kernel != "auto" && cfg.run.kernel != "scalar" && cfg.run.kernel != "avx2")
        errors.push_back("run.kernel: must be auto, scalar or avx2");

    // --- sweep ---
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        if (!s.is_object()) {
            errors.push_back("sweep: expected an object");
        } else {
            detail::reject_unknown_keys(
                s, "sweep", {"t_start", "t_stop", "t_step", "cluster_starts"}, errors);
            if (s.contains("t_start")) cfg.sweep.t_start = s["t_start"].get<double>();
            if (s.contains("t_stop")) cfg.sweep.t_stop = s["t_stop"].get<double>();
            if (s.contains("t_step")) cfg.sweep.t_step = s["t_step"].get<double>();
            if (s.contains("cluster_starts"))
                cfg.sweep.cluster_starts = s["cluster_starts"].get<int>();
        }
        if (!(cfg.sweep.t_step > 0)) errors.push_back("sweep.t_step: must be positive");
    }

    if (j.contains("experiment")) {
        cfg.experiment = j["experiment"].get<std::string>();
        static const std::vector<std::string> kinds = {"check",   "srb",     "hyptimes",
                                                       "lyapunov", "entropy", "sweep",
                                                       "unstable", "preimages"};
        bool known = false;
        for (const auto& k : kinds)
            if (cfg.experiment == k) known = true;
        if (!known) errors.push_back("experiment: unknown kind '" + cfg.experiment + "'");
    }

    // semantic checks through the model machinery
    if (errors.empty()) {
        // integer matrix with nonzero determinant
        double dd = 0.0;
        if (d == 1) dd = double(cfg.model.matrix[0][0]);
        if (d == 2)
            dd = double(cfg.model.matrix[0][0] * cfg.model.matrix[1][1] -
                        cfg.model.matrix[0][1] * cfg.model.matrix[1][0]);
        if (d == 3) {
            auto& m = cfg.model.matrix;
            dd = double(m[0][0]) * (double(m[1][1]) * m[2][2] - double(m[1][2]) * m[2][1]) -
                 double(m[0][1]) * (double(m[1][0]) * m[2][2] - double(m[1][2]) * m[2][0]) +
                 double(m[0][2]) * (double(m[1][0]) * m[2][1] - double(m[1][1]) * m[2][0]);
        }
        if (dd == 0.0) errors.push_back("model.matrix: matrix singular");

        if (cfg.model.family == "pitchfork") {
            if (d != 3) {
                errors.push_back("model.family: pitchfork requires dimension 3");
            } else if (dd != 0.0) {
                Mat<3> a;
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c) a(r, c) = double(cfg.model.matrix[size_t(r)][size_t(c)]);
                try {
                    auto iv = MapModel<3>::pitchfork_rho_interval(a);
                    if (!(cfg.model.bump.rho > iv.first && cfg.model.bump.rho < iv.second))
                        errors.push_back(
                            "model.bump.rho: outside the admissible interval (" +
                            std::to_string(iv.first) + ", " + std::to_string(iv.second) +
                            ") for this matrix");
                } catch (const std::exception& e) {
                    errors.push_back(std::string("model.matrix: ") + e.what());
                }
            }
        }
        if (cfg.model.family == "hopf" && d != 3)
            errors.push_back("model.family: hopf requires dimension 3");
        if (cfg.model.family != "linear") {
            if (!(cfg.model.bump.radius > 0 && cfg.model.bump.radius <= 0.25))
                errors.push_back("model.bump.radius: must lie in (0, 0.25]");
            if (cfg.model.bump.t < 0 || cfg.model.bump.t > 1)
                errors.push_back("model.bump.t: must lie in [0, 1]");
        }
    }

    if (!errors.empty()) return result;

    // canonical serialization for hashing (sorted keys, shortest floats)
    nlohmann::json canon;
    canon["model"]["family"] = cfg.model.family;
    canon["model"]["dimension"] = cfg.model.dimension;
    canon["model"]["matrix"] = cfg.model.matrix;
    if (cfg.model.family != "linear") {
        canon["model"]["bump"] = {{"center", std::vector<double>(cfg.model.bump.center.begin(),
                                                                 cfg.model.bump.center.begin() + d)},
                                  {"radius", cfg.model.bump.radius},
                                  {"rho", cfg.model.bump.rho},
                                  {"t", cfg.model.bump.t},
                                  {"plane_radius", cfg.model.bump.plane_radius}};
    }
    canon["cones"] = {{"unstable_width", cfg.cones.unstable_width},
                      {"stable_width", cfg.cones.stable_width}};
    canon["constants"] = {{"c", cfg.constants.c},         {"delta", cfg.constants.delta},
                          {"grid", cfg.constants.grid},   {"fourier_k", cfg.constants.fourier_k},
                          {"cert_grid", cfg.constants.cert_grid}, {"depth", cfg.constants.depth}};
    canon["run"] = {{"iters", cfg.run.iters},   {"samples", cfg.run.samples},
                    {"disk_radius", cfg.run.disk_radius}, {"starts", cfg.run.starts},
                    {"seed", cfg.run.seed},     {"workers", cfg.run.workers},
                    {"kernel", cfg.run.kernel}};
    canon["sweep"] = {{"t_start", cfg.sweep.t_start},
                      {"t_stop", cfg.sweep.t_stop},
                      {"t_step", cfg.sweep.t_step},
                      {"cluster_starts", cfg.sweep.cluster_starts}};
    canon["experiment"] = cfg.experiment;
    cfg.canonical = canon.dump();

    result.config = std::move(cfg);
    return result;
}

template <int D>
inline MapModel<D> build_model(const ExperimentConfig& cfg) {
    Mat<D> a;
    for (int r = 0; r < D; ++r)
        for (int c = 0; c < D; ++c) a(r, c) = double(cfg.model.matrix[size_t(r)][size_t(c)]);
    if (cfg.model.family == "linear") return MapModel<D>::linear(a);
    if constexpr (D == 3) {
        if (cfg.model.family == "pitchfork") return MapModel<D>::pitchfork(a, cfg.model.bump);
        if (cfg.model.family == "hopf") return MapModel<D>::hopf(a, cfg.model.bump);
    }
    throw Error("build_model: family '" + cfg.model.family + "' needs dimension 3");
}

}  // namespace torusdyn
