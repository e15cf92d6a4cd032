// Copyright 2026 The rose-ekf Authors
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

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rose/evaluation.hpp"
#include "rose/io/csv.hpp"
#include "rose/pipeline.hpp"
#include "rose/scenario.hpp"
#include "rose/version.hpp"

namespace rose::io {

using nlohmann::json;

inline json to_json(const RmsReport& r) {
    return {{"position", r.position},   {"orientation", r.orientation}, {"curvature", r.curvature},
            {"velocity", r.velocity},   {"n", r.n}};
}

/// improvement_pct is ordered position, orientation, curvature, velocity.
inline json to_json(const ComparisonReport& c) {
    return {{"ekf", to_json(c.ekf)},
            {"rose", to_json(c.rose)},
            {"improvement_pct", c.improvement_pct},
            {"improvement_avg", c.improvement_avg}};
}

inline RmsReport rms_report_from_json(const json& j) {
    return {j.at("position").get<double>(), j.at("orientation").get<double>(),
            j.at("curvature").get<double>(), j.at("velocity").get<double>(),
            j.at("n").get<std::size_t>()};
}

inline ComparisonReport comparison_from_json(const json& j) {
    ComparisonReport c;
    c.ekf = rms_report_from_json(j.at("ekf"));
    c.rose = rms_report_from_json(j.at("rose"));
    c.improvement_pct = j.at("improvement_pct").get<std::array<double, 4>>();
    c.improvement_avg = j.at("improvement_avg").get<double>();
    return c;
}

/// Provenance record written next to every command's output.
struct RunManifest {
    std::string command;
    json config;
    std::optional<std::uint64_t> seed;
    std::map<std::string, std::string> inputs;
    std::map<std::string, std::string> outputs;
    std::string version = kVersion;
};

inline json to_json(const RunManifest& m) {
    json j = {{"command", m.command}, {"config", m.config}, {"inputs", m.inputs},
              {"outputs", m.outputs}, {"version", m.version}};
    j["seed"] = m.seed ? json(*m.seed) : json(nullptr);
    return j;
}

inline std::filesystem::path manifest_path(const std::filesystem::path& output) {
    return output.string() + ".manifest.json";
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
    std::ofstream os(p, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + p.string() + "' for writing");
    return os;
}

inline void write_series(const std::filesystem::path& p, std::span<const double> t,
                         std::span<const double> truth, std::span<const double> ekf,
                         std::span<const double> rose) {
    auto os = open_out(p);
    os << "t,truth,ekf,rose\n";
    for (std::size_t i = 0; i < t.size(); ++i) {
        os << format_double(t[i]) << ',' << format_double(truth[i]) << ',' << format_double(ekf[i])
           << ',' << format_double(rose[i]) << '\n';
    }
}

}  // namespace detail

/// Writes track.csv, alpha.csv, kappa.csv and v.csv into dir (created if missing).
/// Series start after the filter warm-up.
inline std::vector<std::filesystem::path> write_plot_data(const std::filesystem::path& dir,
                                                          std::span<const GroundTruthSample> truth,
                                                          std::span<const Measurement> meas,
                                                          std::span<const FilterOutput> ekf,
                                                          std::span<const FilterOutput> adaptive) {
    std::filesystem::create_directories(dir);
    const auto t0 = kWarmupSamples;
    const std::size_t n = ekf.size();
    rose::detail::require(adaptive.size() == n && truth.size() == n + t0 && meas.size() == n + t0,
                    "write_plot_data: series lengths do not line up");

    const auto track = dir / "track.csv";
    {
        auto os = detail::open_out(track);
        os << "t,truth_x,truth_y,meas_x,meas_y,ekf_x,ekf_y,rose_x,rose_y\n";
        for (std::size_t i = 0; i < n; ++i) {
            const auto& g = truth[i + t0];
            const auto& m = meas[i + t0];
            os << format_double(g.t) << ',' << format_double(g.x) << ',' << format_double(g.y) << ','
               << format_double(m.x) << ',' << format_double(m.y) << ','
               << format_double(ekf[i].state.x) << ',' << format_double(ekf[i].state.y) << ','
               << format_double(adaptive[i].state.x) << ',' << format_double(adaptive[i].state.y) << '\n';
        }
    }

    std::vector<double> t(n), gt(n), e(n), r(n);
    const auto emit = [&](const char* name, auto truth_of, auto est_of) {
        for (std::size_t i = 0; i < n; ++i) {
            t[i] = truth[i + t0].t;
            gt[i] = truth_of(truth[i + t0]);
            e[i] = est_of(ekf[i].state);
            r[i] = est_of(adaptive[i].state);
        }
        const auto p = dir / name;
        detail::write_series(p, t, gt, e, r);
        return p;
    };
    return {
        track,
        emit("alpha.csv", [](const GroundTruthSample& g) { return g.alpha; },
             [](const StateVector& s) { return s.alpha; }),
        emit("kappa.csv", [](const GroundTruthSample& g) { return g.kappa; },
             [](const StateVector& s) { return s.kappa; }),
        emit("v.csv", [](const GroundTruthSample& g) { return g.v; },
             [](const StateVector& s) { return s.v; }),
    };
}

}  // namespace rose::io
