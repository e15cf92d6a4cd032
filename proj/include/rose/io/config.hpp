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

// JSON run configuration:
//
// {
//   "scenario": {
//     "segments": [{"duration": s, "kappa": 1/m, "speed_start": m/s, "speed_end": m/s}, ...],
//     "noise": [{"t_from": s, "sigma_x": m, "sigma_y": m}, ...],
//     "sample_dt": s,
//     "init": {"x": m, "y": m, "alpha": rad}
//   },
//   "filter": {
//     "lambda": .., "alpha_r": .., "gamma": "auto" | number, "r_init": m^2, "r_floor": m^2,
//     "q_diag": [5], "p0_diag": [5], "mode": "rose" | "static",
//     "static_r": [rx, ry], "calib_len": n
//   }
// }
//
// Every key is optional; omitted ones take the defaults (the reference scenario
// and the default filter). Unknown keys are rejected.

#include <cstddef>
#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>

#include <nlohmann/json.hpp>

#include "rose/errors.hpp"
#include "rose/pipeline.hpp"
#include "rose/scenario.hpp"

namespace rose::io {

using nlohmann::json;

class ConfigError : public InvalidArgument {
public:
    using InvalidArgument::InvalidArgument;
};

struct RunConfig {
    Scenario scenario = reference_scenario();
    FilterConfig filter;
};

namespace detail {

inline std::string join(std::string_view path, std::string_view key) {
    return path.empty() ? std::string(key) : std::string(path) + "." + std::string(key);
}

inline void reject_unknown(const json& obj, std::string_view path,
                           std::initializer_list<std::string_view> allowed) {
    if (!obj.is_object()) {
        throw ConfigError((path.empty() ? std::string("config") : std::string(path)) +
                          ": expected an object");
    }
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw ConfigError(join(path, key) + ": unknown key");
    }
}

inline double number(const json& obj, std::string_view path, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(join(path, key) + ": expected a number");
    return v.get<double>();
}

inline double required_number(const json& obj, std::string_view path, const char* key) {
    if (!obj.contains(key)) throw ConfigError(join(path, key) + ": missing required key");
    return number(obj, path, key, 0.0);
}

template <int N>
Eigen::Matrix<double, N, 1> fixed_array(const json& obj, std::string_view path, const char* key,
                                        const Eigen::Matrix<double, N, 1>& fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_array() || v.size() != N) {
        throw ConfigError(join(path, key) + ": expected an array of " + std::to_string(N) + " numbers");
    }
    Eigen::Matrix<double, N, 1> out;
    for (int i = 0; i < N; ++i) {
        if (!v[i].is_number()) {
            throw ConfigError(join(path, key) + "[" + std::to_string(i) + "]: expected a number");
        }
        out[i] = v[i].get<double>();
    }
    return out;
}

inline Scenario parse_scenario(const json& j) {
    constexpr std::string_view path = "scenario";
    reject_unknown(j, path, {"segments", "noise", "sample_dt", "init"});
    Scenario sc = reference_scenario();
    sc.sample_dt = number(j, path, "sample_dt", sc.sample_dt);
    if (j.contains("segments")) {
        const auto& segs = j.at("segments");
        if (!segs.is_array()) throw ConfigError("scenario.segments: expected an array");
        sc.segments.clear();
        for (std::size_t i = 0; i < segs.size(); ++i) {
            const std::string p = "scenario.segments[" + std::to_string(i) + "]";
            reject_unknown(segs[i], p, {"duration", "kappa", "speed_start", "speed_end"});
            sc.segments.push_back({required_number(segs[i], p, "duration"),
                                   required_number(segs[i], p, "kappa"),
                                   required_number(segs[i], p, "speed_start"),
                                   required_number(segs[i], p, "speed_end")});
        }
    }
    if (j.contains("noise")) {
        const auto& noise = j.at("noise");
        if (!noise.is_array()) throw ConfigError("scenario.noise: expected an array");
        sc.noise.clear();
        for (std::size_t i = 0; i < noise.size(); ++i) {
            const std::string p = "scenario.noise[" + std::to_string(i) + "]";
            reject_unknown(noise[i], p, {"t_from", "sigma_x", "sigma_y"});
            sc.noise.push_back({required_number(noise[i], p, "t_from"),
                                required_number(noise[i], p, "sigma_x"),
                                required_number(noise[i], p, "sigma_y")});
        }
    }
    if (j.contains("init")) {
        const auto& init = j.at("init");
        reject_unknown(init, "scenario.init", {"x", "y", "alpha"});
        sc.x0 = number(init, "scenario.init", "x", sc.x0);
        sc.y0 = number(init, "scenario.init", "y", sc.y0);
        sc.alpha0 = number(init, "scenario.init", "alpha", sc.alpha0);
    }
    try {
        sc.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    return sc;
}

inline FilterConfig parse_filter(const json& j) {
    constexpr std::string_view path = "filter";
    reject_unknown(j, path, {"lambda", "alpha_r", "gamma", "r_init", "r_floor", "q_diag", "p0_diag",
                             "mode", "static_r", "calib_len"});
    FilterConfig f;
    auto& a = f.adaptive;
    a.lambda = number(j, path, "lambda", a.lambda);
    a.alpha_r = number(j, path, "alpha_r", a.alpha_r);
    a.r_init = number(j, path, "r_init", a.r_init);
    a.r_floor = number(j, path, "r_floor", a.r_floor);
    if (j.contains("gamma")) {
        const auto& g = j.at("gamma");
        if (g.is_string() && g.get<std::string>() == "auto") {
            a.gamma.reset();
        } else if (g.is_number()) {
            a.gamma = g.get<double>();
        } else {
            throw ConfigError("filter.gamma: expected \"auto\" or a number");
        }
    }
    f.q = ProcessNoise::diagonal(fixed_array<5>(j, path, "q_diag", f.q.Q.diagonal()));
    f.p0 = fixed_array<5>(j, path, "p0_diag", f.p0.diagonal()).asDiagonal();
    if (j.contains("mode")) {
        const auto& m = j.at("mode");
        const std::string mode = m.is_string() ? m.get<std::string>() : "";
        if (mode == "rose") {
            f.mode = FilterMode::rose;
        } else if (mode == "static") {
            f.mode = FilterMode::fixed;
        } else {
            throw ConfigError("filter.mode: expected \"rose\" or \"static\"");
        }
    }
    if (j.contains("static_r")) {
        f.static_r = SquareMatrix2(fixed_array<2>(j, path, "static_r", Vector2::Zero()).asDiagonal());
    }
    if (j.contains("calib_len")) {
        const auto& c = j.at("calib_len");
        if (!c.is_number_integer() || c.get<long long>() < 2) {
            throw ConfigError("filter.calib_len: expected an integer >= 2");
        }
        f.calib_len = c.get<std::size_t>();
    }
    try {
        f.validate();
    } catch (const InvalidArgument& e) {
        throw ConfigError(e.what());
    }
    return f;
}

/// 1-based line and column of a byte offset.
inline std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
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

inline RunConfig config_from_json(const json& j) {
    detail::reject_unknown(j, "", {"scenario", "filter"});
    RunConfig cfg;
    if (j.contains("scenario")) cfg.scenario = detail::parse_scenario(j.at("scenario"));
    if (j.contains("filter")) cfg.filter = detail::parse_filter(j.at("filter"));
    return cfg;
}

inline RunConfig parse_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        const auto [line, col] = detail::line_col(text, e.byte);
        throw ConfigError("invalid JSON at line " + std::to_string(line) + ", column " +
                          std::to_string(col) + ": " + e.what());
    }
    return config_from_json(j);
}

/// Fully resolved config; parse_config(to_json(c).dump()) reproduces c.
inline json to_json(const RunConfig& cfg) {
    json segs = json::array();
    for (const auto& s : cfg.scenario.segments) {
        segs.push_back({{"duration", s.duration}, {"kappa", s.kappa}, {"speed_start", s.speed_start},
                        {"speed_end", s.speed_end}});
    }
    json noise = json::array();
    for (const auto& b : cfg.scenario.noise) {
        noise.push_back({{"t_from", b.t_from}, {"sigma_x", b.sigma_x}, {"sigma_y", b.sigma_y}});
    }
    const auto diag = [](const auto& m) {
        json arr = json::array();
        for (Eigen::Index i = 0; i < m.rows(); ++i) arr.push_back(m(i, i));
        return arr;
    };
    const auto& f = cfg.filter;
    json filter = {
        {"lambda", f.adaptive.lambda},
        {"alpha_r", f.adaptive.alpha_r},
        {"r_init", f.adaptive.r_init},
        {"r_floor", f.adaptive.r_floor},
        {"q_diag", diag(f.q.Q)},
        {"p0_diag", diag(f.p0)},
        {"mode", to_string(f.mode)},
        {"calib_len", f.calib_len},
    };
    if (f.adaptive.gamma) {
        filter["gamma"] = *f.adaptive.gamma;
    } else {
        filter["gamma"] = "auto";
    }
    if (f.static_r) filter["static_r"] = diag(*f.static_r);
    return {
        {"scenario",
         {{"segments", segs},
          {"noise", noise},
          {"sample_dt", cfg.scenario.sample_dt},
          {"init", {{"x", cfg.scenario.x0}, {"y", cfg.scenario.y0}, {"alpha", cfg.scenario.alpha0}}}}},
        {"filter", filter},
    };
}

}  // namespace rose::io
