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

// Ground-truth trajectories built from exact circular arcs, plus noisy
// position measurements drawn from a seeded generator.
//
// The truth heading is the tangent heading at the sample time. The filter's
// alpha is the mid-step heading, which differs by v*dt*kappa/2; at the
// speeds and curvatures used here that is well below measurement noise.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "rose/errors.hpp"
#include "rose/model.hpp"

namespace rose {

/// Constant curvature, linear speed ramp.
struct Segment {
    double duration = 0.0;     ///< [s]
    double kappa = 0.0;        ///< [1/m]
    double speed_start = 0.0;  ///< [m/s]
    double speed_end = 0.0;    ///< [m/s]

    friend bool operator==(const Segment&, const Segment&) = default;
};

struct NoiseBreakpoint {
    double t_from = 0.0;   ///< [s]
    double sigma_x = 0.0;  ///< [m]
    double sigma_y = 0.0;  ///< [m]

    friend bool operator==(const NoiseBreakpoint&, const NoiseBreakpoint&) = default;
};

/// Piecewise-constant noise standard deviations; the first breakpoint is at t = 0.
using NoiseSchedule = std::vector<NoiseBreakpoint>;

struct Scenario {
    std::vector<Segment> segments;
    NoiseSchedule noise;
    double sample_dt = 0.1;  ///< [s]
    double x0 = 0.0;
    double y0 = 0.0;
    double alpha0 = 0.0;

    double duration() const {
        double total = 0.0;
        for (const auto& s : segments) total += s.duration;
        return total;
    }

    void validate() const {
        using detail::require;
        require(std::isfinite(sample_dt) && sample_dt > 0.0, "scenario: sample_dt must be > 0");
        require(!segments.empty(), "scenario: at least one segment is required");
        for (std::size_t i = 0; i < segments.size(); ++i) {
            const auto& s = segments[i];
            const std::string where = "scenario: segments[" + std::to_string(i) + "]";
            require(std::isfinite(s.duration) && s.duration > 0.0, where + ".duration must be > 0");
            require(std::isfinite(s.kappa), where + ".kappa must be finite");
            require(std::isfinite(s.speed_start) && s.speed_start >= 0.0 &&
                        std::isfinite(s.speed_end) && s.speed_end >= 0.0,
                    where + " speeds must be >= 0");
        }
        require(!noise.empty() && noise.front().t_from == 0.0,
                "scenario: noise schedule must start at t_from = 0");
        for (std::size_t i = 0; i < noise.size(); ++i) {
            const auto& b = noise[i];
            const std::string where = "scenario: noise[" + std::to_string(i) + "]";
            require(i == 0 || b.t_from > noise[i - 1].t_from, where + ".t_from must increase");
            require(std::isfinite(b.sigma_x) && b.sigma_x >= 0.0 && std::isfinite(b.sigma_y) &&
                        b.sigma_y >= 0.0,
                    where + " sigmas must be >= 0");
        }
        require(std::isfinite(x0) && std::isfinite(y0) && std::isfinite(alpha0),
                "scenario: initial pose must be finite");
    }

    friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct GroundTruthSample {
    double t = 0.0;
    double x = 0.0;
    double y = 0.0;
    double alpha = 0.0;  ///< tangent heading, same convention as StateVector
    double kappa = 0.0;
    double v = 0.0;

    friend bool operator==(const GroundTruthSample&, const GroundTruthSample&) = default;
};

struct ArcPose {
    double x = 0.0;
    double y = 0.0;
    double alpha = 0.0;
};

inline constexpr double kStraightKappa = 1e-12;

/// Exact motion along a circle of curvature kappa for arc length v*dt, starting
/// at (x, y) with tangent heading alpha. The circle center is (x - cos(alpha)/kappa,
/// y - sin(alpha)/kappa).
inline ArcPose exact_arc_step(double x, double y, double alpha, double v, double kappa, double dt) {
    detail::require(std::isfinite(x) && std::isfinite(y) && std::isfinite(alpha) &&
                        std::isfinite(v) && std::isfinite(kappa),
                    "exact_arc_step: non-finite input");
    detail::require(std::isfinite(dt) && dt > 0.0, "exact_arc_step: dt must be > 0");
    detail::require(v >= 0.0, "exact_arc_step: v must be >= 0");

    const double ds = v * dt;
    if (std::abs(kappa) < kStraightKappa) {
        return {x - ds * std::sin(alpha), y + ds * std::cos(alpha), wrap_angle(alpha)};
    }
    const double dphi = ds * kappa;
    const double chord_scale = 2.0 / kappa * std::sin(0.5 * dphi);
    const double mid = alpha + 0.5 * dphi;
    return {x - chord_scale * std::sin(mid), y + chord_scale * std::cos(mid),
            wrap_angle(alpha + dphi)};
}

struct SimulationResult {
    std::vector<GroundTruthSample> truth;
    std::vector<Measurement> meas;
};

namespace detail {

struct SegmentClock {
    const std::vector<Segment>& segments;
    std::vector<double> starts;

    explicit SegmentClock(const std::vector<Segment>& segs) : segments(segs) {
        double t = 0.0;
        for (const auto& s : segs) {
            starts.push_back(t);
            t += s.duration;
        }
    }

    /// Segment active at t; the last one covers the end point.
    std::size_t index_at(double t) const {
        std::size_t i = 0;
        while (i + 1 < segments.size() && t >= starts[i + 1]) ++i;
        return i;
    }

    double end_of(std::size_t i) const { return starts[i] + segments[i].duration; }

    double speed_at(std::size_t i, double t) const {
        const auto& s = segments[i];
        const double u = std::clamp((t - starts[i]) / s.duration, 0.0, 1.0);
        return s.speed_start + (s.speed_end - s.speed_start) * u;
    }
};

inline const NoiseBreakpoint& noise_at(const NoiseSchedule& schedule, double t) {
    std::size_t i = 0;
    while (i + 1 < schedule.size() && t >= schedule[i + 1].t_from) ++i;
    return schedule[i];
}

}  // namespace detail

/// Samples the scenario every sample_dt seconds from t = 0 through its end.
/// Deterministic for a given seed (std::mt19937_64, x noise drawn before y).
inline SimulationResult generate(const Scenario& sc, std::uint64_t seed) {
    sc.validate();
    const detail::SegmentClock clock(sc.segments);
    const double total = sc.duration();
    const auto n = static_cast<std::size_t>(std::floor(total / sc.sample_dt + 1e-9)) + 1;

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> unit(0.0, 1.0);

    SimulationResult out;
    out.truth.reserve(n);
    out.meas.reserve(n);

    ArcPose pose{sc.x0, sc.y0, wrap_angle(sc.alpha0)};
    double t_cur = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t = static_cast<double>(k) * sc.sample_dt;
        // Advance piecewise so segment boundaries inside the interval are honoured.
        while (t_cur < t) {
            const std::size_t i = clock.index_at(t_cur);
            const double t_stop = i + 1 < sc.segments.size() ? std::min(t, clock.end_of(i)) : t;
            const double v_avg = 0.5 * (clock.speed_at(i, t_cur) + clock.speed_at(i, t_stop));
            pose = exact_arc_step(pose.x, pose.y, pose.alpha, v_avg, sc.segments[i].kappa,
                                  t_stop - t_cur);
            t_cur = t_stop;
        }
        const std::size_t seg = clock.index_at(t);
        out.truth.push_back({t, pose.x, pose.y, pose.alpha, sc.segments[seg].kappa,
                             clock.speed_at(seg, t)});

        const auto& sigma = detail::noise_at(sc.noise, t);
        const double zx = unit(rng);
        const double zy = unit(rng);
        out.meas.push_back({t, pose.x + sigma.sigma_x * zx, pose.y + sigma.sigma_y * zy});
    }
    return out;
}

/// A 100 s test drive sampled at 10 Hz: straights and arcs (|kappa| <= 0.15 1/m),
/// speed between 0.5 and 4 m/s, noise sigma stepping 0.05 -> 0.15 -> 0.4 m at
/// t = 35 s and t = 70 s.
///
/// Curvature changes are spread over the first 8 s of a leg as a staircase of
/// 0.5 s segments (a discretized clothoid), so the path has no curvature jumps.
inline Scenario reference_scenario() {
    struct Leg {
        double duration, kappa, v0, v1;
    };
    constexpr Leg legs[] = {
        {8.0, 0.0, 2.0, 1.0},     //
        {8.0, 0.0, 1.0, 0.5},     //
        {14.0, 0.08, 0.5, 2.5},   //
        {10.0, 0.0, 2.5, 4.0},    //
        {15.0, -0.04, 4.0, 3.0},  //
        {10.0, 0.15, 3.0, 2.0},   //
        {10.0, 0.0, 2.0, 2.0},    //
        {15.0, -0.12, 2.0, 2.5},  //
        {10.0, 0.0, 2.5, 1.5},    //
    };
    constexpr double ramp_step = 0.5;
    constexpr int ramp_steps = 16;

    Scenario sc;
    sc.sample_dt = 0.1;
    double kappa = 0.0;
    for (const auto& leg : legs) {
        const auto speed = [&](double t) { return leg.v0 + (leg.v1 - leg.v0) * t / leg.duration; };
        double t = 0.0;
        if (leg.kappa != kappa) {
            for (int i = 1; i <= ramp_steps; ++i, t += ramp_step) {
                const double k = kappa + (leg.kappa - kappa) * i / (ramp_steps + 1.0);
                sc.segments.push_back({ramp_step, k, speed(t), speed(t + ramp_step)});
            }
        }
        sc.segments.push_back({leg.duration - t, leg.kappa, speed(t), leg.v1});
        kappa = leg.kappa;
    }
    sc.noise = {
        {0.0, 0.05, 0.05},
        {35.0, 0.15, 0.15},
        {70.0, 0.4, 0.4},
    };
    return sc;
}

}  // namespace rose
