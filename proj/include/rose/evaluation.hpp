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
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "rose/errors.hpp"
#include "rose/model.hpp"
#include "rose/pipeline.hpp"
#include "rose/scenario.hpp"

namespace rose {

struct RmsReport {
    double position = 0.0;     ///< [m], Euclidean
    double orientation = 0.0;  ///< [rad], wrapped differences
    double curvature = 0.0;    ///< [1/m]
    double velocity = 0.0;     ///< [m/s]
    std::size_t n = 0;

    std::array<double, 4> values() const { return {position, orientation, curvature, velocity}; }
};

struct ComparisonReport {
    RmsReport ekf;
    RmsReport rose;
    std::array<double, 4> improvement_pct{};  ///< position, orientation, curvature, velocity
    double improvement_avg = 0.0;
};

namespace detail {

inline void check_lengths(std::size_t a, std::size_t b, const char* who) {
    require(a == b, std::string(who) + ": length mismatch (" + std::to_string(a) + " vs " +
                        std::to_string(b) + ")");
    require(a >= 1, std::string(who) + ": empty series");
}

}  // namespace detail

inline double rms_scalar(std::span<const double> est, std::span<const double> truth) {
    detail::check_lengths(est.size(), truth.size(), "rms_scalar");
    double sum = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double d = est[i] - truth[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(est.size()));
}

inline double rms_position(std::span<const Vector2> est, std::span<const Vector2> truth) {
    detail::check_lengths(est.size(), truth.size(), "rms_position");
    double sum = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) sum += (est[i] - truth[i]).squaredNorm();
    return std::sqrt(sum / static_cast<double>(est.size()));
}

inline double rms_orientation(std::span<const double> est, std::span<const double> truth) {
    detail::check_lengths(est.size(), truth.size(), "rms_orientation");
    double sum = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double d = wrap_angle(est[i] - truth[i]);
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(est.size()));
}

/// Relative reduction of the baseline error, in percent of the adaptive error:
/// (ekf - rose) / rose * 100.
inline double improvement(double ekf_rms, double rose_rms) {
    detail::require(std::isfinite(ekf_rms) && std::isfinite(rose_rms) && rose_rms > 0.0,
                    "improvement: rose_rms must be > 0");
    return (ekf_rms - rose_rms) / rose_rms * 100.0;
}

inline constexpr double kAlignTolerance = 1e-9;

/// RMS errors of a filter run against the truth samples it covers.
inline RmsReport rms_report(std::span<const GroundTruthSample> truth,
                            std::span<const FilterOutput> out) {
    detail::require(truth.size() == out.size(),
                    "rms_report: " + std::to_string(out.size()) + " estimates for " +
                        std::to_string(truth.size()) + " truth samples");
    std::string mismatched;
    std::size_t bad = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        if (std::abs(truth[i].t - out[i].t) > kAlignTolerance) {
            if (++bad <= 5) {
                mismatched += " [" + std::to_string(i) + "] truth t=" + std::to_string(truth[i].t) +
                              " est t=" + std::to_string(out[i].t);
            }
        }
    }
    detail::require(bad == 0, "rms_report: " + std::to_string(bad) +
                                  " misaligned timestamps:" + mismatched);

    std::vector<Vector2> pe, pt;
    std::vector<double> ae, at, ke, kt, ve, vt;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        pe.emplace_back(out[i].state.x, out[i].state.y);
        pt.emplace_back(truth[i].x, truth[i].y);
        ae.push_back(out[i].state.alpha);
        at.push_back(truth[i].alpha);
        ke.push_back(out[i].state.kappa);
        kt.push_back(truth[i].kappa);
        ve.push_back(out[i].state.v);
        vt.push_back(truth[i].v);
    }
    return {rms_position(pe, pt), rms_orientation(ae, at), rms_scalar(ke, kt), rms_scalar(ve, vt),
            truth.size()};
}

inline ComparisonReport compare_reports(const RmsReport& ekf, const RmsReport& rose) {
    ComparisonReport rep{ekf, rose, {}, 0.0};
    const auto e = ekf.values();
    const auto r = rose.values();
    double sum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        rep.improvement_pct[i] = improvement(e[i], r[i]);
        sum += rep.improvement_pct[i];
    }
    rep.improvement_avg = sum / 4.0;
    return rep;
}

/// Compares a static-R run with an adaptive run over the same measurements. `truth` is
/// the full simulated series; its warm-up samples are dropped here.
inline ComparisonReport compare(std::span<const GroundTruthSample> truth,
                                std::span<const FilterOutput> ekf_out,
                                std::span<const FilterOutput> rose_out) {
    detail::require(truth.size() > kWarmupSamples, "compare: truth series too short");
    const auto aligned = truth.subspan(kWarmupSamples);
    return compare_reports(rms_report(aligned, ekf_out), rms_report(aligned, rose_out));
}

}  // namespace rose
