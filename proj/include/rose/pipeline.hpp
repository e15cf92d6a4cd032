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

// Filter front end: the adaptive-R EKF and its static-R baseline share every
// line of code except where R comes from.

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rose/adaptive_noise.hpp"
#include "rose/ekf.hpp"
#include "rose/errors.hpp"
#include "rose/model.hpp"

namespace rose {

enum class FilterMode { rose, fixed };

inline const char* to_string(FilterMode m) { return m == FilterMode::rose ? "rose" : "static"; }

struct FilterConfig {
    AdaptiveConfig adaptive;
    ProcessNoise q = default_process_noise();
    SquareMatrix5 p0 = default_initial_covariance();
    FilterMode mode = FilterMode::rose;
    std::optional<SquareMatrix2> static_r;  ///< static mode; calibrated by run() when empty
    std::size_t calib_len = 50;

    void validate() const {
        adaptive.validate();
        detail::require(is_valid_covariance(q.Q), "filter: Q is not a valid covariance");
        detail::require(is_valid_covariance(p0), "filter: P0 is not a valid covariance");
        detail::require(calib_len >= 2, "filter: calib_len must be >= 2");
        if (static_r) {
            detail::require(is_valid_covariance(*static_r) && (*static_r)(0, 0) > 0.0 &&
                                (*static_r)(1, 1) > 0.0,
                            "filter: static_r must be a covariance with positive diagonal");
        }
    }
};

/// One record per measurement after warm-up.
struct FilterOutput {
    double t = 0.0;
    StateVector state;  ///< corrected estimate at t
    Vector5 p_diag = Vector5::Zero();
    Vector2 r_used = Vector2::Zero();  ///< diagonal of the R applied at this step
    std::optional<Vector2> expected_xy;  ///< tracker E(y), adaptive mode only
};

/// Number of leading measurements that only initialize the filter.
inline constexpr std::size_t kWarmupSamples = 2;

/// Mean of gamma * residual^2 per axis over the prefix, ignoring the residuals of the
/// first kWarmupSamples samples; floored at r_floor. Needs at least three samples.
inline SquareMatrix2 calibrate_static_R(std::span<const Measurement> prefix,
                                        const AdaptiveConfig& adaptive) {
    adaptive.validate();
    detail::require(prefix.size() > kWarmupSamples,
                    "calibrate_static_R: need at least 3 samples, got " + std::to_string(prefix.size()));
    NoiseEstimator est(adaptive, prefix[0]);
    Vector2 sum = Vector2::Zero();
    std::size_t count = 0;
    for (std::size_t i = 1; i < prefix.size(); ++i) {
        const auto upd = est.update(prefix[i]);
        if (i < kWarmupSamples) continue;
        sum[0] += est.gamma_for(est.tracker_x()) * upd.residual[0] * upd.residual[0];
        sum[1] += est.gamma_for(est.tracker_y()) * upd.residual[1] * upd.residual[1];
        ++count;
    }
    const Vector2 mean = (sum / static_cast<double>(count)).cwiseMax(adaptive.r_floor);
    return mean.asDiagonal();
}

/// Stateful filter over a measurement stream.
class Filter {
public:
    explicit Filter(FilterConfig cfg) : cfg_(std::move(cfg)) {
        cfg_.validate();
        detail::require(cfg_.mode == FilterMode::rose || cfg_.static_r.has_value(),
                        "filter: static mode requires static_r");
    }

    /// Consumes the next measurement; returns nothing during warm-up.
    std::optional<FilterOutput> process(const Measurement& m) {
        const std::size_t index = count_;
        if (!std::isfinite(m.t) || !m.position().allFinite()) {
            throw InvalidArgument("sample " + std::to_string(index) + ": non-finite measurement");
        }
        if (last_ && !(m.t > last_->t)) {
            throw SequencingError(index, "sample " + std::to_string(index) + ": timestamp " +
                                             std::to_string(m.t) + " does not follow " +
                                             std::to_string(last_->t));
        }
        try {
            auto out = advance(index, m);
            last_ = m;
            ++count_;
            return out;
        } catch (const NumericalError& e) {
            throw NumericalError("sample " + std::to_string(index) + ": " + e.what());
        }
    }

    const FilterConfig& config() const { return cfg_; }
    const std::optional<EkfState>& state() const { return ekf_; }

private:
    std::optional<FilterOutput> advance(std::size_t index, const Measurement& m) {
        SquareMatrix2 r;
        std::optional<Vector2> expected;
        if (cfg_.mode == FilterMode::rose) {
            if (!noise_) {
                noise_.emplace(cfg_.adaptive, m);
                return std::nullopt;
            }
            const auto upd = noise_->update(m);
            r = upd.estimate.R;
            expected = upd.expected;
        } else {
            r = *cfg_.static_r;
        }

        if (index + 1 < kWarmupSamples) return std::nullopt;
        if (index + 1 == kWarmupSamples) {
            ekf_ = init_from_measurements(*last_, m, cfg_.p0);
            return std::nullopt;
        }

        const Matrix2x5 c = jacobian_C();
        const EkfState predicted = predict(*ekf_, cfg_.q, m.t - last_->t);
        const Matrix5x2 k = gain(predicted.P, c, r);
        ekf_ = correct(predicted, m.position(), k, c, r);

        FilterOutput out;
        out.t = m.t;
        out.state = ekf_->x_hat;
        out.p_diag = ekf_->P.diagonal();
        out.r_used = r.diagonal();
        out.expected_xy = expected;
        return out;
    }

    FilterConfig cfg_;
    std::size_t count_ = 0;
    std::optional<Measurement> last_;
    std::optional<NoiseEstimator> noise_;
    std::optional<EkfState> ekf_;
};

/// Runs a fresh filter over the whole series. In static mode without a configured R,
/// R is calibrated on the first calib_len measurements.
inline std::vector<FilterOutput> run(FilterConfig cfg, std::span<const Measurement> series) {
    detail::require(series.size() > kWarmupSamples,
                    "run: need at least 3 measurements, got " + std::to_string(series.size()));
    if (cfg.mode == FilterMode::fixed && !cfg.static_r) {
        detail::require(series.size() >= cfg.calib_len,
                        "run: series shorter than calib_len (" + std::to_string(cfg.calib_len) + ")");
        cfg.static_r = calibrate_static_R(series.first(cfg.calib_len), cfg.adaptive);
    }
    Filter filter(std::move(cfg));
    std::vector<FilterOutput> out;
    out.reserve(series.size() - kWarmupSamples);
    for (const auto& m : series) {
        if (auto rec = filter.process(m)) out.push_back(std::move(*rec));
    }
    return out;
}

}  // namespace rose
