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

// Online measurement-noise estimation.
//
// Each axis runs a steady-state constant-velocity tracker (an alpha-beta
// filter whose gain follows from the tracking index lambda). The tracker's
// filtered position is the expected measurement E(y); the post-fit residual
// E(y) - y feeds an exponentially weighted variance estimate
//
//     R_k = max(r_floor, gamma * alpha_R * residual^2 + (1 - alpha_R) * R_{k-1}).
//
// gamma compensates for the residual being measured after the tracker has
// already pulled toward y, which shrinks it.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "rose/errors.hpp"
#include "rose/model.hpp"

namespace rose {

struct AdaptiveConfig {
    double lambda = 0.5;          ///< tracking index dt*sqrt(q/r), dimensionless
    double alpha_r = 0.02;        ///< smoothing weight in (0, 1]
    std::optional<double> gamma;  ///< residual inflation; empty means auto_gamma
    double r_init = 0.25;         ///< [m^2]
    double r_floor = 1e-6;        ///< [m^2]

    void validate() const {
        detail::require(std::isfinite(lambda) && lambda >= 0.0, "adaptive: lambda must be >= 0");
        detail::require(alpha_r > 0.0 && alpha_r <= 1.0, "adaptive: alpha_r must be in (0, 1]");
        detail::require(!gamma || (std::isfinite(*gamma) && *gamma > 0.0),
                        "adaptive: gamma must be > 0 or auto");
        detail::require(std::isfinite(r_floor) && r_floor > 0.0, "adaptive: r_floor must be > 0");
        detail::require(std::isfinite(r_init) && r_init >= r_floor,
                        "adaptive: r_init must be >= r_floor");
    }
};

/// Steady-state gain (position gain, velocity gain [1/s]) of the constant-velocity
/// tracker for tracking index lambda at sample interval dt.
inline Vector2 steady_state_gain(double lambda, double dt) {
    detail::require(std::isfinite(lambda) && lambda >= 0.0, "steady_state_gain: lambda must be >= 0");
    detail::require(std::isfinite(dt) && dt > 0.0, "steady_state_gain: dt must be > 0");
    const double l2 = lambda * lambda;
    const double root = std::sqrt(l2 + 8.0 * lambda);
    return (0.125 / dt) * Vector2(dt * (-l2 - 8.0 * lambda + (lambda + 4.0) * root),
                                  2.0 * (l2 + 4.0 * lambda - lambda * root));
}

/// gamma = 1 / (1 - K[0]). Unbiased only when the truth really carries the process
/// noise implied by lambda; see auto_gamma for the measurement-noise-only case.
inline double model_consistent_gamma(double k0) {
    detail::require(std::isfinite(k0) && k0 >= 0.0 && k0 < 1.0,
                    "model_consistent_gamma: K[0] must be in [0, 1)");
    return 1.0 / (1.0 - k0);
}

/// Inflation that makes gamma * E[residual^2] equal the measurement variance when the
/// tracked coordinate moves at constant velocity and only measurement noise is present.
///
/// With a = K[0], b = K[1]*dt the filtered-position variance ratio of the alpha-beta
/// filter is (2a^2 + 2b - 3ab) / (a (4 - 2a - b)); the post-fit residual has variance
/// R * (1 - 2a + ratio).
inline double auto_gamma(const Vector2& k, double dt) {
    detail::require(k.allFinite() && k[0] >= 0.0 && k[0] < 1.0, "auto_gamma: K[0] must be in [0, 1)");
    detail::require(std::isfinite(dt) && dt > 0.0, "auto_gamma: dt must be > 0");
    const double a = k[0];
    const double b = k[1] * dt;
    if (a == 0.0) {
        detail::require(b == 0.0, "auto_gamma: K[0] = 0 requires K[1] = 0");
        return 1.0;
    }
    const double stab = a * (4.0 - 2.0 * a - b);
    detail::require(b > 0.0 && stab > 0.0, "auto_gamma: gain is not a stable alpha-beta gain");
    const double ratio = (2.0 * a * a + 2.0 * b - 3.0 * a * b) / stab;
    return 1.0 / (1.0 - 2.0 * a + ratio);
}

/// Exponentially weighted variance update for one axis.
inline double update_R(double r_prev, double residual, double gamma, double alpha_r,
                       double r_floor) {
    detail::require(std::isfinite(r_floor) && r_floor > 0.0, "update_R: r_floor must be > 0");
    detail::require(std::isfinite(r_prev) && r_prev >= r_floor, "update_R: R_prev must be >= r_floor");
    detail::require(std::isfinite(residual), "update_R: non-finite residual");
    detail::require(std::isfinite(gamma) && gamma > 0.0, "update_R: gamma must be > 0");
    detail::require(alpha_r > 0.0 && alpha_r <= 1.0, "update_R: alpha_R must be in (0, 1]");
    return std::max(r_floor, gamma * alpha_r * residual * residual + (1.0 - alpha_r) * r_prev);
}

/// Per-coordinate steady-state constant-velocity tracker.
struct AxisTracker {
    Vector2 xt = Vector2::Zero();  ///< (position [m], velocity [m/s])
    Vector2 K = Vector2::Zero();   ///< gain for dt_ref
    double dt_ref = 0.0;           ///< 0 until the first update
    double lambda = 0.0;

    /// Starts at (y, 0).
    static AxisTracker start(double y, double lambda) {
        detail::require(std::isfinite(y), "AxisTracker: non-finite start position");
        detail::require(std::isfinite(lambda) && lambda >= 0.0, "AxisTracker: lambda must be >= 0");
        AxisTracker tr;
        tr.xt = Vector2(y, 0.0);
        tr.lambda = lambda;
        return tr;
    }
};

struct TrackResult {
    double expected;  ///< E(y) [m]
    AxisTracker tracker;
};

inline constexpr double kGainRecomputeDt = 1e-9;

/// xt' = K y + (I - K C) A xt with A = [[1, dt], [0, 1]], C = [1, 0].
/// The gain is recomputed when dt differs from the one it was computed for.
inline TrackResult track(const AxisTracker& tr, double y, double dt) {
    detail::require(std::isfinite(y) && tr.xt.allFinite(), "track: non-finite input");
    detail::require(std::isfinite(dt) && dt > 0.0, "track: dt must be > 0");

    AxisTracker next = tr;
    if (std::abs(dt - tr.dt_ref) > kGainRecomputeDt) {
        next.K = steady_state_gain(tr.lambda, dt);
        next.dt_ref = dt;
    }
    Eigen::Matrix2d a;
    a << 1.0, dt, 0.0, 1.0;
    Eigen::Matrix2d i_kc = Eigen::Matrix2d::Identity();
    i_kc.col(0) -= next.K;
    next.xt = next.K * y + i_kc * a * tr.xt;
    return {next.xt[0], next};
}

/// Diagonal measurement-noise estimate, per-axis variance in m^2.
struct NoiseEstimate {
    SquareMatrix2 R = SquareMatrix2::Zero();

    static NoiseEstimate diagonal(double rx, double ry) {
        NoiseEstimate n;
        n.R(0, 0) = rx;
        n.R(1, 1) = ry;
        return n;
    }
};

/// Both axis trackers plus the running variance estimate.
class NoiseEstimator {
public:
    struct Update {
        Vector2 expected;  ///< E(y)
        Vector2 residual;  ///< E(y) - y
        NoiseEstimate estimate;
    };

    NoiseEstimator(const AdaptiveConfig& cfg, const Measurement& first)
        : cfg_(cfg),
          x_(AxisTracker::start(first.x, cfg.lambda)),
          y_(AxisTracker::start(first.y, cfg.lambda)),
          r_(cfg.r_init, cfg.r_init),
          last_t_(first.t) {
        cfg_.validate();
    }

    /// Consumes the next measurement; timestamps must increase.
    Update update(const Measurement& m) {
        const double dt = m.t - last_t_;
        detail::require(std::isfinite(dt) && dt > 0.0, "NoiseEstimator: timestamps must increase");
        auto tx = track(x_, m.x, dt);
        auto ty = track(y_, m.y, dt);
        x_ = tx.tracker;
        y_ = ty.tracker;
        last_t_ = m.t;

        const Vector2 expected(tx.expected, ty.expected);
        const Vector2 residual = expected - m.position();
        for (int axis = 0; axis < 2; ++axis) {
            const AxisTracker& tr = axis == 0 ? x_ : y_;
            r_[axis] = update_R(r_[axis], residual[axis], gamma_for(tr), cfg_.alpha_r, cfg_.r_floor);
        }
        return {expected, residual, NoiseEstimate::diagonal(r_[0], r_[1])};
    }

    double gamma_for(const AxisTracker& tr) const {
        return cfg_.gamma ? *cfg_.gamma : auto_gamma(tr.K, tr.dt_ref);
    }

    const AxisTracker& tracker_x() const { return x_; }
    const AxisTracker& tracker_y() const { return y_; }
    NoiseEstimate estimate() const { return NoiseEstimate::diagonal(r_[0], r_[1]); }

private:
    AdaptiveConfig cfg_;
    AxisTracker x_;
    AxisTracker y_;
    Vector2 r_;
    double last_t_;
};

}  // namespace rose
