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

// Brute-force steady-state gain of the per-axis constant-velocity tracker,
// obtained by running the covariance recursion to its fixed point. Kept free
// of any dependency on the closed-form gain so that each can check the other.

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Core>

#include "rose/errors.hpp"

namespace rose {

inline constexpr long kRiccatiMaxIterations = 1'000'000;

/// Iterates the tracker's Kalman covariance recursion from a zero prior until the
/// gain (position, velocity) changes by less than tol (relative to max(1, |K|)).
///
/// Process noise is white acceleration with variance q / dt^2 (q is the velocity
/// variance added per step), so dt * sqrt(q / r) is the tracking index. Because the
/// covariance is propagated as A (P + Q') A^T, the noise enters as
/// Q' = A^-1 G G^T A^-T (q / dt^2) with G = (dt^2 / 2, dt).
inline Eigen::Vector2d riccati_gain_oracle(double q, double r, double dt, double tol) {
    detail::require(std::isfinite(q) && q >= 0.0, "riccati_gain_oracle: q must be >= 0");
    detail::require(std::isfinite(r) && r > 0.0, "riccati_gain_oracle: r must be > 0");
    detail::require(std::isfinite(dt) && dt > 0.0, "riccati_gain_oracle: dt must be > 0");
    detail::require(std::isfinite(tol) && tol > 0.0, "riccati_gain_oracle: tol must be > 0");

    Eigen::Matrix2d a;
    a << 1.0, dt, 0.0, 1.0;
    Eigen::Matrix2d q_inner;
    q_inner << dt * dt / 4.0, -dt / 2.0, -dt / 2.0, 1.0;
    q_inner *= q;

    Eigen::Matrix2d p = a * q_inner * a.transpose();
    Eigen::Vector2d k_prev = Eigen::Vector2d::Constant(std::nan(""));
    for (long it = 0; it < kRiccatiMaxIterations; ++it) {
        const double s = p(0, 0) + r;
        const Eigen::Vector2d k = p.col(0) / s;
        if (it > 0) {
            const double change = ((k - k_prev).cwiseAbs().array() /
                                   k.cwiseAbs().array().max(1.0)).maxCoeff();
            if (change < tol) return k;
        }
        k_prev = k;
        Eigen::Matrix2d i_kc = Eigen::Matrix2d::Identity();
        i_kc.col(0) -= k;
        const Eigen::Matrix2d p_post = i_kc * p * i_kc.transpose() + r * k * k.transpose();
        p = a * (p_post + q_inner) * a.transpose();
    }
    throw ConvergenceError("riccati_gain_oracle: no convergence after " +
                           std::to_string(kRiccatiMaxIterations) + " iterations");
}

}  // namespace rose
