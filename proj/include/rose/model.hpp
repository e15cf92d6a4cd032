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

// Planar vehicle model on a locally circular path.
//
// State (x, y, alpha, kappa, v). Heading convention: alpha is measured from
// the +y axis, counterclockwise positive, so the direction of motion is
// (-sin(alpha), +cos(alpha)). This is NOT the atan2(vy, vx) convention.
// alpha is the heading at the middle of the arc travelled in one step; for
// short steps it is treated as the vehicle orientation.

#include <cmath>
#include <numbers>
#include <string>

#include <Eigen/Core>

#include "rose/errors.hpp"

namespace rose {

inline constexpr int kStateDim = 5;
inline constexpr int kMeasDim = 2;

using Vector2 = Eigen::Matrix<double, 2, 1>;
using Vector5 = Eigen::Matrix<double, kStateDim, 1>;
using SquareMatrix2 = Eigen::Matrix<double, 2, 2>;
using SquareMatrix5 = Eigen::Matrix<double, kStateDim, kStateDim>;
using Matrix2x5 = Eigen::Matrix<double, kMeasDim, kStateDim>;
using Matrix5x2 = Eigen::Matrix<double, kStateDim, kMeasDim>;

/// Indices into the stacked Vector5 representation.
enum StateIndex : int { kX = 0, kY = 1, kAlpha = 2, kKappa = 3, kV = 4 };

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
    detail::require(std::isfinite(a), "wrap_angle: non-finite angle");
    constexpr double two_pi = 2.0 * std::numbers::pi;
    double r = std::remainder(a, two_pi);
    if (r <= -std::numbers::pi) r += two_pi;
    return r;
}

struct StateVector {
    double x = 0.0;      ///< east [m]
    double y = 0.0;      ///< north [m]
    double alpha = 0.0;  ///< heading [rad], see file comment
    double kappa = 0.0;  ///< path curvature [1/m]
    double v = 0.0;      ///< speed [m/s]

    Vector5 to_vector() const { return Vector5(x, y, alpha, kappa, v); }

    static StateVector from_vector(const Vector5& s) {
        return {s[kX], s[kY], s[kAlpha], s[kKappa], s[kV]};
    }

    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(alpha) &&
               std::isfinite(kappa) && std::isfinite(v);
    }

    friend bool operator==(const StateVector&, const StateVector&) = default;
};

/// Timestamped 2D position fix; the filter's only input.
struct Measurement {
    double t = 0.0;  ///< [s]
    double x = 0.0;  ///< [m]
    double y = 0.0;  ///< [m]

    Vector2 position() const { return Vector2(x, y); }

    friend bool operator==(const Measurement&, const Measurement&) = default;
};

namespace detail {

inline void check_state_step(const StateVector& s, double dt, const char* who) {
    require(s.finite(), std::string(who) + ": non-finite state");
    require(std::isfinite(dt) && dt > 0.0, std::string(who) + ": dt must be finite and > 0");
}

}  // namespace detail

/// One step of the small-angle circular-path model.
inline StateVector predict_state(const StateVector& s, double dt) {
    detail::check_state_step(s, dt, "predict_state");
    const double ds = s.v * dt;
    return {
        s.x - ds * std::sin(s.alpha),
        s.y + ds * std::cos(s.alpha),
        wrap_angle(s.alpha + ds * s.kappa),
        s.kappa,
        s.v,
    };
}

/// d(predict_state)/d(state), evaluated at s.
inline SquareMatrix5 jacobian_A(const StateVector& s, double dt) {
    detail::check_state_step(s, dt, "jacobian_A");
    const double sa = std::sin(s.alpha);
    const double ca = std::cos(s.alpha);
    SquareMatrix5 a = SquareMatrix5::Identity();
    a(kX, kAlpha) = -s.v * dt * ca;
    a(kX, kV) = -dt * sa;
    a(kY, kAlpha) = -s.v * dt * sa;
    a(kY, kV) = dt * ca;
    a(kAlpha, kKappa) = s.v * dt;
    a(kAlpha, kV) = dt * s.kappa;
    return a;
}

/// Position-only measurement model.
inline Matrix2x5 jacobian_C() {
    Matrix2x5 c = Matrix2x5::Zero();
    c(0, kX) = 1.0;
    c(1, kY) = 1.0;
    return c;
}

inline Vector2 measure(const StateVector& s) {
    detail::require(s.finite(), "measure: non-finite state");
    return Vector2(s.x, s.y);
}

}  // namespace rose
