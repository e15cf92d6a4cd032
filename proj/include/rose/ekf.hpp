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

// Extended Kalman filter recursion for the planar model in model.hpp.
//
//   K  = P C^T (C P C^T + R)^-1
//   x~ = x^ + K (y - h(x^))
//   P~ = (I - K C) P (I - K C)^T + K R K^T        (Joseph form)
//   x^' = f(x~)
//   P^' = A (P~ + Q) A^T
//
// Note the covariance prediction: Q is added to P~ *before* propagation
// through A, not after (the textbook A P A^T + Q). Tune Q accordingly.

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Core>

#include "rose/errors.hpp"
#include "rose/model.hpp"

namespace rose {

struct EkfState {
    StateVector x_hat;
    SquareMatrix5 P = SquareMatrix5::Identity();
};

struct ProcessNoise {
    SquareMatrix5 Q = SquareMatrix5::Zero();

    static ProcessNoise diagonal(const Vector5& d) { return {d.asDiagonal()}; }
};

struct MeasurementNoise {
    SquareMatrix2 R = SquareMatrix2::Identity();

    static MeasurementNoise diagonal(double rx, double ry) {
        return {Vector2(rx, ry).asDiagonal()};
    }
};

/// diag(10 m^2, 10 m^2, 1 rad^2, 0.1 (1/m)^2, 4 (m/s)^2)
inline SquareMatrix5 default_initial_covariance() {
    return Vector5(10.0, 10.0, 1.0, 0.1, 4.0).asDiagonal();
}

/// Per-step process noise; curvature nearly constant, speed allowed to drift.
inline ProcessNoise default_process_noise() {
    return ProcessNoise::diagonal(Vector5(1e-4, 1e-4, 1e-4, 1e-5, 1e-2));
}

/// Symmetric within `rel_tol` (relative to the largest entry) with a non-negative diagonal.
template <typename Derived>
bool is_valid_covariance(const Eigen::MatrixBase<Derived>& m, double rel_tol = 1e-9) {
    if (m.rows() != m.cols() || !m.allFinite()) return false;
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > rel_tol * scale) return false;
    return (m.diagonal().array() >= 0.0).all();
}

namespace detail {

template <typename Derived>
auto symmetrized(const Eigen::MatrixBase<Derived>& m) {
    using Plain = typename Derived::PlainObject;
    return Plain(0.5 * (m + m.transpose()));
}

inline constexpr double kMinInnovationDet = 1e-300;
inline constexpr double kMaxInnovationCond = 1e12;

}  // namespace detail

/// Inverse of a 2x2 innovation covariance via the adjugate.
/// Throws NumericalError if it is singular or its 1-norm condition number exceeds 1e12.
inline SquareMatrix2 invert_innovation(const SquareMatrix2& s) {
    const double det = s(0, 0) * s(1, 1) - s(0, 1) * s(1, 0);
    if (!std::isfinite(det) || std::abs(det) < detail::kMinInnovationDet) {
        throw NumericalError("innovation covariance S = C*P*C^T + R is singular (det=" +
                             std::to_string(det) + ")");
    }
    SquareMatrix2 inv;
    inv << s(1, 1), -s(0, 1), -s(1, 0), s(0, 0);
    inv /= det;
    const auto norm1 = [](const SquareMatrix2& m) {
        return m.cwiseAbs().colwise().sum().maxCoeff();
    };
    const double cond = norm1(s) * norm1(inv);
    if (!std::isfinite(cond) || cond > detail::kMaxInnovationCond) {
        throw NumericalError("innovation covariance S = C*P*C^T + R is ill-conditioned (cond=" +
                             std::to_string(cond) + ")");
    }
    return inv;
}

inline Matrix5x2 gain(const SquareMatrix5& p_pred, const Matrix2x5& c, const SquareMatrix2& r) {
    const SquareMatrix2 s = c * p_pred * c.transpose() + r;
    return p_pred * c.transpose() * invert_innovation(s);
}

/// Measurement update. The result's alpha is re-wrapped and its covariance symmetrized.
inline EkfState correct(const EkfState& e, const Vector2& y, const Matrix5x2& k,
                        const Matrix2x5& c, const SquareMatrix2& r) {
    detail::require(e.x_hat.finite() && y.allFinite() && k.allFinite() && r.allFinite(),
                    "correct: non-finite input");
    detail::require(is_valid_covariance(e.P), "correct: P is not a valid covariance");

    const Vector2 innovation = y - measure(e.x_hat);
    Vector5 x = e.x_hat.to_vector() + k * innovation;
    x[kAlpha] = wrap_angle(x[kAlpha]);

    const SquareMatrix5 i_kc = SquareMatrix5::Identity() - k * c;
    const SquareMatrix5 p = i_kc * e.P * i_kc.transpose() + k * r * k.transpose();

    EkfState out{StateVector::from_vector(x), detail::symmetrized(p)};
    if (!out.x_hat.finite() || !out.P.allFinite()) {
        throw NumericalError("correct: non-finite corrected state or covariance");
    }
    return out;
}

/// Time update over dt seconds.
inline EkfState predict(const EkfState& e, const ProcessNoise& q, double dt) {
    const SquareMatrix5 a = jacobian_A(e.x_hat, dt);
    const SquareMatrix5 p = a * (e.P + q.Q) * a.transpose();
    EkfState out{predict_state(e.x_hat, dt), detail::symmetrized(p)};
    if (!out.P.allFinite()) throw NumericalError("predict: non-finite covariance");
    return out;
}

struct StepResult {
    EkfState corrected;  ///< after the measurement update, at the measurement time
    EkfState predicted;  ///< propagated dt seconds past the measurement
};

/// gain -> correct -> predict.
inline StepResult step(const EkfState& e, const Measurement& m, const MeasurementNoise& r,
                       const ProcessNoise& q, double dt) {
    const Matrix2x5 c = jacobian_C();
    const Matrix5x2 k = gain(e.P, c, r.R);
    EkfState corrected = correct(e, m.position(), k, c, r.R);
    EkfState predicted = predict(corrected, q, dt);
    return {std::move(corrected), std::move(predicted)};
}

/// Two-point start: position from m1, speed and heading from the displacement m0 -> m1,
/// zero curvature. A zero displacement yields v = 0, alpha = 0.
inline EkfState init_from_measurements(const Measurement& m0, const Measurement& m1,
                                       const SquareMatrix5& p0) {
    detail::require(std::isfinite(m0.t) && std::isfinite(m1.t) && m1.t > m0.t,
                    "init_from_measurements: timestamps must be strictly increasing");
    detail::require(m0.position().allFinite() && m1.position().allFinite(),
                    "init_from_measurements: non-finite coordinates");
    detail::require(is_valid_covariance(p0), "init_from_measurements: P0 is not a valid covariance");

    const double dx = m1.x - m0.x;
    const double dy = m1.y - m0.y;
    const double dist = std::hypot(dx, dy);
    StateVector s;
    s.x = m1.x;
    s.y = m1.y;
    s.v = dist / (m1.t - m0.t);
    s.alpha = dist > 0.0 ? wrap_angle(std::atan2(-dx, dy)) : 0.0;
    s.kappa = 0.0;
    return {s, p0};
}

}  // namespace rose
