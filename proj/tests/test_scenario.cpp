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

#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "rose/scenario.hpp"

namespace rose {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(ExactArcStep, StraightLine) {
    const auto p = exact_arc_step(2.0, 3.0, 0.0, 1.0, 0.0, 1.0);
    EXPECT_EQ(p.x, 2.0);
    EXPECT_EQ(p.y, 4.0);
    EXPECT_EQ(p.alpha, 0.0);
}

TEST(ExactArcStep, QuarterCircle) {
    const auto p = exact_arc_step(0.0, 0.0, 0.0, kPi / 2, 1.0, 1.0);
    EXPECT_NEAR(p.x, -1.0, 1e-15);
    EXPECT_NEAR(p.y, 1.0, 1e-15);
    EXPECT_NEAR(p.alpha, kPi / 2, 1e-15);
}

TEST(ExactArcStep, ContinuousAtZeroCurvature) {
    for (double alpha : {0.0, 0.7, -2.5}) {
        const auto a = exact_arc_step(1.0, -1.0, alpha, 3.0, 1e-9, 0.5);
        const auto b = exact_arc_step(1.0, -1.0, alpha, 3.0, 0.0, 0.5);
        EXPECT_LT(std::hypot(a.x - b.x, a.y - b.y), 1e-8);
    }
}

TEST(ExactArcStep, ChordLength) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double kappa = u(rng);
        if (std::abs(kappa) < 1e-3) continue;
        const double v = 5.0 * (u(rng) + 1.0);
        const double dt = 0.5 * (u(rng) + 1.0) + 1e-3;
        const double alpha = kPi * u(rng);
        const auto p = exact_arc_step(0.0, 0.0, alpha, v, kappa, dt);
        const double chord = 2.0 / std::abs(kappa) * std::abs(std::sin(0.5 * v * dt * kappa));
        EXPECT_NEAR(std::hypot(p.x, p.y), chord, 1e-9 * std::max(chord, 1e-9));
    }
}

TEST(ExactArcStep, HalfStepsCompose) {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const double kappa = u(rng);
        const double v = 5.0 * (u(rng) + 1.0);
        const double dt = 0.5 * (u(rng) + 1.0) + 1e-3;
        const double alpha = kPi * u(rng);
        const auto whole = exact_arc_step(1.0, 2.0, alpha, v, kappa, dt);
        const auto half = exact_arc_step(1.0, 2.0, alpha, v, kappa, dt / 2);
        const auto two = exact_arc_step(half.x, half.y, half.alpha, v, kappa, dt / 2);
        EXPECT_NEAR(two.x, whole.x, 1e-9 * std::max(1.0, std::abs(whole.x)));
        EXPECT_NEAR(two.y, whole.y, 1e-9 * std::max(1.0, std::abs(whole.y)));
        EXPECT_NEAR(wrap_angle(two.alpha - whole.alpha), 0.0, 1e-9);
    }
}

TEST(ExactArcStep, RejectsBadInput) {
    EXPECT_THROW(exact_arc_step(0, 0, 0, 1, 0, 0), InvalidArgument);
    EXPECT_THROW(exact_arc_step(0, 0, 0, -1, 0, 1), InvalidArgument);
    EXPECT_THROW(exact_arc_step(NAN, 0, 0, 1, 0, 1), InvalidArgument);
}

Scenario simple(double sigma) {
    Scenario sc;
    sc.segments = {{5.0, 0.0, 1.0, 1.0}, {5.0, 0.2, 1.0, 3.0}};
    sc.noise = {{0.0, sigma, sigma}};
    return sc;
}

TEST(Generate, SampleGrid) {
    const auto sim = generate(simple(0.1), 1);
    ASSERT_EQ(sim.truth.size(), 101u);
    ASSERT_EQ(sim.meas.size(), 101u);
    for (std::size_t k = 0; k < sim.truth.size(); ++k) {
        EXPECT_EQ(sim.truth[k].t, 0.1 * static_cast<double>(k));
        EXPECT_EQ(sim.meas[k].t, sim.truth[k].t);
    }
    EXPECT_EQ(sim.truth.front().v, 1.0);
    EXPECT_DOUBLE_EQ(sim.truth.back().v, 3.0);
    EXPECT_EQ(sim.truth.back().kappa, 0.2);
}

TEST(Generate, Deterministic) {
    const auto a = generate(reference_scenario(), 77);
    const auto b = generate(reference_scenario(), 77);
    EXPECT_EQ(a.truth, b.truth);
    EXPECT_EQ(a.meas, b.meas);
    const auto c = generate(reference_scenario(), 78);
    EXPECT_EQ(a.truth, c.truth);
    EXPECT_NE(a.meas, c.meas);
}

TEST(Generate, ZeroNoiseMeasuresTruth) {
    const auto sim = generate(simple(0.0), 3);
    for (std::size_t k = 0; k < sim.truth.size(); ++k) {
        EXPECT_EQ(sim.meas[k].x, sim.truth[k].x);
        EXPECT_EQ(sim.meas[k].y, sim.truth[k].y);
    }
}

TEST(Generate, StraightConstantSpeed) {
    Scenario sc;
    sc.segments = {{10.0, 0.0, 2.0, 2.0}};
    sc.noise = {{0.0, 0.0, 0.0}};
    sc.alpha0 = kPi / 2;
    const auto sim = generate(sc, 0);
    for (const auto& g : sim.truth) {
        EXPECT_NEAR(g.x, -2.0 * g.t, 1e-12);
        EXPECT_NEAR(g.y, 0.0, 1e-12);
        EXPECT_NEAR(g.alpha, kPi / 2, 1e-15);
    }
}

TEST(Generate, ArcMatchesClosedForm) {
    Scenario sc;
    sc.segments = {{10.0, 0.25, 1.5, 1.5}};
    sc.noise = {{0.0, 0.0, 0.0}};
    const auto sim = generate(sc, 0);
    for (const auto& g : sim.truth) {
        const auto p = exact_arc_step(0, 0, 0, 1.5, 0.25, std::max(g.t, 1e-300));
        if (g.t == 0.0) continue;
        EXPECT_NEAR(g.x, p.x, 1e-10);
        EXPECT_NEAR(g.y, p.y, 1e-10);
        EXPECT_NEAR(wrap_angle(g.alpha - p.alpha), 0.0, 1e-10);
    }
}

TEST(Generate, NoiseVariance) {
    Scenario sc = simple(0.0);
    sc.segments = {{2000.0, 0.0, 1.0, 1.0}};
    sc.noise = {{0.0, 0.2, 0.2}, {1000.0, 0.5, 0.1}};
    const auto sim = generate(sc, 12);
    double sx1 = 0, sy1 = 0, sx2 = 0, sy2 = 0;
    std::size_t n1 = 0, n2 = 0;
    for (std::size_t k = 0; k < sim.truth.size(); ++k) {
        const double dx = sim.meas[k].x - sim.truth[k].x;
        const double dy = sim.meas[k].y - sim.truth[k].y;
        if (sim.truth[k].t < 1000.0) {
            sx1 += dx * dx, sy1 += dy * dy, ++n1;
        } else {
            sx2 += dx * dx, sy2 += dy * dy, ++n2;
        }
    }
    EXPECT_NEAR(sx1 / n1, 0.04, 0.004);
    EXPECT_NEAR(sy1 / n1, 0.04, 0.004);
    EXPECT_NEAR(sx2 / n2, 0.25, 0.025);
    EXPECT_NEAR(sy2 / n2, 0.01, 0.001);
}

TEST(Scenario, Validation) {
    Scenario sc = simple(0.1);
    sc.noise.front().t_from = 1.0;
    EXPECT_THROW(sc.validate(), InvalidArgument);
    sc = simple(0.1);
    sc.segments[1].duration = 0.0;
    EXPECT_THROW(sc.validate(), InvalidArgument);
    sc = simple(0.1);
    sc.segments.clear();
    EXPECT_THROW(generate(sc, 1), InvalidArgument);
}

TEST(ReferenceScenario, Shape) {
    const auto sc = reference_scenario();
    EXPECT_NEAR(sc.duration(), 100.0, 1e-9);
    EXPECT_EQ(sc.sample_dt, 0.1);
    double max_turn = 0.0;
    for (const auto& s : sc.segments) {
        EXPECT_LE(std::abs(s.kappa), 0.2);
        EXPECT_GE(std::min(s.speed_start, s.speed_end), 0.5);
        EXPECT_LE(std::max(s.speed_start, s.speed_end), 4.0);
        max_turn = std::max(max_turn, std::abs(s.kappa) * std::max(s.speed_start, s.speed_end) * sc.sample_dt);
    }
    EXPECT_LE(max_turn, 0.08);
    ASSERT_EQ(sc.noise.size(), 3u);
    EXPECT_EQ(sc.noise.front().sigma_x, 0.05);
    EXPECT_EQ(sc.noise.back().sigma_x, 0.4);
    EXPECT_LT(sc.noise[0].sigma_x, sc.noise[1].sigma_x);

    const auto sim = generate(sc, 42);
    EXPECT_EQ(sim.truth.size(), 1001u);
    for (const auto& g : sim.truth) {
        EXPECT_GE(g.v, 0.5 - 1e-12);
        EXPECT_LE(g.v, 4.0 + 1e-12);
    }
}

}  // namespace
}  // namespace rose
