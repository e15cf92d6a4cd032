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

// Simulates the reference drive, filters it with and without noise adaptation
// and prints the RMS errors of both.

#include <cstdio>

#include "rose/evaluation.hpp"
#include "rose/pipeline.hpp"
#include "rose/scenario.hpp"

int main() {
    const auto sim = rose::generate(rose::reference_scenario(), 7);

    rose::FilterConfig cfg;
    const auto adaptive = rose::run(cfg, sim.meas);
    cfg.mode = rose::FilterMode::fixed;
    const auto fixed = rose::run(cfg, sim.meas);

    const auto rep = rose::compare(sim.truth, fixed, adaptive);
    std::printf("%-10s %9s %12s %10s %9s\n", "", "position", "orientation", "curvature", "velocity");
    std::printf("%-10s %9.3f %12.3f %10.3f %9.3f\n", "static R", rep.ekf.position,
                rep.ekf.orientation, rep.ekf.curvature, rep.ekf.velocity);
    std::printf("%-10s %9.3f %12.3f %10.3f %9.3f\n", "adaptive", rep.rose.position,
                rep.rose.orientation, rep.rose.curvature, rep.rose.velocity);
    std::printf("%-10s %8.1f%% %11.1f%% %9.1f%% %8.1f%%   (avg %.1f%%)\n", "improve",
                rep.improvement_pct[0], rep.improvement_pct[1], rep.improvement_pct[2],
                rep.improvement_pct[3], rep.improvement_avg);
}
