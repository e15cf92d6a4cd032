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

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "log.hpp"
#include "rose/version.hpp"

int main(int argc, char** argv) {
    using namespace rose::cli;

    CLI::App app{"Adaptive-R extended Kalman filter for 2D positioning"};
    app.set_version_flag("--version", std::string(rose::kVersion));
    app.require_subcommand(1);

    SimulateOptions sim;
    std::string sim_config;
    auto* simulate = app.add_subcommand("simulate", "Generate ground truth and noisy measurements");
    simulate->add_option("--config", sim_config, "JSON config (default: built-in reference scenario)");
    simulate->add_option("--seed", sim.seed, "PRNG seed")->capture_default_str();
    simulate->add_option("--out-truth", sim.out_truth, "Truth CSV to write")->required();
    simulate->add_option("--out-meas", sim.out_meas, "Measurement CSV to write")->required();

    RunOptions run;
    std::string run_config, run_mode;
    auto* run_cmd = app.add_subcommand("run", "Filter a measurement CSV");
    run_cmd->add_option("--meas", run.meas, "Measurement CSV")->required();
    run_cmd->add_option("--mode", run_mode, "rose or static (overrides filter.mode)");
    run_cmd->add_option("--config", run_config, "JSON config");
    run_cmd->add_option("--out", run.out, "Estimate CSV to write")->required();

    CompareOptions cmp;
    std::string cmp_config, cmp_plot;
    auto* compare = app.add_subcommand("compare", "Static-R EKF vs adaptive filter RMS comparison");
    compare->add_option("--truth", cmp.truth, "Truth CSV")->required();
    compare->add_option("--meas", cmp.meas, "Measurement CSV")->required();
    compare->add_option("--config", cmp_config, "JSON config");
    compare->add_option("--report", cmp.report, "JSON report to write")->required();
    compare->add_option("--plot-dir", cmp_plot, "Directory for plot CSVs");

    GainCheckOptions gain;
    auto* gain_check = app.add_subcommand("gain-check", "Closed-form vs Riccati tracker gain");
    gain_check->add_option("--lambda", gain.lambda, "Tracking index")->required();
    gain_check->add_option("--dt", gain.dt, "Sample interval [s]")->required();
    gain_check->add_option("--tol", gain.tol, "Max allowed difference")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsageError;
    }

    const Logger log = Logger::from_env();
    if (*simulate) {
        if (!sim_config.empty()) sim.config = sim_config;
        return cmd_simulate(sim, log);
    }
    if (*run_cmd) {
        if (!run_config.empty()) run.config = run_config;
        if (!run_mode.empty()) run.mode = run_mode;
        return cmd_run(run, log);
    }
    if (*compare) {
        if (!cmp_config.empty()) cmp.config = cmp_config;
        if (!cmp_plot.empty()) cmp.plot_dir = cmp_plot;
        return cmd_compare(cmp, log);
    }
    return cmd_gain_check(gain, std::cout, log);
}
