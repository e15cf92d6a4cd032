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

// Subcommand implementations, kept out of main() so tests can drive them.
// Exit codes: 0 success, 1 runtime or numerical failure, 2 usage or config error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "log.hpp"
#include "rose/adaptive_noise.hpp"
#include "rose/errors.hpp"
#include "rose/evaluation.hpp"
#include "rose/gain_oracle.hpp"
#include "rose/io/config.hpp"
#include "rose/io/csv.hpp"
#include "rose/io/report.hpp"
#include "rose/pipeline.hpp"
#include "rose/scenario.hpp"

namespace rose::cli {

namespace fs = std::filesystem;

enum ExitCode : int { kOk = 0, kRuntimeFailure = 1, kUsageError = 2 };

/// I/O failure (missing input, unwritable output).
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SimulateOptions {
    std::optional<fs::path> config;
    std::uint64_t seed = 42;
    fs::path out_truth;
    fs::path out_meas;
};

struct RunOptions {
    fs::path meas;
    std::optional<std::string> mode;  ///< overrides filter.mode
    std::optional<fs::path> config;
    fs::path out;
};

struct CompareOptions {
    fs::path truth;
    fs::path meas;
    std::optional<fs::path> config;
    fs::path report;
    std::optional<fs::path> plot_dir;
};

struct GainCheckOptions {
    double lambda = 0.0;
    double dt = 0.0;
    double tol = 1e-6;
};

/// Convergence threshold handed to the Riccati iteration by gain-check.
inline constexpr double kOracleTolerance = 1e-13;

namespace detail {

inline std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    if (!is) throw IoError("cannot read '" + p.string() + "'");
    return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

inline io::RunConfig load_config(const std::optional<fs::path>& p) {
    if (!p) return {};
    try {
        return io::parse_config(slurp(*p));
    } catch (const io::ConfigError& e) {
        throw io::ConfigError(p->string() + ": " + e.what());
    }
}

template <typename Reader>
auto read_csv(const fs::path& p, Reader reader) {
    std::istringstream is(slurp(p));
    try {
        return reader(is);
    } catch (const io::CsvError& e) {
        throw io::CsvError(e.line(), p.string() + ": " + e.what());
    }
}

inline std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream os(p, std::ios::binary);
    if (!os) throw IoError("cannot write '" + p.string() + "'");
    return os;
}

inline void write_manifest(const io::RunManifest& m, const fs::path& output) {
    auto os = open_out(io::manifest_path(output));
    os << io::to_json(m).dump(2) << '\n';
}

inline FilterConfig with_mode(FilterConfig f, FilterMode mode) {
    f.mode = mode;
    return f;
}

/// Maps exceptions to exit codes; returns kOk when fn returns normally.
template <typename Fn>
int guarded(const Logger& log, Fn&& fn) {
    try {
        fn();
        return kOk;
    } catch (const SequencingError& e) {
        log.error("row " + std::to_string(e.index() + 1) + " (line " + std::to_string(e.index() + 2) +
                  "): " + e.what());
        return kUsageError;
    } catch (const InvalidArgument& e) {
        log.error(e.what());
        return kUsageError;
    } catch (const NumericalError& e) {
        log.error(std::string("numerical failure: ") + e.what());
        return kRuntimeFailure;
    } catch (const std::exception& e) {
        log.error(e.what());
        return kRuntimeFailure;
    }
}

}  // namespace detail

inline int cmd_simulate(const SimulateOptions& opt, const Logger& log) {
    return detail::guarded(log, [&] {
        const auto cfg = detail::load_config(opt.config);
        log.info("simulating " + std::to_string(cfg.scenario.duration()) + " s, seed " +
                 std::to_string(opt.seed));
        const auto sim = generate(cfg.scenario, opt.seed);
        {
            auto os = detail::open_out(opt.out_truth);
            io::write_truth(os, sim.truth);
        }
        {
            auto os = detail::open_out(opt.out_meas);
            io::write_measurements(os, sim.meas);
        }
        io::RunManifest m{"simulate", io::to_json(cfg), opt.seed, {}, {}};
        if (opt.config) m.inputs["config"] = opt.config->string();
        m.outputs = {{"truth", opt.out_truth.string()}, {"meas", opt.out_meas.string()}};
        detail::write_manifest(m, opt.out_truth);
        detail::write_manifest(m, opt.out_meas);
        log.debug("wrote " + std::to_string(sim.meas.size()) + " samples");
    });
}

inline int cmd_run(const RunOptions& opt, const Logger& log) {
    return detail::guarded(log, [&] {
        auto cfg = detail::load_config(opt.config);
        if (opt.mode) {
            if (*opt.mode == "rose") {
                cfg.filter.mode = FilterMode::rose;
            } else if (*opt.mode == "static") {
                cfg.filter.mode = FilterMode::fixed;
            } else {
                throw InvalidArgument("--mode: expected rose or static, got '" + *opt.mode + "'");
            }
        }
        const auto meas = detail::read_csv(opt.meas, io::read_measurements);
        log.info(std::string("running ") + to_string(cfg.filter.mode) + " filter over " +
                 std::to_string(meas.size()) + " measurements");
        const auto out = run(cfg.filter, meas);

        std::vector<io::EstimateRow> rows;
        rows.reserve(out.size());
        for (const auto& o : out) rows.push_back(io::to_row(o));
        {
            auto os = detail::open_out(opt.out);
            io::write_estimates(os, rows);
        }
        io::RunManifest m{"run", io::to_json(cfg), std::nullopt, {}, {}};
        m.inputs["meas"] = opt.meas.string();
        if (opt.config) m.inputs["config"] = opt.config->string();
        m.outputs["estimates"] = opt.out.string();
        detail::write_manifest(m, opt.out);
    });
}

inline int cmd_compare(const CompareOptions& opt, const Logger& log) {
    return detail::guarded(log, [&] {
        const auto cfg = detail::load_config(opt.config);
        const auto truth = detail::read_csv(opt.truth, io::read_truth);
        const auto meas = detail::read_csv(opt.meas, io::read_measurements);
        if (truth.size() != meas.size()) {
            throw InvalidArgument("truth has " + std::to_string(truth.size()) +
                                  " rows but measurements have " + std::to_string(meas.size()));
        }
        for (std::size_t i = 0; i < truth.size(); ++i) {
            if (std::abs(truth[i].t - meas[i].t) > kAlignTolerance) {
                throw InvalidArgument("row " + std::to_string(i + 1) + ": truth t=" +
                                      io::format_double(truth[i].t) + " but measurement t=" +
                                      io::format_double(meas[i].t));
            }
        }

        const auto ekf = run(detail::with_mode(cfg.filter, FilterMode::fixed), meas);
        const auto adaptive = run(detail::with_mode(cfg.filter, FilterMode::rose), meas);
        const auto report = compare(truth, ekf, adaptive);
        {
            auto os = detail::open_out(opt.report);
            os << io::to_json(report).dump(2) << '\n';
        }
        log.info("improvement avg " + io::format_double(report.improvement_avg) + " %");

        io::RunManifest m{"compare", io::to_json(cfg), std::nullopt, {}, {}};
        m.inputs = {{"truth", opt.truth.string()}, {"meas", opt.meas.string()}};
        if (opt.config) m.inputs["config"] = opt.config->string();
        m.outputs["report"] = opt.report.string();
        if (opt.plot_dir) {
            for (const auto& p : io::write_plot_data(*opt.plot_dir, truth, meas, ekf, adaptive)) {
                m.outputs[p.filename().string()] = p.string();
            }
        }
        detail::write_manifest(m, opt.report);
    });
}

/// Prints the closed-form and brute-force gains; fails when they differ by >= tol.
inline int cmd_gain_check(const GainCheckOptions& opt, std::ostream& out, const Logger& log) {
    int code = kOk;
    const int guard = detail::guarded(log, [&] {
        if (!(opt.lambda >= 0.0) || !(opt.dt > 0.0) || !(opt.tol >= 0.0) || !std::isfinite(opt.lambda) ||
            !std::isfinite(opt.dt) || !std::isfinite(opt.tol)) {
            throw InvalidArgument("gain-check: need lambda >= 0, dt > 0, tol >= 0");
        }
        const Vector2 closed = steady_state_gain(opt.lambda, opt.dt);
        const double q = (opt.lambda / opt.dt) * (opt.lambda / opt.dt);
        const Eigen::Vector2d oracle = riccati_gain_oracle(q, 1.0, opt.dt, kOracleTolerance);
        const double diff = (closed - oracle).cwiseAbs().maxCoeff();
        out << "closed_form " << io::format_double(closed[0]) << ' ' << io::format_double(closed[1]) << '\n'
            << "riccati " << io::format_double(oracle[0]) << ' ' << io::format_double(oracle[1]) << '\n'
            << "max_abs_diff " << io::format_double(diff) << '\n';
        if (!(diff < opt.tol)) {
            log.error("gain mismatch " + io::format_double(diff) + " >= tol " + io::format_double(opt.tol));
            code = kRuntimeFailure;
        }
    });
    return guard != kOk ? guard : code;
}

}  // namespace rose::cli
