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

// CSV interchange. Comma separated, mandatory header, '.' decimal point,
// LF line endings, doubles in shortest round-trip form (locale independent).

#include <charconv>
#include <cstddef>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "rose/errors.hpp"
#include "rose/model.hpp"
#include "rose/pipeline.hpp"
#include "rose/scenario.hpp"

namespace rose::io {

/// Malformed CSV input; line() is 1-based and counts the header.
class CsvError : public InvalidArgument {
public:
    CsvError(std::size_t line, const std::string& what)
        : InvalidArgument("line " + std::to_string(line) + ": " + what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

inline constexpr std::string_view kTruthHeader = "t,x,y,alpha,kappa,v";
inline constexpr std::string_view kMeasurementHeader = "t,x,y";
inline constexpr std::string_view kEstimateHeader =
    "t,x,y,alpha,kappa,v,p_x,p_y,p_alpha,p_kappa,p_v,r_x,r_y";

inline std::string format_double(double value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

inline bool parse_double(std::string_view text, double& out) {
    if (text.empty()) return false;
    const char* first = text.data();
    if (*first == '+') ++first;
    const auto res = std::from_chars(first, text.data() + text.size(), out);
    return res.ec == std::errc() && res.ptr == text.data() + text.size();
}

/// Row of an estimate file; FilterOutput minus the tracker expectation.
struct EstimateRow {
    double t = 0.0;
    StateVector state;
    Vector5 p_diag = Vector5::Zero();
    Vector2 r_used = Vector2::Zero();

    friend bool operator==(const EstimateRow&, const EstimateRow&) = default;
};

inline EstimateRow to_row(const FilterOutput& o) { return {o.t, o.state, o.p_diag, o.r_used}; }

namespace detail {

inline void write_row(std::ostream& os, std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) os << ',';
        os << format_double(values[i]);
    }
    os << '\n';
}

/// Reads every data row as `width` doubles after checking the header.
inline std::vector<std::vector<double>> read_table(std::istream& is, std::string_view header,
                                                   std::size_t width) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(is, line)) throw CsvError(1, "missing header, expected '" + std::string(header) + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header) {
        throw CsvError(1, "unexpected header '" + line + "', expected '" + std::string(header) + "'");
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<double> row;
        row.reserve(width);
        std::string_view rest(line);
        while (true) {
            const auto comma = rest.find(',');
            const auto field = rest.substr(0, comma);
            double v = 0.0;
            if (!parse_double(field, v)) {
                throw CsvError(lineno, "column " + std::to_string(row.size() + 1) +
                                           ": not a number '" + std::string(field) + "'");
            }
            row.push_back(v);
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (row.size() != width) {
            throw CsvError(lineno, "expected " + std::to_string(width) + " columns, got " +
                                       std::to_string(row.size()));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace detail

inline void write_measurements(std::ostream& os, std::span<const Measurement> meas) {
    os << kMeasurementHeader << '\n';
    for (const auto& m : meas) detail::write_row(os, std::vector<double>{m.t, m.x, m.y});
}

inline std::vector<Measurement> read_measurements(std::istream& is) {
    std::vector<Measurement> out;
    for (const auto& r : detail::read_table(is, kMeasurementHeader, 3)) out.push_back({r[0], r[1], r[2]});
    return out;
}

inline void write_truth(std::ostream& os, std::span<const GroundTruthSample> truth) {
    os << kTruthHeader << '\n';
    for (const auto& s : truth) {
        detail::write_row(os, std::vector<double>{s.t, s.x, s.y, s.alpha, s.kappa, s.v});
    }
}

inline std::vector<GroundTruthSample> read_truth(std::istream& is) {
    std::vector<GroundTruthSample> out;
    for (const auto& r : detail::read_table(is, kTruthHeader, 6)) {
        out.push_back({r[0], r[1], r[2], r[3], r[4], r[5]});
    }
    return out;
}

inline void write_estimates(std::ostream& os, std::span<const EstimateRow> rows) {
    os << kEstimateHeader << '\n';
    for (const auto& e : rows) {
        const auto& s = e.state;
        detail::write_row(os, std::vector<double>{e.t, s.x, s.y, s.alpha, s.kappa, s.v,
                                                  e.p_diag[0], e.p_diag[1], e.p_diag[2],
                                                  e.p_diag[3], e.p_diag[4], e.r_used[0],
                                                  e.r_used[1]});
    }
}

inline std::vector<EstimateRow> read_estimates(std::istream& is) {
    std::vector<EstimateRow> out;
    for (const auto& r : detail::read_table(is, kEstimateHeader, 13)) {
        EstimateRow e;
        e.t = r[0];
        e.state = {r[1], r[2], r[3], r[4], r[5]};
        e.p_diag << r[6], r[7], r[8], r[9], r[10];
        e.r_used << r[11], r[12];
        out.push_back(e);
    }
    return out;
}

}  // namespace rose::io
