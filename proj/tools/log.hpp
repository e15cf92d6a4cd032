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

#include <cstdlib>
#include <iostream>
#include <string>
#include <string_view>

namespace rose::cli {

enum class LogLevel { error = 0, info = 1, debug = 2 };

/// Diagnostics to stderr, filtered by ROSE_EKF_LOG (error | info | debug).
class Logger {
public:
    explicit Logger(LogLevel level = LogLevel::error, std::ostream& sink = std::cerr)
        : level_(level), sink_(&sink) {}

    static Logger from_env() {
        const char* env = std::getenv("ROSE_EKF_LOG");
        const std::string_view v = env ? env : "";
        if (v == "debug") return Logger(LogLevel::debug);
        if (v == "info") return Logger(LogLevel::info);
        return Logger(LogLevel::error);
    }

    void error(std::string_view msg) const { write(LogLevel::error, "error", msg); }
    void info(std::string_view msg) const { write(LogLevel::info, "info", msg); }
    void debug(std::string_view msg) const { write(LogLevel::debug, "debug", msg); }

private:
    void write(LogLevel at, std::string_view tag, std::string_view msg) const {
        if (static_cast<int>(at) <= static_cast<int>(level_)) {
            *sink_ << "rose_ekf [" << tag << "] " << msg << '\n';
        }
    }

    LogLevel level_;
    std::ostream* sink_;
};

}  // namespace rose::cli
