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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rose {

/// Precondition violation: bad dimensions, non-finite input, dt <= 0, ...
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A linear-algebra step failed (singular or ill-conditioned matrix, non-finite result).
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative routine hit its iteration cap.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Measurements arrived out of time order.
class SequencingError : public std::runtime_error {
public:
    SequencingError(std::size_t index, const std::string& what)
        : std::runtime_error(what), index_(index) {}

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
    if (!condition) throw InvalidArgument(message);
}

}  // namespace detail

}  // namespace rose
