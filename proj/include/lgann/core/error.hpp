// Copyright 2026-present the lgann project
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

#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace lgann {

enum class ErrorType {
    kInvalidArgument,
    kDimensionMismatch,
    kOutOfRange,
    kCorruptData,
    kIo,
    kUnsatisfiable,
};

inline const char*
to_string(ErrorType type) {
    switch (type) {
        case ErrorType::kInvalidArgument:
            return "invalid argument";
        case ErrorType::kDimensionMismatch:
            return "dimension mismatch";
        case ErrorType::kOutOfRange:
            return "out of range";
        case ErrorType::kCorruptData:
            return "corrupt data";
        case ErrorType::kIo:
            return "io error";
        case ErrorType::kUnsatisfiable:
            return "unsatisfiable";
    }
    return "unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorType type, const std::string& message)
        : std::runtime_error(std::string(to_string(type)) + ": " + message), type_(type), message_(message) {
    }

    /// The text without the error-type prefix.
    const std::string&
    message() const noexcept {
        return message_;
    }

    ErrorType
    type() const noexcept {
        return type_;
    }

private:
    ErrorType type_;
    std::string message_;
};

namespace detail {

template <typename... Args>
std::string
concat(Args&&... args) {
    std::ostringstream oss;
    (oss << ... << std::forward<Args>(args));
    return oss.str();
}

}  // namespace detail

template <typename... Args>
[[noreturn]] void
fail(ErrorType type, Args&&... args) {
    throw Error(type, detail::concat(std::forward<Args>(args)...));
}

inline void
check_dims(std::size_t lhs, std::size_t rhs) {
    if (lhs != rhs) {
        fail(ErrorType::kDimensionMismatch, "dimension ", lhs, " does not match dimension ", rhs);
    }
}

}  // namespace lgann
