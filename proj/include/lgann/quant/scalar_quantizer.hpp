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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lgann/core/dataset.hpp"
#include "lgann/core/error.hpp"

namespace lgann {

/*
 * Truncated scalar quantization.
 *
 * Each dimension d is mapped onto [lower[d], upper[d]] where the bounds are
 * order statistics of the training values rather than the raw min/max, so a
 * handful of outliers cannot stretch the range. Values outside the range are
 * clamped; the range is split uniformly into 2^bits - 1 steps.
 */
struct QuantizerModel {
    std::uint32_t bits{8};
    std::vector<float> lower;
    std::vector<float> upper;
    // Quantile used at training time. Not persisted in code files.
    std::optional<double> quantile;

    std::size_t
    dim() const noexcept {
        return lower.size();
    }

    std::uint32_t
    max_code() const noexcept {
        return (1U << bits) - 1U;
    }

    std::size_t
    code_len_bytes() const noexcept {
        return (dim() * bits + 7) / 8;
    }

    bool
    is_constant(std::size_t d) const noexcept {
        return upper[d] == lower[d];
    }

    float
    step(std::size_t d) const noexcept {
        return (upper[d] - lower[d]) / static_cast<float>(max_code());
    }

    /// sqrt(sum_d (step_d / 2)^2): worst-case distance between an in-range
    /// value and its reconstruction.
    double
    reconstruction_error_bound() const noexcept {
        double acc = 0.0;
        for (std::size_t d = 0; d < dim(); ++d) {
            const double half = 0.5 * static_cast<double>(step(d));
            acc += half * half;
        }
        return std::sqrt(acc);
    }

    friend bool
    operator==(const QuantizerModel& a, const QuantizerModel& b) = default;
};

inline void
check_bits(std::uint32_t bits) {
    if (bits != 4 && bits != 8) {
        fail(ErrorType::kInvalidArgument, "quantizer bits must be 4 or 8, got ", bits);
    }
}

namespace detail {

// floor(q * (n - 1)) with a small guard so products that are integers in exact
// arithmetic do not round down.
inline std::size_t
order_statistic_index(double q, std::size_t n) {
    const double pos = q * static_cast<double>(n - 1);
    const auto idx = static_cast<std::size_t>(std::floor(pos + 1e-9));
    return std::min(idx, n - 1);
}

}  // namespace detail

inline QuantizerModel
train_quantizer(const Dataset& dataset, std::uint32_t bits, double quantile) {
    if (dataset.empty()) {
        fail(ErrorType::kInvalidArgument, "cannot train a quantizer on an empty dataset");
    }
    check_bits(bits);
    if (!(quantile > 0.5 && quantile <= 1.0)) {
        fail(ErrorType::kInvalidArgument, "quantile must lie in (0.5, 1.0], got ", quantile);
    }
    const std::size_t n = dataset.size();
    const std::size_t dim = dataset.dim();
    const std::size_t lo_idx = detail::order_statistic_index(1.0 - quantile, n);
    const std::size_t hi_idx = detail::order_statistic_index(quantile, n);

    QuantizerModel model;
    model.bits = bits;
    model.quantile = quantile;
    model.lower.resize(dim);
    model.upper.resize(dim);
    std::vector<float> column(n);
    for (std::size_t d = 0; d < dim; ++d) {
        for (std::size_t i = 0; i < n; ++i) {
            column[i] = dataset[i][d];
        }
        std::sort(column.begin(), column.end());
        model.lower[d] = column[lo_idx];
        model.upper[d] = column[hi_idx];
    }
    return model;
}

namespace detail {

inline std::uint32_t
quantize_value(const QuantizerModel& model, std::size_t d, float value) noexcept {
    if (model.is_constant(d)) {
        return 0;
    }
    const double lo = model.lower[d];
    const double hi = model.upper[d];
    const double clamped = std::clamp(static_cast<double>(value), lo, hi);
    // std::lround rounds half away from zero.
    const long code = std::lround((clamped - lo) / (hi - lo) * static_cast<double>(model.max_code()));
    return static_cast<std::uint32_t>(std::clamp<long>(code, 0, model.max_code()));
}

inline std::uint32_t
code_at(std::span<const std::uint8_t> code, std::size_t d, std::uint32_t bits) noexcept {
    if (bits == 8) {
        return code[d];
    }
    const std::uint8_t byte = code[d >> 1];
    return (d & 1) != 0 ? static_cast<std::uint32_t>(byte >> 4) : static_cast<std::uint32_t>(byte & 0x0F);
}

}  // namespace detail

/// Writes the code of `v` into `out` (code_len_bytes long). Low nibble first for 4-bit codes.
inline void
encode_into(const QuantizerModel& model, std::span<const float> v, std::span<std::uint8_t> out) {
    check_dims(v.size(), model.dim());
    if (out.size() != model.code_len_bytes()) {
        fail(ErrorType::kInvalidArgument, "code buffer of ", out.size(), " bytes, expected ",
             model.code_len_bytes());
    }
    std::fill(out.begin(), out.end(), std::uint8_t{0});
    for (std::size_t d = 0; d < v.size(); ++d) {
        const std::uint32_t c = detail::quantize_value(model, d, v[d]);
        if (model.bits == 8) {
            out[d] = static_cast<std::uint8_t>(c);
        } else {
            out[d >> 1] |= static_cast<std::uint8_t>((d & 1) != 0 ? (c << 4) : c);
        }
    }
}

inline std::vector<std::uint8_t>
encode(const QuantizerModel& model, std::span<const float> v) {
    std::vector<std::uint8_t> out(model.code_len_bytes());
    encode_into(model, v, out);
    return out;
}

inline std::vector<float>
decode(const QuantizerModel& model, std::span<const std::uint8_t> code) {
    if (code.size() != model.code_len_bytes()) {
        fail(ErrorType::kInvalidArgument, "code of ", code.size(), " bytes, expected ",
             model.code_len_bytes());
    }
    std::vector<float> out(model.dim());
    for (std::size_t d = 0; d < out.size(); ++d) {
        if (model.is_constant(d)) {
            out[d] = model.lower[d];
        } else {
            out[d] = model.lower[d] + static_cast<float>(detail::code_at(code, d, model.bits)) * model.step(d);
        }
    }
    return out;
}

}  // namespace lgann
