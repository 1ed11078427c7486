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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "lgann/core/dataset.hpp"
#include "lgann/core/types.hpp"
#include "lgann/quant/scalar_quantizer.hpp"

namespace lgann {

/// Query transformed so the asymmetric distance to a code needs no decoded
/// vector: for L2 it holds (q - lower) and the per-dimension step, for inner
/// product it holds q * step and the constant -q.lower.
struct LowPrecQuery {
    Metric metric{Metric::kSquaredEuclidean};
    std::uint32_t bits{8};
    std::size_t code_len{0};
    std::vector<float> shifted;  // l2: q - lower; ip: q * step
    std::vector<float> step;     // l2 only
    float bias{0.0F};            // ip only: q . lower
};

inline LowPrecQuery
prepare_query_lowprec(const QuantizerModel& model, std::span<const float> q,
                      Metric metric = Metric::kSquaredEuclidean) {
    check_dims(q.size(), model.dim());
    check_finite(q);
    LowPrecQuery lpq;
    lpq.metric = metric;
    lpq.bits = model.bits;
    lpq.code_len = model.code_len_bytes();
    lpq.shifted.resize(q.size());
    if (metric == Metric::kSquaredEuclidean) {
        lpq.step.resize(q.size());
        for (std::size_t d = 0; d < q.size(); ++d) {
            lpq.shifted[d] = q[d] - model.lower[d];
            lpq.step[d] = model.step(d);
        }
    } else {
        double bias = 0.0;
        for (std::size_t d = 0; d < q.size(); ++d) {
            lpq.shifted[d] = q[d] * model.step(d);
            bias += static_cast<double>(q[d]) * static_cast<double>(model.lower[d]);
        }
        lpq.bias = static_cast<float>(bias);
    }
    return lpq;
}

namespace kernels {

template <std::uint32_t Bits>
inline float
sq_l2(const LowPrecQuery& lpq, const std::uint8_t* code) noexcept {
    const std::size_t dim = lpq.shifted.size();
    const float* qs = lpq.shifted.data();
    const float* st = lpq.step.data();
    if constexpr (Bits == 8) {
        constexpr std::size_t kLanes = 8;
        float lane[kLanes] = {};
        std::size_t d = 0;
        for (; d + kLanes <= dim; d += kLanes) {
            for (std::size_t l = 0; l < kLanes; ++l) {
                const float diff = qs[d + l] - static_cast<float>(code[d + l]) * st[d + l];
                lane[l] += diff * diff;
            }
        }
        float tail = 0.0F;
        for (; d < dim; ++d) {
            const float diff = qs[d] - static_cast<float>(code[d]) * st[d];
            tail += diff * diff;
        }
        return ((lane[0] + lane[4]) + (lane[1] + lane[5])) + ((lane[2] + lane[6]) + (lane[3] + lane[7])) + tail;
    } else {
        float acc[2] = {0.0F, 0.0F};
        std::size_t d = 0;
        for (; d + 2 <= dim; d += 2) {
            const std::uint8_t byte = code[d >> 1];
            const float lo = qs[d] - static_cast<float>(byte & 0x0F) * st[d];
            const float hi = qs[d + 1] - static_cast<float>(byte >> 4) * st[d + 1];
            acc[0] += lo * lo;
            acc[1] += hi * hi;
        }
        if (d < dim) {
            const float lo = qs[d] - static_cast<float>(code[d >> 1] & 0x0F) * st[d];
            acc[0] += lo * lo;
        }
        return acc[0] + acc[1];
    }
}

template <std::uint32_t Bits>
inline float
sq_ip(const LowPrecQuery& lpq, const std::uint8_t* code) noexcept {
    const std::size_t dim = lpq.shifted.size();
    const float* qs = lpq.shifted.data();
    double acc = lpq.bias;
    for (std::size_t d = 0; d < dim; ++d) {
        acc += static_cast<double>(qs[d]) *
               static_cast<double>(detail::code_at({code, lpq.code_len}, d, Bits));
    }
    return static_cast<float>(-acc);
}

inline float
lowprec_distance_unchecked(const LowPrecQuery& lpq, const std::uint8_t* code) noexcept {
    if (lpq.metric == Metric::kSquaredEuclidean) {
        return lpq.bits == 8 ? sq_l2<8>(lpq, code) : sq_l2<4>(lpq, code);
    }
    return lpq.bits == 8 ? sq_ip<8>(lpq, code) : sq_ip<4>(lpq, code);
}

}  // namespace kernels

/// Distance between the full-precision query and the decoded code.
inline float
lowprec_distance(const LowPrecQuery& lpq, std::span<const std::uint8_t> code) {
    if (code.size() != lpq.code_len) {
        fail(ErrorType::kInvalidArgument, "code of ", code.size(), " bytes, expected ", lpq.code_len);
    }
    return kernels::lowprec_distance_unchecked(lpq, code.data());
}

}  // namespace lgann
