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
#include <cstddef>
#include <span>
#include <vector>

#include "lgann/core/dataset.hpp"
#include "lgann/core/error.hpp"
#include "lgann/core/types.hpp"

namespace lgann {

// Above this dimension kernels accumulate in double.
inline constexpr std::size_t kWideAccumulationDim = 1024;

namespace kernels {

inline float
l2_sqr(const float* a, const float* b, std::size_t dim) noexcept {
    if (dim > kWideAccumulationDim) {
        double acc = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            const double diff = static_cast<double>(a[i]) - static_cast<double>(b[i]);
            acc += diff * diff;
        }
        return static_cast<float>(acc);
    }
    float acc[4] = {0.0F, 0.0F, 0.0F, 0.0F};
    std::size_t i = 0;
    for (; i + 4 <= dim; i += 4) {
        for (std::size_t l = 0; l < 4; ++l) {
            const float diff = a[i + l] - b[i + l];
            acc[l] += diff * diff;
        }
    }
    for (; i < dim; ++i) {
        const float diff = a[i] - b[i];
        acc[0] += diff * diff;
    }
    return (acc[0] + acc[1]) + (acc[2] + acc[3]);
}

inline double
dot(const float* a, const float* b, std::size_t dim) noexcept {
    if (dim > kWideAccumulationDim) {
        double acc = 0.0;
        for (std::size_t i = 0; i < dim; ++i) {
            acc += static_cast<double>(a[i]) * static_cast<double>(b[i]);
        }
        return acc;
    }
    float acc[4] = {0.0F, 0.0F, 0.0F, 0.0F};
    std::size_t i = 0;
    for (; i + 4 <= dim; i += 4) {
        for (std::size_t l = 0; l < 4; ++l) {
            acc[l] += a[i + l] * b[i + l];
        }
    }
    for (; i < dim; ++i) {
        acc[0] += a[i] * b[i];
    }
    return static_cast<double>((acc[0] + acc[1]) + (acc[2] + acc[3]));
}

inline float
metric_distance(const float* a, const float* b, std::size_t dim, Metric metric) noexcept {
    if (metric == Metric::kInnerProduct) {
        return static_cast<float>(-dot(a, b, dim));
    }
    return l2_sqr(a, b, dim);
}

}  // namespace kernels

/// Full-precision distance. Squared Euclidean, or the negated dot product for
/// inner product, so that smaller always means nearer.
inline float
exact_distance(std::span<const float> a, std::span<const float> b, Metric metric) {
    check_dims(a.size(), b.size());
    check_finite(a);
    check_finite(b);
    return kernels::metric_distance(a.data(), b.data(), a.size(), metric);
}

inline float
squared_norm(std::span<const float> v) noexcept {
    return static_cast<float>(kernels::dot(v.data(), v.data(), v.size()));
}

inline std::vector<float>
precompute_base_norms(const Dataset& dataset) {
    if (dataset.empty()) {
        fail(ErrorType::kInvalidArgument, "cannot precompute norms of an empty dataset");
    }
    std::vector<float> norms(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        norms[i] = squared_norm(dataset[i]);
    }
    return norms;
}

/// Query copy plus its squared norm, computed once before a search.
class PreparedQuery {
public:
    PreparedQuery(std::span<const float> query, Metric metric)
        : query_(query.begin(), query.end()), norm_sq_(squared_norm(query)), metric_(metric) {
        check_finite(query);
    }

    std::span<const float>
    query() const noexcept {
        return query_;
    }

    float
    query_norm_sq() const noexcept {
        return norm_sq_;
    }

    Metric
    metric() const noexcept {
        return metric_;
    }

    std::size_t
    dim() const noexcept {
        return query_.size();
    }

private:
    std::vector<float> query_;
    float norm_sq_;
    Metric metric_;
};

namespace kernels {

// ||b||^2 + ||q||^2 - 2 b.q, clamped at zero against cancellation.
inline float
decomposed_l2(const float* query, float query_norm_sq, const float* base, float base_norm_sq,
              std::size_t dim) noexcept {
    const double value = static_cast<double>(base_norm_sq) + static_cast<double>(query_norm_sq) -
                         2.0 * dot(base, query, dim);
    return static_cast<float>(std::max(0.0, value));
}

}  // namespace kernels

/// Distance through precomputed norms; for inner product this is just -b.q.
inline float
decomposed_distance(const PreparedQuery& prepared, std::span<const float> base, float base_norm_sq) {
    check_dims(prepared.dim(), base.size());
    if (prepared.metric() == Metric::kInnerProduct) {
        return static_cast<float>(-kernels::dot(base.data(), prepared.query().data(), base.size()));
    }
    return kernels::decomposed_l2(
        prepared.query().data(), prepared.query_norm_sq(), base.data(), base_norm_sq, base.size());
}

}  // namespace lgann
