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
#include <span>
#include <vector>

#include "lgann/core/dataset.hpp"
#include "lgann/core/distance.hpp"
#include "lgann/core/error.hpp"
#include "lgann/core/types.hpp"

namespace lgann {

struct RerankResult {
    std::vector<NodeId> ids;
    std::vector<float> dists;
    std::uint64_t exact_evaluations{0};
};

/// ceil(factor * k), never more than the pool.
inline std::size_t
rerank_budget(double factor, std::size_t k, std::size_t pool_size) {
    const auto want = static_cast<std::size_t>(std::ceil(factor * static_cast<double>(k) - 1e-9));
    return std::min(std::max(want, k), pool_size);
}

namespace detail {

// True once a candidate at low-precision distance `approx` can no longer beat
// the current k-th exact distance even with the worst reconstruction error.
inline bool
beyond_error_gap(float approx, float kth_exact, double bound, Metric metric) {
    constexpr double kSlack = 1e-5;
    if (metric == Metric::kInnerProduct) {
        const double limit = static_cast<double>(kth_exact) + bound;
        return static_cast<double>(approx) > limit + kSlack * (1.0 + std::abs(limit));
    }
    const double limit = std::sqrt(std::max(0.0, static_cast<double>(kth_exact))) + bound;
    return std::sqrt(std::max(0.0, static_cast<double>(approx))) > limit * (1.0 + kSlack) + kSlack;
}

}  // namespace detail

/*
 * Selective re-rank. `pool` is ordered by low-precision distance. At most
 * ceil(factor * k) of its nearest entries get an exact distance; scanning
 * stops early once the next low-precision distance is past the current k-th
 * exact distance by more than `error_bound`. Returns the k nearest by exact
 * distance, ascending (ties: lower id).
 */
inline RerankResult
selective_rerank(std::span<const Neighbor> pool,
                 std::span<const float> query,
                 const Dataset& dataset,
                 Metric metric,
                 std::size_t k,
                 double factor,
                 double error_bound) {
    if (pool.empty()) {
        fail(ErrorType::kInvalidArgument, "cannot re-rank an empty candidate pool");
    }
    if (k == 0) {
        fail(ErrorType::kInvalidArgument, "k must be positive");
    }
    check_dims(query.size(), dataset.dim());
    const std::size_t budget = rerank_budget(factor, k, pool.size());

    std::vector<Neighbor> exact;
    exact.reserve(budget);
    // max-heap by (dist, id) of the best k exact results so far
    std::vector<Neighbor> best;
    best.reserve(k + 1);
    for (std::size_t i = 0; i < budget; ++i) {
        if (best.size() == k && detail::beyond_error_gap(pool[i].dist, best.front().dist, error_bound, metric)) {
            break;
        }
        const NodeId id = pool[i].id;
        const Neighbor nb{id, kernels::metric_distance(query.data(), dataset[id].data(), dataset.dim(), metric)};
        exact.push_back(nb);
        best.push_back(nb);
        std::push_heap(best.begin(), best.end());
        if (best.size() > k) {
            std::pop_heap(best.begin(), best.end());
            best.pop_back();
        }
    }

    std::sort(exact.begin(), exact.end());
    RerankResult out;
    out.exact_evaluations = exact.size();
    const std::size_t take = std::min(k, exact.size());
    out.ids.reserve(take);
    out.dists.reserve(take);
    for (std::size_t i = 0; i < take; ++i) {
        out.ids.push_back(exact[i].id);
        out.dists.push_back(exact[i].dist);
    }
    return out;
}

}  // namespace lgann
