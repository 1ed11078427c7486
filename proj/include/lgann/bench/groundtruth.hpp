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
#include <cstdint>
#include <span>
#include <unordered_set>
#include <vector>

#include "lgann/core/dataset.hpp"
#include "lgann/core/distance.hpp"
#include "lgann/core/error.hpp"
#include "lgann/core/types.hpp"

namespace lgann {

struct GroundTruth {
    std::size_t k{0};
    std::vector<std::vector<NodeId>> ids;
    std::vector<std::vector<float>> dists;
};

/// Exact k nearest neighbors of one query by exhaustive scan (ties: lower id).
inline std::vector<Neighbor>
exact_knn(const Dataset& dataset, std::span<const float> query, std::size_t k, Metric metric) {
    if (k > dataset.size()) {
        fail(ErrorType::kInvalidArgument, "k = ", k, " exceeds dataset size ", dataset.size());
    }
    check_dims(query.size(), dataset.dim());
    std::vector<Neighbor> all(dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        all[i] = {static_cast<NodeId>(i),
                  kernels::metric_distance(query.data(), dataset[i].data(), dataset.dim(), metric)};
    }
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end());
    all.resize(k);
    return all;
}

inline GroundTruth
brute_force_groundtruth(const Dataset& dataset, const Dataset& queries, std::size_t k, Metric metric) {
    if (k == 0) {
        fail(ErrorType::kInvalidArgument, "k must be positive");
    }
    if (k > dataset.size()) {
        fail(ErrorType::kInvalidArgument, "k = ", k, " exceeds dataset size ", dataset.size());
    }
    if (!queries.empty()) {
        check_dims(queries.dim(), dataset.dim());
    }
    GroundTruth gt;
    gt.k = k;
    gt.ids.resize(queries.size());
    gt.dists.resize(queries.size());
    for (std::size_t q = 0; q < queries.size(); ++q) {
        for (const Neighbor& nb : exact_knn(dataset, queries[q], k, metric)) {
            gt.ids[q].push_back(nb.id);
            gt.dists[q].push_back(nb.dist);
        }
    }
    return gt;
}

/// |first k of result ∩ first k of truth| / k. A short (underfilled) result
/// simply contributes fewer hits.
template <typename A, typename B>
double
compute_recall(const A& result, const B& truth, std::size_t k) {
    if (k == 0) {
        return 0.0;
    }
    const std::size_t tk = std::min<std::size_t>(k, std::size(truth));
    const std::unordered_set<std::int64_t> expected(std::begin(truth), std::begin(truth) + static_cast<std::ptrdiff_t>(tk));
    std::unordered_set<std::int64_t> seen;
    std::size_t hits = 0;
    const std::size_t rk = std::min<std::size_t>(k, std::size(result));
    for (std::size_t i = 0; i < rk; ++i) {
        const auto id = static_cast<std::int64_t>(*(std::begin(result) + static_cast<std::ptrdiff_t>(i)));
        if (expected.count(id) != 0 && seen.insert(id).second) {
            ++hits;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(k);
}

}  // namespace lgann
