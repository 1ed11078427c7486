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
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "lgann/core/error.hpp"
#include "lgann/core/types.hpp"
#include "lgann/graph/build_params.hpp"

namespace lgann {

/// One node's adjacency: ids ascending by cached distance, with edge labels.
struct LabeledList {
    std::vector<NodeId> ids;
    std::vector<float> labels;
    std::vector<float> dists;  // squared construction distances

    std::size_t
    size() const noexcept {
        return ids.size();
    }

    friend bool
    operator==(const LabeledList& a, const LabeledList& b) = default;
};

/// True when candidate j is occluded by an already-kept k at rate alpha.
/// Distances come in squared; the test runs on the metric itself.
inline bool
occludes(float alpha, float pair_dist_sq, float cand_dist_sq) noexcept {
    return static_cast<double>(alpha) * std::sqrt(static_cast<double>(pair_dist_sq)) <=
           std::sqrt(static_cast<double>(cand_dist_sq));
}

// Lazily filled lower-triangular cache of pairwise candidate distances.
class PairDistanceCache {
public:
    void
    reset(std::size_t n) {
        const std::size_t cells = n * (n - (n > 0 ? 1 : 0)) / 2;
        if (cache_.size() < cells) {
            cache_.resize(cells);
        }
        std::fill_n(cache_.begin(), cells, kUnset);
    }

    template <typename Compute>
    float
    get(std::size_t j, std::size_t k, Compute&& compute) {
        // k < j
        float& slot = cache_[j * (j - 1) / 2 + k];
        if (std::isnan(slot)) {
            slot = compute();
        }
        return slot;
    }

private:
    static constexpr float kUnset = std::numeric_limits<float>::quiet_NaN();
    std::vector<float> cache_;
};

/*
 * Prune-based labeling of one node's candidate list.
 *
 * `candidates` is sorted ascending by distance to the node. Entries before
 * `from` keep the labels in `prefix_labels` (all non-zero); entries from
 * `from` on are reset and relabeled: for each rate alpha in ascending order,
 * an unlabeled candidate j survives unless some earlier k with
 * 0 < L[k] <= alpha occludes it, and a survivor gets L[j] = alpha. Labeling
 * stops once max_degree candidates carry labels; unlabeled entries are then
 * dropped.
 *
 * `pair_dist(a, b)` returns the squared full-precision distance between two
 * node ids.
 */
template <typename PairDistance>
LabeledList
prune_based_labeling(std::span<const Neighbor> candidates,
                     std::span<const float> prefix_labels,
                     std::span<const float> rates,
                     std::uint32_t max_degree,
                     std::size_t from,
                     PairDistance&& pair_dist,
                     PairDistanceCache* cache = nullptr) {
    if (from > candidates.size()) {
        fail(ErrorType::kOutOfRange, "reverse insertion position ", from, " past list of ",
             candidates.size());
    }
    if (prefix_labels.size() != from) {
        fail(ErrorType::kInvalidArgument, "expected ", from, " prefix labels, got ", prefix_labels.size());
    }
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        if (candidates[i].dist < candidates[i - 1].dist) {
            fail(ErrorType::kInvalidArgument, "candidate list not sorted by distance at position ", i);
        }
    }
    check_pruning_rates(rates);

    const std::size_t n = candidates.size();
    std::vector<float> labels(n, 0.0F);
    for (std::size_t i = 0; i < from; ++i) {
        if (!(prefix_labels[i] > 0.0F)) {
            fail(ErrorType::kInvalidArgument, "prefix label at ", i, " must be positive");
        }
        labels[i] = prefix_labels[i];
    }

    PairDistanceCache local;
    PairDistanceCache& pairs = cache != nullptr ? *cache : local;
    pairs.reset(n);

    std::size_t count = from;
    for (const float alpha : rates) {
        if (count >= max_degree) {
            break;
        }
        for (std::size_t j = from; j < n && count < max_degree; ++j) {
            if (labels[j] != 0.0F) {
                continue;
            }
            bool pruned = false;
            for (std::size_t k = 0; k < j; ++k) {
                if (!(labels[k] > 0.0F && labels[k] <= alpha)) {
                    continue;
                }
                const float pair = pairs.get(
                    j, k, [&] { return pair_dist(candidates[j].id, candidates[k].id); });
                if (occludes(alpha, pair, candidates[j].dist)) {
                    pruned = true;
                    break;
                }
            }
            if (!pruned) {
                labels[j] = alpha;
                ++count;
            }
        }
    }

    LabeledList out;
    out.ids.reserve(std::min<std::size_t>(n, max_degree));
    for (std::size_t i = 0; i < n && out.ids.size() < max_degree; ++i) {
        if (labels[i] == 0.0F) {
            continue;
        }
        out.ids.push_back(candidates[i].id);
        out.labels.push_back(labels[i]);
        out.dists.push_back(candidates[i].dist);
    }
    return out;
}

template <typename PairDistance>
LabeledList
prune_based_labeling(std::span<const Neighbor> candidates,
                     std::span<const float> rates,
                     std::uint32_t max_degree,
                     PairDistance&& pair_dist) {
    return prune_based_labeling(candidates, {}, rates, max_degree, 0,
                                std::forward<PairDistance>(pair_dist));
}

}  // namespace lgann
