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
#include <vector>

#include "lgann/core/error.hpp"
#include "lgann/graph/graph_index.hpp"

namespace lgann {

inline void
check_filter_params(const GraphIndex& index, float alpha, std::uint32_t max_neighbors) {
    if (alpha < index.min_rate()) {
        fail(ErrorType::kInvalidArgument, "alpha ", alpha, " below the smallest pruning rate ",
             index.min_rate());
    }
    if (max_neighbors == 0 || max_neighbors > index.max_degree()) {
        fail(ErrorType::kInvalidArgument, "degree cap ", max_neighbors, " outside [1, ",
             index.max_degree(), "]");
    }
}

/// Walks node i's adjacency in distance order and calls emit(position, id)
/// for each neighbor that is not visited and whose label is <= alpha, up to
/// max_neighbors of them. Touches ids and labels only, never vector data.
template <typename IsVisited, typename Emit>
inline std::size_t
for_each_filtered_neighbor(const GraphIndex& index,
                           NodeId i,
                           float alpha,
                           std::uint32_t max_neighbors,
                           IsVisited&& is_visited,
                           Emit&& emit) {
    const auto ids = index.neighbors(i);
    const auto labels = index.labels(i);
    std::size_t emitted = 0;
    for (std::size_t p = 0; p < ids.size() && emitted < max_neighbors; ++p) {
        if (labels[p] <= alpha && !is_visited(ids[p])) {
            emit(static_cast<std::uint32_t>(p), ids[p]);
            ++emitted;
        }
    }
    return emitted;
}

template <typename Membership>
std::vector<NodeId>
filtered_neighbors(const GraphIndex& index,
                   NodeId i,
                   float alpha,
                   std::uint32_t max_neighbors,
                   const Membership& visited) {
    index.check_node(i);
    check_filter_params(index, alpha, max_neighbors);
    std::vector<NodeId> out;
    for_each_filtered_neighbor(
        index, i, alpha, max_neighbors, [&](NodeId id) { return visited.contains(id); },
        [&](std::uint32_t, NodeId id) { out.push_back(id); });
    return out;
}

}  // namespace lgann
