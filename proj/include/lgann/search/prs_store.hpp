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
#include <cstring>
#include <limits>
#include <numeric>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "lgann/core/error.hpp"
#include "lgann/graph/graph_index.hpp"
#include "lgann/search/stores.hpp"

namespace lgann {

/*
 * Partial redundant storage.
 *
 * For a fraction `ratio` of the nodes, the payloads of all their neighbors
 * are copied next to each other in adjacency order, so expanding such a node
 * streams one contiguous block instead of gathering from the global table.
 * Nodes are chosen by descending in-degree (ties: lower id). Payload bytes
 * are identical to the global table, so distances do not depend on ratio.
 */
template <VectorStore Base>
class PrsStore {
public:
    using QueryState = typename Base::QueryState;

    static constexpr std::uint64_t kNoBlock = std::numeric_limits<std::uint64_t>::max();
    static constexpr std::string_view kSelectionRule = "in-degree-desc";

    PrsStore(const GraphIndex& index, Base base, double ratio)
        : base_(std::move(base)), ratio_(ratio), offsets_(index.size(), kNoBlock) {
        if (!(ratio >= 0.0 && ratio <= 1.0)) {
            fail(ErrorType::kInvalidArgument, "redundancy ratio must lie in [0, 1], got ", ratio);
        }
        if (base_.size() != index.size()) {
            fail(ErrorType::kInvalidArgument, "store holds ", base_.size(), " vectors, graph has ",
                 index.size(), " nodes");
        }
        const std::size_t n = index.size();
        const auto chosen = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));

        const std::vector<std::uint32_t> in_degree = index.in_degrees();
        std::vector<NodeId> order(n);
        std::iota(order.begin(), order.end(), NodeId{0});
        std::stable_sort(order.begin(), order.end(),
                         [&](NodeId a, NodeId b) { return in_degree[a] > in_degree[b]; });
        order.resize(std::min(chosen, n));
        // lay blocks out in id order
        std::sort(order.begin(), order.end());

        const std::size_t bytes = base_.payload_bytes();
        std::size_t total = 0;
        for (NodeId i : order) {
            total += index.degree(i) * bytes;
        }
        blocks_.resize(total);
        std::size_t offset = 0;
        for (NodeId i : order) {
            offsets_[i] = offset;
            for (NodeId nb : index.neighbors(i)) {
                std::memcpy(blocks_.data() + offset, base_.locate(kInvalidNode, 0, nb), bytes);
                offset += bytes;
            }
        }
        block_count_ = order.size();
    }

    QueryState
    prepare(std::span<const float> q) const {
        return base_.prepare(q);
    }

    const void*
    locate(NodeId owner, std::uint32_t position, NodeId id) const noexcept {
        if (owner != kInvalidNode && offsets_[owner] != kNoBlock) {
            return blocks_.data() + offsets_[owner] + static_cast<std::size_t>(position) * base_.payload_bytes();
        }
        return base_.locate(owner, position, id);
    }

    float
    distance(const QueryState& q, NodeId id, const void* payload) const noexcept {
        return base_.distance(q, id, payload);
    }

    void
    prefetch(const void* payload, std::uint32_t lines) const noexcept {
        base_.prefetch(payload, lines);
    }

    std::size_t
    payload_bytes() const noexcept {
        return base_.payload_bytes();
    }

    std::size_t
    size() const noexcept {
        return base_.size();
    }

    Metric
    metric() const noexcept {
        return base_.metric();
    }

    double
    error_bound(const QueryState& q) const noexcept {
        return base_.error_bound(q);
    }

    double
    ratio() const noexcept {
        return ratio_;
    }

    bool
    has_block(NodeId i) const noexcept {
        return offsets_[i] != kNoBlock;
    }

    std::span<const std::uint8_t>
    block(const GraphIndex& index, NodeId i) const {
        if (!has_block(i)) {
            return {};
        }
        return {blocks_.data() + offsets_[i], index.degree(i) * base_.payload_bytes()};
    }

    std::size_t
    block_count() const noexcept {
        return block_count_;
    }

    std::size_t
    extra_bytes() const noexcept {
        return blocks_.size();
    }

    const Base&
    base() const noexcept {
        return base_;
    }

private:
    Base base_;
    double ratio_;
    std::vector<std::uint64_t> offsets_;
    std::vector<std::uint8_t> blocks_;
    std::size_t block_count_{0};
};

template <VectorStore Base>
PrsStore<Base>
build_prs(const GraphIndex& index, Base base, double ratio) {
    return PrsStore<Base>(index, std::move(base), ratio);
}

}  // namespace lgann
