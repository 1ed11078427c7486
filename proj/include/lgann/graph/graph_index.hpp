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
#include <utility>
#include <vector>

#include "lgann/core/error.hpp"
#include "lgann/core/types.hpp"
#include "lgann/graph/build_params.hpp"
#include "lgann/graph/labeling.hpp"

namespace lgann {

/*
 * Immutable labeled proximity graph.
 *
 * Adjacency is stored in fixed-stride slots of max_degree entries per node so
 * a node's ids, labels and cached distances are each contiguous. Every
 * stored label is one of the build's pruning rates; keeping only edges with
 * label <= alpha and the first m of those reproduces the graph a build with
 * (alpha, m) would have produced.
 */
class GraphIndex {
public:
    GraphIndex() = default;

    GraphIndex(Metric metric,
               std::size_t dim,
               std::uint32_t max_degree,
               std::vector<float> rates,
               std::vector<NodeId> entry_points,
               std::span<const LabeledList> adjacency)
        : metric_(metric), dim_(dim), max_degree_(max_degree), rates_(std::move(rates)),
          entry_points_(std::move(entry_points)), size_(adjacency.size()) {
        check_pruning_rates(rates_);
        if (max_degree_ == 0) {
            fail(ErrorType::kInvalidArgument, "max_degree must be positive");
        }
        for (NodeId e : entry_points_) {
            if (e >= size_) {
                fail(ErrorType::kCorruptData, "entry point ", e, " outside graph of ", size_, " nodes");
            }
        }
        const std::size_t slots = size_ * max_degree_;
        ids_.assign(slots, kInvalidNode);
        labels_.assign(slots, 0.0F);
        dists_.assign(slots, 0.0F);
        degree_.assign(size_, 0);
        for (std::size_t i = 0; i < size_; ++i) {
            const LabeledList& list = adjacency[i];
            check_list(i, list);
            std::copy(list.ids.begin(), list.ids.end(), ids_.begin() + slot(i));
            std::copy(list.labels.begin(), list.labels.end(), labels_.begin() + slot(i));
            std::copy(list.dists.begin(), list.dists.end(), dists_.begin() + slot(i));
            degree_[i] = static_cast<std::uint32_t>(list.size());
        }
    }

    std::size_t
    size() const noexcept {
        return size_;
    }

    std::size_t
    dim() const noexcept {
        return dim_;
    }

    Metric
    metric() const noexcept {
        return metric_;
    }

    std::uint32_t
    max_degree() const noexcept {
        return max_degree_;
    }

    std::span<const float>
    rates() const noexcept {
        return rates_;
    }

    float
    min_rate() const noexcept {
        return rates_.front();
    }

    float
    max_rate() const noexcept {
        return rates_.back();
    }

    std::span<const NodeId>
    entry_points() const noexcept {
        return entry_points_;
    }

    std::uint32_t
    degree(NodeId i) const noexcept {
        return degree_[i];
    }

    std::span<const NodeId>
    neighbors(NodeId i) const noexcept {
        return {ids_.data() + slot(i), degree_[i]};
    }

    std::span<const float>
    labels(NodeId i) const noexcept {
        return {labels_.data() + slot(i), degree_[i]};
    }

    std::span<const float>
    dists(NodeId i) const noexcept {
        return {dists_.data() + slot(i), degree_[i]};
    }

    LabeledList
    adjacency(NodeId i) const {
        check_node(i);
        auto ids = neighbors(i);
        auto lab = labels(i);
        auto d = dists(i);
        return {{ids.begin(), ids.end()}, {lab.begin(), lab.end()}, {d.begin(), d.end()}};
    }

    void
    check_node(NodeId i) const {
        if (i >= size_) {
            fail(ErrorType::kOutOfRange, "node id ", i, " outside graph of ", size_, " nodes");
        }
    }

    std::size_t
    edge_count() const noexcept {
        std::size_t total = 0;
        for (auto d : degree_) {
            total += d;
        }
        return total;
    }

    std::vector<std::uint32_t>
    in_degrees() const {
        std::vector<std::uint32_t> in(size_, 0);
        for (std::size_t i = 0; i < size_; ++i) {
            for (NodeId j : neighbors(static_cast<NodeId>(i))) {
                ++in[j];
            }
        }
        return in;
    }

    friend bool
    operator==(const GraphIndex& a, const GraphIndex& b) = default;

private:
    std::size_t
    slot(std::size_t i) const noexcept {
        return i * max_degree_;
    }

    void
    check_list(std::size_t i, const LabeledList& list) const {
        if (list.labels.size() != list.size() || list.dists.size() != list.size()) {
            fail(ErrorType::kCorruptData, "node ", i, ": ragged adjacency");
        }
        if (list.size() > max_degree_) {
            fail(ErrorType::kCorruptData, "node ", i, " has degree ", list.size(), " > ", max_degree_);
        }
        for (std::size_t p = 0; p < list.size(); ++p) {
            if (list.ids[p] >= size_) {
                fail(ErrorType::kCorruptData, "node ", i, " links to unknown node ", list.ids[p]);
            }
            if (!std::binary_search(rates_.begin(), rates_.end(), list.labels[p])) {
                fail(ErrorType::kCorruptData, "node ", i, " edge ", p, " carries label ", list.labels[p],
                     " outside the pruning rates");
            }
            if (p > 0 && list.dists[p] < list.dists[p - 1]) {
                fail(ErrorType::kCorruptData, "node ", i, " adjacency not sorted by distance");
            }
        }
    }

    Metric metric_{Metric::kSquaredEuclidean};
    std::size_t dim_{0};
    std::uint32_t max_degree_{1};
    std::vector<float> rates_{1.0F};
    std::vector<NodeId> entry_points_;
    std::size_t size_{0};
    std::vector<NodeId> ids_;
    std::vector<float> labels_;
    std::vector<float> dists_;
    std::vector<std::uint32_t> degree_;
};

}  // namespace lgann
