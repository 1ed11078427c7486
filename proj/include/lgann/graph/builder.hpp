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
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lgann/core/dataset.hpp"
#include "lgann/core/distance.hpp"
#include "lgann/core/error.hpp"
#include "lgann/graph/build_params.hpp"
#include "lgann/graph/graph_index.hpp"
#include "lgann/graph/labeling.hpp"
#include "lgann/search/candidate_pool.hpp"
#include "lgann/search/visited.hpp"

namespace lgann {

/// Process-wide count of build_index invocations.
inline std::atomic<std::uint64_t>&
build_invocation_counter() {
    static std::atomic<std::uint64_t> counter{0};
    return counter;
}

/// One call into prune_based_labeling made during a build.
struct LabelingEvent {
    NodeId node;
    std::span<const Neighbor> candidates;
    std::span<const float> prefix_labels;
    std::size_t from;
    const LabeledList& result;
};

struct BuildOptions {
    // Called after every labeling call, in build order.
    std::function<void(const LabelingEvent&)> on_labeling;
};

namespace detail {

/*
 * Incremental labeled-graph construction. Points are inserted in id order,
 * each one: search the partial graph from node 0 with the relaxed limits,
 * label the candidates, then try to add the reverse edge to every kept
 * neighbor and relabel that neighbor's list from the insertion position on.
 *
 * Construction always measures squared Euclidean distance on full-precision
 * vectors; the occlusion test is only monotone in alpha for a true metric.
 */
class GraphBuilder {
public:
    GraphBuilder(const Dataset& data, const BuildParams& params, const BuildOptions& options)
        : data_(data), params_(params), options_(options), adjacency_(data.size()),
          visited_(data.size()), pool_(params.ef_construction) {
    }

    std::vector<LabeledList>
    run() {
        for (std::size_t i = 0; i < data_.size(); ++i) {
            insert(static_cast<NodeId>(i));
        }
        return std::move(adjacency_);
    }

private:
    float
    pair_distance(NodeId a, NodeId b) const {
        return kernels::l2_sqr(data_[a].data(), data_[b].data(), data_.dim());
    }

    // Greedy search over nodes [0, upto) with every edge enabled.
    std::vector<Neighbor>
    search_partial(NodeId query) {
        const float* q = data_[query].data();
        const std::size_t dim = data_.dim();
        pool_.reset(params_.ef_construction);
        visited_.clear();
        visited_.insert(0);
        pool_.insert(0, kernels::l2_sqr(q, data_[0].data(), dim));
        while (pool_.has_unexpanded()) {
            const Neighbor cur = pool_.pop_nearest_unexpanded();
            const LabeledList& adj = adjacency_[cur.id];
            for (std::size_t p = 0; p < adj.size(); ++p) {
                const NodeId nb = adj.ids[p];
                if (!visited_.insert(nb)) {
                    continue;
                }
                pool_.insert(nb, kernels::l2_sqr(q, data_[nb].data(), dim));
            }
        }
        std::vector<Neighbor> out;
        out.reserve(pool_.size());
        for (const auto& e : pool_.entries()) {
            out.push_back(e.neighbor);
        }
        return out;
    }

    LabeledList
    label(NodeId node, std::span<const Neighbor> candidates, std::span<const float> prefix,
          std::size_t from) {
        LabeledList out = prune_based_labeling(
            candidates, prefix, params_.pruning_rates, params_.max_degree, from,
            [this](NodeId a, NodeId b) { return pair_distance(a, b); }, &pair_cache_);
        if (options_.on_labeling) {
            options_.on_labeling(LabelingEvent{node, candidates, prefix, from, out});
        }
        return out;
    }

    void
    insert(NodeId i) {
        if (i == 0) {
            return;
        }
        const std::vector<Neighbor> ann = search_partial(i);
        adjacency_[i] = label(i, ann, {}, 0);

        const LabeledList& mine = adjacency_[i];
        for (std::size_t p = 0; p < mine.size(); ++p) {
            add_reverse_edge(mine.ids[p], i, mine.dists[p]);
        }
    }

    void
    add_reverse_edge(NodeId j, NodeId i, float dist) {
        LabeledList& adj = adjacency_[j];
        if (adj.size() >= params_.max_degree && dist >= adj.dists.back()) {
            return;
        }
        // first position whose distance exceeds dist; equal distances keep
        // the older (lower) id first
        const auto pos = static_cast<std::size_t>(
            std::upper_bound(adj.dists.begin(), adj.dists.end(), dist) - adj.dists.begin());

        scratch_.clear();
        scratch_.reserve(adj.size() + 1);
        for (std::size_t p = 0; p < adj.size(); ++p) {
            if (p == pos) {
                scratch_.push_back({i, dist});
            }
            scratch_.push_back({adj.ids[p], adj.dists[p]});
        }
        if (pos == adj.size()) {
            scratch_.push_back({i, dist});
        }
        prefix_.assign(adj.labels.begin(), adj.labels.begin() + static_cast<std::ptrdiff_t>(pos));
        adj = label(j, scratch_, prefix_, pos);
    }

    const Dataset& data_;
    const BuildParams& params_;
    const BuildOptions& options_;
    std::vector<LabeledList> adjacency_;
    VisitedSet visited_;
    CandidatePool pool_;
    PairDistanceCache pair_cache_;
    std::vector<Neighbor> scratch_;
    std::vector<float> prefix_;
};

}  // namespace detail

/// Builds the labeled graph. Deterministic in (dataset, params); entry point is node 0.
inline GraphIndex
build_index(const Dataset& dataset,
            const BuildParams& params,
            Metric metric = Metric::kSquaredEuclidean,
            const BuildOptions& options = {}) {
    build_invocation_counter().fetch_add(1, std::memory_order_relaxed);
    if (dataset.empty()) {
        fail(ErrorType::kInvalidArgument, "cannot build an index over an empty dataset");
    }
    params.validate();
    if (dataset.size() > static_cast<std::size_t>(kInvalidNode)) {
        fail(ErrorType::kOutOfRange, "dataset of ", dataset.size(), " vectors exceeds the id space");
    }
    detail::GraphBuilder builder(dataset, params, options);
    std::vector<LabeledList> adjacency = builder.run();
    return GraphIndex(metric, dataset.dim(), params.max_degree, params.pruning_rates, {0}, adjacency);
}

}  // namespace lgann
