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

#include "lgann/core/dataset.hpp"
#include "lgann/core/error.hpp"
#include "lgann/core/types.hpp"
#include "lgann/graph/filter.hpp"
#include "lgann/graph/graph_index.hpp"
#include "lgann/search/candidate_pool.hpp"
#include "lgann/search/params.hpp"
#include "lgann/search/rerank.hpp"
#include "lgann/search/stores.hpp"
#include "lgann/search/visited.hpp"

namespace lgann {

struct SearchStats {
    std::uint64_t lowprec_evals{0};  // n_lp
    std::uint64_t exact_evals{0};    // n_hp
    std::uint64_t fetches{0};
    std::uint64_t hops{0};
    std::uint64_t prefetch_hints{0};
    bool underfilled{false};
};

struct SearchResult {
    std::vector<NodeId> ids;
    std::vector<float> dists;
    SearchStats stats;
};

/// Read-mostly view handed to a hop observer after every expansion.
class SearchControl {
public:
    SearchControl(CandidatePool& pool, const VisitedSet& visited, const SearchStats& stats)
        : pool_(pool), visited_(visited), stats_(stats) {
    }

    const CandidatePool&
    pool() const noexcept {
        return pool_;
    }

    std::size_t
    visited_count() const noexcept {
        return visited_.size();
    }

    std::uint64_t
    hops() const noexcept {
        return stats_.hops;
    }

    const SearchStats&
    stats() const noexcept {
        return stats_;
    }

    /// Drops the pool capacity for the rest of the search.
    void
    shrink_pool(std::size_t capacity) {
        pool_.shrink(capacity);
    }

private:
    CandidatePool& pool_;
    const VisitedSet& visited_;
    const SearchStats& stats_;
};

struct NoHopObserver {
    void
    operator()(SearchControl&) const noexcept {
    }
};

/*
 * Deterministic-access greedy search.
 *
 * Each expansion first gathers the ids of unvisited, label-valid neighbors
 * (at most max_neighbors, marking them visited) without touching vector
 * data, then issues prefetch hints `stride` entries ahead of the one being
 * scored, then scores each gathered neighbor once with the store's
 * low-precision distance. The final pool is re-ranked with exact distances.
 *
 * A Searcher owns per-query scratch and must not be shared between threads.
 */
class Searcher {
public:
    explicit Searcher(std::size_t capacity = 0) : visited_(capacity) {
    }

    template <VectorStore Store, typename HopObserver = NoHopObserver>
    SearchResult
    search(const GraphIndex& index,
           const Store& store,
           const Dataset& dataset,
           std::span<const NodeId> entry,
           std::span<const float> query,
           const SearchParams& sp,
           const EnvParams& env = {},
           HopObserver&& observer = {}) {
        sp.validate(index);
        if (store.size() != index.size() || dataset.size() != index.size()) {
            fail(ErrorType::kInvalidArgument, "graph (", index.size(), "), store (", store.size(),
                 ") and dataset (", dataset.size(), ") sizes differ");
        }
        check_dims(query.size(), dataset.dim());
        if (entry.empty()) {
            fail(ErrorType::kInvalidArgument, "at least one entry point is required");
        }
        for (NodeId e : entry) {
            if (e >= index.size()) {
                fail(ErrorType::kOutOfRange, "entry point ", e, " outside graph of ", index.size(), " nodes");
            }
        }

        const float alpha = sp.resolved_alpha(index);
        const std::uint32_t max_neighbors = sp.resolved_max_neighbors(index);
        const std::uint32_t stride = env.prefetch_stride;
        const std::uint32_t depth = env.prefetch_depth;

        SearchResult result;
        SearchStats& stats = result.stats;
        visited_.resize(index.size());
        visited_.clear();
        pool_.reset(sp.ef_search);

        const auto qs = store.prepare(query);
        for (NodeId e : entry) {
            if (!visited_.insert(e)) {
                continue;
            }
            pool_.insert(e, store.distance(qs, e, store.locate(kInvalidNode, 0, e)));
            ++stats.lowprec_evals;
        }

        SearchControl control(pool_, visited_, stats);
        while (pool_.has_unexpanded()) {
            const NodeId cur = pool_.pop_nearest_unexpanded().id;
            ++stats.hops;

            batch_ids_.clear();
            batch_pos_.clear();
            for_each_filtered_neighbor(
                index, cur, alpha, max_neighbors, [&](NodeId id) { return visited_.contains(id); },
                [&](std::uint32_t pos, NodeId id) {
                    batch_ids_.push_back(id);
                    batch_pos_.push_back(pos);
                    visited_.insert(id);
                });

            const std::size_t count = batch_ids_.size();
            if (stride > 0) {
                const std::size_t warm = std::min<std::size_t>(stride, count);
                for (std::size_t b = 0; b < warm; ++b) {
                    store.prefetch(store.locate(cur, batch_pos_[b], batch_ids_[b]), depth);
                }
                stats.prefetch_hints += warm;
            }
            for (std::size_t b = 0; b < count; ++b) {
                if (stride > 0 && b + stride < count) {
                    store.prefetch(store.locate(cur, batch_pos_[b + stride], batch_ids_[b + stride]), depth);
                    ++stats.prefetch_hints;
                }
                const NodeId id = batch_ids_[b];
                const float d = store.distance(qs, id, store.locate(cur, batch_pos_[b], id));
                pool_.insert(id, d);
            }
            stats.lowprec_evals += count;
            observer(control);
        }
        stats.fetches = stats.lowprec_evals;

        candidates_.clear();
        for (const auto& e : pool_.entries()) {
            candidates_.push_back(e.neighbor);
        }
        RerankResult rr = selective_rerank(candidates_, query, dataset, store.metric(), sp.k,
                                           sp.rerank_factor, store.error_bound(qs));
        stats.exact_evals = rr.exact_evaluations;
        stats.underfilled = rr.ids.size() < sp.k;
        result.ids = std::move(rr.ids);
        result.dists = std::move(rr.dists);
        return result;
    }

private:
    VisitedSet visited_;
    CandidatePool pool_;
    std::vector<NodeId> batch_ids_;
    std::vector<std::uint32_t> batch_pos_;
    std::vector<Neighbor> candidates_;
};

template <VectorStore Store, typename HopObserver = NoHopObserver>
SearchResult
greedy_search(const GraphIndex& index,
              const Store& store,
              const Dataset& dataset,
              std::span<const NodeId> entry,
              std::span<const float> query,
              const SearchParams& sp,
              const EnvParams& env = {},
              HopObserver&& observer = {}) {
    Searcher searcher(index.size());
    return searcher.search(index, store, dataset, entry, query, sp, env,
                           std::forward<HopObserver>(observer));
}

}  // namespace lgann
