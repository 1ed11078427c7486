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
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "lgann/core/dataset.hpp"
#include "lgann/core/error.hpp"
#include "lgann/core/timing.hpp"
#include "lgann/graph/graph_index.hpp"
#include "lgann/search/greedy_search.hpp"
#include "lgann/search/params.hpp"

namespace lgann {

/// `count` distinct base vectors picked with a seeded generator, in id order.
inline Dataset
sample_base_queries(const Dataset& dataset, std::size_t count, std::uint64_t seed) {
    if (dataset.empty()) {
        fail(ErrorType::kInvalidArgument, "cannot sample queries from an empty dataset");
    }
    count = std::min(count, dataset.size());
    std::vector<std::size_t> ids(dataset.size());
    for (std::size_t i = 0; i < ids.size(); ++i) {
        ids[i] = i;
    }
    std::mt19937_64 rng(seed);
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(count);
    std::sort(ids.begin(), ids.end());
    Dataset out(dataset.dim());
    out.reserve(count);
    for (std::size_t id : ids) {
        out.push_back(dataset[id]);
    }
    return out;
}

struct ElpGrid {
    std::vector<std::uint32_t> strides{0, 1, 2, 4, 8};
    std::vector<std::uint32_t> depths{1, 2, 4};
    Dataset sample_queries{1};
    std::uint32_t repetitions{3};

    void
    validate() const {
        if (strides.empty() || depths.empty()) {
            fail(ErrorType::kInvalidArgument, "ELP grid must not be empty");
        }
        if (repetitions < 3) {
            fail(ErrorType::kInvalidArgument, "ELP tuning needs at least 3 repetitions, got ", repetitions);
        }
        if (sample_queries.empty()) {
            fail(ErrorType::kInvalidArgument, "ELP tuning needs sample queries");
        }
    }
};

struct ElpMeasurement {
    EnvParams env;
    std::vector<double> qps;  // one per repetition
    double median_qps{0.0};
};

struct ElpResult {
    EnvParams best;
    std::vector<ElpMeasurement> measurements;  // grid order
};

namespace detail {

inline bool
smaller_env(const EnvParams& a, const EnvParams& b) {
    return a.prefetch_stride != b.prefetch_stride ? a.prefetch_stride < b.prefetch_stride
                                                  : a.prefetch_depth < b.prefetch_depth;
}

}  // namespace detail

/*
 * Exhaustive search over (stride, depth). Grid points are visited strides
 * outer, depths inner; each repetition reads the clock once before and once
 * after running every sample query. Returns the configuration with the
 * highest median throughput, ties going to the smaller (stride, depth).
 * Recall is not measured: these parameters cannot change results.
 */
template <VectorStore Store>
ElpResult
tune_elp(const GraphIndex& index,
         const Store& store,
         const Dataset& dataset,
         const ElpGrid& grid,
         const SearchParams& sp,
         const TuningClock& clock = steady_seconds) {
    grid.validate();
    const std::span<const NodeId> entry = index.entry_points();
    Searcher searcher(index.size());
    ElpResult result;
    bool have_best = false;
    double best_qps = 0.0;
    for (std::uint32_t stride : grid.strides) {
        for (std::uint32_t depth : grid.depths) {
            ElpMeasurement m;
            m.env = EnvParams{stride, depth};
            for (std::uint32_t rep = 0; rep < grid.repetitions; ++rep) {
                const double start = clock();
                for (std::size_t q = 0; q < grid.sample_queries.size(); ++q) {
                    searcher.search(index, store, dataset, entry, grid.sample_queries[q], sp, m.env);
                }
                const double elapsed = clock() - start;
                m.qps.push_back(elapsed > 0.0 ? static_cast<double>(grid.sample_queries.size()) / elapsed
                                              : std::numeric_limits<double>::infinity());
            }
            m.median_qps = median(m.qps);
            const bool better = !have_best || m.median_qps > best_qps ||
                                (m.median_qps == best_qps && detail::smaller_env(m.env, result.best));
            if (better) {
                have_best = true;
                best_qps = m.median_qps;
                result.best = m.env;
            }
            result.measurements.push_back(std::move(m));
        }
    }
    return result;
}

}  // namespace lgann
