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
#include <limits>
#include <vector>

#include "lgann/bench/groundtruth.hpp"
#include "lgann/core/dataset.hpp"
#include "lgann/core/error.hpp"
#include "lgann/graph/graph_index.hpp"
#include "lgann/search/greedy_search.hpp"
#include "lgann/tune/elp.hpp"
#include "lgann/tune/pareto.hpp"

namespace lgann {

struct IlpGrid {
    std::vector<std::uint32_t> max_neighbors{8, 16, 24, 32};
    std::vector<float> alphas;  // empty: every rate of the index
    std::vector<std::uint32_t> ef_schedule{64};
    std::uint32_t repetitions{1};
};

struct IlpSweep {
    std::vector<IlpPoint> evaluated;
    ParetoFrontier frontier;
};

/*
 * Evaluates every (m_s, alpha_s, ef_s) on the one index by label filtering.
 * Nothing is rebuilt. Recall is the mean recall@k over `queries`;
 * throughput is the median over repetitions of queries per second after a
 * warm-up pass.
 */
template <VectorStore Store>
IlpSweep
sweep_ilp(const GraphIndex& index,
          const Store& store,
          const Dataset& dataset,
          const Dataset& queries,
          const GroundTruth& truth,
          const IlpGrid& grid,
          SearchParams base,
          const EnvParams& env = {},
          const TuningClock& clock = steady_seconds) {
    const std::vector<float> alphas =
        grid.alphas.empty() ? std::vector<float>(index.rates().begin(), index.rates().end()) : grid.alphas;
    if (grid.max_neighbors.empty() || alphas.empty() || grid.ef_schedule.empty()) {
        fail(ErrorType::kInvalidArgument, "ILP grid must not be empty");
    }
    if (queries.empty() || truth.ids.size() != queries.size() || truth.k < base.k) {
        fail(ErrorType::kInvalidArgument, "ILP sweep needs queries with ground truth at k=", base.k);
    }
    if (grid.repetitions == 0) {
        fail(ErrorType::kInvalidArgument, "ILP sweep needs at least one repetition");
    }
    for (float a : alphas) {
        if (a < index.min_rate() || a > index.max_rate()) {
            fail(ErrorType::kInvalidArgument, "alpha ", a, " outside the build's rates [", index.min_rate(),
                 ", ", index.max_rate(), "]");
        }
    }
    for (std::uint32_t m : grid.max_neighbors) {
        base.max_neighbors = m;
        base.alpha = alphas.front();
        base.validate(index);
    }

    const std::span<const NodeId> entry = index.entry_points();
    Searcher searcher(index.size());
    IlpSweep sweep;
    for (std::uint32_t m : grid.max_neighbors) {
        for (float a : alphas) {
            for (std::uint32_t ef : grid.ef_schedule) {
                SearchParams sp = base;
                sp.max_neighbors = m;
                sp.alpha = a;
                sp.ef_search = ef;
                sp.validate(index);

                IlpPoint p;
                p.config = IlpConfig{m, a, ef};
                for (std::size_t q = 0; q < queries.size(); ++q) {
                    const auto r = searcher.search(index, store, dataset, entry, queries[q], sp, env);
                    p.recall += compute_recall(r.ids, truth.ids[q], sp.k);
                    p.mean_hops += static_cast<double>(r.stats.hops);
                    p.mean_lowprec_evals += static_cast<double>(r.stats.lowprec_evals);
                    p.mean_exact_evals += static_cast<double>(r.stats.exact_evals);
                }
                const auto nq = static_cast<double>(queries.size());
                p.recall /= nq;
                p.mean_hops /= nq;
                p.mean_lowprec_evals /= nq;
                p.mean_exact_evals /= nq;

                std::vector<double> qps;
                for (std::uint32_t rep = 0; rep < grid.repetitions; ++rep) {
                    const double start = clock();
                    for (std::size_t q = 0; q < queries.size(); ++q) {
                        searcher.search(index, store, dataset, entry, queries[q], sp, env);
                    }
                    const double elapsed = clock() - start;
                    qps.push_back(elapsed > 0.0 ? nq / elapsed : std::numeric_limits<double>::infinity());
                }
                p.qps = median(std::move(qps));
                sweep.evaluated.push_back(p);
            }
        }
    }
    sweep.frontier = pareto_frontier(sweep.evaluated);
    return sweep;
}

}  // namespace lgann
