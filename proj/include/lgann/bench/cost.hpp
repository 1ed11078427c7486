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
#include <random>

#include "lgann/core/dataset.hpp"
#include "lgann/core/distance.hpp"
#include "lgann/core/error.hpp"
#include "lgann/core/timing.hpp"
#include "lgann/search/stores.hpp"

namespace lgann {

/// Distance-computation cost of a search: n_lp * t_lp + n_hp * t_hp.
struct CostBreakdown {
    double n_lp{0.0};  // mean low-precision evaluations per query
    double n_hp{0.0};  // mean exact evaluations per query
    double t_lp{0.0};  // seconds per low-precision evaluation
    double t_hp{0.0};  // seconds per exact evaluation

    double
    total_cost() const noexcept {
        return n_lp * t_lp + n_hp * t_hp;
    }
};

struct UnitCosts {
    double t_lp{0.0};
    double t_hp{0.0};
};

/*
 * Times `evaluations` store distances (query preparation excluded) and as many exact distances over
 * random (query, base) pairs. The pairs are drawn once and replayed for
 * both kinds, so only the kernels differ.
 */
template <VectorStore Store>
UnitCosts
measure_unit_costs(const Store& store,
                   const Dataset& dataset,
                   const Dataset& queries,
                   std::size_t evaluations = 200000,
                   std::uint64_t seed = 1,
                   const TuningClock& clock = steady_seconds) {
    if (dataset.empty() || queries.empty() || evaluations == 0) {
        fail(ErrorType::kInvalidArgument, "cost measurement needs data, queries and evaluations");
    }
    check_dims(queries.dim(), dataset.dim());
    constexpr std::size_t kPerQuery = 256;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, dataset.size() - 1);
    std::vector<NodeId> ids(kPerQuery);
    for (auto& id : ids) {
        id = static_cast<NodeId>(pick(rng));
    }

    std::vector<typename Store::QueryState> states;
    states.reserve(queries.size());
    for (std::size_t q = 0; q < queries.size(); ++q) {
        states.push_back(store.prepare(queries[q]));
    }

    volatile float sink = 0.0F;
    std::size_t done = 0;
    const double lp_start = clock();
    for (std::size_t q = 0; done < evaluations; q = (q + 1) % queries.size()) {
        const auto& qs = states[q];
        float acc = 0.0F;
        for (std::size_t i = 0; i < kPerQuery && done < evaluations; ++i, ++done) {
            acc += store.distance(qs, ids[i], store.locate(kInvalidNode, 0, ids[i]));
        }
        sink = sink + acc;
    }
    const double lp = clock() - lp_start;

    done = 0;
    const double hp_start = clock();
    for (std::size_t q = 0; done < evaluations; q = (q + 1) % queries.size()) {
        const float* qv = queries[q].data();
        float acc = 0.0F;
        for (std::size_t i = 0; i < kPerQuery && done < evaluations; ++i, ++done) {
            acc += kernels::metric_distance(qv, dataset[ids[i]].data(), dataset.dim(), store.metric());
        }
        sink = sink + acc;
    }
    const double hp = clock() - hp_start;
    (void)sink;

    const auto n = static_cast<double>(evaluations);
    return {std::max(lp, 0.0) / n, std::max(hp, 0.0) / n};
}

}  // namespace lgann
