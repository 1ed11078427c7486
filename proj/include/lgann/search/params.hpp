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

#include <cstdint>

#include "lgann/core/error.hpp"
#include "lgann/graph/graph_index.hpp"

namespace lgann {

/// Query-time knobs. max_neighbors == 0 means the index's max_degree, and
/// alpha == 0 means the index's largest pruning rate.
struct SearchParams {
    std::uint32_t k{10};
    std::uint32_t ef_search{64};
    std::uint32_t max_neighbors{0};
    float alpha{0.0F};
    double rerank_factor{3.0};

    std::uint32_t
    resolved_max_neighbors(const GraphIndex& index) const noexcept {
        return max_neighbors == 0 ? index.max_degree() : max_neighbors;
    }

    float
    resolved_alpha(const GraphIndex& index) const noexcept {
        return alpha == 0.0F ? index.max_rate() : alpha;
    }

    void
    validate(const GraphIndex& index) const {
        if (k == 0) {
            fail(ErrorType::kInvalidArgument, "k must be positive");
        }
        if (ef_search < k) {
            fail(ErrorType::kInvalidArgument, "ef_search (", ef_search, ") must be >= k (", k, ")");
        }
        if (k > index.size()) {
            fail(ErrorType::kInvalidArgument, "k = ", k, " exceeds the ", index.size(), " indexed vectors");
        }
        const std::uint32_t m = resolved_max_neighbors(index);
        if (m > index.max_degree()) {
            fail(ErrorType::kInvalidArgument, "max_neighbors ", m, " exceeds the build's max_degree ",
                 index.max_degree());
        }
        const float a = resolved_alpha(index);
        if (a < index.min_rate() || a > index.max_rate()) {
            fail(ErrorType::kInvalidArgument, "alpha ", a, " outside [", index.min_rate(), ", ",
                 index.max_rate(), "]");
        }
        if (!(rerank_factor >= 1.0)) {
            fail(ErrorType::kInvalidArgument, "rerank_factor must be >= 1, got ", rerank_factor);
        }
    }
};

/// Environment-level knobs: prefetch stride (0 disables prefetching) and
/// prefetch depth in 64-byte cache lines.
struct EnvParams {
    std::uint32_t prefetch_stride{0};
    std::uint32_t prefetch_depth{1};

    friend bool
    operator==(const EnvParams&, const EnvParams&) = default;
};

}  // namespace lgann
