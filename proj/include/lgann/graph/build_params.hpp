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
#include <span>
#include <vector>

#include "lgann/core/error.hpp"

namespace lgann {

inline void
check_pruning_rates(std::span<const float> rates) {
    if (rates.empty()) {
        fail(ErrorType::kInvalidArgument, "pruning rates must not be empty");
    }
    if (!(rates.front() >= 1.0F)) {
        fail(ErrorType::kInvalidArgument, "pruning rates must be >= 1.0, got ", rates.front());
    }
    for (std::size_t i = 1; i < rates.size(); ++i) {
        if (!(rates[i] > rates[i - 1])) {
            fail(ErrorType::kInvalidArgument, "pruning rates must be strictly ascending");
        }
    }
}

/// Relaxed construction limits. One build covers every (degree <= max_degree,
/// alpha in pruning_rates) configuration.
struct BuildParams {
    std::uint32_t max_degree{32};
    std::uint32_t ef_construction{128};
    std::vector<float> pruning_rates{1.0F, 1.2F, 1.4F, 1.6F, 1.8F, 2.0F};

    void
    validate() const {
        if (max_degree == 0) {
            fail(ErrorType::kInvalidArgument, "max_degree must be positive");
        }
        if (ef_construction < max_degree) {
            fail(ErrorType::kInvalidArgument, "ef_construction (", ef_construction,
                 ") must be >= max_degree (", max_degree, ")");
        }
        check_pruning_rates(pruning_rates);
    }
};

}  // namespace lgann
