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
#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>

#include "lgann/core/error.hpp"

namespace lgann {

inline constexpr std::size_t kTopFeatureCount = 5;

struct QueryFeatures {
    static constexpr std::size_t kCount = 7;
    static constexpr std::array<std::string_view, kCount> kNames{
        "scanned_count", "top5_mean", "top5_std", "top5_min", "top5_max", "top5_progression", "topk_gap"};

    double scanned_count{0.0};
    double top5_mean{0.0};
    double top5_std{0.0};
    double top5_min{0.0};
    double top5_max{0.0};
    double top5_progression{0.0};  // previous top-5 mean minus current
    double topk_gap{0.0};          // (k-th - best) / |best|

    std::array<double, kCount>
    values() const noexcept {
        return {scanned_count, top5_mean, top5_std, top5_min, top5_max, top5_progression, topk_gap};
    }
};

/// Mean of the first five entries of an ascending distance list.
inline double
top5_mean(std::span<const float> ascending) {
    if (ascending.size() < kTopFeatureCount) {
        fail(ErrorType::kInvalidArgument, "need ", kTopFeatureCount, " distances, got ", ascending.size());
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < kTopFeatureCount; ++i) {
        sum += ascending[i];
    }
    return sum / static_cast<double>(kTopFeatureCount);
}

/*
 * Features of one query at a checkpoint. `current` holds the pool distances
 * in ascending order; `previous_mean` is the top-5 mean at the earlier
 * snapshot (progression is 0 without one). Returns nothing while fewer than
 * five candidates exist.
 */
inline std::optional<QueryFeatures>
extract_features(std::span<const float> current,
                 std::optional<double> previous_mean,
                 std::size_t scanned_count,
                 std::size_t k) {
    if (current.size() < kTopFeatureCount) {
        return std::nullopt;
    }
    if (k == 0) {
        fail(ErrorType::kInvalidArgument, "k must be positive");
    }
    QueryFeatures f;
    f.scanned_count = static_cast<double>(scanned_count);
    f.top5_mean = top5_mean(current);
    double var = 0.0;
    for (std::size_t i = 0; i < kTopFeatureCount; ++i) {
        const double d = current[i] - f.top5_mean;
        var += d * d;
    }
    f.top5_std = std::sqrt(var / static_cast<double>(kTopFeatureCount));
    f.top5_min = current.front();
    f.top5_max = current[kTopFeatureCount - 1];
    f.top5_progression = previous_mean.has_value() ? *previous_mean - f.top5_mean : 0.0;
    const double best = current.front();
    const double kth = current[std::min(k, current.size()) - 1];
    constexpr double kTiny = 1e-12;
    f.topk_gap = (kth - best) / std::max(std::abs(best), kTiny);
    return f;
}

}  // namespace lgann
