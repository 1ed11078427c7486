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
#include <limits>
#include <string>
#include <string_view>

#include "lgann/core/error.hpp"

namespace lgann {

using NodeId = std::uint32_t;

inline constexpr NodeId kInvalidNode = std::numeric_limits<NodeId>::max();

// Smaller distance is always nearer: inner product is exposed as its negation.
enum class Metric : std::uint32_t {
    kSquaredEuclidean = 0,
    kInnerProduct = 1,
};

inline std::string_view
metric_name(Metric metric) {
    return metric == Metric::kInnerProduct ? "ip" : "l2";
}

inline Metric
parse_metric(std::string_view name) {
    if (name == "l2" || name == "squared-euclidean" || name == "euclidean") {
        return Metric::kSquaredEuclidean;
    }
    if (name == "ip" || name == "inner-product") {
        return Metric::kInnerProduct;
    }
    fail(ErrorType::kInvalidArgument, "unknown metric '", name, "'");
}

inline Metric
metric_from_u32(std::uint32_t raw) {
    if (raw > 1) {
        fail(ErrorType::kCorruptData, "unknown metric tag ", raw);
    }
    return static_cast<Metric>(raw);
}

/// A (node, distance) pair. Ordering is by distance, then by lower id.
struct Neighbor {
    NodeId id{kInvalidNode};
    float dist{0.0F};

    friend bool
    operator<(const Neighbor& a, const Neighbor& b) {
        return a.dist < b.dist || (a.dist == b.dist && a.id < b.id);
    }
    friend bool
    operator==(const Neighbor& a, const Neighbor& b) = default;
};

}  // namespace lgann
