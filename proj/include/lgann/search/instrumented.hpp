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
#include <vector>

#include "lgann/search/stores.hpp"

namespace lgann {

/// Store adapter that counts payload reads per node and prefetch hints.
/// Not thread-safe; meant for tests and tuning harnesses.
template <VectorStore Base>
class InstrumentedStore {
public:
    using QueryState = typename Base::QueryState;

    explicit InstrumentedStore(const Base& base, bool forward_prefetch = true)
        : base_(&base), forward_prefetch_(forward_prefetch), fetches_(base.size(), 0) {
    }

    QueryState
    prepare(std::span<const float> q) const {
        return base_->prepare(q);
    }

    const void*
    locate(NodeId owner, std::uint32_t position, NodeId id) const noexcept {
        return base_->locate(owner, position, id);
    }

    float
    distance(const QueryState& q, NodeId id, const void* payload) const noexcept {
        ++fetches_[id];
        ++total_fetches_;
        return base_->distance(q, id, payload);
    }

    void
    prefetch(const void* payload, std::uint32_t lines) const noexcept {
        ++prefetches_;
        if (forward_prefetch_) {
            base_->prefetch(payload, lines);
        }
    }

    std::size_t
    payload_bytes() const noexcept {
        return base_->payload_bytes();
    }

    std::size_t
    size() const noexcept {
        return base_->size();
    }

    Metric
    metric() const noexcept {
        return base_->metric();
    }

    double
    error_bound(const QueryState& q) const noexcept {
        return base_->error_bound(q);
    }

    void
    reset() noexcept {
        std::fill(fetches_.begin(), fetches_.end(), 0);
        total_fetches_ = 0;
        prefetches_ = 0;
    }

    std::uint32_t
    fetches(NodeId id) const noexcept {
        return fetches_[id];
    }

    std::uint32_t
    max_fetches_per_node() const noexcept {
        return fetches_.empty() ? 0 : *std::max_element(fetches_.begin(), fetches_.end());
    }

    std::uint64_t
    total_fetches() const noexcept {
        return total_fetches_;
    }

    std::uint64_t
    prefetches() const noexcept {
        return prefetches_;
    }

private:
    const Base* base_;
    bool forward_prefetch_;
    mutable std::vector<std::uint32_t> fetches_;
    mutable std::uint64_t total_fetches_{0};
    mutable std::uint64_t prefetches_{0};
};

}  // namespace lgann
