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
#include <vector>

#include "lgann/core/types.hpp"

namespace lgann {

// Epoch-tagged membership set; clear() is O(1) except on epoch wrap.
class VisitedSet {
public:
    explicit VisitedSet(std::size_t capacity = 0) : tags_(capacity, 0) {
    }

    void
    resize(std::size_t capacity) {
        if (tags_.size() < capacity) {
            tags_.resize(capacity, 0);
        }
    }

    void
    clear() {
        ++epoch_;
        count_ = 0;
        if (epoch_ == 0) {
            std::fill(tags_.begin(), tags_.end(), 0);
            epoch_ = 1;
        }
    }

    bool
    contains(NodeId id) const noexcept {
        return tags_[id] == epoch_;
    }

    /// Returns false if `id` was already present.
    bool
    insert(NodeId id) noexcept {
        if (tags_[id] == epoch_) {
            return false;
        }
        tags_[id] = epoch_;
        ++count_;
        return true;
    }

    std::size_t
    size() const noexcept {
        return count_;
    }

    std::size_t
    capacity() const noexcept {
        return tags_.size();
    }

private:
    std::vector<std::uint32_t> tags_;
    std::uint32_t epoch_{1};
    std::size_t count_{0};
};

}  // namespace lgann
