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
#include <span>
#include <vector>

#include "lgann/core/error.hpp"
#include "lgann/core/types.hpp"

namespace lgann {

/*
 * Bounded candidate pool of the `capacity` nearest (dist, id) pairs seen so
 * far, each with an expanded flag.
 *
 * Kept as an array sorted by (dist, id) rather than a binary heap: inserting
 * past a full pool evicts the farthest entry, and the cursor to the nearest
 * unexpanded entry only moves backwards when an insertion lands before it.
 */
class CandidatePool {
public:
    struct Entry {
        Neighbor neighbor;
        bool expanded{false};
    };

    explicit CandidatePool(std::size_t capacity = 1) {
        reset(capacity);
    }

    void
    reset(std::size_t capacity) {
        if (capacity == 0) {
            fail(ErrorType::kInvalidArgument, "candidate pool capacity must be positive");
        }
        capacity_ = capacity;
        entries_.clear();
        entries_.reserve(capacity + 1);
        cursor_ = 0;
    }

    /// Inserts unless the pool is full and the pair is not nearer than the
    /// current farthest. Returns true if inserted.
    bool
    insert(NodeId id, float dist) {
        const Neighbor nb{id, dist};
        if (entries_.size() >= capacity_ && !(nb < entries_.back().neighbor)) {
            return false;
        }
        auto pos = std::upper_bound(entries_.begin(), entries_.end(), nb,
                                    [](const Neighbor& v, const Entry& e) { return v < e.neighbor; });
        const auto idx = static_cast<std::size_t>(pos - entries_.begin());
        entries_.insert(pos, Entry{nb, false});
        if (entries_.size() > capacity_) {
            entries_.pop_back();
        }
        if (idx < cursor_) {
            cursor_ = idx;
        }
        return true;
    }

    bool
    has_unexpanded() const noexcept {
        return cursor_ < entries_.size();
    }

    /// Marks the nearest unexpanded entry expanded and returns it.
    Neighbor
    pop_nearest_unexpanded() {
        if (!has_unexpanded()) {
            fail(ErrorType::kOutOfRange, "no unexpanded candidates");
        }
        Entry& e = entries_[cursor_];
        e.expanded = true;
        const Neighbor out = e.neighbor;
        while (cursor_ < entries_.size() && entries_[cursor_].expanded) {
            ++cursor_;
        }
        return out;
    }

    /// Lowers the capacity, evicting the farthest entries.
    void
    shrink(std::size_t capacity) {
        if (capacity == 0) {
            fail(ErrorType::kInvalidArgument, "candidate pool capacity must be positive");
        }
        capacity_ = std::min(capacity_, capacity);
        if (entries_.size() > capacity_) {
            entries_.resize(capacity_);
        }
        cursor_ = std::min(cursor_, entries_.size());
    }

    std::size_t
    size() const noexcept {
        return entries_.size();
    }

    std::size_t
    capacity() const noexcept {
        return capacity_;
    }

    bool
    empty() const noexcept {
        return entries_.empty();
    }

    /// Entries in ascending (dist, id) order.
    std::span<const Entry>
    entries() const noexcept {
        return entries_;
    }

    const Neighbor&
    operator[](std::size_t i) const noexcept {
        return entries_[i].neighbor;
    }

private:
    std::size_t capacity_{1};
    std::vector<Entry> entries_;
    std::size_t cursor_{0};
};

}  // namespace lgann
