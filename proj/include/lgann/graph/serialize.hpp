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
#include <filesystem>
#include <span>
#include <vector>

#include "lgann/core/binary.hpp"
#include "lgann/graph/graph_index.hpp"

namespace lgann {

inline constexpr std::uint32_t kIndexFormatVersion = 1;

// Layout (little-endian):
//   "VSGI" | version u32 | metric u32 | dim u32 | n u64 | max_degree u32
//   | rate_count u32 | rates f32[] | entry_count u32 | entries u32[]
//   | per node: degree u32 | ids u32[degree] | labels f32[degree] | dists f32[degree]
inline binary::Bytes
serialize_index(const GraphIndex& index) {
    binary::Writer w;
    w.magic("VSGI");
    w.u32(kIndexFormatVersion);
    w.u32(static_cast<std::uint32_t>(index.metric()));
    w.u32(static_cast<std::uint32_t>(index.dim()));
    w.u64(index.size());
    w.u32(index.max_degree());
    w.u32(static_cast<std::uint32_t>(index.rates().size()));
    for (float a : index.rates()) {
        w.f32(a);
    }
    w.u32(static_cast<std::uint32_t>(index.entry_points().size()));
    for (NodeId e : index.entry_points()) {
        w.u32(e);
    }
    for (std::size_t i = 0; i < index.size(); ++i) {
        const auto node = static_cast<NodeId>(i);
        w.u32(index.degree(node));
        for (NodeId id : index.neighbors(node)) {
            w.u32(id);
        }
        for (float l : index.labels(node)) {
            w.f32(l);
        }
        for (float d : index.dists(node)) {
            w.f32(d);
        }
    }
    return w.take();
}

inline GraphIndex
deserialize_index(std::span<const std::uint8_t> bytes) {
    binary::Reader r(bytes);
    r.expect_magic("VSGI");
    const std::uint32_t version = r.u32();
    if (version != kIndexFormatVersion) {
        fail(ErrorType::kCorruptData, "unsupported index file version ", version);
    }
    const Metric metric = metric_from_u32(r.u32());
    const std::uint32_t dim = r.u32();
    const std::uint64_t n = r.u64();
    const std::uint32_t max_degree = r.u32();
    const std::uint32_t rate_count = r.u32();
    if (rate_count > r.remaining() / 4) {
        fail(ErrorType::kCorruptData, "truncated pruning rates");
    }
    std::vector<float> rates(rate_count);
    for (auto& a : rates) {
        a = r.f32();
    }
    const std::uint32_t entry_count = r.u32();
    if (entry_count > r.remaining() / 4) {
        fail(ErrorType::kCorruptData, "truncated entry points");
    }
    std::vector<NodeId> entries(entry_count);
    for (auto& e : entries) {
        e = r.u32();
    }
    // every node needs at least its degree word
    if (n > r.remaining() / 4) {
        fail(ErrorType::kCorruptData, "truncated adjacency: ", n, " nodes declared");
    }
    std::vector<LabeledList> adjacency(static_cast<std::size_t>(n));
    for (auto& list : adjacency) {
        const std::uint32_t degree = r.u32();
        if (degree > max_degree) {
            fail(ErrorType::kCorruptData, "degree ", degree, " exceeds max_degree ", max_degree);
        }
        list.ids.resize(degree);
        list.labels.resize(degree);
        list.dists.resize(degree);
        for (auto& id : list.ids) {
            id = r.u32();
        }
        for (auto& l : list.labels) {
            l = r.f32();
        }
        for (auto& d : list.dists) {
            d = r.f32();
        }
    }
    if (!r.done()) {
        fail(ErrorType::kCorruptData, r.remaining(), " trailing bytes after adjacency");
    }
    try {
        return GraphIndex(metric, dim, max_degree, std::move(rates), std::move(entries), adjacency);
    } catch (const Error& e) {
        fail(ErrorType::kCorruptData, e.what());
    }
}

inline void
save_index(const GraphIndex& index, const std::filesystem::path& path) {
    binary::write_file(path, serialize_index(index));
}

inline GraphIndex
load_index(const std::filesystem::path& path) {
    return deserialize_index(binary::read_file(path));
}

}  // namespace lgann
