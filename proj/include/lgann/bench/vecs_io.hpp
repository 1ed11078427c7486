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
#include <filesystem>
#include <span>
#include <vector>

#include "lgann/core/binary.hpp"
#include "lgann/core/dataset.hpp"
#include "lgann/core/error.hpp"
#include "lgann/core/types.hpp"

namespace lgann {

// .fvecs / .ivecs: each record is a little-endian int32 dimension followed
// by that many little-endian float32 / int32 values.

inline Dataset
parse_fvecs(std::span<const std::uint8_t> bytes) {
    binary::Reader r(bytes);
    Dataset out;
    std::vector<float> values;
    std::size_t dim = 0;
    std::size_t record = 0;
    while (!r.done()) {
        const std::int32_t d = r.i32();
        if (d <= 0) {
            fail(ErrorType::kCorruptData, "fvecs record ", record, " has non-positive dimension ", d);
        }
        if (record == 0) {
            dim = static_cast<std::size_t>(d);
        } else if (static_cast<std::size_t>(d) != dim) {
            fail(ErrorType::kCorruptData, "fvecs record ", record, " has dimension ", d, ", expected ", dim);
        }
        if (r.remaining() < dim * sizeof(float)) {
            fail(ErrorType::kCorruptData, "fvecs record ", record, " is truncated");
        }
        for (std::size_t i = 0; i < dim; ++i) {
            values.push_back(r.f32());
        }
        ++record;
    }
    if (record == 0) {
        return out;
    }
    return Dataset(dim, std::move(values));
}

inline binary::Bytes
serialize_fvecs(const Dataset& dataset) {
    binary::Writer w;
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        w.i32(static_cast<std::int32_t>(dataset.dim()));
        for (float v : dataset[i]) {
            w.f32(v);
        }
    }
    return w.take();
}

inline std::vector<std::vector<NodeId>>
parse_ivecs(std::span<const std::uint8_t> bytes) {
    binary::Reader r(bytes);
    std::vector<std::vector<NodeId>> out;
    while (!r.done()) {
        const std::int32_t d = r.i32();
        if (d < 0) {
            fail(ErrorType::kCorruptData, "ivecs record ", out.size(), " has negative length ", d);
        }
        if (r.remaining() / sizeof(std::int32_t) < static_cast<std::size_t>(d)) {
            fail(ErrorType::kCorruptData, "ivecs record ", out.size(), " is truncated");
        }
        std::vector<NodeId> ids(static_cast<std::size_t>(d));
        for (auto& id : ids) {
            const std::int32_t v = r.i32();
            if (v < 0) {
                fail(ErrorType::kCorruptData, "ivecs record ", out.size(), " holds negative id ", v);
            }
            id = static_cast<NodeId>(v);
        }
        out.push_back(std::move(ids));
    }
    return out;
}

inline binary::Bytes
serialize_ivecs(const std::vector<std::vector<NodeId>>& lists) {
    binary::Writer w;
    for (const auto& list : lists) {
        w.i32(static_cast<std::int32_t>(list.size()));
        for (NodeId id : list) {
            if (id > static_cast<NodeId>(INT32_MAX)) {
                fail(ErrorType::kOutOfRange, "id ", id, " does not fit an ivecs int32");
            }
            w.i32(static_cast<std::int32_t>(id));
        }
    }
    return w.take();
}

namespace detail {

template <typename Parse>
auto
parse_file(const std::filesystem::path& path, Parse&& parse) {
    const binary::Bytes bytes = binary::read_file(path);
    try {
        return parse(bytes);
    } catch (const Error& e) {
        fail(e.type(), path.string(), ": ", e.message());
    }
}

}  // namespace detail

inline Dataset
read_fvecs(const std::filesystem::path& path) {
    return detail::parse_file(path, [](const binary::Bytes& b) { return parse_fvecs(b); });
}

inline void
write_fvecs(const Dataset& dataset, const std::filesystem::path& path) {
    binary::write_file(path, serialize_fvecs(dataset));
}

inline std::vector<std::vector<NodeId>>
read_ivecs(const std::filesystem::path& path) {
    return detail::parse_file(path, [](const binary::Bytes& b) { return parse_ivecs(b); });
}

inline void
write_ivecs(const std::vector<std::vector<NodeId>>& lists, const std::filesystem::path& path) {
    binary::write_file(path, serialize_ivecs(lists));
}

}  // namespace lgann
