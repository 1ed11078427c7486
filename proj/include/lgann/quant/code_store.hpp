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
#include <span>
#include <utility>
#include <vector>

#include "lgann/core/binary.hpp"
#include "lgann/core/dataset.hpp"
#include "lgann/quant/scalar_quantizer.hpp"

namespace lgann {

/// Fixed-stride table of packed codes, one row per base vector.
class CodeStore {
public:
    CodeStore() = default;

    CodeStore(std::uint32_t bits, std::size_t dim, std::size_t count)
        : bits_(bits), dim_(dim), count_(count), code_len_((dim * bits + 7) / 8),
          codes_(count * code_len_) {
        check_bits(bits);
    }

    std::uint32_t
    bits() const noexcept {
        return bits_;
    }

    std::size_t
    dim() const noexcept {
        return dim_;
    }

    std::size_t
    size() const noexcept {
        return count_;
    }

    std::size_t
    code_len_bytes() const noexcept {
        return code_len_;
    }

    std::span<const std::uint8_t>
    code(std::size_t i) const noexcept {
        return {codes_.data() + i * code_len_, code_len_};
    }

    std::span<std::uint8_t>
    mutable_code(std::size_t i) noexcept {
        return {codes_.data() + i * code_len_, code_len_};
    }

    const std::vector<std::uint8_t>&
    bytes() const noexcept {
        return codes_;
    }

    friend bool
    operator==(const CodeStore& a, const CodeStore& b) = default;

private:
    std::uint32_t bits_{8};
    std::size_t dim_{0};
    std::size_t count_{0};
    std::size_t code_len_{0};
    std::vector<std::uint8_t> codes_;
};

inline CodeStore
encode_dataset(const QuantizerModel& model, const Dataset& dataset) {
    check_dims(dataset.dim(), model.dim());
    CodeStore store(model.bits, model.dim(), dataset.size());
    for (std::size_t i = 0; i < dataset.size(); ++i) {
        encode_into(model, dataset[i], store.mutable_code(i));
    }
    return store;
}

inline constexpr std::uint32_t kCodeFormatVersion = 1;

/// "VSQC" | version | bits | dim | count(u64) | lower f32[dim] | upper f32[dim] | codes.
inline binary::Bytes
serialize_codes(const QuantizerModel& model, const CodeStore& store) {
    check_dims(model.dim(), store.dim());
    if (model.bits != store.bits()) {
        fail(ErrorType::kInvalidArgument, "model bits ", model.bits, " != store bits ", store.bits());
    }
    binary::Writer w;
    w.magic("VSQC");
    w.u32(kCodeFormatVersion);
    w.u32(model.bits);
    w.u32(static_cast<std::uint32_t>(model.dim()));
    w.u64(store.size());
    for (float v : model.lower) {
        w.f32(v);
    }
    for (float v : model.upper) {
        w.f32(v);
    }
    w.raw(store.bytes());
    return w.take();
}

inline std::pair<QuantizerModel, CodeStore>
deserialize_codes(std::span<const std::uint8_t> bytes) {
    binary::Reader r(bytes);
    r.expect_magic("VSQC");
    const std::uint32_t version = r.u32();
    if (version != kCodeFormatVersion) {
        fail(ErrorType::kCorruptData, "unsupported code file version ", version);
    }
    QuantizerModel model;
    model.bits = r.u32();
    if (model.bits != 4 && model.bits != 8) {
        fail(ErrorType::kCorruptData, "bad bit width ", model.bits);
    }
    const std::uint32_t dim = r.u32();
    const std::uint64_t count = r.u64();
    if (dim == 0) {
        fail(ErrorType::kCorruptData, "zero dimension");
    }
    model.lower.resize(dim);
    model.upper.resize(dim);
    for (auto& v : model.lower) {
        v = r.f32();
    }
    for (auto& v : model.upper) {
        v = r.f32();
    }
    for (std::uint32_t d = 0; d < dim; ++d) {
        if (!(model.lower[d] <= model.upper[d])) {
            fail(ErrorType::kCorruptData, "lower > upper at dimension ", d);
        }
    }
    const std::size_t code_len = model.code_len_bytes();
    if (count > r.remaining() / code_len) {
        fail(ErrorType::kCorruptData, "truncated code table: ", count, " codes declared");
    }
    CodeStore store(model.bits, dim, static_cast<std::size_t>(count));
    auto payload = r.raw(static_cast<std::size_t>(count) * code_len);
    for (std::size_t i = 0; i < store.size(); ++i) {
        auto src = payload.subspan(i * code_len, code_len);
        std::copy(src.begin(), src.end(), store.mutable_code(i).begin());
    }
    if (!r.done()) {
        fail(ErrorType::kCorruptData, r.remaining(), " trailing bytes after code table");
    }
    return {std::move(model), std::move(store)};
}

}  // namespace lgann
