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

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <span>
#include <string_view>
#include <vector>

#include "lgann/core/error.hpp"

// Little-endian byte encoding shared by every on-disk format.
namespace lgann::binary {

using Bytes = std::vector<std::uint8_t>;

class Writer {
public:
    void
    u32(std::uint32_t v) {
        for (int s = 0; s < 32; s += 8) {
            out_.push_back(static_cast<std::uint8_t>(v >> s));
        }
    }

    void
    i32(std::int32_t v) {
        u32(static_cast<std::uint32_t>(v));
    }

    void
    u64(std::uint64_t v) {
        for (int s = 0; s < 64; s += 8) {
            out_.push_back(static_cast<std::uint8_t>(v >> s));
        }
    }

    void
    f32(float v) {
        u32(std::bit_cast<std::uint32_t>(v));
    }

    void
    magic(std::string_view tag) {
        out_.insert(out_.end(), tag.begin(), tag.end());
    }

    void
    raw(std::span<const std::uint8_t> bytes) {
        out_.insert(out_.end(), bytes.begin(), bytes.end());
    }

    Bytes&
    bytes() noexcept {
        return out_;
    }

    Bytes
    take() noexcept {
        return std::move(out_);
    }

private:
    Bytes out_;
};

class Reader {
public:
    explicit Reader(std::span<const std::uint8_t> in) : in_(in) {
    }

    std::uint32_t
    u32() {
        need(4, "u32");
        std::uint32_t v = 0;
        for (int s = 0; s < 32; s += 8) {
            v |= static_cast<std::uint32_t>(in_[pos_++]) << s;
        }
        return v;
    }

    std::int32_t
    i32() {
        return static_cast<std::int32_t>(u32());
    }

    std::uint64_t
    u64() {
        need(8, "u64");
        std::uint64_t v = 0;
        for (int s = 0; s < 64; s += 8) {
            v |= static_cast<std::uint64_t>(in_[pos_++]) << s;
        }
        return v;
    }

    float
    f32() {
        return std::bit_cast<float>(u32());
    }

    void
    expect_magic(std::string_view tag) {
        need(tag.size(), "magic");
        if (std::memcmp(in_.data() + pos_, tag.data(), tag.size()) != 0) {
            fail(ErrorType::kCorruptData, "bad magic, expected '", tag, "'");
        }
        pos_ += tag.size();
    }

    std::span<const std::uint8_t>
    raw(std::size_t n) {
        need(n, "payload");
        auto out = in_.subspan(pos_, n);
        pos_ += n;
        return out;
    }

    std::size_t
    remaining() const noexcept {
        return in_.size() - pos_;
    }

    bool
    done() const noexcept {
        return pos_ == in_.size();
    }

    std::size_t
    position() const noexcept {
        return pos_;
    }

private:
    void
    need(std::size_t n, const char* what) const {
        if (in_.size() - pos_ < n) {
            fail(ErrorType::kCorruptData, "truncated input reading ", what, " at byte ", pos_);
        }
    }

    std::span<const std::uint8_t> in_;
    std::size_t pos_{0};
};

inline Bytes
read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail(ErrorType::kIo, "cannot open '", path.string(), "' for reading");
    }
    return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void
write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail(ErrorType::kIo, "cannot open '", path.string(), "' for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        fail(ErrorType::kIo, "short write to '", path.string(), "'");
    }
}

}  // namespace lgann::binary
