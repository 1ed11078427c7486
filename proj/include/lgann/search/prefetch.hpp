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

namespace lgann {

inline constexpr std::size_t kCacheLineBytes = 64;

/// Advisory read prefetch of `lines` cache lines starting at `addr`.
/// Never faults and never changes any computed value.
inline void
prefetch_hint(const void* addr, std::uint32_t lines) noexcept {
#if defined(__GNUC__) || defined(__clang__)
    const auto* p = static_cast<const char*>(addr);
    for (std::uint32_t l = 0; l < lines; ++l) {
        __builtin_prefetch(p + l * kCacheLineBytes, 0, 3);
    }
#else
    (void)addr;
    (void)lines;
#endif
}

}  // namespace lgann
