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

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "lgann/core/error.hpp"
#include "lgann/core/types.hpp"

namespace lgann {

inline void
check_finite(std::span<const float> v) {
    for (std::size_t d = 0; d < v.size(); ++d) {
        if (!std::isfinite(v[d])) {
            fail(ErrorType::kInvalidArgument, "non-finite value at component ", d);
        }
    }
}

/// Row-major collection of fixed-dimension float vectors. Ids are row positions.
class Dataset {
public:
    Dataset() = default;

    explicit Dataset(std::size_t dim) : dim_(dim) {
        if (dim == 0) {
            fail(ErrorType::kInvalidArgument, "dataset dimension must be positive");
        }
    }

    Dataset(std::size_t dim, std::vector<float> values) : Dataset(dim) {
        if (values.size() % dim != 0) {
            fail(ErrorType::kDimensionMismatch,
                 "buffer of ",
                 values.size(),
                 " floats is not a multiple of dimension ",
                 dim);
        }
        check_finite(values);
        values_ = std::move(values);
    }

    static Dataset
    from_rows(std::initializer_list<std::initializer_list<float>> rows) {
        if (rows.size() == 0) {
            fail(ErrorType::kInvalidArgument, "from_rows needs at least one row");
        }
        Dataset ds(rows.begin()->size());
        for (const auto& row : rows) {
            ds.push_back(std::span<const float>(row.begin(), row.size()));
        }
        return ds;
    }

    void
    push_back(std::span<const float> v) {
        check_dims(v.size(), dim_);
        check_finite(v);
        values_.insert(values_.end(), v.begin(), v.end());
    }

    void
    reserve(std::size_t n) {
        values_.reserve(n * dim_);
    }

    std::size_t
    dim() const noexcept {
        return dim_;
    }

    std::size_t
    size() const noexcept {
        return dim_ == 0 ? 0 : values_.size() / dim_;
    }

    bool
    empty() const noexcept {
        return values_.empty();
    }

    std::span<const float>
    operator[](std::size_t i) const noexcept {
        return {values_.data() + i * dim_, dim_};
    }

    std::span<const float>
    at(std::size_t i) const {
        if (i >= size()) {
            fail(ErrorType::kOutOfRange, "vector id ", i, " outside dataset of size ", size());
        }
        return (*this)[i];
    }

    const std::vector<float>&
    values() const noexcept {
        return values_;
    }

    /// Copies rows [first, first + count) into a new dataset.
    Dataset
    slice(std::size_t first, std::size_t count) const {
        if (first + count > size()) {
            fail(ErrorType::kOutOfRange, "slice [", first, ", ", first + count, ") past ", size());
        }
        Dataset out(dim_);
        out.values_.assign(values_.begin() + static_cast<std::ptrdiff_t>(first * dim_),
                           values_.begin() + static_cast<std::ptrdiff_t>((first + count) * dim_));
        return out;
    }

    friend bool
    operator==(const Dataset& a, const Dataset& b) = default;

private:
    std::size_t dim_{0};
    std::vector<float> values_;
};

}  // namespace lgann
