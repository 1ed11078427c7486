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
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "lgann/core/dataset.hpp"
#include "lgann/core/distance.hpp"
#include "lgann/core/types.hpp"
#include "lgann/quant/code_store.hpp"
#include "lgann/quant/lowprec.hpp"
#include "lgann/search/prefetch.hpp"

namespace lgann {

/*
 * A vector store supplies the low-precision distance used while traversing.
 *
 * locate(owner, position, id) only computes the address of id's payload as
 * seen from slot `position` of `owner`'s adjacency (owner == kInvalidNode for
 * seeds); distance(...) is the single call that reads payload memory.
 * error_bound(q) bounds |tau_l - tau_h| on the metric scale (sqrt units for
 * squared Euclidean).
 */
template <typename S>
concept VectorStore = requires(const S& s,
                               std::span<const float> q,
                               const typename S::QueryState& qs,
                               NodeId id,
                               std::uint32_t pos,
                               const void* payload) {
    { s.prepare(q) } -> std::same_as<typename S::QueryState>;
    { s.locate(id, pos, id) } -> std::same_as<const void*>;
    { s.distance(qs, id, payload) } -> std::same_as<float>;
    { s.prefetch(payload, pos) } -> std::same_as<void>;
    { s.payload_bytes() } -> std::same_as<std::size_t>;
    { s.size() } -> std::same_as<std::size_t>;
    { s.metric() } -> std::same_as<Metric>;
    { s.error_bound(qs) } -> std::same_as<double>;
};

/// Full-precision float vectors; distances go through precomputed base norms.
class FullPrecisionStore {
public:
    using QueryState = PreparedQuery;

    explicit FullPrecisionStore(const Dataset& data, Metric metric = Metric::kSquaredEuclidean)
        : data_(&data), norms_(precompute_base_norms(data)), metric_(metric) {
    }

    QueryState
    prepare(std::span<const float> q) const {
        check_dims(q.size(), data_->dim());
        return PreparedQuery(q, metric_);
    }

    const void*
    locate(NodeId /*owner*/, std::uint32_t /*position*/, NodeId id) const noexcept {
        return data_->values().data() + static_cast<std::size_t>(id) * data_->dim();
    }

    float
    distance(const QueryState& q, NodeId id, const void* payload) const noexcept {
        const auto* base = static_cast<const float*>(payload);
        if (metric_ == Metric::kInnerProduct) {
            return static_cast<float>(-kernels::dot(base, q.query().data(), q.dim()));
        }
        return kernels::decomposed_l2(q.query().data(), q.query_norm_sq(), base, norms_[id], q.dim());
    }

    void
    prefetch(const void* payload, std::uint32_t lines) const noexcept {
        prefetch_hint(payload, lines);
    }

    std::size_t
    payload_bytes() const noexcept {
        return data_->dim() * sizeof(float);
    }

    std::size_t
    size() const noexcept {
        return data_->size();
    }

    Metric
    metric() const noexcept {
        return metric_;
    }

    double
    error_bound(const QueryState&) const noexcept {
        return 0.0;
    }

    const Dataset&
    dataset() const noexcept {
        return *data_;
    }

private:
    const Dataset* data_;
    std::vector<float> norms_;
    Metric metric_;
};

/// Scalar-quantized codes; traversal distances are asymmetric (float query vs code).
class QuantizedStore {
public:
    struct QueryState {
        LowPrecQuery lpq;
        double query_norm{0.0};
    };

    QuantizedStore(QuantizerModel model, CodeStore codes, Metric metric = Metric::kSquaredEuclidean)
        : model_(std::move(model)), codes_(std::move(codes)), metric_(metric),
          reconstruction_bound_(model_.reconstruction_error_bound()) {
        check_dims(model_.dim(), codes_.dim());
        if (model_.bits != codes_.bits()) {
            fail(ErrorType::kInvalidArgument, "model bits ", model_.bits, " != code bits ", codes_.bits());
        }
    }

    QueryState
    prepare(std::span<const float> q) const {
        return {prepare_query_lowprec(model_, q, metric_), std::sqrt(static_cast<double>(squared_norm(q)))};
    }

    const void*
    locate(NodeId /*owner*/, std::uint32_t /*position*/, NodeId id) const noexcept {
        return codes_.bytes().data() + static_cast<std::size_t>(id) * codes_.code_len_bytes();
    }

    float
    distance(const QueryState& q, NodeId /*id*/, const void* payload) const noexcept {
        return kernels::lowprec_distance_unchecked(q.lpq, static_cast<const std::uint8_t*>(payload));
    }

    void
    prefetch(const void* payload, std::uint32_t lines) const noexcept {
        prefetch_hint(payload, lines);
    }

    std::size_t
    payload_bytes() const noexcept {
        return codes_.code_len_bytes();
    }

    std::size_t
    size() const noexcept {
        return codes_.size();
    }

    Metric
    metric() const noexcept {
        return metric_;
    }

    double
    error_bound(const QueryState& q) const noexcept {
        return metric_ == Metric::kInnerProduct ? q.query_norm * reconstruction_bound_
                                                : reconstruction_bound_;
    }

    const QuantizerModel&
    model() const noexcept {
        return model_;
    }

    const CodeStore&
    codes() const noexcept {
        return codes_;
    }

private:
    QuantizerModel model_;
    CodeStore codes_;
    Metric metric_;
    double reconstruction_bound_;
};

}  // namespace lgann
