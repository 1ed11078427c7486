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
#include <random>
#include <utility>
#include <vector>

#include "lgann/core/dataset.hpp"

namespace lgann::synthetic {

/// n vectors with components uniform in [lo, hi).
inline Dataset
uniform(std::size_t n, std::size_t dim, std::uint64_t seed, float lo = -1.0F, float hi = 1.0F) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> dist(lo, hi);
    std::vector<float> values(n * dim);
    for (auto& v : values) {
        v = dist(rng);
    }
    return Dataset(dim, std::move(values));
}

struct MixtureSpec {
    std::size_t clusters{16};
    float center_spread{1.0F};  // centers uniform in [-spread, spread)
    float cluster_stddev{0.1F};
};

/// Gaussian mixture: centers drawn first, then each vector picks a center
/// uniformly and adds isotropic noise.
inline Dataset
clustered(std::size_t n, std::size_t dim, std::uint64_t seed, const MixtureSpec& spec = {}) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<float> center_dist(-spec.center_spread, spec.center_spread);
    std::normal_distribution<float> noise(0.0F, spec.cluster_stddev);
    std::uniform_int_distribution<std::size_t> pick(0, spec.clusters - 1);

    std::vector<float> centers(spec.clusters * dim);
    for (auto& c : centers) {
        c = center_dist(rng);
    }
    std::vector<float> values(n * dim);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = pick(rng);
        for (std::size_t d = 0; d < dim; ++d) {
            values[i * dim + d] = centers[c * dim + d] + noise(rng);
        }
    }
    return Dataset(dim, std::move(values));
}

/// Same mixture as clustered(n, ...) with the same seed, but `queries` fresh
/// draws taken after the base points.
inline std::pair<Dataset, Dataset>
clustered_with_queries(std::size_t n, std::size_t queries, std::size_t dim, std::uint64_t seed,
                       const MixtureSpec& spec = {}) {
    Dataset all = clustered(n + queries, dim, seed, spec);
    return {all.slice(0, n), all.slice(n, queries)};
}

}  // namespace lgann::synthetic
