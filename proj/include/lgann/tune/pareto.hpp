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
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "lgann/core/error.hpp"

namespace lgann {

/// Search-time stand-ins for the build parameters, plus the pool size.
struct IlpConfig {
    std::uint32_t max_neighbors{0};  // m_s
    float alpha{0.0F};               // alpha_s
    std::uint32_t ef_search{0};

    friend auto
    operator<=>(const IlpConfig&, const IlpConfig&) = default;
};

struct IlpPoint {
    IlpConfig config;
    double recall{0.0};
    double qps{0.0};
    double mean_hops{0.0};
    double mean_lowprec_evals{0.0};
    double mean_exact_evals{0.0};
};

/// a dominates b: no worse in both objectives, strictly better in one.
inline bool
dominates(const IlpPoint& a, const IlpPoint& b) noexcept {
    return a.recall >= b.recall && a.qps >= b.qps && (a.recall > b.recall || a.qps > b.qps);
}

struct ParetoFrontier {
    std::vector<IlpPoint> points;  // recall descending, then qps ascending
};

/// Non-dominated subset. Points with identical (recall, qps) are all kept.
inline ParetoFrontier
pareto_frontier(const std::vector<IlpPoint>& points) {
    ParetoFrontier f;
    for (const IlpPoint& p : points) {
        const bool dominated =
            std::any_of(points.begin(), points.end(), [&](const IlpPoint& o) { return dominates(o, p); });
        if (!dominated) {
            f.points.push_back(p);
        }
    }
    std::sort(f.points.begin(), f.points.end(), [](const IlpPoint& a, const IlpPoint& b) {
        if (a.recall != b.recall) {
            return a.recall > b.recall;
        }
        if (a.qps != b.qps) {
            return a.qps < b.qps;
        }
        return a.config < b.config;
    });
    return f;
}

struct IlpConstraint {
    enum class Kind {
        kMinRecall,
        kMaxLatency,
    };
    Kind kind{Kind::kMinRecall};
    double value{0.0};  // recall in [0, 1], or latency in seconds per query

    static IlpConstraint
    min_recall(double r) {
        return {Kind::kMinRecall, r};
    }

    static IlpConstraint
    max_latency(double seconds) {
        return {Kind::kMaxLatency, seconds};
    }
};

/*
 * Minimum recall: among points with recall >= threshold, the highest qps
 * (ties: higher recall, then the smaller config). Maximum latency: among
 * points with 1/qps <= limit, the highest recall (ties: higher qps, then the
 * smaller config).
 */
inline IlpPoint
select_ilp(const ParetoFrontier& frontier, const IlpConstraint& constraint) {
    if (frontier.points.empty()) {
        fail(ErrorType::kInvalidArgument, "cannot select from an empty frontier");
    }
    const IlpPoint* best = nullptr;
    const bool by_recall = constraint.kind == IlpConstraint::Kind::kMinRecall;
    for (const IlpPoint& p : frontier.points) {
        const bool ok = by_recall ? p.recall >= constraint.value
                                  : p.qps > 0.0 && 1.0 / p.qps <= constraint.value;
        if (!ok) {
            continue;
        }
        if (best == nullptr) {
            best = &p;
            continue;
        }
        const double primary = by_recall ? p.qps - best->qps : p.recall - best->recall;
        const double secondary = by_recall ? p.recall - best->recall : p.qps - best->qps;
        if (primary > 0 || (primary == 0 && (secondary > 0 || (secondary == 0 && p.config < best->config)))) {
            best = &p;
        }
    }
    if (best == nullptr) {
        double best_recall = 0.0;
        double best_qps = 0.0;
        for (const IlpPoint& p : frontier.points) {
            best_recall = std::max(best_recall, p.recall);
            best_qps = std::max(best_qps, p.qps);
        }
        if (by_recall) {
            fail(ErrorType::kUnsatisfiable, "no configuration reaches recall ", constraint.value,
                 "; best available recall is ", best_recall);
        }
        fail(ErrorType::kUnsatisfiable, "no configuration meets latency ", constraint.value,
             " s; fastest available is ", best_qps > 0 ? 1.0 / best_qps : std::numeric_limits<double>::infinity(),
             " s (best available recall ", best_recall, ")");
    }
    return *best;
}

}  // namespace lgann
