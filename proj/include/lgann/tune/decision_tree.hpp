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
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <vector>

#include "lgann/core/error.hpp"

namespace lgann {

/*
 * Binary classification tree over fixed-width feature rows, grown greedily
 * by information gain (entropy) with axis-aligned threshold splits. Splits
 * are only kept when both children are non-empty and the gain is positive,
 * so every leaf holds at least one training row.
 */
template <std::size_t Width>
class DecisionTree {
public:
    using Row = std::array<double, Width>;

    struct Node {
        int feature{-1};  // -1 marks a leaf
        double threshold{0.0};
        std::int32_t left{-1};   // feature value <= threshold
        std::int32_t right{-1};
        int label{0};
        std::size_t samples{0};
    };

    static DecisionTree
    constant(int label) {
        DecisionTree t;
        t.nodes_.push_back(Node{-1, 0.0, -1, -1, label, 0});
        return t;
    }

    void
    fit(std::span<const Row> rows, std::span<const int> labels, std::uint32_t max_depth,
        std::size_t min_leaf = 1) {
        if (rows.empty() || rows.size() != labels.size()) {
            fail(ErrorType::kInvalidArgument, "decision tree needs matching non-empty rows and labels");
        }
        for (int y : labels) {
            if (y != 0 && y != 1) {
                fail(ErrorType::kInvalidArgument, "decision tree labels must be 0 or 1");
            }
        }
        rows_ = rows;
        labels_ = labels;
        nodes_.clear();
        std::vector<std::size_t> idx(rows.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        grow(idx, 0, max_depth, std::max<std::size_t>(min_leaf, 1));
        rows_ = {};
        labels_ = {};
    }

    int
    predict(const Row& row) const {
        if (nodes_.empty()) {
            fail(ErrorType::kInvalidArgument, "decision tree has not been fitted");
        }
        std::size_t cur = 0;
        while (nodes_[cur].feature >= 0) {
            const Node& n = nodes_[cur];
            cur = static_cast<std::size_t>(row[static_cast<std::size_t>(n.feature)] <= n.threshold ? n.left : n.right);
        }
        return nodes_[cur].label;
    }

    std::uint32_t
    depth() const {
        return nodes_.empty() ? 0 : depth_of(0);
    }

    bool
    is_constant() const noexcept {
        return nodes_.size() == 1;
    }

    const std::vector<Node>&
    nodes() const noexcept {
        return nodes_;
    }

    /// Rebuilds a tree from a node table, checking the links.
    static DecisionTree
    from_nodes(std::vector<Node> nodes) {
        if (nodes.empty()) {
            fail(ErrorType::kCorruptData, "decision tree without nodes");
        }
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const Node& n = nodes[i];
            if (n.feature < 0) {
                continue;
            }
            const auto valid = [&](std::int32_t c) {
                return c > static_cast<std::int32_t>(i) && c < static_cast<std::int32_t>(nodes.size());
            };
            if (n.feature >= static_cast<int>(Width) || !valid(n.left) || !valid(n.right)) {
                fail(ErrorType::kCorruptData, "decision tree node ", i, " has invalid links");
            }
        }
        DecisionTree t;
        t.nodes_ = std::move(nodes);
        return t;
    }

private:
    static double
    entropy(std::size_t pos, std::size_t total) {
        if (pos == 0 || pos == total) {
            return 0.0;
        }
        const double p = static_cast<double>(pos) / static_cast<double>(total);
        return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
    }

    std::int32_t
    grow(std::vector<std::size_t>& idx, std::uint32_t depth, std::uint32_t max_depth, std::size_t min_leaf) {
        const auto self = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(Node{});
        std::size_t pos = 0;
        for (std::size_t i : idx) {
            pos += static_cast<std::size_t>(labels_[i]);
        }
        const std::size_t total = idx.size();
        // majority label, ties to 0 (keep)
        nodes_[self].label = 2 * pos > total ? 1 : 0;
        nodes_[self].samples = total;
        if (depth >= max_depth || pos == 0 || pos == total) {
            return self;
        }

        const double parent = entropy(pos, total);
        double best_gain = 1e-12;
        int best_feature = -1;
        double best_threshold = 0.0;
        std::vector<std::size_t> order(idx);
        for (std::size_t f = 0; f < Width; ++f) {
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return rows_[a][f] != rows_[b][f] ? rows_[a][f] < rows_[b][f] : a < b;
            });
            std::size_t left_pos = 0;
            for (std::size_t s = 0; s + 1 < total; ++s) {
                left_pos += static_cast<std::size_t>(labels_[order[s]]);
                const double v = rows_[order[s]][f];
                const double next = rows_[order[s + 1]][f];
                const std::size_t left_n = s + 1;
                if (v == next || left_n < min_leaf || total - left_n < min_leaf) {
                    continue;
                }
                const double child = (static_cast<double>(left_n) * entropy(left_pos, left_n) +
                                      static_cast<double>(total - left_n) * entropy(pos - left_pos, total - left_n)) /
                                     static_cast<double>(total);
                const double gain = parent - child;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = static_cast<int>(f);
                    best_threshold = v + 0.5 * (next - v);
                    if (!(best_threshold < next)) {
                        best_threshold = v;
                    }
                }
            }
        }
        if (best_feature < 0) {
            return self;
        }

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (std::size_t i : idx) {
            (rows_[i][static_cast<std::size_t>(best_feature)] <= best_threshold ? left : right).push_back(i);
        }
        nodes_[self].feature = best_feature;
        nodes_[self].threshold = best_threshold;
        const std::int32_t l = grow(left, depth + 1, max_depth, min_leaf);
        const std::int32_t r = grow(right, depth + 1, max_depth, min_leaf);
        nodes_[self].left = l;
        nodes_[self].right = r;
        return self;
    }

    std::uint32_t
    depth_of(std::size_t i) const {
        const Node& n = nodes_[i];
        if (n.feature < 0) {
            return 0;
        }
        return 1 + std::max(depth_of(static_cast<std::size_t>(n.left)), depth_of(static_cast<std::size_t>(n.right)));
    }

    std::vector<Node> nodes_;
    std::span<const Row> rows_;
    std::span<const int> labels_;
};

}  // namespace lgann
