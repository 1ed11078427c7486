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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "lgann/bench/groundtruth.hpp"
#include "lgann/core/dataset.hpp"
#include "lgann/core/error.hpp"
#include "lgann/graph/graph_index.hpp"
#include "lgann/search/greedy_search.hpp"
#include "lgann/tune/decision_tree.hpp"
#include "lgann/tune/features.hpp"

namespace lgann {

enum class QlpAction : int {
    kKeep = 0,
    kShrink = 1,
};

struct QlpConfig {
    std::uint32_t ef_low{16};
    std::uint32_t ef_high{128};
    std::uint32_t checkpoint_hop{10};
    double target_recall{0.9};
    std::uint32_t max_depth{6};
    std::uint32_t min_leaf{20};      // fewest training queries a split may leave on one side
    std::uint32_t holdout_every{5};  // every n-th training query is held out

    void
    validate(std::uint32_t k) const {
        if (ef_low < k || ef_low > ef_high) {
            fail(ErrorType::kInvalidArgument, "need k <= ef_low <= ef_high, got k=", k, " ef_low=", ef_low,
                 " ef_high=", ef_high);
        }
        if (checkpoint_hop == 0) {
            fail(ErrorType::kInvalidArgument, "checkpoint hop must be positive");
        }
        if (max_depth > 6) {
            fail(ErrorType::kInvalidArgument, "tree depth is limited to 6, got ", max_depth);
        }
        if (!(target_recall >= 0.0 && target_recall <= 1.0)) {
            fail(ErrorType::kInvalidArgument, "target recall must lie in [0, 1]");
        }
        if (min_leaf == 0) {
            fail(ErrorType::kInvalidArgument, "min_leaf must be positive");
        }
        if (holdout_every < 2) {
            fail(ErrorType::kInvalidArgument, "holdout_every must be at least 2");
        }
    }
};

using QlpTree = DecisionTree<QueryFeatures::kCount>;

struct DecisionModel {
    QlpConfig config;
    QlpTree tree{QlpTree::constant(static_cast<int>(QlpAction::kKeep))};
    bool degenerate{false};  // all training labels agreed; tree is a constant
    double holdout_accuracy{1.0};
    double train_accuracy{1.0};
    std::size_t train_queries{0};
    std::size_t holdout_queries{0};
    std::size_t skipped_queries{0};  // never reached the checkpoint
    std::size_t simple_queries{0};

    QlpAction
    decide(const QueryFeatures& f) const {
        return static_cast<QlpAction>(tree.predict(f.values()));
    }

    static DecisionModel
    constant(QlpAction action, const QlpConfig& config) {
        DecisionModel m;
        m.config = config;
        m.tree = QlpTree::constant(static_cast<int>(action));
        m.degenerate = true;
        return m;
    }
};

/*
 * Hop observer that snapshots the pool: the top-5 mean at hop
 * ceil(checkpoint / 2), then features at the first hop >= checkpoint where
 * the pool holds at least five candidates. With a model attached it also
 * applies the decision once, shrinking the pool to ef_low.
 */
class CheckpointProbe {
public:
    CheckpointProbe(const QlpConfig& config, std::uint32_t k, const DecisionModel* model = nullptr)
        : config_(config), k_(k), model_(model) {
    }

    void
    operator()(SearchControl& control) {
        if (features_.has_value()) {
            return;
        }
        const std::uint64_t hop = control.hops();
        const auto pool = control.pool().entries();
        const std::size_t take = std::min<std::size_t>(pool.size(), std::max<std::size_t>(k_, kTopFeatureCount));
        dists_.clear();
        for (std::size_t i = 0; i < take; ++i) {
            dists_.push_back(pool[i].neighbor.dist);
        }
        if (hop == (config_.checkpoint_hop + 1) / 2 && dists_.size() >= kTopFeatureCount) {
            previous_mean_ = top5_mean(dists_);
        }
        if (hop < config_.checkpoint_hop) {
            return;
        }
        features_ = extract_features(dists_, previous_mean_, control.visited_count(), k_);
        if (features_.has_value() && model_ != nullptr) {
            action_ = model_->decide(*features_);
            if (action_ == QlpAction::kShrink) {
                control.shrink_pool(config_.ef_low);
            }
        }
    }

    const std::optional<QueryFeatures>&
    features() const noexcept {
        return features_;
    }

    QlpAction
    action() const noexcept {
        return action_;
    }

private:
    QlpConfig config_;
    std::uint32_t k_;
    const DecisionModel* model_;
    std::vector<float> dists_;
    std::optional<double> previous_mean_;
    std::optional<QueryFeatures> features_;
    QlpAction action_{QlpAction::kKeep};
};

struct AdaptiveResult {
    SearchResult result;
    std::optional<QueryFeatures> features;
    QlpAction action{QlpAction::kKeep};
};

/// Searches with ef_high and lets the model cut the pool to ef_low at the
/// checkpoint. `base` supplies k, max_neighbors, alpha and the re-rank factor.
template <VectorStore Store>
AdaptiveResult
adaptive_search(Searcher& searcher,
                const GraphIndex& index,
                const Store& store,
                const Dataset& dataset,
                std::span<const NodeId> entry,
                std::span<const float> query,
                const DecisionModel& model,
                SearchParams base,
                const EnvParams& env = {}) {
    model.config.validate(base.k);
    base.ef_search = model.config.ef_high;
    CheckpointProbe probe(model.config, base.k, &model);
    AdaptiveResult out;
    out.result = searcher.search(index, store, dataset, entry, query, base, env, probe);
    out.features = probe.features();
    out.action = probe.action();
    return out;
}

template <VectorStore Store>
AdaptiveResult
adaptive_search(const GraphIndex& index,
                const Store& store,
                const Dataset& dataset,
                std::span<const NodeId> entry,
                std::span<const float> query,
                const DecisionModel& model,
                const SearchParams& base,
                const EnvParams& env = {}) {
    Searcher searcher(index.size());
    return adaptive_search(searcher, index, store, dataset, entry, query, model, base, env);
}

/*
 * A query is "simple" when a plain ef_low search already reaches the target
 * recall. Features come from an ef_high search at the checkpoint. Every
 * holdout_every-th query (1-based) is held out to measure accuracy.
 */
template <VectorStore Store>
DecisionModel
train_qlp_model(const GraphIndex& index,
                const Store& store,
                const Dataset& dataset,
                const Dataset& queries,
                const GroundTruth& truth,
                const SearchParams& base,
                const QlpConfig& config) {
    config.validate(base.k);
    if (queries.empty()) {
        fail(ErrorType::kInvalidArgument, "QLP training needs queries");
    }
    if (truth.ids.size() != queries.size() || truth.k < base.k) {
        fail(ErrorType::kInvalidArgument, "ground truth does not cover the training queries at k=", base.k);
    }
    const std::span<const NodeId> entry = index.entry_points();
    Searcher searcher(index.size());

    std::vector<QlpTree::Row> train_rows;
    std::vector<int> train_labels;
    std::vector<QlpTree::Row> hold_rows;
    std::vector<int> hold_labels;
    DecisionModel model;
    model.config = config;
    for (std::size_t q = 0; q < queries.size(); ++q) {
        SearchParams low = base;
        low.ef_search = config.ef_low;
        const auto r_low = searcher.search(index, store, dataset, entry, queries[q], low);
        const bool simple = compute_recall(r_low.ids, truth.ids[q], base.k) >= config.target_recall;

        SearchParams high = base;
        high.ef_search = config.ef_high;
        CheckpointProbe probe(config, base.k);
        searcher.search(index, store, dataset, entry, queries[q], high, {}, probe);
        if (!probe.features().has_value()) {
            ++model.skipped_queries;
            continue;
        }
        model.simple_queries += simple ? 1 : 0;
        const bool holdout = (q + 1) % config.holdout_every == 0;
        (holdout ? hold_rows : train_rows).push_back(probe.features()->values());
        (holdout ? hold_labels : train_labels).push_back(simple ? 1 : 0);
    }
    model.train_queries = train_rows.size();
    model.holdout_queries = hold_rows.size();
    if (train_rows.empty()) {
        fail(ErrorType::kInvalidArgument, "no training query reached checkpoint hop ", config.checkpoint_hop);
    }

    const auto positives = static_cast<std::size_t>(std::count(train_labels.begin(), train_labels.end(), 1));
    if (positives == 0 || positives == train_labels.size()) {
        model.tree = QlpTree::constant(positives == 0 ? 0 : 1);
        model.degenerate = true;
    } else {
        model.tree.fit(train_rows, train_labels, config.max_depth, config.min_leaf);
    }
    const auto accuracy = [&](const std::vector<QlpTree::Row>& rows, const std::vector<int>& labels) {
        if (rows.empty()) {
            return 1.0;
        }
        std::size_t hits = 0;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            hits += model.tree.predict(rows[i]) == labels[i] ? 1 : 0;
        }
        return static_cast<double>(hits) / static_cast<double>(rows.size());
    };
    model.train_accuracy = accuracy(train_rows, train_labels);
    model.holdout_accuracy = accuracy(hold_rows, hold_labels);
    return model;
}

}  // namespace lgann
