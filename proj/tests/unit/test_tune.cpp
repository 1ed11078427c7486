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


#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <random>
#include <vector>

#include "lgann/bench/groundtruth.hpp"
#include "lgann/bench/synthetic.hpp"
#include "lgann/graph/builder.hpp"
#include "lgann/tune/elp.hpp"
#include "lgann/tune/features.hpp"
#include "lgann/tune/ilp.hpp"
#include "lgann/tune/pareto.hpp"
#include "lgann/tune/qlp.hpp"

namespace lgann {
namespace {

const std::vector<float> kRates{1.0F, 1.2F, 1.4F, 1.6F, 1.8F, 2.0F};

// Elapsed time per repetition is looked up by grid position; the tuner reads
// the clock twice per repetition, strides outer and depths inner.
class ScriptedClock {
public:
    ScriptedClock(std::vector<EnvParams> order, std::uint32_t reps, std::map<std::pair<int, int>, double> elapsed)
        : order_(std::move(order)), reps_(reps), elapsed_(std::move(elapsed)) {
    }

    double
    operator()() {
        const std::size_t call = calls_++;
        const std::size_t run = call / 2;
        if (call % 2 == 0) {
            return now_;
        }
        const EnvParams& env = order_.at(run / reps_);
        const auto it = elapsed_.find({static_cast<int>(env.prefetch_stride), static_cast<int>(env.prefetch_depth)});
        now_ += it == elapsed_.end() ? 1.0 : it->second;
        return now_;
    }

    std::size_t
    calls() const {
        return calls_;
    }

private:
    std::vector<EnvParams> order_;
    std::uint32_t reps_;
    std::map<std::pair<int, int>, double> elapsed_;
    std::size_t calls_{0};
    double now_{0.0};
};

class SmallIndex : public ::testing::Test {
protected:
    static void
    SetUpTestSuite() {
        auto [base, queries] = synthetic::clustered_with_queries(1500, 50, 12, 7);
        base_ = new Dataset(std::move(base));
        queries_ = new Dataset(std::move(queries));
        BuildParams bp;
        bp.max_degree = 32;
        bp.ef_construction = 64;
        bp.pruning_rates = kRates;
        index_ = new GraphIndex(build_index(*base_, bp));
        truth_ = new GroundTruth(brute_force_groundtruth(*base_, *queries_, 10, Metric::kSquaredEuclidean));
    }

    static void
    TearDownTestSuite() {
        delete truth_;
        delete index_;
        delete queries_;
        delete base_;
    }

    static Dataset* base_;
    static Dataset* queries_;
    static GraphIndex* index_;
    static GroundTruth* truth_;
};

Dataset* SmallIndex::base_ = nullptr;
Dataset* SmallIndex::queries_ = nullptr;
GraphIndex* SmallIndex::index_ = nullptr;
GroundTruth* SmallIndex::truth_ = nullptr;

std::vector<EnvParams>
grid_order(const ElpGrid& g) {
    std::vector<EnvParams> out;
    for (auto s : g.strides) {
        for (auto d : g.depths) {
            out.push_back({s, d});
        }
    }
    return out;
}

TEST_F(SmallIndex, ElpPicksScriptedFastest) {
    const FullPrecisionStore store(*base_);
    ElpGrid grid;
    grid.strides = {0, 2, 4, 8};
    grid.depths = {1, 2, 4};
    grid.sample_queries = sample_base_queries(*base_, 8, 3);
    ScriptedClock clock(grid_order(grid), grid.repetitions, {{{4, 2}, 0.5}});
    SearchParams sp;
    const ElpResult r = tune_elp(*index_, store, *base_, grid, sp, std::ref(clock));
    EXPECT_EQ(r.best, (EnvParams{4, 2}));
    EXPECT_EQ(r.measurements.size(), 12U);
    EXPECT_EQ(clock.calls(), 12U * 3U * 2U);
    EXPECT_DOUBLE_EQ(r.measurements[7].median_qps, 16.0);
}

TEST_F(SmallIndex, ElpTieGoesToSmallerConfig) {
    const FullPrecisionStore store(*base_);
    ElpGrid grid;
    grid.strides = {8, 2};
    grid.depths = {4, 1};
    grid.sample_queries = sample_base_queries(*base_, 4, 3);
    ScriptedClock clock(grid_order(grid), grid.repetitions, {});
    const ElpResult r = tune_elp(*index_, store, *base_, grid, SearchParams{}, std::ref(clock));
    EXPECT_EQ(r.best, (EnvParams{2, 1}));
}

TEST_F(SmallIndex, ElpSingleConfigAndErrors) {
    const FullPrecisionStore store(*base_);
    ElpGrid grid;
    grid.strides = {3};
    grid.depths = {2};
    grid.sample_queries = sample_base_queries(*base_, 4, 3);
    EXPECT_EQ(tune_elp(*index_, store, *base_, grid, SearchParams{}).best, (EnvParams{3, 2}));

    ElpGrid empty = grid;
    empty.depths.clear();
    EXPECT_THROW(tune_elp(*index_, store, *base_, empty, SearchParams{}), Error);
    ElpGrid few = grid;
    few.repetitions = 2;
    EXPECT_THROW(tune_elp(*index_, store, *base_, few, SearchParams{}), Error);
}

TEST_F(SmallIndex, ElpChoiceKeepsResults) {
    const FullPrecisionStore store(*base_);
    ElpGrid grid;
    grid.sample_queries = sample_base_queries(*base_, 16, 5);
    SearchParams sp;
    const EnvParams chosen = tune_elp(*index_, store, *base_, grid, sp).best;
    for (std::size_t q = 0; q < queries_->size(); ++q) {
        const auto a = greedy_search(*index_, store, *base_, index_->entry_points(), (*queries_)[q], sp);
        const auto b = greedy_search(*index_, store, *base_, index_->entry_points(), (*queries_)[q], sp, chosen);
        EXPECT_EQ(a.ids, b.ids);
        EXPECT_EQ(a.dists, b.dists);
    }
}

TEST(SampleBaseQueries, DistinctRowsInIdOrder) {
    const Dataset ds = synthetic::uniform(50, 3, 1);
    const Dataset s = sample_base_queries(ds, 10, 9);
    ASSERT_EQ(s.size(), 10U);
    EXPECT_EQ(sample_base_queries(ds, 10, 9).values(), s.values());
    EXPECT_EQ(sample_base_queries(ds, 500, 9).size(), 50U);
}

TEST(Features, HandSnapshots) {
    const std::vector<float> prev{1, 2, 3, 4, 5};
    const std::vector<float> cur{1, 1.5F, 2, 2.5F, 3};
    const auto f = extract_features(cur, top5_mean(prev), 40, 5);
    ASSERT_TRUE(f.has_value());
    EXPECT_DOUBLE_EQ(f->top5_progression, 1.0);
    EXPECT_DOUBLE_EQ(f->top5_mean, 2.0);
    EXPECT_DOUBLE_EQ(f->top5_min, 1.0);
    EXPECT_DOUBLE_EQ(f->top5_max, 3.0);
    EXPECT_DOUBLE_EQ(f->top5_std, std::sqrt(0.5));
    EXPECT_DOUBLE_EQ(f->topk_gap, 2.0);
    EXPECT_DOUBLE_EQ(f->scanned_count, 40.0);
}

TEST(Features, FlatPoolAndNoProgress) {
    const std::vector<float> same{2, 2, 2, 2, 2, 2};
    const auto f = extract_features(same, top5_mean(same), 10, 6);
    ASSERT_TRUE(f.has_value());
    EXPECT_EQ(f->top5_std, 0.0);
    EXPECT_EQ(f->topk_gap, 0.0);
    EXPECT_EQ(f->top5_progression, 0.0);
}

TEST(Features, DeferredBelowFiveAndFiniteAtZero) {
    const std::vector<float> four{1, 2, 3, 4};
    EXPECT_FALSE(extract_features(four, std::nullopt, 4, 1).has_value());
    const std::vector<float> zero{0, 0, 1, 1, 2};
    const auto f = extract_features(zero, std::nullopt, 5, 5);
    ASSERT_TRUE(f.has_value());
    for (double v : f->values()) {
        EXPECT_TRUE(std::isfinite(v));
    }
}

TEST(DecisionTree, SeparatesThresholdAndRespectsDepth) {
    using Tree = DecisionTree<2>;
    std::vector<Tree::Row> rows;
    std::vector<int> labels;
    for (int i = 0; i < 40; ++i) {
        rows.push_back({static_cast<double>(i), static_cast<double>(i % 3)});
        labels.push_back(i < 17 ? 1 : 0);
    }
    Tree t;
    t.fit(rows, labels, 6);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(t.predict(rows[i]), labels[i]);
    }
    EXPECT_EQ(t.depth(), 1U);

    std::mt19937 rng(3);
    std::uniform_int_distribution<int> coin(0, 1);
    for (auto& y : labels) {
        y = coin(rng);
    }
    t.fit(rows, labels, 3);
    EXPECT_LE(t.depth(), 3U);
    EXPECT_EQ(Tree::constant(1).predict({0, 0}), 1);
    EXPECT_TRUE(Tree::constant(0).is_constant());
}

TEST(DecisionTree, RejectsBadInputs) {
    using Tree = DecisionTree<1>;
    Tree t;
    std::vector<Tree::Row> rows{{1.0}};
    std::vector<int> bad{2};
    EXPECT_THROW(t.fit(rows, bad, 3), Error);
    EXPECT_THROW(t.fit({}, {}, 3), Error);
}

TEST_F(SmallIndex, ConstantKeepMatchesEfHigh) {
    const FullPrecisionStore store(*base_);
    QlpConfig cfg;
    cfg.ef_low = 16;
    cfg.ef_high = 96;
    const auto model = DecisionModel::constant(QlpAction::kKeep, cfg);
    SearchParams base;
    SearchParams high = base;
    high.ef_search = cfg.ef_high;
    for (std::size_t q = 0; q < 20; ++q) {
        const auto a = adaptive_search(*index_, store, *base_, index_->entry_points(), (*queries_)[q], model, base);
        const auto b = greedy_search(*index_, store, *base_, index_->entry_points(), (*queries_)[q], high);
        EXPECT_EQ(a.result.ids, b.ids);
        EXPECT_EQ(a.result.dists, b.dists);
        EXPECT_EQ(a.result.stats.lowprec_evals, b.stats.lowprec_evals);
    }
}

TEST_F(SmallIndex, NoOpShrinkMatchesEfHigh) {
    const FullPrecisionStore store(*base_);
    QlpConfig cfg;
    cfg.ef_low = 64;
    cfg.ef_high = 64;
    const auto model = DecisionModel::constant(QlpAction::kShrink, cfg);
    SearchParams high;
    high.ef_search = 64;
    for (std::size_t q = 0; q < 20; ++q) {
        const auto a = adaptive_search(*index_, store, *base_, index_->entry_points(), (*queries_)[q], model, high);
        const auto b = greedy_search(*index_, store, *base_, index_->entry_points(), (*queries_)[q], high);
        EXPECT_EQ(a.result.ids, b.ids);
        EXPECT_EQ(a.result.dists, b.dists);
        EXPECT_EQ(a.action, QlpAction::kShrink);
    }
}

TEST_F(SmallIndex, ShrinkNeverBelowEfLowRecall) {
    const FullPrecisionStore store(*base_);
    QlpConfig cfg;
    cfg.ef_low = 12;
    cfg.ef_high = 128;
    const auto model = DecisionModel::constant(QlpAction::kShrink, cfg);
    SearchParams low;
    low.ef_search = cfg.ef_low;
    double adaptive = 0.0;
    double fixed_low = 0.0;
    for (std::size_t q = 0; q < queries_->size(); ++q) {
        const auto a = adaptive_search(*index_, store, *base_, index_->entry_points(), (*queries_)[q], model, low);
        const auto b = greedy_search(*index_, store, *base_, index_->entry_points(), (*queries_)[q], low);
        adaptive += compute_recall(a.result.ids, truth_->ids[q], 10);
        fixed_low += compute_recall(b.ids, truth_->ids[q], 10);
    }
    EXPECT_GE(adaptive, fixed_low);
}

TEST_F(SmallIndex, TrainingDegenerateLabels) {
    const FullPrecisionStore store(*base_);
    SearchParams sp;
    QlpConfig cfg;
    cfg.ef_low = 64;
    cfg.ef_high = 128;
    cfg.target_recall = 0.0;
    const auto all_simple = train_qlp_model(*index_, store, *base_, *queries_, *truth_, sp, cfg);
    EXPECT_TRUE(all_simple.degenerate);
    EXPECT_TRUE(all_simple.tree.is_constant());
    EXPECT_EQ(all_simple.decide(QueryFeatures{}), QlpAction::kShrink);

    // scored against the farthest points, no query is ever simple
    GroundTruth farthest = *truth_;
    for (std::size_t q = 0; q < queries_->size(); ++q) {
        auto all = exact_knn(*base_, (*queries_)[q], base_->size(), Metric::kSquaredEuclidean);
        for (std::size_t i = 0; i < farthest.k; ++i) {
            farthest.ids[q][i] = all[all.size() - 1 - i].id;
        }
    }
    cfg.ef_low = 10;
    cfg.target_recall = 0.1;
    const auto none_simple = train_qlp_model(*index_, store, *base_, *queries_, farthest, sp, cfg);
    EXPECT_TRUE(none_simple.degenerate);
    EXPECT_EQ(none_simple.decide(QueryFeatures{}), QlpAction::kKeep);
    EXPECT_EQ(none_simple.train_queries + none_simple.holdout_queries + none_simple.skipped_queries,
              queries_->size());
}

TEST(QlpConfig, Validation) {
    QlpConfig c;
    EXPECT_NO_THROW(c.validate(10));
    c.ef_low = 5;
    EXPECT_THROW(c.validate(10), Error);
    c = QlpConfig{};
    c.max_depth = 7;
    EXPECT_THROW(c.validate(10), Error);
    c = QlpConfig{};
    c.checkpoint_hop = 0;
    EXPECT_THROW(c.validate(10), Error);
}

IlpPoint
point(std::uint32_t m, double recall, double qps) {
    IlpPoint p;
    p.config = IlpConfig{m, 1.0F, 64};
    p.recall = recall;
    p.qps = qps;
    return p;
}

TEST(Pareto, RemovesStrictlyDominated) {
    const auto f = pareto_frontier({point(1, 0.90, 1000), point(2, 0.89, 900)});
    ASSERT_EQ(f.points.size(), 1U);
    EXPECT_EQ(f.points[0].config.max_neighbors, 1U);
    EXPECT_EQ(pareto_frontier({point(1, 0.5, 10)}).points.size(), 1U);
    EXPECT_EQ(pareto_frontier({point(1, 0.5, 10), point(2, 0.5, 10)}).points.size(), 2U);
}

TEST(Pareto, NoReturnedPointDominatedRandom) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    std::vector<IlpPoint> pts;
    for (std::uint32_t i = 0; i < 200; ++i) {
        pts.push_back(point(i, u(rng), 1000 * u(rng)));
    }
    const auto f = pareto_frontier(pts);
    for (const auto& p : f.points) {
        for (const auto& o : pts) {
            EXPECT_FALSE(dominates(o, p));
        }
    }
    for (const auto& p : pts) {
        const bool kept = std::any_of(f.points.begin(), f.points.end(),
                                      [&](const IlpPoint& x) { return x.config == p.config; });
        const bool dominated = std::any_of(pts.begin(), pts.end(), [&](const IlpPoint& o) { return dominates(o, p); });
        EXPECT_EQ(kept, !dominated);
    }
}

TEST(SelectIlp, ThreeConfigTradeoff) {
    const auto f = pareto_frontier({point(1, 0.91, 2000), point(2, 0.90, 2100), point(3, 0.89, 2200)});
    ASSERT_EQ(f.points.size(), 3U);
    EXPECT_EQ(select_ilp(f, IlpConstraint::min_recall(0.90)).config.max_neighbors, 2U);
    EXPECT_EQ(select_ilp(f, IlpConstraint::min_recall(0.905)).config.max_neighbors, 1U);
    EXPECT_EQ(select_ilp(f, IlpConstraint::max_latency(1.0 / 2050)).config.max_neighbors, 2U);
    try {
        select_ilp(f, IlpConstraint::min_recall(0.95));
        FAIL() << "expected an unsatisfiable constraint";
    } catch (const Error& e) {
        EXPECT_EQ(e.type(), ErrorType::kUnsatisfiable);
        EXPECT_NE(std::string(e.what()).find("0.91"), std::string::npos);
    }
    EXPECT_THROW(select_ilp(f, IlpConstraint::max_latency(1e-6)), Error);
    EXPECT_THROW(select_ilp(ParetoFrontier{}, IlpConstraint::min_recall(0.5)), Error);
}

TEST(SelectIlp, SinglePointAndTies) {
    const auto single = pareto_frontier({point(4, 0.8, 100)});
    EXPECT_EQ(select_ilp(single, IlpConstraint::min_recall(0.8)).config.max_neighbors, 4U);
    ParetoFrontier tied{{point(9, 0.9, 100), point(3, 0.9, 100)}};
    EXPECT_EQ(select_ilp(tied, IlpConstraint::min_recall(0.5)).config.max_neighbors, 3U);
    EXPECT_EQ(select_ilp(tied, IlpConstraint::max_latency(1.0)).config.max_neighbors, 3U);
}

TEST_F(SmallIndex, SweepWithoutRebuilds) {
    const FullPrecisionStore store(*base_);
    IlpGrid grid;
    grid.max_neighbors = {8, 32};
    grid.alphas = {1.0F, 2.0F};
    const auto before = build_invocation_counter().load();
    const IlpSweep s = sweep_ilp(*index_, store, *base_, *queries_, *truth_, grid, SearchParams{});
    EXPECT_EQ(build_invocation_counter().load(), before);
    EXPECT_EQ(s.evaluated.size(), 4U);
    EXPECT_FALSE(s.frontier.points.empty());
    for (const auto& p : s.frontier.points) {
        for (const auto& o : s.evaluated) {
            EXPECT_FALSE(dominates(o, p));
        }
        EXPECT_GE(p.recall, 0.0);
        EXPECT_LE(p.recall, 1.0);
    }
}

TEST_F(SmallIndex, SweepSingleAndErrors) {
    const FullPrecisionStore store(*base_);
    IlpGrid grid;
    grid.max_neighbors = {16};
    grid.alphas = {1.4F};
    EXPECT_EQ(sweep_ilp(*index_, store, *base_, *queries_, *truth_, grid, SearchParams{}).frontier.points.size(), 1U);
    grid.alphas = {2.5F};
    EXPECT_THROW(sweep_ilp(*index_, store, *base_, *queries_, *truth_, grid, SearchParams{}), Error);
    grid.alphas = {1.0F};
    grid.max_neighbors = {64};
    EXPECT_THROW(sweep_ilp(*index_, store, *base_, *queries_, *truth_, grid, SearchParams{}), Error);
}

}  // namespace
}  // namespace lgann
