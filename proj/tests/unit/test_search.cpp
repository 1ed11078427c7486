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

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "lgann/bench/groundtruth.hpp"
#include "lgann/bench/synthetic.hpp"
#include "lgann/graph/builder.hpp"
#include "lgann/quant/code_store.hpp"
#include "lgann/search/greedy_search.hpp"
#include "lgann/search/instrumented.hpp"
#include "lgann/search/prs_store.hpp"
#include "support/oracles.hpp"

namespace lgann {
namespace {

const std::vector<float> kRates{1.0F, 1.2F, 1.4F, 1.6F, 1.8F, 2.0F};
const std::vector<NodeId> kEntry{0};

TEST(CandidatePool, KeepsNearestWithinCapacity) {
    CandidatePool pool(3);
    EXPECT_TRUE(pool.insert(5, 5.0F));
    EXPECT_TRUE(pool.insert(1, 1.0F));
    EXPECT_TRUE(pool.insert(3, 3.0F));
    EXPECT_FALSE(pool.insert(7, 7.0F));
    EXPECT_TRUE(pool.insert(2, 3.0F));
    ASSERT_EQ(pool.size(), 3U);
    EXPECT_EQ(pool[0].id, 1U);
    EXPECT_EQ(pool[1].id, 2U);
    EXPECT_EQ(pool[2].id, 3U);
    EXPECT_EQ(pool.pop_nearest_unexpanded().id, 1U);
    pool.shrink(2);
    EXPECT_EQ(pool.size(), 2U);
    EXPECT_EQ(pool.pop_nearest_unexpanded().id, 2U);
    EXPECT_FALSE(pool.has_unexpanded());
}

TEST(VisitedSet, EpochReset) {
    VisitedSet v(10);
    EXPECT_TRUE(v.insert(3));
    EXPECT_FALSE(v.insert(3));
    EXPECT_TRUE(v.contains(3));
    v.clear();
    EXPECT_FALSE(v.contains(3));
    EXPECT_EQ(v.size(), 0U);
}

TEST(GreedySearch, SingleNode) {
    const Dataset ds = Dataset::from_rows({{1, 2}});
    BuildParams bp;
    bp.max_degree = 4;
    bp.ef_construction = 4;
    const GraphIndex g = build_index(ds, bp);
    const FullPrecisionStore store(ds);
    SearchParams sp;
    sp.k = 1;
    const std::vector<float> q{4, 6};
    const auto r = greedy_search(g, store, ds, kEntry, q, sp);
    EXPECT_EQ(r.ids, std::vector<NodeId>{0});
    EXPECT_EQ(r.dists, std::vector<float>{25.0F});
    EXPECT_FALSE(r.stats.underfilled);
}

TEST(GreedySearch, RejectsBadArguments) {
    const Dataset ds = Dataset::from_rows({{1, 2}, {2, 2}});
    BuildParams bp;
    bp.max_degree = 4;
    bp.ef_construction = 4;
    const GraphIndex g = build_index(ds, bp);
    const FullPrecisionStore store(ds);
    const std::vector<float> q{4, 6};
    SearchParams sp;
    sp.k = 3;
    EXPECT_THROW(greedy_search(g, store, ds, kEntry, q, sp), Error);
    sp.k = 1;
    const std::vector<NodeId> far{9};
    EXPECT_THROW(greedy_search(g, store, ds, far, q, sp), Error);
    sp.alpha = 3.0F;
    EXPECT_THROW(greedy_search(g, store, ds, kEntry, q, sp), Error);
    sp.alpha = 0.0F;
    sp.rerank_factor = 0.5;
    EXPECT_THROW(greedy_search(g, store, ds, kEntry, q, sp), Error);
}

// Node 0 with five labeled neighbors; every other node is a leaf.
struct FiveLabelGraph {
    Dataset data = Dataset::from_rows({{0, 0}, {1, 0}, {0, 1.2F}, {-1.4F, 0}, {0, -1.6F}, {1.8F, 1.8F}});
    GraphIndex index;

    FiveLabelGraph() {
        std::vector<LabeledList> adj(6);
        adj[0].ids = {1, 2, 3, 4, 5};
        adj[0].labels = {1.0F, 1.4F, 1.0F, 1.2F, 1.0F};
        for (NodeId id : adj[0].ids) {
            adj[0].dists.push_back(kernels::l2_sqr(data[0].data(), data[id].data(), 2));
        }
        index = GraphIndex(Metric::kSquaredEuclidean, 2, 8, kRates, {0}, adj);
    }
};

TEST(GreedySearch, FiveLabelGraphHopVisitsOneThreeFour) {
    const FiveLabelGraph f;
    const FullPrecisionStore base(f.data);
    InstrumentedStore<FullPrecisionStore> store(base);
    SearchParams sp;
    sp.k = 1;
    sp.ef_search = 8;
    sp.alpha = 1.2F;
    sp.max_neighbors = 3;
    const std::vector<float> q{0.1F, 0.1F};
    std::vector<std::uint64_t> evals;
    greedy_search(f.index, store, f.data, kEntry, q, sp, {}, [&](SearchControl& c) {
        evals.push_back(c.stats().lowprec_evals);
    });
    EXPECT_EQ(store.fetches(0), 1U);
    EXPECT_EQ(store.fetches(1), 1U);
    EXPECT_EQ(store.fetches(2), 0U);
    EXPECT_EQ(store.fetches(3), 1U);
    EXPECT_EQ(store.fetches(4), 1U);
    EXPECT_EQ(store.fetches(5), 0U);
    ASSERT_FALSE(evals.empty());
    EXPECT_EQ(evals.front(), 4U);
}

TEST(GreedySearch, PrefetchHintCounts) {
    const FiveLabelGraph f;
    const FullPrecisionStore base(f.data);
    InstrumentedStore<FullPrecisionStore> store(base);
    SearchParams sp;
    sp.k = 1;
    sp.ef_search = 8;
    const std::vector<float> q{0.1F, 0.1F};

    std::vector<std::uint64_t> hints;
    auto record = [&](SearchControl& c) { hints.push_back(c.stats().prefetch_hints); };
    const auto r = greedy_search(f.index, store, f.data, kEntry, q, sp, EnvParams{3, 2}, record);
    ASSERT_FALSE(hints.empty());
    // first hop expands node 0 with |N| = 5: warm-up 3 plus 2 in-loop
    EXPECT_EQ(hints.front(), 5U);
    EXPECT_EQ(store.prefetches(), r.stats.prefetch_hints);
    EXPECT_EQ(r.stats.prefetch_hints, 5U);

    store.reset();
    const auto off = greedy_search(f.index, store, f.data, kEntry, q, sp, EnvParams{0, 4});
    EXPECT_EQ(store.prefetches(), 0U);
    EXPECT_EQ(off.stats.prefetch_hints, 0U);
    EXPECT_EQ(off.ids, r.ids);
    EXPECT_EQ(off.dists, r.dists);
}

TEST(SelectiveRerank, CoversWholePool) {
    std::mt19937_64 rng(2);
    const Dataset ds = synthetic::uniform(40, 4, 3);
    const auto q = testing::random_vector(4, rng);
    std::vector<Neighbor> pool;
    for (NodeId i = 0; i < 40; ++i) {
        pool.push_back({i, static_cast<float>(i)});  // deliberately meaningless order
    }
    const auto r = selective_rerank(pool, q, ds, Metric::kSquaredEuclidean, 5, 100.0, 1e9);
    EXPECT_EQ(r.exact_evaluations, 40U);
    const auto truth = exact_knn(ds, q, 5, Metric::kSquaredEuclidean);
    for (std::size_t i = 0; i < 5; ++i) {
        EXPECT_EQ(r.ids[i], truth[i].id);
        EXPECT_EQ(r.dists[i], truth[i].dist);
    }
}

TEST(SelectiveRerank, PoolOfExactlyK) {
    const Dataset ds = synthetic::uniform(10, 3, 4);
    const std::vector<float> q{0, 0, 0};
    std::vector<Neighbor> pool;
    for (NodeId i = 0; i < 4; ++i) {
        pool.push_back({i, static_cast<float>(i)});
    }
    const auto r = selective_rerank(pool, q, ds, Metric::kSquaredEuclidean, 4, 1.0, 0.0);
    EXPECT_EQ(r.exact_evaluations, 4U);
    EXPECT_EQ(r.ids.size(), 4U);
    EXPECT_THROW(selective_rerank({}, q, ds, Metric::kSquaredEuclidean, 4, 1.0, 0.0), Error);
}

TEST(SelectiveRerank, FixesInvertedQuantizedOrder) {
    // 4-bit codes over [0, 1.5] have step 0.1. With q = 0.14, a = 0.155
    // decodes to 0.2 and b = 0.12 decodes to 0.1, so the codes put b first
    // while a is truly nearer.
    const Dataset ds = Dataset::from_rows({{0.155F}, {0.12F}});
    QuantizerModel m;
    m.bits = 4;
    m.lower = {0.0F};
    m.upper = {1.5F};
    const QuantizedStore store(m, encode_dataset(m, ds));
    const std::vector<float> q{0.14F};
    const auto qs = store.prepare(q);
    std::vector<Neighbor> pool{{0, store.distance(qs, 0, store.locate(kInvalidNode, 0, 0))},
                               {1, store.distance(qs, 1, store.locate(kInvalidNode, 0, 1))}};
    std::sort(pool.begin(), pool.end());
    ASSERT_EQ(pool.front().id, 1U);
    const auto wide = selective_rerank(pool, q, ds, Metric::kSquaredEuclidean, 1, 2.0, store.error_bound(qs));
    EXPECT_EQ(wide.ids, std::vector<NodeId>{0});
    EXPECT_EQ(wide.exact_evaluations, 2U);
    const auto narrow = selective_rerank(pool, q, ds, Metric::kSquaredEuclidean, 1, 1.0, store.error_bound(qs));
    EXPECT_EQ(narrow.ids, std::vector<NodeId>{1});
}

TEST(SelectiveRerank, BudgetRounding) {
    EXPECT_EQ(rerank_budget(3.0, 10, 100), 30U);
    EXPECT_EQ(rerank_budget(1.5, 3, 100), 5U);
    EXPECT_EQ(rerank_budget(3.0, 10, 12), 12U);
}

class DeskIndex : public ::testing::Test {
protected:
    static void
    SetUpTestSuite() {
        auto [base, queries] = synthetic::clustered_with_queries(2000, 100, 16, 42);
        data_ = new Dataset(std::move(base));
        queries_ = new Dataset(std::move(queries));
        BuildParams bp;
        bp.max_degree = 24;
        bp.ef_construction = 96;
        index_ = new GraphIndex(build_index(*data_, bp));
        truth_ = new GroundTruth(brute_force_groundtruth(*data_, *queries_, 10, Metric::kSquaredEuclidean));
        const auto model = train_quantizer(*data_, 8, 0.995);
        quantized_ = new QuantizedStore(model, encode_dataset(model, *data_));
    }

    static void
    TearDownTestSuite() {
        delete quantized_;
        delete truth_;
        delete index_;
        delete queries_;
        delete data_;
    }

    template <VectorStore Store>
    static double
    mean_recall(const Store& store, const SearchParams& sp) {
        double total = 0.0;
        Searcher searcher;
        for (std::size_t i = 0; i < queries_->size(); ++i) {
            const auto r = searcher.search(*index_, store, *data_, kEntry, (*queries_)[i], sp);
            total += compute_recall(r.ids, truth_->ids[i], 10);
        }
        return total / static_cast<double>(queries_->size());
    }

    static Dataset* data_;
    static Dataset* queries_;
    static GraphIndex* index_;
    static GroundTruth* truth_;
    static QuantizedStore* quantized_;
};

Dataset* DeskIndex::data_ = nullptr;
Dataset* DeskIndex::queries_ = nullptr;
GraphIndex* DeskIndex::index_ = nullptr;
GroundTruth* DeskIndex::truth_ = nullptr;
QuantizedStore* DeskIndex::quantized_ = nullptr;

TEST_F(DeskIndex, RecallAgainstBruteForce) {
    const FullPrecisionStore store(*data_);
    SearchParams sp;
    sp.ef_search = 64;
    EXPECT_GE(mean_recall(store, sp), 0.95);
}

TEST_F(DeskIndex, RecallOnUniformData) {
    const Dataset base = synthetic::uniform(2000, 16, 77);
    const Dataset queries = synthetic::uniform(100, 16, 78);
    BuildParams bp;
    const GraphIndex g = build_index(base, bp);
    const FullPrecisionStore store(base);
    const auto gt = brute_force_groundtruth(base, queries, 10, Metric::kSquaredEuclidean);
    SearchParams sp;
    sp.ef_search = 64;
    double total = 0.0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        total += compute_recall(greedy_search(g, store, base, kEntry, queries[i], sp).ids, gt.ids[i], 10);
    }
    EXPECT_GE(total / 100.0, 0.95);
}

TEST_F(DeskIndex, QuantizedRecallCloseToFullPrecision) {
    const FullPrecisionStore store(*data_);
    SearchParams sp;
    sp.ef_search = 64;
    const double full = mean_recall(store, sp);
    const double quant = mean_recall(*quantized_, sp);
    EXPECT_GE(quant, full - 0.01);
}

TEST_F(DeskIndex, ResultsAreExactDistances) {
    SearchParams sp;
    sp.ef_search = 48;
    for (std::size_t i = 0; i < 20; ++i) {
        const auto q = (*queries_)[i];
        const auto r = greedy_search(*index_, *quantized_, *data_, kEntry, q, sp);
        ASSERT_EQ(r.ids.size(), 10U);
        EXPECT_LE(r.stats.exact_evals, 30U);
        std::set<NodeId> distinct(r.ids.begin(), r.ids.end());
        EXPECT_EQ(distinct.size(), r.ids.size());
        for (std::size_t j = 0; j < r.ids.size(); ++j) {
            EXPECT_EQ(r.dists[j], exact_distance((*data_)[r.ids[j]], q, Metric::kSquaredEuclidean));
            if (j > 0) {
                EXPECT_LE(r.dists[j - 1], r.dists[j]);
            }
        }
    }
}

TEST_F(DeskIndex, PoolBoundAndSingleFetch) {
    const InstrumentedStore<QuantizedStore> store(*quantized_);
    SearchParams sp;
    sp.ef_search = 40;
    Searcher searcher;
    for (std::size_t i = 0; i < 30; ++i) {
        const_cast<InstrumentedStore<QuantizedStore>&>(store).reset();
        std::size_t max_pool = 0;
        const auto r = searcher.search(*index_, store, *data_, kEntry, (*queries_)[i], sp, {},
                                       [&](SearchControl& c) { max_pool = std::max(max_pool, c.pool().size()); });
        EXPECT_LE(max_pool, 40U);
        EXPECT_LE(store.max_fetches_per_node(), 1U);
        EXPECT_EQ(store.total_fetches(), r.stats.lowprec_evals);
    }
}

TEST_F(DeskIndex, PrefetchNeutrality) {
    SearchParams sp;
    sp.ef_search = 48;
    for (std::size_t i = 0; i < 10; ++i) {
        const auto q = (*queries_)[i];
        const auto ref = greedy_search(*index_, *quantized_, *data_, kEntry, q, sp);
        for (std::uint32_t w = 0; w <= 8; ++w) {
            for (std::uint32_t nu : {1U, 2U, 4U}) {
                const auto r = greedy_search(*index_, *quantized_, *data_, kEntry, q, sp, EnvParams{w, nu});
                ASSERT_EQ(r.ids, ref.ids);
                ASSERT_EQ(r.dists, ref.dists);
            }
        }
    }
}

TEST_F(DeskIndex, PrsBlocksAndNeutrality) {
    const auto none = build_prs(*index_, *quantized_, 0.0);
    EXPECT_EQ(none.block_count(), 0U);
    EXPECT_EQ(none.extra_bytes(), 0U);
    const auto half = build_prs(*index_, *quantized_, 0.5);
    EXPECT_EQ(half.block_count(), 1000U);
    const auto full = build_prs(*index_, *quantized_, 1.0);
    EXPECT_EQ(full.block_count(), 2000U);
    EXPECT_EQ(full.extra_bytes(), index_->edge_count() * quantized_->codes().code_len_bytes());

    for (NodeId i = 0; i < index_->size(); ++i) {
        const auto block = full.block(*index_, i);
        const std::size_t len = quantized_->codes().code_len_bytes();
        for (std::size_t p = 0; p < index_->degree(i); ++p) {
            const auto global = quantized_->codes().code(index_->neighbors(i)[p]);
            ASSERT_TRUE(std::equal(global.begin(), global.end(), block.begin() + static_cast<std::ptrdiff_t>(p * len)));
        }
    }

    // the half store picks the highest in-degree nodes
    const auto in = index_->in_degrees();
    std::uint32_t min_with = UINT32_MAX;
    std::uint32_t max_without = 0;
    for (NodeId i = 0; i < index_->size(); ++i) {
        if (half.has_block(i)) {
            min_with = std::min(min_with, in[i]);
        } else {
            max_without = std::max(max_without, in[i]);
        }
    }
    EXPECT_GE(min_with, max_without);

    SearchParams sp;
    sp.ef_search = 48;
    for (std::size_t i = 0; i < 20; ++i) {
        const auto q = (*queries_)[i];
        const auto a = greedy_search(*index_, none, *data_, kEntry, q, sp, EnvParams{2, 1});
        const auto b = greedy_search(*index_, half, *data_, kEntry, q, sp, EnvParams{2, 1});
        const auto c = greedy_search(*index_, full, *data_, kEntry, q, sp, EnvParams{2, 1});
        ASSERT_EQ(a.ids, b.ids);
        ASSERT_EQ(a.ids, c.ids);
        ASSERT_EQ(a.dists, b.dists);
        ASSERT_EQ(a.dists, c.dists);
    }
    EXPECT_THROW(build_prs(*index_, *quantized_, 1.5), Error);
}

TEST_F(DeskIndex, RecallNonDecreasingInEf) {
    const FullPrecisionStore store(*data_);
    double prev = 0.0;
    for (std::uint32_t ef : {10U, 20U, 40U, 80U, 160U}) {
        SearchParams sp;
        sp.ef_search = ef;
        const double r = mean_recall(store, sp);
        EXPECT_GE(r, prev - 0.005) << "ef_search " << ef;
        prev = r;
    }
}

TEST(GreedySearch, InnerProductMetric) {
    const Dataset base = synthetic::uniform(500, 8, 5);
    const Dataset queries = synthetic::uniform(20, 8, 6);
    BuildParams bp;
    bp.max_degree = 16;
    bp.ef_construction = 64;
    const GraphIndex g = build_index(base, bp, Metric::kInnerProduct);
    EXPECT_EQ(g.metric(), Metric::kInnerProduct);
    const FullPrecisionStore store(base, Metric::kInnerProduct);
    const auto gt = brute_force_groundtruth(base, queries, 10, Metric::kInnerProduct);
    SearchParams sp;
    sp.ef_search = 200;
    double total = 0.0;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        const auto r = greedy_search(g, store, base, kEntry, queries[i], sp);
        total += compute_recall(r.ids, gt.ids[i], 10);
        for (std::size_t j = 0; j < r.ids.size(); ++j) {
            EXPECT_EQ(r.dists[j], exact_distance(base[r.ids[j]], queries[i], Metric::kInnerProduct));
        }
    }
    EXPECT_GE(total / static_cast<double>(queries.size()), 0.8);
}

TEST(GreedySearch, UnderfilledOnDisconnectedGraph) {
    const Dataset ds = Dataset::from_rows({{0, 0}, {1, 0}, {5, 5}});
    std::vector<LabeledList> adj(3);
    adj[0] = {{1}, {1.0F}, {1.0F}};
    adj[1] = {{0}, {1.0F}, {1.0F}};
    const GraphIndex g(Metric::kSquaredEuclidean, 2, 4, kRates, {0}, adj);
    const FullPrecisionStore store(ds);
    SearchParams sp;
    sp.k = 3;
    sp.ef_search = 3;
    const std::vector<float> q{0, 0};
    const auto r = greedy_search(g, store, ds, kEntry, q, sp);
    EXPECT_TRUE(r.stats.underfilled);
    EXPECT_EQ(r.ids, (std::vector<NodeId>{0, 1}));
}

}  // namespace
}  // namespace lgann
