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
#include <map>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "lgann/bench/synthetic.hpp"
#include "lgann/graph/builder.hpp"
#include "lgann/graph/filter.hpp"
#include "lgann/graph/labeling.hpp"
#include "lgann/graph/serialize.hpp"
#include "lgann/search/visited.hpp"
#include "support/oracles.hpp"

namespace lgann {
namespace {

const std::vector<float> kRates{1.0F, 1.2F, 1.4F, 1.6F, 1.8F, 2.0F};

auto
pair_fn(const Dataset& ds) {
    return [&ds](NodeId a, NodeId b) { return kernels::l2_sqr(ds[a].data(), ds[b].data(), ds.dim()); };
}

TEST(Labeling, SingleNeighbor) {
    const Dataset ds = Dataset::from_rows({{0, 0}, {1, 0}});
    const std::vector<Neighbor> ann{{1, 1.0F}};
    const std::vector<float> rates{1.0F, 2.0F};
    const auto out = prune_based_labeling(ann, rates, 4, pair_fn(ds));
    EXPECT_EQ(out.ids, std::vector<NodeId>{1});
    EXPECT_EQ(out.labels, std::vector<float>{1.0F});
}

TEST(Labeling, CollinearHandExample) {
    // node 0 at the origin, candidates at x = 1 and x = 2.5
    const Dataset ds = Dataset::from_rows({{0, 0}, {1, 0}, {2.5F, 0}});
    const std::vector<Neighbor> ann{{1, 1.0F}, {2, 6.25F}};
    const std::vector<float> rates{1.0F, 2.0F};
    const auto out = prune_based_labeling(ann, rates, 3, pair_fn(ds));
    EXPECT_EQ(out.ids, (std::vector<NodeId>{1, 2}));
    EXPECT_EQ(out.labels, (std::vector<float>{1.0F, 2.0F}));
    EXPECT_EQ(out.dists, (std::vector<float>{1.0F, 6.25F}));
}

TEST(Labeling, DegreeCap) {
    const Dataset ds = Dataset::from_rows({{0, 0}, {1, 0}, {0, 1.1F}, {-1.2F, 0}});
    const std::vector<Neighbor> ann{{1, 1.0F}, {2, 1.21F}, {3, 1.44F}};
    const std::vector<float> rates{1.0F};
    const auto out = prune_based_labeling(ann, rates, 2, pair_fn(ds));
    EXPECT_EQ(out.ids, (std::vector<NodeId>{1, 2}));
    EXPECT_EQ(out.labels, (std::vector<float>{1.0F, 1.0F}));
}

TEST(Labeling, RejectsBadInput) {
    const Dataset ds = Dataset::from_rows({{0, 0}, {1, 0}, {2, 0}});
    const std::vector<Neighbor> unsorted{{2, 4.0F}, {1, 1.0F}};
    EXPECT_THROW(prune_based_labeling(unsorted, kRates, 4, pair_fn(ds)), Error);
    const std::vector<Neighbor> ann{{1, 1.0F}};
    const std::vector<float> prefix{1.0F, 1.0F};
    EXPECT_THROW(prune_based_labeling(ann, prefix, kRates, 4, 2, pair_fn(ds)), Error);
    const std::vector<float> descending{2.0F, 1.0F};
    EXPECT_THROW(prune_based_labeling(ann, descending, 4, pair_fn(ds)), Error);
}

TEST(Labeling, IdempotentOnOwnOutput) {
    std::mt19937_64 rng(21);
    const Dataset ds = synthetic::uniform(400, 6, 4);
    for (int t = 0; t < 50; ++t) {
        const auto q = testing::random_vector(6, rng);
        std::vector<Neighbor> ann;
        for (std::size_t i = 0; i < 60; ++i) {
            ann.push_back({static_cast<NodeId>(i + 5 * t), kernels::l2_sqr(q.data(), ds[i + 5 * t].data(), 6)});
        }
        std::sort(ann.begin(), ann.end());
        // the candidates' distances are to q, and q is not in the dataset;
        // the rule only needs them sorted
        const auto first = prune_based_labeling(ann, kRates, 12, pair_fn(ds));
        std::vector<Neighbor> again;
        for (std::size_t i = 0; i < first.size(); ++i) {
            again.push_back({first.ids[i], first.dists[i]});
        }
        const auto second = prune_based_labeling(again, kRates, 12, pair_fn(ds));
        ASSERT_EQ(first.ids, second.ids);
        ASSERT_EQ(first.labels, second.labels);
        ASSERT_EQ(first.dists, second.dists);
    }
}

TEST(Labeling, PrefixIsKeptUnchanged) {
    const Dataset ds = Dataset::from_rows({{0, 0}, {1, 0}, {2.5F, 0}, {0, 3}});
    const std::vector<Neighbor> ann{{1, 1.0F}, {2, 6.25F}, {3, 9.0F}};
    // alpha * 1.5 <= 2.5 prunes node 2 until alpha reaches 1.8
    const std::vector<float> strong{1.0F};
    const auto a = prune_based_labeling(ann, strong, kRates, 8, 1, pair_fn(ds));
    EXPECT_EQ(a.labels, (std::vector<float>{1.0F, 1.8F, 1.0F}));
    // a kept prefix label above alpha does not prune
    const std::vector<float> weak{1.4F};
    const auto b = prune_based_labeling(ann, weak, kRates, 8, 1, pair_fn(ds));
    EXPECT_EQ(b.labels, (std::vector<float>{1.4F, 1.0F, 1.0F}));
}

GraphIndex
five_label_index() {
    // node 0 with five neighbors in distance order
    std::vector<LabeledList> adj(6);
    adj[0].ids = {1, 2, 3, 4, 5};
    adj[0].labels = {1.0F, 1.4F, 1.0F, 1.2F, 1.0F};
    adj[0].dists = {1.0F, 2.0F, 3.0F, 4.0F, 5.0F};
    return GraphIndex(Metric::kSquaredEuclidean, 2, 8, kRates, {0}, adj);
}

TEST(Filter, FiveLabelExample) {
    const GraphIndex index = five_label_index();
    const std::set<NodeId> none;
    EXPECT_EQ(filtered_neighbors(index, 0, 1.2F, 3, none), (std::vector<NodeId>{1, 3, 4}));
    EXPECT_EQ(filtered_neighbors(index, 0, 2.0F, 8, none), (std::vector<NodeId>{1, 2, 3, 4, 5}));
    const std::set<NodeId> all{1, 2, 3, 4, 5};
    EXPECT_TRUE(filtered_neighbors(index, 0, 2.0F, 8, all).empty());
    const std::set<NodeId> some{1};
    EXPECT_EQ(filtered_neighbors(index, 0, 1.2F, 3, some), (std::vector<NodeId>{3, 4, 5}));
}

TEST(Filter, RejectsBadArguments) {
    const GraphIndex index = five_label_index();
    const std::set<NodeId> none;
    EXPECT_THROW(filtered_neighbors(index, 6, 1.2F, 3, none), Error);
    EXPECT_THROW(filtered_neighbors(index, 0, 0.5F, 3, none), Error);
    EXPECT_THROW(filtered_neighbors(index, 0, 1.2F, 0, none), Error);
    EXPECT_THROW(filtered_neighbors(index, 0, 1.2F, 9, none), Error);
}

TEST(Build, OneAndTwoNodes) {
    BuildParams params;
    params.max_degree = 4;
    params.ef_construction = 8;
    const GraphIndex one = build_index(Dataset::from_rows({{1, 2}}), params);
    EXPECT_EQ(one.size(), 1U);
    EXPECT_EQ(one.degree(0), 0U);

    const GraphIndex two = build_index(Dataset::from_rows({{1, 2}, {3, 5}}), params);
    ASSERT_EQ(two.degree(0), 1U);
    ASSERT_EQ(two.degree(1), 1U);
    EXPECT_EQ(two.neighbors(0)[0], 1U);
    EXPECT_EQ(two.neighbors(1)[0], 0U);
    EXPECT_EQ(two.labels(0)[0], 1.0F);
    EXPECT_EQ(two.labels(1)[0], 1.0F);
    EXPECT_FLOAT_EQ(two.dists(0)[0], 13.0F);
}

TEST(Build, RejectsBadInput) {
    EXPECT_THROW(build_index(Dataset(3), BuildParams{}), Error);
    BuildParams bad;
    bad.ef_construction = 4;
    EXPECT_THROW(build_index(Dataset::from_rows({{1}}), bad), Error);
}

class BuiltGraph : public ::testing::Test {
protected:
    static void
    SetUpTestSuite() {
        data_ = new Dataset(synthetic::uniform(200, 8, 1));
        BuildParams params;
        params.max_degree = 16;
        params.ef_construction = 64;
        BuildOptions options;
        options.on_labeling = [](const LabelingEvent& e) {
            ASSERT_LE(e.result.size(), 16U);
            for (std::size_t p = 1; p < e.result.size(); ++p) {
                ASSERT_LE(e.result.dists[p - 1], e.result.dists[p]);
            }
        };
        index_ = new GraphIndex(build_index(*data_, params, Metric::kSquaredEuclidean, options));
    }

    static void
    TearDownTestSuite() {
        delete index_;
        delete data_;
    }

    static Dataset* data_;
    static GraphIndex* index_;
};

Dataset* BuiltGraph::data_ = nullptr;
GraphIndex* BuiltGraph::index_ = nullptr;

TEST_F(BuiltGraph, StructuralInvariants) {
    const GraphIndex& g = *index_;
    for (NodeId i = 0; i < g.size(); ++i) {
        ASSERT_LE(g.degree(i), 16U);
        const auto dists = g.dists(i);
        const auto labels = g.labels(i);
        for (std::size_t p = 0; p < g.degree(i); ++p) {
            ASSERT_TRUE(std::find(kRates.begin(), kRates.end(), labels[p]) != kRates.end());
            ASSERT_NE(g.neighbors(i)[p], i);
            ASSERT_FLOAT_EQ(dists[p], kernels::l2_sqr((*data_)[i].data(), (*data_)[g.neighbors(i)[p]].data(), 8));
            if (p > 0) {
                ASSERT_LE(dists[p - 1], dists[p]);
            }
        }
    }
}

TEST_F(BuiltGraph, ReachableFromEntry) {
    const GraphIndex& g = *index_;
    std::vector<bool> seen(g.size(), false);
    std::queue<NodeId> todo;
    todo.push(0);
    seen[0] = true;
    while (!todo.empty()) {
        const NodeId cur = todo.front();
        todo.pop();
        for (NodeId nb : g.neighbors(cur)) {
            if (!seen[nb]) {
                seen[nb] = true;
                todo.push(nb);
            }
        }
    }
    EXPECT_EQ(std::count(seen.begin(), seen.end(), true), static_cast<long>(g.size()));
}

TEST_F(BuiltGraph, FilterMonotone) {
    const GraphIndex& g = *index_;
    std::mt19937_64 rng(8);
    std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(g.size() - 1));
    std::uniform_int_distribution<std::uint32_t> m(1, 16);
    std::uniform_int_distribution<std::size_t> rate(0, kRates.size() - 1);
    for (int t = 0; t < 300; ++t) {
        const NodeId i = node(rng);
        std::set<NodeId> visited;
        for (int v = 0; v < 40; ++v) {
            visited.insert(node(rng));
        }
        float a1 = kRates[rate(rng)];
        float a2 = kRates[rate(rng)];
        if (a1 > a2) {
            std::swap(a1, a2);
        }
        std::uint32_t m1 = m(rng);
        std::uint32_t m2 = m(rng);
        if (m1 > m2) {
            std::swap(m1, m2);
        }
        const auto small = filtered_neighbors(g, i, a1, 16, visited);
        const auto large = filtered_neighbors(g, i, a2, 16, visited);
        for (NodeId id : small) {
            ASSERT_NE(std::find(large.begin(), large.end(), id), large.end());
        }
        const auto short_list = filtered_neighbors(g, i, a1, m1, visited);
        const auto long_list = filtered_neighbors(g, i, a1, m2, visited);
        ASSERT_LE(short_list.size(), long_list.size());
        ASSERT_TRUE(std::equal(short_list.begin(), short_list.end(), long_list.begin()));
    }
}

TEST_F(BuiltGraph, SerializationRoundTrip) {
    const auto bytes = serialize_index(*index_);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "VSGI");
    const GraphIndex back = deserialize_index(bytes);
    EXPECT_TRUE(back == *index_);
    EXPECT_EQ(serialize_index(back), bytes);
    for (std::size_t cut : {std::size_t{3}, bytes.size() / 2, bytes.size() - 1}) {
        const std::span<const std::uint8_t> part(bytes.data(), cut);
        EXPECT_THROW(deserialize_index(part), Error);
    }
    auto version = bytes;
    version[4] = 99;
    EXPECT_THROW(deserialize_index(version), Error);
}

TEST(Serialize, SingleNodeRoundTrip) {
    BuildParams params;
    params.max_degree = 4;
    params.ef_construction = 4;
    const GraphIndex one = build_index(Dataset::from_rows({{1, 2, 3}}), params);
    EXPECT_TRUE(deserialize_index(serialize_index(one)) == one);
}

TEST(Serialize, CorruptAdjacencyRejected) {
    auto bytes = serialize_index(five_label_index());
    // corrupt the first neighbor id of node 0 so it points past the graph
    const std::size_t header = 4 + 4 + 4 + 4 + 8 + 4 + 4 + 4 * kRates.size() + 4 + 4;
    bytes[header + 4] = 0xFF;
    bytes[header + 5] = 0xFF;
    EXPECT_THROW(deserialize_index(bytes), Error);
}

}  // namespace
}  // namespace lgann
