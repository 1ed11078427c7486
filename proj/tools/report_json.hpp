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
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lgann/bench/bench.hpp"
#include "lgann/core/error.hpp"
#include "lgann/tune/elp.hpp"
#include "lgann/tune/ilp.hpp"
#include "lgann/tune/qlp.hpp"

// JSON forms of the tuner and benchmark outputs. Non-finite numbers come
// out as null.
namespace lgann::report {

using nlohmann::json;

inline json
to_json(const EnvParams& env) {
    return {{"prefetch_stride", env.prefetch_stride}, {"prefetch_depth", env.prefetch_depth}};
}

inline json
to_json(const CostBreakdown& c) {
    return {{"n_lp", c.n_lp}, {"n_hp", c.n_hp}, {"t_lp", c.t_lp}, {"t_hp", c.t_hp}, {"total_cost", c.total_cost()}};
}

inline json
to_json(const ElpResult& r) {
    json rows = json::array();
    for (const auto& m : r.measurements) {
        rows.push_back({{"env", to_json(m.env)}, {"qps", m.qps}, {"median_qps", m.median_qps}});
    }
    return {{"best", to_json(r.best)}, {"measurements", rows}};
}

inline json
to_json(const RecallReport& r) {
    json rows = json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"ef_s", row.ef_search},
                        {"m_s", row.max_neighbors},
                        {"alpha_s", row.alpha},
                        {"recall_at_k", row.recall},
                        {"qps", row.qps},
                        {"mean_hops", row.mean_hops},
                        {"cost", to_json(row.cost)}});
    }
    json out{{"base_count", r.base_count},
             {"query_count", r.query_count},
             {"dim", r.dim},
             {"k", r.k},
             {"bits", r.bits},
             {"redundancy", r.redundancy},
             {"redundancy_bytes", r.redundancy_bytes},
             {"index_loaded", r.index_loaded},
             {"build_seconds", r.build_seconds},
             {"env", to_json(r.env)},
             {"rows", rows}};
    if (!r.env_measurements.empty()) {
        out["env_tuning"] = to_json(ElpResult{r.env, r.env_measurements});
    }
    return out;
}

inline json
to_json(const IlpPoint& p) {
    return {{"m_s", p.config.max_neighbors},
            {"alpha_s", p.config.alpha},
            {"ef_s", p.config.ef_search},
            {"recall", p.recall},
            {"qps", p.qps},
            {"mean_hops", p.mean_hops},
            {"mean_lowprec_evals", p.mean_lowprec_evals},
            {"mean_exact_evals", p.mean_exact_evals}};
}

inline json
to_json(const IlpSweep& s) {
    json evaluated = json::array();
    for (const auto& p : s.evaluated) {
        evaluated.push_back(to_json(p));
    }
    json frontier = json::array();
    for (const auto& p : s.frontier.points) {
        frontier.push_back(to_json(p));
    }
    return {{"evaluated", evaluated}, {"frontier", frontier}};
}

inline json
to_json(const QlpConfig& c) {
    return {{"ef_low", c.ef_low},
            {"ef_high", c.ef_high},
            {"checkpoint_hop", c.checkpoint_hop},
            {"target_recall", c.target_recall},
            {"max_depth", c.max_depth},
            {"min_leaf", c.min_leaf},
            {"holdout_every", c.holdout_every}};
}

inline json
to_json(const DecisionModel& m) {
    json nodes = json::array();
    for (const auto& n : m.tree.nodes()) {
        nodes.push_back({{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"label", n.label},
                         {"samples", n.samples}});
    }
    json names = json::array();
    for (auto name : QueryFeatures::kNames) {
        names.push_back(std::string(name));
    }
    return {{"config", to_json(m.config)},
            {"features", names},
            {"degenerate", m.degenerate},
            {"train_accuracy", m.train_accuracy},
            {"holdout_accuracy", m.holdout_accuracy},
            {"train_queries", m.train_queries},
            {"holdout_queries", m.holdout_queries},
            {"skipped_queries", m.skipped_queries},
            {"simple_queries", m.simple_queries},
            {"tree", nodes}};
}

inline DecisionModel
model_from_json(const json& j) {
    try {
        DecisionModel m;
        const json& c = j.at("config");
        m.config.ef_low = c.at("ef_low").get<std::uint32_t>();
        m.config.ef_high = c.at("ef_high").get<std::uint32_t>();
        m.config.checkpoint_hop = c.at("checkpoint_hop").get<std::uint32_t>();
        m.config.target_recall = c.at("target_recall").get<double>();
        m.config.max_depth = c.at("max_depth").get<std::uint32_t>();
        m.config.min_leaf = c.value("min_leaf", std::uint32_t{1});
        m.config.holdout_every = c.at("holdout_every").get<std::uint32_t>();
        m.degenerate = j.at("degenerate").get<bool>();
        m.train_accuracy = j.value("train_accuracy", 1.0);
        m.holdout_accuracy = j.value("holdout_accuracy", 1.0);
        std::vector<QlpTree::Node> nodes;
        for (const json& n : j.at("tree")) {
            QlpTree::Node node;
            node.feature = n.at("feature").get<int>();
            node.threshold = n.at("threshold").get<double>();
            node.left = n.at("left").get<std::int32_t>();
            node.right = n.at("right").get<std::int32_t>();
            node.label = n.at("label").get<int>();
            node.samples = n.value("samples", std::size_t{0});
            nodes.push_back(node);
        }
        m.tree = QlpTree::from_nodes(std::move(nodes));
        return m;
    } catch (const json::exception& e) {
        fail(ErrorType::kCorruptData, "malformed QLP model: ", e.what());
    }
}

inline void
write_json(const json& j, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) {
        fail(ErrorType::kIo, "cannot open ", path.string(), " for writing");
    }
    out << j.dump(2) << '\n';
    if (!out) {
        fail(ErrorType::kIo, "failed writing ", path.string());
    }
}

inline json
read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail(ErrorType::kIo, "cannot open ", path.string());
    }
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        fail(ErrorType::kCorruptData, path.string(), ": ", e.what());
    }
}

}  // namespace lgann::report
