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


#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "lgann/lgann.hpp"
#include "report_json.hpp"

namespace {

using namespace lgann;
namespace fs = std::filesystem;

struct Paths {
    std::string base;
    std::string queries;
    std::string groundtruth;
    std::string index;
    std::string codes;
    std::string output;
    std::string csv;
};

struct Common {
    Paths paths;
    std::string metric{"l2"};
    std::uint32_t k{10};
    double rerank_factor{3.0};
    std::uint32_t ef_search{64};
    std::uint32_t max_neighbors{0};
    float alpha{0.0F};
    std::uint32_t stride{0};
    std::uint32_t depth{1};
    double redundancy{0.0};
    std::uint64_t seed{42};
};

BuildParams g_build;
std::uint32_t g_bits{8};
double g_quantile{0.99};

GroundTruth
load_truth(const std::string& path, const Dataset& base, const Dataset& queries, std::uint32_t k, Metric metric) {
    if (path.empty()) {
        return brute_force_groundtruth(base, queries, k, metric);
    }
    GroundTruth gt;
    gt.ids = read_ivecs(path);
    gt.k = gt.ids.empty() ? 0 : gt.ids.front().size();
    for (const auto& list : gt.ids) {
        gt.k = std::min(gt.k, list.size());
    }
    return gt;
}

// Runs `fn` with the store named by the options: full precision without a
// code file, quantized with one, optionally wrapped with redundant blocks.
template <typename Fn>
void
with_store(const Common& c, const GraphIndex& index, const Dataset& base, Fn&& fn) {
    const Metric metric = index.metric();
    const auto dispatch = [&](auto store) {
        if (c.redundancy > 0.0) {
            fn(build_prs(index, std::move(store), c.redundancy));
        } else {
            fn(store);
        }
    };
    if (c.paths.codes.empty()) {
        dispatch(FullPrecisionStore(base, metric));
    } else {
        auto [model, codes] = deserialize_codes(binary::read_file(c.paths.codes));
        check_dims(model.dim(), base.dim());
        dispatch(QuantizedStore(std::move(model), std::move(codes), metric));
    }
}

SearchParams
search_params(const Common& c) {
    SearchParams sp;
    sp.k = c.k;
    sp.ef_search = c.ef_search;
    sp.max_neighbors = c.max_neighbors;
    sp.alpha = c.alpha;
    sp.rerank_factor = c.rerank_factor;
    return sp;
}

void
emit(const report::json& j, const std::string& path) {
    if (path.empty()) {
        std::cout << j.dump(2) << '\n';
    } else {
        report::write_json(j, path);
    }
}

void
add_build_options(CLI::App* app) {
    app->add_option("--max-degree", g_build.max_degree, "m_c: maximum out-degree");
    app->add_option("--ef-construction", g_build.ef_construction, "ef_c: construction pool size");
    app->add_option("--rates", g_build.pruning_rates, "pruning rate set A, ascending")->delimiter(',');
}

void
add_common(CLI::App* app, Common& c, bool search_knobs) {
    app->add_option("--base", c.paths.base, "base vectors (fvecs)")->required();
    app->add_option("--metric", c.metric, "l2 or ip")->check(CLI::IsMember({"l2", "ip"}));
    app->add_option("--seed", c.seed, "random seed");
    if (!search_knobs) {
        return;
    }
    app->add_option("--index", c.paths.index, "index file");
    app->add_option("--codes", c.paths.codes, "code file; omit to search full-precision vectors");
    app->add_option("--k", c.k, "neighbors per query");
    app->add_option("--ef-search", c.ef_search, "ef_s: search pool size");
    app->add_option("--max-neighbors", c.max_neighbors, "m_s: degree cap (0: build maximum)");
    app->add_option("--alpha", c.alpha, "alpha_s: label threshold (0: largest rate)");
    app->add_option("--rerank-factor", c.rerank_factor, "rho: exact re-rank budget factor");
    app->add_option("--prefetch-stride", c.stride, "omega: prefetch distance (0 disables)");
    app->add_option("--prefetch-depth", c.depth, "nu: cache lines per prefetch");
    app->add_option("--redundancy", c.redundancy, "delta: fraction of nodes with redundant code blocks");
}

GraphIndex
index_for(const Common& c, const Dataset& base) {
    if (c.paths.index.empty()) {
        fail(ErrorType::kInvalidArgument, "--index is required");
    }
    GraphIndex index = load_index(c.paths.index);
    if (index.size() != base.size() || index.dim() != base.dim()) {
        fail(ErrorType::kInvalidArgument, "index holds ", index.size(), " vectors of dim ", index.dim(),
             " but the base set has ", base.size(), " of dim ", base.dim());
    }
    return index;
}

}  // namespace

int
main(int argc, char** argv) {
    CLI::App app{"lgann: labeled-graph approximate nearest neighbor search"};
    app.set_config("--config", "", "TOML/INI configuration; command-line flags take precedence");
    app.require_subcommand(1);
    Common c;

    // gen
    std::string gen_kind{"clustered"};
    std::size_t gen_n{10000};
    std::size_t gen_queries{0};
    std::size_t gen_dim{32};
    std::size_t gen_clusters{16};
    float gen_stddev{0.1F};
    auto* gen = app.add_subcommand("gen", "write a seeded synthetic dataset");
    gen->add_option("--kind", gen_kind, "uniform or clustered")->check(CLI::IsMember({"uniform", "clustered"}));
    gen->add_option("--n", gen_n, "base vectors");
    gen->add_option("--queries", gen_queries, "query vectors drawn from the same distribution");
    gen->add_option("--dim", gen_dim, "dimension");
    gen->add_option("--clusters", gen_clusters, "mixture components");
    gen->add_option("--stddev", gen_stddev, "per-component standard deviation");
    gen->add_option("--seed", c.seed, "random seed");
    gen->add_option("--out", c.paths.output, "base output (fvecs)")->required();
    gen->add_option("--query-out", c.paths.queries, "query output (fvecs)");

    // gt
    auto* gt = app.add_subcommand("gt", "brute-force ground truth");
    add_common(gt, c, false);
    gt->add_option("--queries", c.paths.queries, "query vectors (fvecs)")->required();
    gt->add_option("--k", c.k, "neighbors per query");
    gt->add_option("--out", c.paths.output, "output (ivecs)")->required();

    // build
    auto* build = app.add_subcommand("build", "build a labeled graph index");
    add_common(build, c, false);
    add_build_options(build);
    build->add_option("--out", c.paths.output, "index output")->required();

    // encode
    auto* encode = app.add_subcommand("encode", "train a scalar quantizer and encode the base set");
    add_common(encode, c, false);
    encode->add_option("--bits", g_bits, "4 or 8")->check(CLI::IsMember({4, 8}));
    encode->add_option("--quantile", g_quantile, "range truncation quantile");
    encode->add_option("--out", c.paths.output, "code file output")->required();

    // search
    std::string qlp_model;
    auto* search = app.add_subcommand("search", "search a query set and report recall");
    add_common(search, c, true);
    search->add_option("--queries", c.paths.queries, "query vectors (fvecs)")->required();
    search->add_option("--groundtruth", c.paths.groundtruth, "ground truth (ivecs); omit for brute force");
    search->add_option("--qlp-model", qlp_model, "decision model from train-qlp (adaptive search)");
    search->add_option("--out", c.paths.output, "result ids (ivecs)");
    search->add_option("--report", c.paths.csv, "JSON summary output (stdout when omitted)");

    // bench
    BenchConfig bc;
    std::string bench_metric{"l2"};
    std::string bench_csv;
    std::string bench_json;
    std::string bench_base;
    std::string bench_queries;
    std::string bench_gt;
    std::string bench_index;
    auto* bench = app.add_subcommand("bench", "sweep a search grid and write CSV and JSON reports");
    bench->add_option("--base", bench_base, "base vectors (fvecs)")->required();
    bench->add_option("--queries", bench_queries, "query vectors (fvecs)")->required();
    bench->add_option("--groundtruth", bench_gt, "ground truth (ivecs); omit for brute force");
    bench->add_option("--index", bench_index, "index file: loaded when present, otherwise built");
    bench->add_flag("--save-index", bc.save_index, "build and write the index to --index");
    bench->add_option("--metric", bench_metric, "l2 or ip")->check(CLI::IsMember({"l2", "ip"}));
    add_build_options(bench);
    bench->add_option("--ef-search", bc.ef_search, "ef_s grid")->delimiter(',');
    bench->add_option("--max-neighbors", bc.max_neighbors, "m_s grid (0: build maximum)")->delimiter(',');
    bench->add_option("--alphas", bc.alphas, "alpha_s grid (0: largest rate)")->delimiter(',');
    bench->add_option("--bits", bc.bits, "0 (full precision), 4 or 8")->check(CLI::IsMember({0, 4, 8}));
    bench->add_option("--quantile", bc.quantile, "quantizer truncation quantile");
    bench->add_option("--strides", bc.strides, "omega grid")->delimiter(',');
    bench->add_option("--depths", bc.depths, "nu grid")->delimiter(',');
    bench->add_flag("--tune-env", bc.tune_env, "pick (omega, nu) by throughput before sweeping");
    bench->add_option("--redundancy", bc.redundancy, "delta");
    bench->add_option("--k", bc.k, "neighbors per query");
    bench->add_option("--rerank-factor", bc.rerank_factor, "rho");
    bench->add_option("--seed", bc.seed, "random seed");
    bench->add_option("--csv", bench_csv, "CSV output (stdout when neither output is given)");
    bench->add_option("--json", bench_json, "JSON output");

    // tune-elp
    std::vector<std::uint32_t> elp_strides{0, 1, 2, 4, 8};
    std::vector<std::uint32_t> elp_depths{1, 2, 4};
    std::size_t elp_samples{200};
    std::uint32_t elp_reps{3};
    auto* tune_elp_cmd = app.add_subcommand("tune-elp", "grid search over prefetch stride and depth");
    add_common(tune_elp_cmd, c, true);
    tune_elp_cmd->add_option("--strides", elp_strides, "omega grid")->delimiter(',');
    tune_elp_cmd->add_option("--depths", elp_depths, "nu grid")->delimiter(',');
    tune_elp_cmd->add_option("--sample-queries", elp_samples, "base vectors sampled as queries");
    tune_elp_cmd->add_option("--repetitions", elp_reps, "timed repetitions per configuration (>= 3)");
    tune_elp_cmd->add_option("--out", c.paths.output, "JSON output (stdout when omitted)");

    // tune-ilp
    IlpGrid ilp_grid;
    std::optional<double> min_recall;
    std::optional<double> max_latency;
    auto* tune_ilp_cmd = app.add_subcommand("tune-ilp", "Pareto sweep over (m_s, alpha_s, ef_s) on one index");
    add_common(tune_ilp_cmd, c, true);
    tune_ilp_cmd->add_option("--queries", c.paths.queries, "query vectors (fvecs)")->required();
    tune_ilp_cmd->add_option("--groundtruth", c.paths.groundtruth, "ground truth (ivecs)");
    tune_ilp_cmd->add_option("--grid-max-neighbors", ilp_grid.max_neighbors, "m_s grid")->delimiter(',');
    tune_ilp_cmd->add_option("--grid-alphas", ilp_grid.alphas, "alpha_s grid (default: every rate)")->delimiter(',');
    tune_ilp_cmd->add_option("--grid-ef-search", ilp_grid.ef_schedule, "ef_s schedule")->delimiter(',');
    tune_ilp_cmd->add_option("--repetitions", ilp_grid.repetitions, "timed repetitions per configuration");
    auto* opt_recall = tune_ilp_cmd->add_option("--min-recall", min_recall, "select: highest qps at this recall");
    tune_ilp_cmd->add_option("--max-latency", max_latency, "select: best recall within seconds per query")
        ->excludes(opt_recall);
    tune_ilp_cmd->add_option("--out", c.paths.output, "JSON output (stdout when omitted)");

    // train-qlp
    QlpConfig qc;
    auto* train_qlp = app.add_subcommand("train-qlp", "train the early-termination decision model");
    add_common(train_qlp, c, true);
    train_qlp->add_option("--queries", c.paths.queries, "training queries (fvecs)")->required();
    train_qlp->add_option("--groundtruth", c.paths.groundtruth, "ground truth (ivecs)");
    train_qlp->add_option("--ef-low", qc.ef_low, "pool size after a shrink");
    train_qlp->add_option("--ef-high", qc.ef_high, "initial pool size");
    train_qlp->add_option("--checkpoint-hop", qc.checkpoint_hop, "hop at which the model is consulted");
    train_qlp->add_option("--target-recall", qc.target_recall, "per-query recall that makes a query simple");
    train_qlp->add_option("--max-depth", qc.max_depth, "tree depth limit (<= 6)");
    train_qlp->add_option("--min-leaf", qc.min_leaf, "fewest training queries on either side of a split");
    train_qlp->add_option("--out", c.paths.output, "model output (JSON)")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            Dataset all;
            if (gen_kind == "uniform") {
                all = synthetic::uniform(gen_n + gen_queries, gen_dim, c.seed);
            } else {
                synthetic::MixtureSpec spec;
                spec.clusters = gen_clusters;
                spec.cluster_stddev = gen_stddev;
                all = synthetic::clustered(gen_n + gen_queries, gen_dim, c.seed, spec);
            }
            write_fvecs(all.slice(0, gen_n), c.paths.output);
            if (gen_queries > 0) {
                if (c.paths.queries.empty()) {
                    fail(ErrorType::kInvalidArgument, "--query-out is required with --queries");
                }
                write_fvecs(all.slice(gen_n, gen_queries), c.paths.queries);
            }
            std::cout << "wrote " << gen_n << " base and " << gen_queries << " query vectors of dim " << gen_dim
                      << '\n';
        } else if (gt->parsed()) {
            const Dataset base = read_fvecs(c.paths.base);
            const Dataset queries = read_fvecs(c.paths.queries);
            const auto truth = brute_force_groundtruth(base, queries, c.k, parse_metric(c.metric));
            write_ivecs(truth.ids, c.paths.output);
            std::cout << "wrote top-" << c.k << " for " << queries.size() << " queries\n";
        } else if (build->parsed()) {
            const Dataset base = read_fvecs(c.paths.base);
            const double start = steady_seconds();
            const GraphIndex index = build_index(base, g_build, parse_metric(c.metric));
            const double seconds = steady_seconds() - start;
            save_index(index, c.paths.output);
            std::cout << "built " << index.size() << " nodes, " << index.edge_count() << " edges in " << seconds
                      << " s\n";
        } else if (encode->parsed()) {
            const Dataset base = read_fvecs(c.paths.base);
            const QuantizerModel model = train_quantizer(base, g_bits, g_quantile);
            const CodeStore codes = encode_dataset(model, base);
            binary::write_file(c.paths.output, serialize_codes(model, codes));
            std::cout << "encoded " << codes.size() << " vectors at " << g_bits << " bits\n";
        } else if (search->parsed()) {
            const Dataset base = read_fvecs(c.paths.base);
            const Dataset queries = read_fvecs(c.paths.queries);
            const GraphIndex index = index_for(c, base);
            const GroundTruth truth = load_truth(c.paths.groundtruth, base, queries, c.k, index.metric());
            const SearchParams sp = search_params(c);
            const EnvParams env{c.stride, c.depth};
            std::optional<DecisionModel> model;
            if (!qlp_model.empty()) {
                model = report::model_from_json(report::read_json(qlp_model));
            }
            with_store(c, index, base, [&](const auto& store) {
                Searcher searcher(index.size());
                std::vector<std::vector<NodeId>> results;
                double recall = 0.0;
                CostBreakdown cost;
                std::size_t shrunk = 0;
                const double start = steady_seconds();
                for (std::size_t q = 0; q < queries.size(); ++q) {
                    SearchResult r;
                    if (model.has_value()) {
                        AdaptiveResult a = adaptive_search(searcher, index, store, base, index.entry_points(),
                                                           queries[q], *model, sp, env);
                        shrunk += a.action == QlpAction::kShrink ? 1 : 0;
                        r = std::move(a.result);
                    } else {
                        r = searcher.search(index, store, base, index.entry_points(), queries[q], sp, env);
                    }
                    if (q < truth.ids.size()) {
                        recall += compute_recall(r.ids, truth.ids[q], c.k);
                    }
                    cost.n_lp += static_cast<double>(r.stats.lowprec_evals);
                    cost.n_hp += static_cast<double>(r.stats.exact_evals);
                    results.push_back(std::move(r.ids));
                }
                const double seconds = steady_seconds() - start;
                const auto nq = static_cast<double>(queries.size());
                report::json j{{"queries", queries.size()},
                               {"recall_at_k", nq > 0 ? recall / nq : 0.0},
                               {"qps", seconds > 0 ? nq / seconds : 0.0},
                               {"mean_n_lp", nq > 0 ? cost.n_lp / nq : 0.0},
                               {"mean_n_hp", nq > 0 ? cost.n_hp / nq : 0.0}};
                if (model.has_value()) {
                    j["shrunk_queries"] = shrunk;
                }
                if (!c.paths.output.empty()) {
                    write_ivecs(results, c.paths.output);
                }
                emit(j, c.paths.csv);
            });
        } else if (bench->parsed()) {
            bc.base_path = bench_base;
            bc.query_path = bench_queries;
            bc.groundtruth_path = bench_gt;
            bc.index_path = bench_index;
            bc.metric = parse_metric(bench_metric);
            bc.build = g_build;
            const RecallReport r = run_bench(bc);
            if (!bench_csv.empty()) {
                std::ofstream out(bench_csv);
                write_recall_csv(r, out);
                if (!out) {
                    fail(ErrorType::kIo, "failed writing ", bench_csv);
                }
            }
            if (!bench_json.empty()) {
                report::write_json(report::to_json(r), bench_json);
            }
            if (bench_csv.empty() && bench_json.empty()) {
                write_recall_csv(r, std::cout);
            }
        } else if (tune_elp_cmd->parsed()) {
            const Dataset base = read_fvecs(c.paths.base);
            const GraphIndex index = index_for(c, base);
            ElpGrid grid;
            grid.strides = elp_strides;
            grid.depths = elp_depths;
            grid.repetitions = elp_reps;
            grid.sample_queries = sample_base_queries(base, elp_samples, c.seed);
            with_store(c, index, base, [&](const auto& store) {
                emit(report::to_json(tune_elp(index, store, base, grid, search_params(c))), c.paths.output);
            });
        } else if (tune_ilp_cmd->parsed()) {
            const Dataset base = read_fvecs(c.paths.base);
            const Dataset queries = read_fvecs(c.paths.queries);
            const GraphIndex index = index_for(c, base);
            const GroundTruth truth = load_truth(c.paths.groundtruth, base, queries, c.k, index.metric());
            with_store(c, index, base, [&](const auto& store) {
                const IlpSweep sweep =
                    sweep_ilp(index, store, base, queries, truth, ilp_grid, search_params(c), {c.stride, c.depth});
                report::json j = report::to_json(sweep);
                if (min_recall.has_value() || max_latency.has_value()) {
                    const auto constraint = min_recall.has_value() ? IlpConstraint::min_recall(*min_recall)
                                                                   : IlpConstraint::max_latency(*max_latency);
                    j["selected"] = report::to_json(select_ilp(sweep.frontier, constraint));
                }
                emit(j, c.paths.output);
            });
        } else if (train_qlp->parsed()) {
            const Dataset base = read_fvecs(c.paths.base);
            const Dataset queries = read_fvecs(c.paths.queries);
            const GraphIndex index = index_for(c, base);
            const GroundTruth truth = load_truth(c.paths.groundtruth, base, queries, c.k, index.metric());
            with_store(c, index, base, [&](const auto& store) {
                const DecisionModel m = train_qlp_model(index, store, base, queries, truth, search_params(c), qc);
                if (m.degenerate) {
                    std::cerr << "warning: every training query got the same label; the model is constant\n";
                }
                report::write_json(report::to_json(m), c.paths.output);
                std::cout << "holdout accuracy " << m.holdout_accuracy << " over " << m.holdout_queries
                          << " queries\n";
            });
        }
    } catch (const Error& e) {
        std::cerr << "lgann: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "lgann: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
