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

#include <array>
#include <charconv>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lgann/bench/cost.hpp"
#include "lgann/bench/groundtruth.hpp"
#include "lgann/bench/vecs_io.hpp"
#include "lgann/core/dataset.hpp"
#include "lgann/core/error.hpp"
#include "lgann/core/timing.hpp"
#include "lgann/graph/builder.hpp"
#include "lgann/graph/serialize.hpp"
#include "lgann/quant/code_store.hpp"
#include "lgann/search/greedy_search.hpp"
#include "lgann/search/prs_store.hpp"
#include "lgann/tune/elp.hpp"

namespace lgann {

struct BenchConfig {
    std::filesystem::path base_path;
    std::filesystem::path query_path;
    std::filesystem::path groundtruth_path;  // empty: brute force
    std::filesystem::path index_path;        // empty: build; existing file: load
    bool save_index{false};                  // write the built index to index_path
    Metric metric{Metric::kSquaredEuclidean};
    BuildParams build;

    std::vector<std::uint32_t> ef_search{64};
    std::vector<std::uint32_t> max_neighbors{0};  // 0: the build's max degree
    std::vector<float> alphas{0.0F};              // 0: the build's largest rate

    std::uint32_t bits{8};  // 0: search full-precision vectors
    double quantile{0.99};

    std::vector<std::uint32_t> strides{0};
    std::vector<std::uint32_t> depths{1};
    bool tune_env{false};  // false: use the first (stride, depth)
    std::uint32_t env_repetitions{3};
    std::size_t env_sample_queries{100};

    double redundancy{0.0};
    std::uint32_t k{10};
    double rerank_factor{3.0};
    std::uint64_t seed{42};
    std::size_t cost_samples{100000};

    void
    validate() const {
        if (k == 0) {
            fail(ErrorType::kInvalidArgument, "k must be positive");
        }
        if (ef_search.empty() || max_neighbors.empty() || alphas.empty()) {
            fail(ErrorType::kInvalidArgument, "search grid must not be empty");
        }
        if (strides.empty() || depths.empty()) {
            fail(ErrorType::kInvalidArgument, "environment grid must not be empty");
        }
        if (bits != 0) {
            check_bits(bits);
        }
        if (!(redundancy >= 0.0 && redundancy <= 1.0)) {
            fail(ErrorType::kInvalidArgument, "redundancy ratio must lie in [0, 1]");
        }
        build.validate();
    }
};

struct RecallRow {
    std::uint32_t ef_search{0};
    std::uint32_t max_neighbors{0};
    float alpha{0.0F};
    double recall{0.0};
    double qps{0.0};
    double mean_hops{0.0};
    CostBreakdown cost;
};

struct RecallReport {
    std::vector<RecallRow> rows;
    EnvParams env;
    std::vector<ElpMeasurement> env_measurements;
    std::size_t base_count{0};
    std::size_t query_count{0};
    std::size_t dim{0};
    std::uint32_t k{0};
    std::uint32_t bits{0};
    double redundancy{0.0};
    std::size_t redundancy_bytes{0};
    double build_seconds{0.0};
    bool index_loaded{false};
};

namespace detail {

template <typename Fn>
auto
stage(const char* name, Fn&& fn) {
    try {
        return fn();
    } catch (const Error& e) {
        fail(e.type(), "stage '", name, "': ", e.message());
    }
}

template <VectorStore Store>
void
sweep_grid(const BenchConfig& config, const GraphIndex& index, const Store& store, const Dataset& base,
           const Dataset& queries, const GroundTruth& truth, RecallReport& report) {
    SearchParams proto;
    proto.k = config.k;
    proto.rerank_factor = config.rerank_factor;

    if (config.tune_env) {
        ElpGrid grid;
        grid.strides = config.strides;
        grid.depths = config.depths;
        grid.repetitions = config.env_repetitions;
        grid.sample_queries = sample_base_queries(base, config.env_sample_queries, config.seed);
        SearchParams sp = proto;
        sp.ef_search = config.ef_search.front();
        ElpResult elp = stage("tune-elp", [&] { return tune_elp(index, store, base, grid, sp); });
        report.env = elp.best;
        report.env_measurements = std::move(elp.measurements);
    } else {
        report.env = EnvParams{config.strides.front(), config.depths.front()};
    }

    const UnitCosts unit = stage("cost", [&] {
        return measure_unit_costs(store, base, queries, config.cost_samples, config.seed);
    });

    stage("search", [&] {
        Searcher searcher(index.size());
        const auto& entry = index.entry_points();
        for (std::uint32_t ef : config.ef_search) {
            for (std::uint32_t m : config.max_neighbors) {
                for (float a : config.alphas) {
                    SearchParams sp = proto;
                    sp.ef_search = ef;
                    sp.max_neighbors = m;
                    sp.alpha = a;
                    sp.validate(index);

                    RecallRow row;
                    row.ef_search = ef;
                    row.max_neighbors = sp.resolved_max_neighbors(index);
                    row.alpha = sp.resolved_alpha(index);
                    // the recall pass doubles as the warm-up for the timed pass
                    for (std::size_t q = 0; q < queries.size(); ++q) {
                        const auto r = searcher.search(index, store, base, entry, queries[q], sp, report.env);
                        row.recall += compute_recall(r.ids, truth.ids[q], config.k);
                        row.mean_hops += static_cast<double>(r.stats.hops);
                        row.cost.n_lp += static_cast<double>(r.stats.lowprec_evals);
                        row.cost.n_hp += static_cast<double>(r.stats.exact_evals);
                    }
                    const double start = steady_seconds();
                    for (std::size_t q = 0; q < queries.size(); ++q) {
                        searcher.search(index, store, base, entry, queries[q], sp, report.env);
                    }
                    const double elapsed = steady_seconds() - start;
                    const auto nq = static_cast<double>(queries.size());
                    row.qps = elapsed > 0.0 ? nq / elapsed : std::numeric_limits<double>::infinity();
                    row.recall /= nq;
                    row.mean_hops /= nq;
                    row.cost.n_lp /= nq;
                    row.cost.n_hp /= nq;
                    row.cost.t_lp = unit.t_lp;
                    row.cost.t_hp = unit.t_hp;
                    report.rows.push_back(row);
                }
            }
        }
        return 0;
    });
}

template <VectorStore Store>
void
run_with_store(const BenchConfig& config, const GraphIndex& index, Store store, const Dataset& base,
               const Dataset& queries, const GroundTruth& truth, RecallReport& report) {
    if (config.redundancy > 0.0) {
        auto prs = stage("prs", [&] { return build_prs(index, std::move(store), config.redundancy); });
        report.redundancy_bytes = prs.extra_bytes();
        sweep_grid(config, index, prs, base, queries, truth, report);
    } else {
        sweep_grid(config, index, store, base, queries, truth, report);
    }
}

}  // namespace detail

/// Benchmark on in-memory data. `truth` may be empty, in which case it is
/// computed by brute force.
inline RecallReport
run_bench(const BenchConfig& config, const Dataset& base, const Dataset& queries, GroundTruth truth = {}) {
    detail::stage("config", [&] {
        config.validate();
        if (base.empty()) {
            fail(ErrorType::kInvalidArgument, "base set is empty");
        }
        if (queries.empty()) {
            fail(ErrorType::kInvalidArgument, "query set is empty");
        }
        check_dims(queries.dim(), base.dim());
        return 0;
    });

    RecallReport report;
    report.base_count = base.size();
    report.query_count = queries.size();
    report.dim = base.dim();
    report.k = config.k;
    report.bits = config.bits;
    report.redundancy = config.redundancy;

    if (truth.ids.empty()) {
        truth = detail::stage("groundtruth", [&] { return brute_force_groundtruth(base, queries, config.k, config.metric); });
    } else if (truth.ids.size() != queries.size() || truth.k < config.k) {
        fail(ErrorType::kInvalidArgument, "stage 'groundtruth': ", truth.ids.size(), " lists of length ", truth.k,
             " for ", queries.size(), " queries at k=", config.k);
    }

    const GraphIndex index = detail::stage("build", [&] {
        if (!config.index_path.empty() && !config.save_index && std::filesystem::exists(config.index_path)) {
            report.index_loaded = true;
            GraphIndex loaded = load_index(config.index_path);
            if (loaded.size() != base.size() || loaded.dim() != base.dim()) {
                fail(ErrorType::kInvalidArgument, "index at ", config.index_path.string(), " holds ", loaded.size(),
                     " vectors of dim ", loaded.dim(), ", base set has ", base.size(), " of dim ", base.dim());
            }
            return loaded;
        }
        const double start = steady_seconds();
        GraphIndex built = build_index(base, config.build, config.metric);
        report.build_seconds = steady_seconds() - start;
        if (config.save_index && !config.index_path.empty()) {
            save_index(built, config.index_path);
        }
        return built;
    });

    if (config.bits == 0) {
        detail::run_with_store(config, index, FullPrecisionStore(base, config.metric), base, queries, truth, report);
    } else {
        QuantizedStore store = detail::stage("encode", [&] {
            const QuantizerModel model = train_quantizer(base, config.bits, config.quantile);
            return QuantizedStore(model, encode_dataset(model, base), config.metric);
        });
        detail::run_with_store(config, index, std::move(store), base, queries, truth, report);
    }
    return report;
}

/// Benchmark on files named by the config.
inline RecallReport
run_bench(const BenchConfig& config) {
    const Dataset base = detail::stage("load", [&] { return read_fvecs(config.base_path); });
    const Dataset queries = detail::stage("load", [&] { return read_fvecs(config.query_path); });
    GroundTruth truth;
    if (!config.groundtruth_path.empty()) {
        truth = detail::stage("load", [&] {
            GroundTruth gt;
            gt.ids = read_ivecs(config.groundtruth_path);
            gt.k = gt.ids.empty() ? 0 : gt.ids.front().size();
            for (const auto& list : gt.ids) {
                gt.k = std::min(gt.k, list.size());
            }
            return gt;
        });
    }
    return run_bench(config, base, queries, std::move(truth));
}

inline constexpr const char* kRecallCsvHeader = "ef_s,m_s,alpha_s,recall_at_k,qps,mean_hops,n_lp,n_hp,t_lp,t_hp";

namespace detail {

// shortest text that reads back to the same value
template <typename T>
std::string
shortest(T value) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), res.ptr);
}

}  // namespace detail

inline void
write_recall_csv(const RecallReport& report, std::ostream& out) {
    using detail::shortest;
    out << kRecallCsvHeader << '\n';
    for (const RecallRow& r : report.rows) {
        out << r.ef_search << ',' << r.max_neighbors << ',' << shortest(r.alpha) << ',' << shortest(r.recall) << ','
            << shortest(r.qps) << ',' << shortest(r.mean_hops) << ',' << shortest(r.cost.n_lp) << ','
            << shortest(r.cost.n_hp) << ',' << shortest(r.cost.t_lp) << ',' << shortest(r.cost.t_hp) << '\n';
    }
}

}  // namespace lgann
