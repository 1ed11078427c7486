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

#include "lgann/core/binary.hpp"
#include "lgann/core/dataset.hpp"
#include "lgann/core/distance.hpp"
#include "lgann/core/error.hpp"
#include "lgann/core/timing.hpp"
#include "lgann/core/types.hpp"
#include "lgann/quant/code_store.hpp"
#include "lgann/quant/lowprec.hpp"
#include "lgann/quant/scalar_quantizer.hpp"
#include "lgann/graph/build_params.hpp"
#include "lgann/graph/builder.hpp"
#include "lgann/graph/filter.hpp"
#include "lgann/graph/graph_index.hpp"
#include "lgann/graph/labeling.hpp"
#include "lgann/graph/serialize.hpp"
#include "lgann/search/candidate_pool.hpp"
#include "lgann/search/greedy_search.hpp"
#include "lgann/search/instrumented.hpp"
#include "lgann/search/params.hpp"
#include "lgann/search/prefetch.hpp"
#include "lgann/search/prs_store.hpp"
#include "lgann/search/rerank.hpp"
#include "lgann/search/stores.hpp"
#include "lgann/search/visited.hpp"
#include "lgann/tune/decision_tree.hpp"
#include "lgann/tune/elp.hpp"
#include "lgann/tune/features.hpp"
#include "lgann/tune/ilp.hpp"
#include "lgann/tune/pareto.hpp"
#include "lgann/tune/qlp.hpp"
#include "lgann/bench/bench.hpp"
#include "lgann/bench/cost.hpp"
#include "lgann/bench/groundtruth.hpp"
#include "lgann/bench/synthetic.hpp"
#include "lgann/bench/vecs_io.hpp"
