// Copyright 2026 The NLNS Authors
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

// Benchmark runs over datasets and metric aggregation.

#ifndef NLNS_BENCH_H_
#define NLNS_BENCH_H_

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "nlns/csp.h"
#include "nlns/lns.h"
#include "nlns/model.h"

namespace nlns {

// instance name -> best known cut.
using ReferenceTable = std::map<std::string, int>;

// Lines of "instance_name best_cut"; '#' starts a comment.
ReferenceTable ParseReferences(std::string_view text);

struct InstanceSummary {
  std::string instance_id;
  uint64_t seed = 0;
  bool solved = false;
  int initial_cost = 0;
  int best_cost = 0;
  int iterations = 0;
  // Cell accuracy of the incumbent over all variables, when ground truth
  // is known.
  std::optional<double> cell_accuracy;
  std::optional<int> initial_cut;
  std::optional<int> cut_size;
  std::optional<int> best_known_cut;
  std::optional<int> gap;
};

struct Aggregates {
  int count = 0;
  double solved_fraction = 0.0;
  double mean_best_cost = 0.0;
  double median_best_cost = 0.0;
  std::optional<double> mean_cell_accuracy;
  std::optional<double> mean_gap;
};

// Summaries and aggregates of finished runs. Throws ConfigError when the
// record and instance lists differ in length or a reference exceeds the
// instance's edge count.
std::vector<InstanceSummary> SummarizeRuns(std::span<const CspInstance> instances,
                                           std::span<const RunRecord> records,
                                           std::span<const uint64_t> seeds,
                                           const ReferenceTable* references);
Aggregates ComputeMetrics(std::span<const InstanceSummary> summaries);

struct BenchmarkResult {
  LnsConfig config;
  std::vector<InstanceSummary> instances;
  std::vector<RunRecord> records;
  Aggregates aggregates;
};

// Runs every instance with seed DeriveSeed(cfg.seed, index), in parallel
// across instances. Empty datasets produce an empty result.
BenchmarkResult RunBenchmark(std::span<const CspInstance> instances,
                             const RepairModel& model, const LnsConfig& cfg,
                             const ReferenceTable* references = nullptr,
                             int num_threads = 0);

// One row per instance; no timing columns, so reruns are byte-identical.
void WriteAggregateCsv(const BenchmarkResult& result, std::ostream& out);
void WriteResultJson(const BenchmarkResult& result, std::ostream& out);
// instance_id, iter, cost, best_cost, [cell_accuracy], [cut_size], elapsed_ms
void WriteTraceCsv(std::span<const std::string> instance_ids,
                   std::span<const RunRecord> records, std::ostream& out);

}  // namespace nlns

#endif  // NLNS_BENCH_H_
