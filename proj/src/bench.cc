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

#include "nlns/bench.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <exception>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "nlns/errors.h"
#include "nlns/random.h"

namespace nlns {
namespace {

std::string FormatDouble(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

template <typename T>
std::string Optional(const std::optional<T>& v) {
  if (!v) return "";
  if constexpr (std::is_floating_point_v<T>) {
    return FormatDouble(*v);
  } else {
    return std::to_string(*v);
  }
}

template <typename T>
nlohmann::json JsonOptional(const std::optional<T>& v) {
  return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

}  // namespace

ReferenceTable ParseReferences(std::string_view text) {
  ReferenceTable table;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string name;
    if (!(fields >> name)) continue;
    long cut;
    std::string extra;
    if (!(fields >> cut) || (fields >> extra) || cut < 0) {
      throw ParseError("references line " + std::to_string(line_no) +
                       ": expected '<instance_name> <best_cut>'");
    }
    table[name] = static_cast<int>(cut);
  }
  return table;
}

std::vector<InstanceSummary> SummarizeRuns(std::span<const CspInstance> instances,
                                           std::span<const RunRecord> records,
                                           std::span<const uint64_t> seeds,
                                           const ReferenceTable* references) {
  if (instances.size() != records.size() || instances.size() != seeds.size()) {
    throw ConfigError("record and instance counts differ");
  }
  std::vector<InstanceSummary> out;
  for (size_t i = 0; i < instances.size(); ++i) {
    const CspInstance& inst = instances[i];
    const RunRecord& rec = records[i];
    InstanceSummary s;
    s.instance_id = inst.name().empty() ? std::to_string(i) : inst.name();
    s.seed = seeds[i];
    s.best_cost = rec.best_cost.empty() ? 0 : rec.best_cost.back();
    s.initial_cost = rec.cost.empty() ? 0 : rec.cost.front();
    s.solved = rec.solved;
    s.iterations = rec.iterations;
    if (const auto& truth = inst.ground_truth(); truth && !rec.best.values.empty()) {
      int correct = 0;
      for (size_t v = 0; v < truth->values.size(); ++v) {
        correct += truth->values[v] == rec.best.values[v];
      }
      s.cell_accuracy = truth->values.empty()
                            ? 1.0
                            : static_cast<double>(correct) / truth->values.size();
    }
    if (inst.kind() == ProblemKind::kMaxCut) {
      s.cut_size = inst.num_constraints() - s.best_cost;
      s.initial_cut = inst.num_constraints() - s.initial_cost;
      if (references != nullptr) {
        if (auto it = references->find(s.instance_id); it != references->end()) {
          if (it->second > inst.num_constraints()) {
            throw ConfigError("reference cut for " + s.instance_id +
                              " exceeds its edge count");
          }
          s.best_known_cut = it->second;
          s.gap = it->second - *s.cut_size;
        }
      }
    } else if (references != nullptr && references->count(s.instance_id)) {
      throw ConfigError("cut reference given for non-maxcut instance " +
                        s.instance_id);
    }
    out.push_back(std::move(s));
  }
  return out;
}

Aggregates ComputeMetrics(std::span<const InstanceSummary> summaries) {
  Aggregates agg;
  agg.count = static_cast<int>(summaries.size());
  if (summaries.empty()) return agg;
  std::vector<double> costs;
  int solved = 0;
  double acc_sum = 0.0, gap_sum = 0.0;
  int acc_n = 0, gap_n = 0;
  for (const InstanceSummary& s : summaries) {
    solved += s.solved;
    costs.push_back(s.best_cost);
    if (s.cell_accuracy) {
      acc_sum += *s.cell_accuracy;
      ++acc_n;
    }
    if (s.gap) {
      gap_sum += *s.gap;
      ++gap_n;
    }
  }
  agg.solved_fraction = static_cast<double>(solved) / agg.count;
  double total = 0.0;
  for (double c : costs) total += c;
  agg.mean_best_cost = total / agg.count;
  std::sort(costs.begin(), costs.end());
  const size_t mid = costs.size() / 2;
  agg.median_best_cost =
      costs.size() % 2 ? costs[mid] : 0.5 * (costs[mid - 1] + costs[mid]);
  if (acc_n > 0) agg.mean_cell_accuracy = acc_sum / acc_n;
  if (gap_n > 0) agg.mean_gap = gap_sum / gap_n;
  return agg;
}

BenchmarkResult RunBenchmark(std::span<const CspInstance> instances,
                             const RepairModel& model, const LnsConfig& cfg,
                             const ReferenceTable* references, int num_threads) {
  ValidateLnsConfig(cfg);
  BenchmarkResult result;
  result.config = cfg;
  if (instances.empty()) {
    std::cerr << "warning: empty dataset, nothing to run\n";
    return result;
  }
  const size_t n = instances.size();
  std::vector<uint64_t> seeds(n);
  for (size_t i = 0; i < n; ++i) seeds[i] = DeriveSeed(cfg.seed, i);
  result.records.resize(n);

  if (num_threads <= 0) {
    num_threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  }
  num_threads = static_cast<int>(std::min<size_t>(num_threads, n));
  std::atomic<size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (size_t i = next++; i < n; i = next++) {
      try {
        LnsConfig run_cfg = cfg;
        run_cfg.seed = seeds[i];
        result.records[i] = LnsRun(instances[i], model, run_cfg);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (num_threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int t = 0; t < num_threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  result.instances = SummarizeRuns(instances, result.records, seeds, references);
  result.aggregates = ComputeMetrics(result.instances);
  return result;
}

void WriteAggregateCsv(const BenchmarkResult& result, std::ostream& out) {
  const LnsConfig& cfg = result.config;
  out << "instance_id,destroy,repair,rho,max_iterations,seed,solved,best_cost,"
         "iterations,cell_accuracy,cut_size,best_known_cut,gap\n";
  for (const InstanceSummary& s : result.instances) {
    out << s.instance_id << ',' << cfg.destroy_id << ',' << cfg.repair_id << ','
        << FormatDouble(cfg.rate) << ',' << Optional(cfg.max_iterations) << ','
        << s.seed << ',' << (s.solved ? 1 : 0) << ',' << s.best_cost << ','
        << s.iterations << ',' << Optional(s.cell_accuracy) << ','
        << Optional(s.cut_size) << ',' << Optional(s.best_known_cut) << ','
        << Optional(s.gap) << '\n';
  }
}

void WriteResultJson(const BenchmarkResult& result, std::ostream& out) {
  const LnsConfig& cfg = result.config;
  nlohmann::json j;
  j["config"] = {
      {"destroy", cfg.destroy_id},
      {"repair", cfg.repair_id},
      {"rho", cfg.rate},
      {"max_iterations", JsonOptional(cfg.max_iterations)},
      {"time_limit_seconds", JsonOptional(cfg.time_limit_seconds)},
      {"tau", cfg.tau},
      {"seed", cfg.seed},
      {"stop_on_feasible", cfg.stop_on_feasible},
  };
  const Aggregates& a = result.aggregates;
  j["aggregate"] = {
      {"count", a.count},
      {"solved_fraction", a.solved_fraction},
      {"mean_best_cost", a.mean_best_cost},
      {"median_best_cost", a.median_best_cost},
      {"mean_cell_accuracy", JsonOptional(a.mean_cell_accuracy)},
      {"mean_gap", JsonOptional(a.mean_gap)},
  };
  j["instances"] = nlohmann::json::array();
  for (const InstanceSummary& s : result.instances) {
    j["instances"].push_back({
        {"instance_id", s.instance_id},
        {"seed", s.seed},
        {"solved", s.solved},
        {"initial_cost", s.initial_cost},
        {"best_cost", s.best_cost},
        {"iterations", s.iterations},
        {"cell_accuracy", JsonOptional(s.cell_accuracy)},
        {"initial_cut", JsonOptional(s.initial_cut)},
        {"cut_size", JsonOptional(s.cut_size)},
        {"best_known_cut", JsonOptional(s.best_known_cut)},
        {"gap", JsonOptional(s.gap)},
    });
  }
  const std::time_t now = std::chrono::system_clock::to_time_t(
      std::chrono::system_clock::now());
  char stamp[32];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  j["metadata"] = {
      {"generated_at", stamp},
      {"cell_accuracy_scope", "all variables, givens included"},
      {"seed_derivation", "splitmix64(seed xor instance_index)"},
  };
  out << j.dump(2) << '\n';
}

void WriteTraceCsv(std::span<const std::string> instance_ids,
                   std::span<const RunRecord> records, std::ostream& out) {
  if (instance_ids.size() != records.size()) {
    throw ConfigError("trace ids and records differ in length");
  }
  bool with_accuracy = false, with_cut = false;
  for (const RunRecord& r : records) {
    with_accuracy = with_accuracy || !r.cell_accuracy.empty();
    with_cut = with_cut || !r.cut_size.empty();
  }
  out << "instance_id,iter,cost,best_cost";
  if (with_accuracy) out << ",cell_accuracy";
  if (with_cut) out << ",cut_size";
  out << ",elapsed_ms\n";
  for (size_t r = 0; r < records.size(); ++r) {
    const RunRecord& rec = records[r];
    double elapsed = 0.0;
    for (size_t t = 0; t < rec.cost.size(); ++t) {
      if (t > 0 && t - 1 < rec.iteration_ms.size()) elapsed += rec.iteration_ms[t - 1];
      out << instance_ids[r] << ',' << t << ',' << rec.cost[t] << ','
          << rec.best_cost[t];
      if (with_accuracy) {
        out << ',' << (t < rec.cell_accuracy.size() ? FormatDouble(rec.cell_accuracy[t])
                                                    : "");
      }
      if (with_cut) {
        out << ',' << (t < rec.cut_size.size() ? std::to_string(rec.cut_size[t]) : "");
      }
      out << ',' << FormatDouble(elapsed) << '\n';
    }
  }
}

}  // namespace nlns
