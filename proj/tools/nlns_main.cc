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

// nlns: generate datasets, train repair models, solve and benchmark.
//
// Exit codes: 0 success, 2 parse error, 3 config error, 4 runtime fault.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nlns/bench.h"
#include "nlns/errors.h"
#include "nlns/io.h"
#include "nlns/lns.h"
#include "nlns/model.h"
#include "nlns/train.h"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitConfig = 3;
constexpr int kExitRuntime = 4;

struct GenOptions {
  std::string kind = "sudoku4";
  int n = 50;
  double p = 0.1;
  int k = 3;
  int givens = 8;
  std::optional<int> givens_max;
  int count = 100;
  uint64_t seed = 0;
  std::string out;
};

struct TrainOptions {
  std::string kind = "sudoku4";
  std::string data;
  double rho = 0.3;
  int steps = 1000;
  double lr = 1e-3;
  int batch = 32;
  double tau = 1.0;
  uint64_t seed = 0;
  std::string out;
  std::string destroy = "random";
  int layers = 2;
  int width = 64;
  int heads = 4;
  int max_len = 256;
};

struct RunOptions {
  std::string model;
  std::string instance;
  std::string data;
  std::string destroy = "random";
  std::string repair = "sample";
  double rho = 0.3;
  std::optional<int> iters;
  std::optional<double> time_limit;
  double tau = 1.0;
  uint64_t seed = 0;
  std::string trace;
  std::string refs;
  std::string out_csv;
  std::string out_json;
  int threads = 0;
};

nlns::ProblemKind KindFromFlag(const std::string& kind, int k) {
  if (kind == "sudoku4" || kind == "sudoku9" || kind == "sudoku") {
    return nlns::ProblemKind::kSudoku;
  }
  if (kind == "coloring") return nlns::ProblemKind::kGraphColoring;
  if (kind == "maxcut") return nlns::ProblemKind::kMaxCut;
  if (kind == "graph") {
    return k == 2 ? nlns::ProblemKind::kMaxCut : nlns::ProblemKind::kGraphColoring;
  }
  throw nlns::ConfigError("unknown kind '" + kind + "'");
}

int RunGen(const GenOptions& o) {
  nlns::Rng rng(o.seed);
  std::vector<nlns::CspInstance> instances;
  int k = 0;
  if (o.kind == "sudoku4" || o.kind == "sudoku9") {
    const int box = o.kind == "sudoku4" ? 2 : 3;
    const int hi = o.givens_max.value_or(o.givens);
    if (hi < o.givens) throw nlns::ConfigError("--givens-max below --givens");
    for (int i = 0; i < o.count; ++i) {
      const int givens = o.givens + nlns::UniformInt(rng, hi - o.givens + 1);
      instances.push_back(nlns::GenSudoku(box, givens, rng));
    }
    k = box * box;
  } else {
    const nlns::ProblemKind kind = KindFromFlag(o.kind, o.k);
    k = kind == nlns::ProblemKind::kMaxCut ? 2 : o.k;
    for (int i = 0; i < o.count; ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "g%04d", i);
      instances.push_back(
          nlns::BuildInstance(nlns::GenRandomGraph(o.n, o.p, rng), kind, k, name));
    }
  }
  nlns::WriteDataset(o.out, instances, k);
  std::cout << "wrote " << instances.size() << " instances to " << o.out << "\n";
  return 0;
}

int RunTrain(const TrainOptions& o) {
  const std::vector<nlns::CspInstance> data = nlns::LoadDataset(o.data);
  if (data.empty()) throw nlns::ConfigError("training dataset is empty");
  const nlns::ProblemKind kind = data.front().kind();
  const int expected_k = data.front().domain_size();
  if (KindFromFlag(o.kind, expected_k) != kind) {
    throw nlns::ConfigError("--kind does not match the dataset");
  }
  if ((o.kind == "sudoku4" && expected_k != 4) || (o.kind == "sudoku9" && expected_k != 9)) {
    throw nlns::ConfigError("--kind does not match the dataset grid size");
  }
  nlns::ModelHyper hyper = nlns::DefaultHyper(kind, expected_k);
  hyper.layers = o.layers;
  hyper.width = o.width;
  hyper.heads = o.heads;
  hyper.ffn_width = 4 * o.width;
  hyper.max_len = o.max_len;
  for (const auto& inst : data) {
    if (inst.num_variables() > hyper.max_len) {
      throw nlns::ConfigError("dataset instance exceeds --max-len");
    }
  }

  nlns::TrainConfig cfg;
  cfg.learning_rate = o.lr;
  cfg.batch_size = o.batch;
  cfg.steps = o.steps;
  cfg.tau = o.tau;
  cfg.seed = o.seed;
  cfg.destroy_rate = o.rho;
  const auto destroy = nlns::ParseDestroyName(o.destroy);
  if (!destroy) throw nlns::ConfigError("unknown destroy operator '" + o.destroy + "'");
  cfg.destroy = *destroy;

  nlns::RepairModel model = nlns::RepairModel::Initialize(hyper, o.seed);
  const auto start = std::chrono::steady_clock::now();
  double window = 0.0;
  const int report_every = std::max(1, o.steps / 20);
  nlns::Train(model, data, cfg, [&](int step, double loss) {
    window += loss;
    if ((step + 1) % report_every == 0) {
      const double secs = std::chrono::duration<double>(
                              std::chrono::steady_clock::now() - start)
                              .count();
      std::cout << "step " << step + 1 << " loss " << window / report_every
                << " (" << secs << " s)\n";
      window = 0.0;
    }
  });
  nlns::SaveModel(model, o.out);
  std::cout << "saved model with " << model.ParameterCount() << " parameters to "
            << o.out << "\n";
  return 0;
}

nlns::LnsConfig MakeLnsConfig(const RunOptions& o) {
  nlns::LnsConfig cfg;
  cfg.destroy_id = o.destroy;
  cfg.repair_id = o.repair;
  cfg.rate = o.rho;
  cfg.max_iterations = o.iters;
  if (!o.iters && !o.time_limit) cfg.max_iterations = 2000;
  cfg.time_limit_seconds = o.time_limit;
  cfg.tau = o.tau;
  cfg.seed = o.seed;
  nlns::ValidateLnsConfig(cfg);
  return cfg;
}

int RunSolve(const RunOptions& o) {
  const nlns::LnsConfig cfg = MakeLnsConfig(o);
  const nlns::RepairModel model = nlns::LoadModel(o.model);
  const nlns::CspInstance instance =
      nlns::LoadInstanceFile(o.instance, model.hyper.domain_size);
  const nlns::RunRecord rec = nlns::LnsRun(instance, model, cfg);
  if (!o.trace.empty()) {
    std::ofstream out(o.trace);
    if (!out) throw nlns::Error("cannot open " + o.trace);
    const std::string id = instance.name();
    nlns::WriteTraceCsv(std::span(&id, 1), std::span(&rec, 1), out);
  }
  std::cout << "instance " << instance.name() << " iterations " << rec.iterations
            << " best_cost " << rec.best_cost.back()
            << " solved " << (rec.solved ? "yes" : "no");
  if (!rec.cut_size.empty()) {
    std::cout << " cut " << instance.num_constraints() - rec.best_cost.back();
  }
  std::cout << "\nassignment";
  for (int v : rec.best.values) std::cout << ' ' << instance.domain_values()[v];
  std::cout << "\n";
  return 0;
}

int RunBench(const RunOptions& o) {
  const nlns::LnsConfig cfg = MakeLnsConfig(o);
  const nlns::RepairModel model = nlns::LoadModel(o.model);
  const std::vector<nlns::CspInstance> data = nlns::LoadDataset(o.data);
  if (!data.empty() && data.front().kind() != model.hyper.kind) {
    throw nlns::ConfigError("model was trained for a different problem kind");
  }
  std::optional<nlns::ReferenceTable> refs;
  if (!o.refs.empty()) refs = nlns::ParseReferences(nlns::ReadFile(o.refs));
  const nlns::BenchmarkResult result =
      nlns::RunBenchmark(data, model, cfg, refs ? &*refs : nullptr, o.threads);
  if (!o.out_csv.empty()) {
    std::ofstream out(o.out_csv);
    if (!out) throw nlns::Error("cannot open " + o.out_csv);
    nlns::WriteAggregateCsv(result, out);
  }
  if (!o.out_json.empty()) {
    std::ofstream out(o.out_json);
    if (!out) throw nlns::Error("cannot open " + o.out_json);
    nlns::WriteResultJson(result, out);
  }
  if (!o.trace.empty()) {
    std::ofstream out(o.trace);
    if (!out) throw nlns::Error("cannot open " + o.trace);
    std::vector<std::string> ids;
    for (const auto& s : result.instances) ids.push_back(s.instance_id);
    nlns::WriteTraceCsv(ids, result.records, out);
  }
  const nlns::Aggregates& a = result.aggregates;
  std::cout << "instances " << a.count << " solved " << a.solved_fraction
            << " mean_best_cost " << a.mean_best_cost;
  if (a.mean_cell_accuracy) std::cout << " mean_cell_accuracy " << *a.mean_cell_accuracy;
  if (a.mean_gap) std::cout << " mean_gap " << *a.mean_gap;
  std::cout << "\n";
  return 0;
}

void AddRunFlags(CLI::App* cmd, RunOptions& o) {
  cmd->add_option("--model", o.model, "Model file")->required();
  cmd->add_option("--destroy", o.destroy, "Destroy operator id");
  cmd->add_option("--repair", o.repair, "Repair operator id (sample|greedy)");
  cmd->add_option("--rho", o.rho, "Degree of destruction in (0, 1]");
  cmd->add_option("--iters", o.iters, "Iteration budget");
  cmd->add_option("--time-limit", o.time_limit, "Wall-clock limit in seconds");
  cmd->add_option("--tau", o.tau, "Gumbel temperature for sample repair");
  cmd->add_option("--seed", o.seed, "Random seed");
  cmd->add_option("--trace", o.trace, "Per-iteration trace CSV");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neural large neighborhood search for constraint satisfaction"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a dataset");
  gen_cmd->add_option("--kind", gen.kind, "sudoku4|sudoku9|graph|coloring|maxcut");
  gen_cmd->add_option("--n", gen.n, "Graph node count");
  gen_cmd->add_option("--p", gen.p, "Edge probability");
  gen_cmd->add_option("--k", gen.k, "Colors (graph with k=2 means maxcut)");
  gen_cmd->add_option("--givens", gen.givens, "Sudoku givens (minimum)");
  gen_cmd->add_option("--givens-max", gen.givens_max, "Sudoku givens maximum");
  gen_cmd->add_option("--count", gen.count, "Instance count");
  gen_cmd->add_option("--seed", gen.seed, "Random seed");
  gen_cmd->add_option("--out", gen.out, "Output directory")->required();

  TrainOptions train;
  auto* train_cmd = app.add_subcommand("train", "Train a repair model");
  train_cmd->add_option("--kind", train.kind, "sudoku4|sudoku9|graph|coloring|maxcut");
  train_cmd->add_option("--data", train.data, "Dataset directory")->required();
  train_cmd->add_option("--rho", train.rho, "Destroy rate of training masks");
  train_cmd->add_option("--steps", train.steps, "Optimizer steps");
  train_cmd->add_option("--lr", train.lr, "Learning rate");
  train_cmd->add_option("--batch", train.batch, "Batch size");
  train_cmd->add_option("--tau", train.tau, "Gumbel temperature");
  train_cmd->add_option("--seed", train.seed, "Random seed");
  train_cmd->add_option("--out", train.out, "Output model file")->required();
  train_cmd->add_option("--destroy", train.destroy, "Destroy operator for training masks");
  train_cmd->add_option("--layers", train.layers, "Transformer blocks");
  train_cmd->add_option("--width", train.width, "Model width");
  train_cmd->add_option("--heads", train.heads, "Attention heads");
  train_cmd->add_option("--max-len", train.max_len, "Maximum instance size");

  RunOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  AddRunFlags(solve_cmd, solve);
  solve_cmd->add_option("--instance", solve.instance, "Instance file")->required();

  RunOptions bench;
  auto* bench_cmd = app.add_subcommand("bench", "Benchmark a dataset");
  AddRunFlags(bench_cmd, bench);
  bench_cmd->add_option("--data", bench.data, "Dataset directory")->required();
  bench_cmd->add_option("--refs", bench.refs, "Best-known cut references");
  bench_cmd->add_option("--out-csv", bench.out_csv, "Aggregate CSV output");
  bench_cmd->add_option("--out-json", bench.out_json, "JSON output");
  bench_cmd->add_option("--threads", bench.threads, "Worker threads (0 = all cores)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*gen_cmd) return RunGen(gen);
    if (*train_cmd) return RunTrain(train);
    if (*solve_cmd) return RunSolve(solve);
    if (*bench_cmd) return RunBench(bench);
  } catch (const nlns::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const nlns::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const nlns::StructureError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
