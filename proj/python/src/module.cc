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

// Python bindings for the nlns core. Stochastic entry points take an explicit
// integer seed instead of exposing the generator.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nlns/csp.h"
#include "nlns/destroy.h"
#include "nlns/diff.h"
#include "nlns/errors.h"
#include "nlns/io.h"
#include "nlns/lns.h"
#include "nlns/model.h"
#include "nlns/repair.h"
#include "nlns/train.h"

namespace py = pybind11;

namespace nlns {
namespace {

Assignment ToAssignment(const CspInstance& instance, std::vector<int> values) {
  Assignment x{std::move(values)};
  instance.ValidateAssignment(x);
  return x;
}

DestroyMask ToMask(const CspInstance& instance, const std::vector<bool>& mask) {
  if (static_cast<int>(mask.size()) != instance.num_variables()) {
    throw ConfigError("mask length does not match the instance");
  }
  DestroyMask m = DestroyMask::None(instance.num_variables());
  for (size_t i = 0; i < mask.size(); ++i) m.selected[i] = mask[i];
  return m;
}

std::vector<bool> FromMask(const DestroyMask& m) {
  return std::vector<bool>(m.selected.begin(), m.selected.end());
}

CspInstance GraphInstance(int num_nodes, std::vector<std::pair<int, int>> edges,
                          const std::string& kind, int k) {
  for (auto& [u, v] : edges) {
    if (u == v) throw StructureError("self-loop on node " + std::to_string(u));
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  const std::optional<ProblemKind> parsed = ParseProblemKind(kind);
  if (!parsed || *parsed == ProblemKind::kSudoku) {
    throw ConfigError("graph kind must be 'coloring' or 'maxcut'");
  }
  return BuildInstance(Graph{num_nodes, std::move(edges)}, *parsed, k);
}

py::dict RecordToDict(const RunRecord& r) {
  py::dict d;
  d["cost"] = r.cost;
  d["best_cost"] = r.best_cost;
  d["best"] = r.best.values;
  d["final"] = r.final.values;
  d["iterations"] = r.iterations;
  d["iteration_ms"] = r.iteration_ms;
  d["solved"] = r.solved;
  d["cell_accuracy"] = r.cell_accuracy;
  d["cut_size"] = r.cut_size;
  return d;
}

}  // namespace
}  // namespace nlns

PYBIND11_MODULE(_nlns, m) {
  using namespace nlns;
  m.doc() = "Neural large neighborhood search core";

  auto error = py::register_exception<Error>(m, "Error");
  py::register_exception<ParseError>(m, "ParseError", error.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", error.ptr());
  py::register_exception<StructureError>(m, "StructureError", error.ptr());
  py::register_exception<DomainError>(m, "DomainError", error.ptr());
  py::register_exception<CapacityError>(m, "CapacityError", error.ptr());
  py::register_exception<TrainingFault>(m, "TrainingFault", error.ptr());

  py::class_<CspInstance>(m, "Instance")
      .def_property_readonly("kind",
                             [](const CspInstance& c) {
                               return std::string(ProblemKindName(c.kind()));
                             })
      .def_property_readonly("num_variables", &CspInstance::num_variables)
      .def_property_readonly("domain_size", &CspInstance::domain_size)
      .def_property_readonly("num_constraints", &CspInstance::num_constraints)
      .def_property_readonly("num_free", &CspInstance::num_free)
      .def_property_readonly("name", &CspInstance::name)
      .def_property_readonly("given_values", &CspInstance::given_values)
      .def_property_readonly("ground_truth",
                             [](const CspInstance& c) -> std::optional<std::vector<int>> {
                               if (!c.ground_truth()) return std::nullopt;
                               return c.ground_truth()->values;
                             })
      .def("is_fixed", &CspInstance::is_fixed, py::arg("i"));

  m.def("parse_sudoku", [](const std::string& line) { return ParseSudoku(line); },
        py::arg("line"));
  m.def("serialize_sudoku", &SerializeSudoku, py::arg("instance"));
  m.def(
      "gen_sudoku",
      [](int box, int givens, uint64_t seed) {
        Rng rng(seed);
        return GenSudoku(box, givens, rng);
      },
      py::arg("box"), py::arg("givens"), py::arg("seed") = 0);
  m.def("graph_instance", &GraphInstance, py::arg("num_nodes"), py::arg("edges"),
        py::arg("kind"), py::arg("k"));
  m.def(
      "random_graph_instance",
      [](int n, double p, const std::string& kind, int k, uint64_t seed) {
        Rng rng(seed);
        const Graph g = GenRandomGraph(n, p, rng);
        return GraphInstance(g.num_nodes, g.edges, kind, k);
      },
      py::arg("n"), py::arg("p"), py::arg("kind"), py::arg("k"), py::arg("seed") = 0);
  m.def("load_instance", &LoadInstanceFile, py::arg("path"), py::arg("k") = 3);
  m.def("load_dataset", &LoadDataset, py::arg("path"));

  m.def(
      "eval_hard",
      [](const CspInstance& c, std::vector<int> x) {
        return EvalHard(c, ToAssignment(c, std::move(x))).violated_ids;
      },
      py::arg("instance"), py::arg("x"), "Ids of the violated constraints.");
  m.def(
      "cost",
      [](const CspInstance& c, std::vector<int> x) {
        return Cost(c, ToAssignment(c, std::move(x)));
      },
      py::arg("instance"), py::arg("x"));
  m.def(
      "total_loss",
      [](const CspInstance& c, const Matrix& q) { return TotalLoss(c, {q}).total_loss; },
      py::arg("instance"), py::arg("q"));
  m.def(
      "loss_grad_q",
      [](const CspInstance& c, const Matrix& q) { return LossGradWrtQ(c, {q}).g; },
      py::arg("instance"), py::arg("q"));
  m.def(
      "loss_grad_logits",
      [](const CspInstance& c, const Matrix& z) { return LossGradWrtLogits(c, {z}).g; },
      py::arg("instance"), py::arg("z"));
  m.def(
      "violation_scores",
      [](const CspInstance& c, std::vector<int> x) {
        return VariableViolationScores(c, ToAssignment(c, std::move(x)));
      },
      py::arg("instance"), py::arg("x"));

  m.def("destroy_operators", [] {
    std::vector<std::string> names;
    for (DestroyKind k : kAllDestroyKinds) names.emplace_back(DestroyName(k));
    return names;
  });
  m.def(
      "destroy",
      [](const std::string& name, const CspInstance& c, std::vector<int> x, double rate,
         std::optional<Matrix> logits, uint64_t seed) {
        const std::optional<DestroyKind> kind = ParseDestroyName(name);
        if (!kind) throw ConfigError("unknown destroy operator: " + name);
        const Assignment current = ToAssignment(c, std::move(x));
        std::optional<LogitMatrix> z;
        if (logits) z = LogitMatrix{*logits};
        Rng rng(seed);
        return FromMask(Destroy(*kind, {c, current, rate, z ? &*z : nullptr, nullptr, rng}));
      },
      py::arg("name"), py::arg("instance"), py::arg("x"), py::arg("rate"),
      py::arg("logits") = py::none(), py::arg("seed") = 0);
  m.def(
      "repair",
      [](const std::string& name, const CspInstance& c, const Matrix& logits,
         const std::vector<bool>& mask, std::vector<int> x, double tau, uint64_t seed) {
        const std::optional<RepairKind> kind = ParseRepairName(name);
        if (!kind) throw ConfigError("unknown repair operator: " + name);
        const Assignment current = ToAssignment(c, std::move(x));
        const DestroyMask m = ToMask(c, mask);
        Rng rng(seed);
        const RepairProposal p = *kind == RepairKind::kGreedy
                                     ? RepairGreedy(c, {logits}, m, current)
                                     : RepairSample(c, {logits}, m, current, tau, rng);
        return p.next.values;
      },
      py::arg("name"), py::arg("instance"), py::arg("logits"), py::arg("mask"),
      py::arg("x"), py::arg("tau") = 1.0, py::arg("seed") = 0);

  py::class_<RepairModel>(m, "Model")
      .def(py::init([](const std::string& kind, int domain_size, int layers, int width,
                       int heads, int max_len, std::optional<int> ffn_width,
                       uint64_t seed) {
             const std::optional<ProblemKind> k = ParseProblemKind(kind);
             if (!k) throw ConfigError("unknown problem kind: " + kind);
             ModelHyper h = DefaultHyper(*k, domain_size);
             h.layers = layers;
             h.width = width;
             h.heads = heads;
             h.max_len = max_len;
             h.ffn_width = ffn_width.value_or(4 * width);
             return RepairModel::Initialize(h, seed);
           }),
           py::arg("kind"), py::arg("domain_size"), py::arg("layers") = 2,
           py::arg("width") = 64, py::arg("heads") = 4, py::arg("max_len") = 256,
           py::arg("ffn_width") = py::none(), py::arg("seed") = 0)
      .def_static(
          "load", [](const std::string& path) { return LoadModel(path); }, py::arg("path"))
      .def(
          "save", [](const RepairModel& r, const std::string& path) { SaveModel(r, path); },
          py::arg("path"))
      .def_property_readonly("num_parameters", &RepairModel::ParameterCount)
      .def_property_readonly("max_len", [](const RepairModel& r) { return r.hyper.max_len; })
      .def_property_readonly("width", [](const RepairModel& r) { return r.hyper.width; })
      .def(
          "forward",
          [](const RepairModel& r, const CspInstance& c, std::vector<int> x,
             const std::vector<bool>& mask) {
            return Forward(r, c, ToAssignment(c, std::move(x)), ToMask(c, mask)).z;
          },
          py::arg("instance"), py::arg("x"), py::arg("mask"));

  m.def(
      "train",
      [](RepairModel& model, const std::vector<CspInstance>& data, int steps,
         int batch_size, double learning_rate, double destroy_rate, double tau,
         uint64_t seed) {
        TrainConfig cfg;
        cfg.steps = steps;
        cfg.batch_size = batch_size;
        cfg.learning_rate = learning_rate;
        cfg.destroy_rate = destroy_rate;
        cfg.tau = tau;
        cfg.seed = seed;
        std::vector<double> losses;
        {
          py::gil_scoped_release release;
          Train(model, data, cfg, [&](int, double loss) { losses.push_back(loss); });
        }
        return losses;
      },
      py::arg("model"), py::arg("data"), py::arg("steps") = 1000, py::arg("batch_size") = 32,
      py::arg("learning_rate") = 1e-3, py::arg("destroy_rate") = 0.3, py::arg("tau") = 1.0,
      py::arg("seed") = 0, "Trains in place; returns the per-step batch loss.");

  m.def(
      "solve",
      [](const CspInstance& c, const RepairModel& model, const std::string& destroy,
         const std::string& repair, double rate, std::optional<int> max_iterations,
         std::optional<double> time_limit, double tau, uint64_t seed) {
        LnsConfig cfg;
        cfg.destroy_id = destroy;
        cfg.repair_id = repair;
        cfg.rate = rate;
        cfg.max_iterations = max_iterations;
        cfg.time_limit_seconds = time_limit;
        cfg.tau = tau;
        cfg.seed = seed;
        RunRecord r;
        {
          py::gil_scoped_release release;
          r = LnsRun(c, model, cfg);
        }
        return RecordToDict(r);
      },
      py::arg("instance"), py::arg("model"), py::arg("destroy") = "random",
      py::arg("repair") = "sample", py::arg("rate") = 0.3,
      py::arg("max_iterations") = 2000, py::arg("time_limit") = py::none(),
      py::arg("tau") = 1.0, py::arg("seed") = 0);
}
