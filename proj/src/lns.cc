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

#include "nlns/lns.h"

#include <chrono>
#include <string>

#include "nlns/destroy.h"
#include "nlns/errors.h"
#include "nlns/repair.h"

namespace nlns {
namespace {

using Clock = std::chrono::steady_clock;

double CellAccuracy(const Assignment& x, const Assignment& truth) {
  if (x.values.empty()) return 1.0;
  int correct = 0;
  for (size_t i = 0; i < x.values.size(); ++i) {
    correct += x.values[i] == truth.values[i];
  }
  return static_cast<double>(correct) / static_cast<double>(x.values.size());
}

void RecordState(const CspInstance& instance, const Assignment& x, int cost,
                 RunRecord& record) {
  record.cost.push_back(cost);
  if (record.best_cost.empty() || cost < record.best_cost.back()) {
    record.best_cost.push_back(cost);
    record.best = x;
  } else {
    record.best_cost.push_back(record.best_cost.back());
  }
  if (instance.ground_truth()) {
    record.cell_accuracy.push_back(CellAccuracy(x, *instance.ground_truth()));
  }
  if (instance.kind() == ProblemKind::kMaxCut) {
    record.cut_size.push_back(instance.num_constraints() - cost);
  }
}

}  // namespace

void ValidateLnsConfig(const LnsConfig& cfg) {
  if (!ParseDestroyName(cfg.destroy_id)) {
    throw ConfigError("unknown destroy operator '" + cfg.destroy_id + "'");
  }
  if (!ParseRepairName(cfg.repair_id)) {
    throw ConfigError("unknown repair operator '" + cfg.repair_id + "'");
  }
  if (!(cfg.rate > 0.0 && cfg.rate <= 1.0)) {
    throw ConfigError("destroy rate must lie in (0, 1]");
  }
  if (!cfg.max_iterations && !cfg.time_limit_seconds) {
    throw ConfigError("an iteration budget or a time limit is required");
  }
  if (cfg.max_iterations && *cfg.max_iterations < 0) {
    throw ConfigError("iteration budget must be nonnegative");
  }
  if (cfg.time_limit_seconds && !(*cfg.time_limit_seconds >= 0.0)) {
    throw ConfigError("time limit must be nonnegative");
  }
  if (!(cfg.tau > 0.0)) throw ConfigError("Gumbel temperature must be positive");
}

bool RunRecord::SameTrajectory(const RunRecord& o) const {
  return cost == o.cost && best_cost == o.best_cost && best == o.best &&
         final == o.final && iterations == o.iterations && solved == o.solved &&
         cell_accuracy == o.cell_accuracy && cut_size == o.cut_size;
}

Assignment InitializeAssignment(const CspInstance& instance, Rng& rng) {
  Assignment x;
  x.values.resize(instance.num_variables());
  for (int i = 0; i < instance.num_variables(); ++i) {
    x.values[i] = instance.is_fixed(i) ? instance.given_value(i)
                                       : UniformInt(rng, instance.domain_size());
  }
  return x;
}

RunRecord LnsRun(const CspInstance& instance, const RepairModel& model,
                 const LnsConfig& cfg) {
  ValidateLnsConfig(cfg);
  const DestroyKind destroy = *ParseDestroyName(cfg.destroy_id);
  const RepairKind repair = *ParseRepairName(cfg.repair_id);
  if (instance.num_variables() > model.hyper.max_len) {
    throw CapacityError("instance has " +
                        std::to_string(instance.num_variables()) +
                        " variables but the model supports at most " +
                        std::to_string(model.hyper.max_len));
  }
  if (instance.domain_size() != model.hyper.domain_size) {
    throw ConfigError("model domain size does not match the instance");
  }

  Rng rng(cfg.seed);
  RunRecord record;
  Assignment x = InitializeAssignment(instance, rng);
  RecordState(instance, x, Cost(instance, x), record);

  std::optional<LogitMatrix> logits;
  const auto start = Clock::now();
  for (int t = 0;; ++t) {
    if (cfg.stop_on_feasible && record.best_cost.back() == 0) break;
    if (cfg.max_iterations && t >= *cfg.max_iterations) break;
    if (cfg.time_limit_seconds &&
        std::chrono::duration<double>(Clock::now() - start).count() >=
            *cfg.time_limit_seconds) {
      break;
    }
    const auto iter_start = Clock::now();

    PenaltyReport penalties;
    if (destroy == DestroyKind::kRelatedGreedy) {
      penalties = TotalLoss(instance, OneHot(instance, x));
    }
    const DestroyContext ctx{instance,
                             x,
                             cfg.rate,
                             logits ? &*logits : nullptr,
                             destroy == DestroyKind::kRelatedGreedy ? &penalties
                                                                    : nullptr,
                             rng};
    DestroyMask mask = Destroy(destroy, ctx);
    mask.Sanitize(instance);
    LogitMatrix z = Forward(model, instance, x, mask);
    RepairProposal proposal =
        repair == RepairKind::kSample
            ? RepairSample(instance, z, mask, x, cfg.tau, rng)
            : RepairGreedy(instance, z, mask, x);
    x = std::move(proposal.next);
    logits = std::move(z);

    RecordState(instance, x, Cost(instance, x), record);
    ++record.iterations;
    record.iteration_ms.push_back(
        std::chrono::duration<double, std::milli>(Clock::now() - iter_start)
            .count());
  }
  record.final = x;
  record.solved = record.best_cost.back() == 0;
  return record;
}

RunRecord LnsRunUntrainedBaseline(const CspInstance& instance,
                                  const ModelHyper& hyper, const LnsConfig& cfg) {
  const RepairModel fresh = RepairModel::Initialize(hyper, DeriveSeed(cfg.seed, 0x5eed));
  return LnsRun(instance, fresh, cfg);
}

}  // namespace nlns
