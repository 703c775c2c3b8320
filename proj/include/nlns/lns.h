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

// The destroy -> forward -> repair loop with incumbent tracking.

#ifndef NLNS_LNS_H_
#define NLNS_LNS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlns/csp.h"
#include "nlns/model.h"
#include "nlns/random.h"

namespace nlns {

struct LnsConfig {
  std::string destroy_id = "random";
  std::string repair_id = "sample";
  double rate = 0.3;
  std::optional<int> max_iterations = 2000;
  std::optional<double> time_limit_seconds;
  double tau = 1.0;
  uint64_t seed = 0;
  bool stop_on_feasible = true;
};

// Throws ConfigError on unknown operator ids or invalid settings.
void ValidateLnsConfig(const LnsConfig& cfg);

// Entry 0 of every per-iteration vector describes the initial assignment;
// entry t describes the state after iteration t.
struct RunRecord {
  std::vector<int> cost;
  std::vector<int> best_cost;
  Assignment best;
  Assignment final;
  int iterations = 0;
  std::vector<double> iteration_ms;
  bool solved = false;
  // Fraction of all variables equal to the ground truth, when known.
  std::vector<double> cell_accuracy;
  // MaxCut only.
  std::vector<int> cut_size;

  // Equality of every field except wall-clock timings.
  bool SameTrajectory(const RunRecord& other) const;
};

// Givens take their values; free variables are uniform over the domain.
Assignment InitializeAssignment(const CspInstance& instance, Rng& rng);

RunRecord LnsRun(const CspInstance& instance, const RepairModel& model,
                 const LnsConfig& cfg);

// Same loop with a freshly initialized model of the given shape.
RunRecord LnsRunUntrainedBaseline(const CspInstance& instance,
                                  const ModelHyper& hyper, const LnsConfig& cfg);

}  // namespace nlns

#endif  // NLNS_LNS_H_
