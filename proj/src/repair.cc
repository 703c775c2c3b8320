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

#include "nlns/repair.h"

#include "nlns/errors.h"
#include "nlns/model.h"

namespace nlns {
namespace {

void CheckShapes(const CspInstance& instance, const LogitMatrix& z,
                 const DestroyMask& mask, const Assignment& x) {
  const int n = instance.num_variables();
  if (z.z.rows() != n || z.z.cols() != instance.domain_size() ||
      mask.size() != n) {
    throw ConfigError("repair inputs do not match the instance shape");
  }
  instance.ValidateAssignment(x);
}

}  // namespace

std::string_view RepairName(RepairKind kind) {
  return kind == RepairKind::kSample ? "sample" : "greedy";
}

std::optional<RepairKind> ParseRepairName(std::string_view name) {
  if (name == "sample") return RepairKind::kSample;
  if (name == "greedy") return RepairKind::kGreedy;
  return std::nullopt;
}

RepairProposal RepairSample(const CspInstance& instance, const LogitMatrix& z,
                            const DestroyMask& mask, const Assignment& x,
                            double tau, Rng& rng) {
  CheckShapes(instance, z, mask, x);
  if (!(tau > 0.0)) throw ConfigError("Gumbel temperature must be positive");
  RepairProposal proposal{x, SoftmaxRows(z.z)};
  for (int i = 0; i < instance.num_variables(); ++i) {
    if (!mask[i] || instance.is_fixed(i)) continue;
    proposal.next.values[i] = GumbelSoftmaxSample(z.z.row(i), tau, rng).hard;
  }
  return proposal;
}

RepairProposal RepairGreedy(const CspInstance& instance, const LogitMatrix& z,
                            const DestroyMask& mask, const Assignment& x) {
  CheckShapes(instance, z, mask, x);
  RepairProposal proposal{x, SoftmaxRows(z.z)};
  for (int i = 0; i < instance.num_variables(); ++i) {
    if (!mask[i] || instance.is_fixed(i)) continue;
    int best = 0;
    for (int v = 1; v < z.z.cols(); ++v) {
      if (z.z(i, v) > z.z(i, best)) best = v;
    }
    proposal.next.values[i] = best;
  }
  return proposal;
}

}  // namespace nlns
