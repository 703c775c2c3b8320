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

#ifndef NLNS_REPAIR_H_
#define NLNS_REPAIR_H_

#include <optional>
#include <string_view>

#include "nlns/csp.h"
#include "nlns/destroy_mask.h"
#include "nlns/random.h"
#include "nlns/tensor.h"

namespace nlns {

enum class RepairKind { kSample, kGreedy };

std::string_view RepairName(RepairKind kind);
std::optional<RepairKind> ParseRepairName(std::string_view name);

struct RepairProposal {
  Assignment next;
  // Softmax rows of the logits the proposal was decoded from.
  Matrix probabilities;
};

// Selected free variables take a Gumbel-softmax hard sample of their logits
// row; everything else keeps its value. The mask is sanitized against the
// instance's givens.
RepairProposal RepairSample(const CspInstance& instance, const LogitMatrix& z,
                            const DestroyMask& mask, const Assignment& x,
                            double tau, Rng& rng);

// Selected free variables take the argmax of their row, ties to the
// smallest value index.
RepairProposal RepairGreedy(const CspInstance& instance, const LogitMatrix& z,
                            const DestroyMask& mask, const Assignment& x);

}  // namespace nlns

#endif  // NLNS_REPAIR_H_
