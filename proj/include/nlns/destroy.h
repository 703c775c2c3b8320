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

// Destroy operators: each maps the current search state to a DestroyMask
// over the free (non-given) variables.

#ifndef NLNS_DESTROY_H_
#define NLNS_DESTROY_H_

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nlns/csp.h"
#include "nlns/destroy_mask.h"
#include "nlns/random.h"
#include "nlns/tensor.h"

namespace nlns {

enum class DestroyKind {
  kRandom,
  kWorstGreedy,
  kWorstStochastic,
  kRelatedGreedy,
  kRelatedStochastic,
  kGradientGreedy,
  kGradientStochastic,
  kConfidenceGreedy,
  kConfidenceStochastic,
};

inline constexpr DestroyKind kAllDestroyKinds[] = {
    DestroyKind::kRandom,           DestroyKind::kWorstGreedy,
    DestroyKind::kWorstStochastic,  DestroyKind::kRelatedGreedy,
    DestroyKind::kRelatedStochastic, DestroyKind::kGradientGreedy,
    DestroyKind::kGradientStochastic, DestroyKind::kConfidenceGreedy,
    DestroyKind::kConfidenceStochastic,
};

std::string_view DestroyName(DestroyKind kind);
std::optional<DestroyKind> ParseDestroyName(std::string_view name);
bool IsGreedy(DestroyKind kind);

struct DestroyContext {
  const CspInstance& instance;
  const Assignment& current;
  double rate;
  // Logits of the previous repair pass; null on the first iteration.
  const LogitMatrix* logits = nullptr;
  // Penalties of OneHot(current); computed on demand when null.
  const PenaltyReport* penalties = nullptr;
  Rng& rng;
};

// Empty stochastic draws are retried this many times before a single free
// variable is forced.
inline constexpr int kEmptyMaskRetries = 16;

// ceil(rate * n_free), robust to rounding noise in the product.
int TargetDestroyCount(double rate, int n_free);

// Scales nonnegative scores into Bernoulli probabilities whose mean over the
// free entries is rate. Uses the exact proportional factor when nothing
// clips and bisection on the factor otherwise; saturates at 1 per entry.
// `free` marks entries that count towards the mean (empty = all). Returns
// nullopt when no free entry has a positive score.
std::optional<std::vector<double>> NormalizeScoresToRate(
    std::span<const double> scores, double rate,
    std::span<const uint8_t> free = {});

// Independent Bernoulli(rate) per free variable.
DestroyMask RandomDestroy(const DestroyContext& ctx);
DestroyMask WorstGreedy(const DestroyContext& ctx);
DestroyMask WorstStochastic(const DestroyContext& ctx);
DestroyMask RelatedGreedy(const DestroyContext& ctx);
DestroyMask RelatedStochastic(const DestroyContext& ctx);
DestroyMask GradientGreedy(const DestroyContext& ctx);
DestroyMask GradientStochastic(const DestroyContext& ctx);
DestroyMask ConfidenceGreedy(const DestroyContext& ctx);
DestroyMask ConfidenceStochastic(const DestroyContext& ctx);

DestroyMask Destroy(DestroyKind kind, const DestroyContext& ctx);

// Per-constraint Bernoulli rate used by related removal:
// rate * n / (mean scope size * m), clamped to (0, 1].
double RelatedConstraintRate(const CspInstance& instance, double rate);

// Scores used by the prediction-guided operators.
std::vector<double> GradientScores(const CspInstance& instance,
                                   const LogitMatrix& logits);
// Top-1 minus top-2 softmax probability per row.
std::vector<double> ConfidenceMargins(const LogitMatrix& logits);

}  // namespace nlns

#endif  // NLNS_DESTROY_H_
