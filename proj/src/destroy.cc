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

#include "nlns/destroy.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "nlns/diff.h"
#include "nlns/errors.h"

namespace nlns {
namespace {

std::vector<uint8_t> FreeFlags(const CspInstance& instance) {
  std::vector<uint8_t> free(instance.num_variables());
  for (int i = 0; i < instance.num_variables(); ++i) free[i] = !instance.is_fixed(i);
  return free;
}

void CheckRate(double rate) {
  if (!(rate > 0.0 && rate <= 1.0)) {
    throw ConfigError("destroy rate must lie in (0, 1]");
  }
}

DestroyMask ForceOneFree(const CspInstance& instance, Rng& rng) {
  DestroyMask mask = DestroyMask::None(instance.num_variables());
  if (instance.num_free() == 0) return mask;
  int pick = UniformInt(rng, instance.num_free());
  for (int i = 0; i < instance.num_variables(); ++i) {
    if (instance.is_fixed(i)) continue;
    if (pick-- == 0) {
      mask.selected[i] = 1;
      break;
    }
  }
  return mask;
}

// Bernoulli draw per variable with resampling of empty masks.
DestroyMask DrawBernoulli(const CspInstance& instance,
                          std::span<const double> probs, Rng& rng) {
  const int n = instance.num_variables();
  if (instance.num_free() == 0) return DestroyMask::None(n);
  for (int attempt = 0; attempt <= kEmptyMaskRetries; ++attempt) {
    DestroyMask mask = DestroyMask::None(n);
    bool any = false;
    for (int i = 0; i < n; ++i) {
      if (instance.is_fixed(i)) continue;
      if (Bernoulli(rng, probs[i])) {
        mask.selected[i] = 1;
        any = true;
      }
    }
    if (any) return mask;
  }
  return ForceOneFree(instance, rng);
}

// Top-k free variables by descending score; ties by ascending index.
DestroyMask TopK(const CspInstance& instance, std::span<const double> scores,
                 double rate) {
  std::vector<int> order;
  for (int i = 0; i < instance.num_variables(); ++i) {
    if (!instance.is_fixed(i)) order.push_back(i);
  }
  const int k = std::min(TargetDestroyCount(rate, instance.num_free()),
                         instance.num_free());
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  DestroyMask mask = DestroyMask::None(instance.num_variables());
  for (int j = 0; j < k; ++j) mask.selected[order[j]] = 1;
  return mask;
}

bool AnyPositiveFree(const CspInstance& instance, std::span<const double> s) {
  for (int i = 0; i < instance.num_variables(); ++i) {
    if (!instance.is_fixed(i) && s[i] > 0.0) return true;
  }
  return false;
}

DestroyMask StochasticFromScores(const DestroyContext& ctx,
                                 std::span<const double> scores) {
  const auto free = FreeFlags(ctx.instance);
  auto probs = NormalizeScoresToRate(scores, ctx.rate, free);
  if (!probs) return RandomDestroy(ctx);
  return DrawBernoulli(ctx.instance, *probs, ctx.rng);
}

DestroyMask UnionOfScopes(const CspInstance& instance,
                          std::span<const int> constraint_ids) {
  DestroyMask mask = DestroyMask::None(instance.num_variables());
  for (int k : constraint_ids) {
    for (int v : instance.constraints()[k].scope) {
      if (!instance.is_fixed(v)) mask.selected[v] = 1;
    }
  }
  return mask;
}

}  // namespace

std::string_view DestroyName(DestroyKind kind) {
  switch (kind) {
    case DestroyKind::kRandom:
      return "random";
    case DestroyKind::kWorstGreedy:
      return "worst-greedy";
    case DestroyKind::kWorstStochastic:
      return "worst-stochastic";
    case DestroyKind::kRelatedGreedy:
      return "related-greedy";
    case DestroyKind::kRelatedStochastic:
      return "related-stochastic";
    case DestroyKind::kGradientGreedy:
      return "gradient-greedy";
    case DestroyKind::kGradientStochastic:
      return "gradient-stochastic";
    case DestroyKind::kConfidenceGreedy:
      return "confidence-greedy";
    case DestroyKind::kConfidenceStochastic:
      return "confidence-stochastic";
  }
  return "unknown";
}

std::optional<DestroyKind> ParseDestroyName(std::string_view name) {
  for (DestroyKind kind : kAllDestroyKinds) {
    if (DestroyName(kind) == name) return kind;
  }
  return std::nullopt;
}

bool IsGreedy(DestroyKind kind) {
  return kind == DestroyKind::kWorstGreedy ||
         kind == DestroyKind::kRelatedGreedy ||
         kind == DestroyKind::kGradientGreedy ||
         kind == DestroyKind::kConfidenceGreedy;
}

int TargetDestroyCount(double rate, int n_free) {
  return static_cast<int>(std::ceil(rate * n_free - 1e-9));
}

std::optional<std::vector<double>> NormalizeScoresToRate(
    std::span<const double> scores, double rate, std::span<const uint8_t> free) {
  CheckRate(rate);
  const size_t n = scores.size();
  auto is_free = [&](size_t i) { return free.empty() || free[i] != 0; };

  std::vector<double> positive;
  int n_free = 0;
  for (size_t i = 0; i < n; ++i) {
    if (!is_free(i)) continue;
    ++n_free;
    if (scores[i] < 0.0 || !std::isfinite(scores[i])) {
      throw DomainError("destroy scores must be finite and nonnegative");
    }
    if (scores[i] > 0.0) positive.push_back(scores[i]);
  }
  if (positive.empty()) return std::nullopt;

  // Find c with sum_i min(1, c * s_i) = rate * n_free. With the k largest
  // scores clipped, c = (target - k) / (sum of the rest).
  const double target = rate * n_free;
  std::vector<double> probs(n, 0.0);
  double factor;
  if (static_cast<double>(positive.size()) <= target) {
    factor = std::numeric_limits<double>::infinity();
  } else {
    std::sort(positive.begin(), positive.end(), std::greater<>());
    double rest = std::accumulate(positive.begin(), positive.end(), 0.0);
    factor = target / rest;
    for (size_t k = 0; k < positive.size(); ++k) {
      factor = (target - static_cast<double>(k)) / rest;
      if (factor * positive[k] <= 1.0) break;
      rest -= positive[k];
    }
  }
  for (size_t i = 0; i < n; ++i) {
    if (is_free(i) && scores[i] > 0.0) probs[i] = std::min(1.0, factor * scores[i]);
  }
  return probs;
}

DestroyMask RandomDestroy(const DestroyContext& ctx) {
  CheckRate(ctx.rate);
  const std::vector<double> probs(ctx.instance.num_variables(), ctx.rate);
  return DrawBernoulli(ctx.instance, probs, ctx.rng);
}

DestroyMask WorstGreedy(const DestroyContext& ctx) {
  CheckRate(ctx.rate);
  return TopK(ctx.instance, VariableViolationScores(ctx.instance, ctx.current),
              ctx.rate);
}

DestroyMask WorstStochastic(const DestroyContext& ctx) {
  CheckRate(ctx.rate);
  return StochasticFromScores(
      ctx, VariableViolationScores(ctx.instance, ctx.current));
}

double RelatedConstraintRate(const CspInstance& instance, double rate) {
  const int m = instance.num_constraints();
  if (m == 0) return rate;
  double scope_total = 0.0;
  for (const Constraint& c : instance.constraints()) scope_total += c.scope.size();
  const double mean_scope = scope_total / m;
  const double scaled = rate * instance.num_variables() / (mean_scope * m);
  return std::clamp(scaled, std::numeric_limits<double>::min(), 1.0);
}

DestroyMask RelatedStochastic(const DestroyContext& ctx) {
  CheckRate(ctx.rate);
  const CspInstance& instance = ctx.instance;
  if (instance.num_free() == 0) return DestroyMask::None(instance.num_variables());
  const double per_constraint = RelatedConstraintRate(instance, ctx.rate);
  std::vector<int> chosen;
  for (int attempt = 0; attempt <= kEmptyMaskRetries; ++attempt) {
    chosen.clear();
    for (int k = 0; k < instance.num_constraints(); ++k) {
      if (Bernoulli(ctx.rng, per_constraint)) chosen.push_back(k);
    }
    DestroyMask mask = UnionOfScopes(instance, chosen);
    if (mask.Count() > 0) return mask;
  }
  return RandomDestroy(ctx);
}

DestroyMask RelatedGreedy(const DestroyContext& ctx) {
  CheckRate(ctx.rate);
  const CspInstance& instance = ctx.instance;
  PenaltyReport computed;
  const PenaltyReport* report = ctx.penalties;
  if (report == nullptr) {
    computed = TotalLoss(instance, OneHot(instance, ctx.current));
    report = &computed;
  }
  std::vector<int> order(instance.num_constraints());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return report->per_constraint[a] > report->per_constraint[b];
  });
  const int target = std::min(TargetDestroyCount(ctx.rate, instance.num_free()),
                              instance.num_free());
  DestroyMask mask = DestroyMask::None(instance.num_variables());
  int covered = 0;
  for (int k : order) {
    if (covered >= target) break;
    for (int v : instance.constraints()[k].scope) {
      if (!instance.is_fixed(v) && !mask.selected[v]) {
        mask.selected[v] = 1;
        ++covered;
      }
    }
  }
  return mask;
}

std::vector<double> GradientScores(const CspInstance& instance,
                                   const LogitMatrix& logits) {
  const GradMatrix g = LossGradWrtLogits(instance, logits);
  std::vector<double> s(instance.num_variables());
  for (int i = 0; i < instance.num_variables(); ++i) s[i] = g.g.row(i).cwiseAbs().sum();
  return s;
}

std::vector<double> ConfidenceMargins(const LogitMatrix& logits) {
  std::vector<double> margins(logits.z.rows());
  for (Eigen::Index i = 0; i < logits.z.rows(); ++i) {
    const RowVector q = SoftmaxRow(logits.z.row(i));
    double top1 = -1.0, top2 = -1.0;
    for (Eigen::Index v = 0; v < q.size(); ++v) {
      if (q(v) > top1) {
        top2 = top1;
        top1 = q(v);
      } else if (q(v) > top2) {
        top2 = q(v);
      }
    }
    margins[i] = q.size() < 2 ? 1.0 : top1 - top2;
  }
  return margins;
}

DestroyMask GradientGreedy(const DestroyContext& ctx) {
  CheckRate(ctx.rate);
  if (ctx.logits == nullptr) return RandomDestroy(ctx);
  const auto scores = GradientScores(ctx.instance, *ctx.logits);
  if (!AnyPositiveFree(ctx.instance, scores)) return RandomDestroy(ctx);
  return TopK(ctx.instance, scores, ctx.rate);
}

DestroyMask GradientStochastic(const DestroyContext& ctx) {
  CheckRate(ctx.rate);
  if (ctx.logits == nullptr) return RandomDestroy(ctx);
  return StochasticFromScores(ctx, GradientScores(ctx.instance, *ctx.logits));
}

DestroyMask ConfidenceGreedy(const DestroyContext& ctx) {
  CheckRate(ctx.rate);
  if (ctx.logits == nullptr) return RandomDestroy(ctx);
  auto scores = ConfidenceMargins(*ctx.logits);
  for (double& s : scores) s = -s;  // smallest margin first
  return TopK(ctx.instance, scores, ctx.rate);
}

DestroyMask ConfidenceStochastic(const DestroyContext& ctx) {
  CheckRate(ctx.rate);
  if (ctx.logits == nullptr) return RandomDestroy(ctx);
  auto scores = ConfidenceMargins(*ctx.logits);
  for (double& s : scores) s = std::max(0.0, 1.0 - s);
  return StochasticFromScores(ctx, scores);
}

DestroyMask Destroy(DestroyKind kind, const DestroyContext& ctx) {
  switch (kind) {
    case DestroyKind::kRandom:
      return RandomDestroy(ctx);
    case DestroyKind::kWorstGreedy:
      return WorstGreedy(ctx);
    case DestroyKind::kWorstStochastic:
      return WorstStochastic(ctx);
    case DestroyKind::kRelatedGreedy:
      return RelatedGreedy(ctx);
    case DestroyKind::kRelatedStochastic:
      return RelatedStochastic(ctx);
    case DestroyKind::kGradientGreedy:
      return GradientGreedy(ctx);
    case DestroyKind::kGradientStochastic:
      return GradientStochastic(ctx);
    case DestroyKind::kConfidenceGreedy:
      return ConfidenceGreedy(ctx);
    case DestroyKind::kConfidenceStochastic:
      return ConfidenceStochastic(ctx);
  }
  throw ConfigError("unknown destroy operator");
}

}  // namespace nlns
