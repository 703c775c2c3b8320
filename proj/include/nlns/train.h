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

// Self-supervised training of the repair model on the penalty loss.

#ifndef NLNS_TRAIN_H_
#define NLNS_TRAIN_H_

#include <cstdint>
#include <functional>
#include <span>

#include "nlns/csp.h"
#include "nlns/destroy.h"
#include "nlns/model.h"
#include "nlns/random.h"

namespace nlns {

struct TrainConfig {
  double learning_rate = 1e-3;
  int batch_size = 32;
  int steps = 1000;
  double tau = 1.0;
  // Optional temperature schedule by step index; overrides tau when set.
  std::function<double(int64_t)> tau_schedule;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  uint64_t seed = 0;
  // Destroy rate and operator used to pick the masked positions of each
  // training sample. Prediction-guided operators see no logits here and so
  // reduce to random removal.
  double destroy_rate = 0.3;
  DestroyKind destroy = DestroyKind::kRandom;
};

// Throws ConfigError on invalid settings.
void ValidateTrainConfig(const TrainConfig& cfg);

// Adaptive-moment optimizer state matching the model's parameter shapes.
struct AdamState {
  ModelParams first_moment;
  ModelParams second_moment;
  int64_t step = 0;

  static AdamState For(const RepairModel& model);
};

// One self-supervised sample: a starting assignment, the masked positions
// and the Gumbel noise applied to their logits.
struct TrainSample {
  Assignment x;
  DestroyMask mask;
  Matrix gumbel_noise;
};

// Random assignment respecting givens, a destroy mask from the configured
// operator and fresh Gumbel noise.
TrainSample DrawTrainSample(const CspInstance& instance, const TrainConfig& cfg,
                            Rng& rng);

// Loss of one sample: masked rows use softmax((z + noise) / tau), all other
// rows the one-hot current value. Accumulates dLoss/dParams into grads when
// non-null.
double SampleLoss(const RepairModel& model, const CspInstance& instance,
                  const TrainSample& sample, double tau, ModelParams* grads);

// Applies one optimizer update with the given averaged gradients.
void AdamUpdate(RepairModel& model, AdamState& state, const ModelParams& grads,
                const TrainConfig& cfg);

// One training step over a batch. Returns the mean batch loss. Throws
// TrainingFault on a non-finite loss.
double TrainStep(RepairModel& model, AdamState& state,
                 std::span<const CspInstance* const> batch,
                 const TrainConfig& cfg, Rng& rng);

// Runs cfg.steps steps, drawing batches uniformly from the dataset. The
// callback, if set, receives (step, batch loss) after each step.
void Train(RepairModel& model, std::span<const CspInstance> dataset,
           const TrainConfig& cfg,
           const std::function<void(int, double)>& on_step = {});

}  // namespace nlns

#endif  // NLNS_TRAIN_H_
