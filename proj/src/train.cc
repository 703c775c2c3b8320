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

#include "nlns/train.h"

#include <cmath>
#include <string>
#include <vector>

#include "nlns/diff.h"
#include "nlns/errors.h"

namespace nlns {

void ValidateTrainConfig(const TrainConfig& cfg) {
  if (!(cfg.learning_rate >= 0.0) || !std::isfinite(cfg.learning_rate)) {
    throw ConfigError("learning rate must be finite and nonnegative");
  }
  if (cfg.batch_size < 1) throw ConfigError("batch size must be at least 1");
  if (cfg.steps < 0) throw ConfigError("step count must be nonnegative");
  if (!(cfg.tau > 0.0)) throw ConfigError("Gumbel temperature must be positive");
  if (!(cfg.beta1 >= 0.0 && cfg.beta1 < 1.0) ||
      !(cfg.beta2 >= 0.0 && cfg.beta2 < 1.0)) {
    throw ConfigError("moment coefficients must lie in [0, 1)");
  }
  if (!(cfg.epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(cfg.destroy_rate > 0.0 && cfg.destroy_rate <= 1.0)) {
    throw ConfigError("destroy rate must lie in (0, 1]");
  }
}

AdamState AdamState::For(const RepairModel& model) {
  return {ZerosLike(model.params), ZerosLike(model.params), 0};
}

TrainSample DrawTrainSample(const CspInstance& instance, const TrainConfig& cfg,
                            Rng& rng) {
  TrainSample sample;
  const int n = instance.num_variables();
  sample.x.values.resize(n);
  for (int i = 0; i < n; ++i) {
    sample.x.values[i] = instance.is_fixed(i)
                             ? instance.given_value(i)
                             : UniformInt(rng, instance.domain_size());
  }
  const DestroyContext ctx{instance, sample.x, cfg.destroy_rate, nullptr, nullptr,
                           rng};
  sample.mask = Destroy(cfg.destroy, ctx);
  sample.gumbel_noise.resize(n, instance.domain_size());
  for (Eigen::Index i = 0; i < sample.gumbel_noise.size(); ++i) {
    sample.gumbel_noise.data()[i] = Gumbel(rng);
  }
  return sample;
}

double SampleLoss(const RepairModel& model, const CspInstance& instance,
                  const TrainSample& sample, double tau, ModelParams* grads) {
  const ModelInput input = MakeModelInput(model, instance, sample.x, sample.mask);
  ForwardCache cache;
  const Matrix logits = ForwardTokens(model, input, grads ? &cache : nullptr);

  const int n = instance.num_variables();
  SoftAssignment q{Matrix::Zero(n, instance.domain_size())};
  for (int i = 0; i < n; ++i) {
    if (sample.mask[i]) {
      q.q.row(i) = SoftmaxRow((logits.row(i) + sample.gumbel_noise.row(i)) / tau);
    } else {
      q.q(i, sample.x.values[i]) = 1.0;
    }
  }
  const double loss = internal::RawLoss(instance, q.q);
  if (grads == nullptr) return loss;

  const GradMatrix grad_q = LossGradWrtQ(instance, q);
  Matrix grad_logits = SoftmaxBackward(q.q, grad_q.g).g / tau;
  for (int i = 0; i < n; ++i) {
    if (!sample.mask[i]) grad_logits.row(i).setZero();
  }
  Backward(model, cache, grad_logits, grads);
  return loss;
}

void AdamUpdate(RepairModel& model, AdamState& state, const ModelParams& grads,
                const TrainConfig& cfg) {
  ++state.step;
  const double t = static_cast<double>(state.step);
  const double bias1 = 1.0 - std::pow(cfg.beta1, t);
  const double bias2 = 1.0 - std::pow(cfg.beta2, t);
  const double lr = cfg.learning_rate;
  ForEachTensor(
      [&](Matrix& param, const Matrix& grad, Matrix& m, Matrix& v) {
        m = cfg.beta1 * m + (1.0 - cfg.beta1) * grad;
        v = cfg.beta2 * v + (1.0 - cfg.beta2) * grad.cwiseAbs2();
        param.array() -= lr * (m.array() / bias1) /
                         ((v.array() / bias2).sqrt() + cfg.epsilon);
      },
      model.params, grads, state.first_moment, state.second_moment);
}

double TrainStep(RepairModel& model, AdamState& state,
                 std::span<const CspInstance* const> batch,
                 const TrainConfig& cfg, Rng& rng) {
  ValidateTrainConfig(cfg);
  if (batch.empty()) throw ConfigError("training batch must be nonempty");
  const double tau = cfg.tau_schedule ? cfg.tau_schedule(state.step) : cfg.tau;
  if (!(tau > 0.0)) throw ConfigError("Gumbel temperature must be positive");

  ModelParams grads = ZerosLike(model.params);
  double total = 0.0;
  for (const CspInstance* instance : batch) {
    const TrainSample sample = DrawTrainSample(*instance, cfg, rng);
    total += SampleLoss(model, *instance, sample, tau, &grads);
  }
  const double inv = 1.0 / static_cast<double>(batch.size());
  const double mean_loss = total * inv;
  bool finite = std::isfinite(mean_loss);
  ForEachTensor(
      [&](Matrix& g) {
        g *= inv;
        finite = finite && g.allFinite();
      },
      grads);
  if (!finite) {
    throw TrainingFault("non-finite loss or gradient at step " +
                        std::to_string(state.step));
  }
  AdamUpdate(model, state, grads, cfg);
  return mean_loss;
}

void Train(RepairModel& model, std::span<const CspInstance> dataset,
           const TrainConfig& cfg,
           const std::function<void(int, double)>& on_step) {
  ValidateTrainConfig(cfg);
  if (dataset.empty()) throw ConfigError("training dataset is empty");
  Rng rng(cfg.seed);
  AdamState state = AdamState::For(model);
  std::vector<const CspInstance*> batch(cfg.batch_size);
  for (int step = 0; step < cfg.steps; ++step) {
    for (auto& slot : batch) {
      slot = &dataset[UniformInt(rng, static_cast<int>(dataset.size()))];
    }
    const double loss = TrainStep(model, state, batch, cfg, rng);
    if (on_step) on_step(step, loss);
  }
}

}  // namespace nlns
