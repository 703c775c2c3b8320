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

#include "nlns/model.h"

#include <cmath>
#include <numbers>
#include <string>

#include "nlns/errors.h"

namespace nlns {
namespace {

constexpr double kLayerNormEps = 1e-5;

Matrix RandomMatrix(int rows, int cols, double stddev, Rng& rng) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = stddev * Normal(rng);
  return m;
}

void LayerNormForward(const Matrix& x, const Matrix& gain, const Matrix& bias,
                      Matrix* hat, Eigen::VectorXd* rstd, Matrix* out) {
  const Eigen::Index n = x.rows();
  const double width = static_cast<double>(x.cols());
  hat->resize(n, x.cols());
  rstd->resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double mean = x.row(i).sum() / width;
    const RowVector centered = x.row(i).array() - mean;
    const double var = centered.squaredNorm() / width;
    (*rstd)(i) = 1.0 / std::sqrt(var + kLayerNormEps);
    hat->row(i) = centered * (*rstd)(i);
  }
  *out = (hat->array().rowwise() * gain.row(0).array()).rowwise() +
         bias.row(0).array();
}

// Returns dL/dx; accumulates gain and bias gradients.
Matrix LayerNormBackward(const Matrix& grad_out, const Matrix& hat,
                         const Eigen::VectorXd& rstd, const Matrix& gain,
                         Matrix* grad_gain, Matrix* grad_bias) {
  grad_gain->row(0) += (grad_out.array() * hat.array()).colwise().sum().matrix();
  grad_bias->row(0) += grad_out.colwise().sum();
  const Matrix grad_hat = grad_out.array().rowwise() * gain.row(0).array();
  const double width = static_cast<double>(hat.cols());
  Matrix grad_in(hat.rows(), hat.cols());
  for (Eigen::Index i = 0; i < hat.rows(); ++i) {
    const double mean_g = grad_hat.row(i).sum() / width;
    const double mean_gx = grad_hat.row(i).dot(hat.row(i)) / width;
    grad_in.row(i) =
        rstd(i) * (grad_hat.row(i).array() - mean_g - hat.row(i).array() * mean_gx);
  }
  return grad_in;
}

constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)
constexpr double kGeluA = 0.044715;

double Gelu(double x) {
  return 0.5 * x * (1.0 + std::tanh(kGeluC * (x + kGeluA * x * x * x)));
}

double GeluGrad(double x) {
  const double t = std::tanh(kGeluC * (x + kGeluA * x * x * x));
  return 0.5 * (1.0 + t) +
         0.5 * x * (1.0 - t * t) * kGeluC * (1.0 + 3.0 * kGeluA * x * x);
}

void AddBias(Matrix& m, const Matrix& bias) { m.rowwise() += bias.row(0); }

}  // namespace

ModelHyper DefaultHyper(ProblemKind kind, int domain_size) {
  ModelHyper hyper;
  hyper.kind = kind;
  hyper.domain_size = domain_size;
  hyper.conflict_feature = kind != ProblemKind::kSudoku;
  return hyper;
}

void ValidateHyper(const ModelHyper& h) {
  auto fail = [](const std::string& what) {
    throw ConfigError("invalid model hyperparameters: " + what);
  };
  if (h.domain_size < 1 || h.domain_size > 4096) fail("domain size");
  if (h.layers < 0 || h.layers > 64) fail("layer count");
  if (h.width < 1 || h.width > 4096) fail("width");
  if (h.heads < 1 || h.width % h.heads != 0) fail("width must divide by heads");
  if (h.max_len < 1 || h.max_len > (1 << 20)) fail("max_len");
  if (h.ffn_width < 1 || h.ffn_width > 16384) fail("ffn width");
}

ModelParams ZerosLike(const ModelParams& p) {
  ModelParams z = p;
  ForEachTensor([](Matrix& t) { t.setZero(); }, z);
  return z;
}

RepairModel RepairModel::Initialize(const ModelHyper& hyper, uint64_t seed) {
  ValidateHyper(hyper);
  Rng rng(seed);
  const int h = hyper.width;
  const int f = hyper.ffn_width;
  const int d = hyper.domain_size;
  const double w_std = 1.0 / std::sqrt(static_cast<double>(h));
  const double residual_std = w_std / std::sqrt(2.0 * std::max(1, hyper.layers));

  RepairModel model;
  model.hyper = hyper;
  ModelParams& p = model.params;
  p.value_embedding = RandomMatrix(d + 1, h, 0.5, rng);
  p.position_embedding = RandomMatrix(hyper.max_len, h, 0.5, rng);
  p.destroy_flag = RandomMatrix(1, h, 0.5, rng);
  p.conflict_feature = RandomMatrix(1, h, 0.5, rng);
  for (int layer = 0; layer < hyper.layers; ++layer) {
    BlockParams b;
    b.ln1_gain = Matrix::Ones(1, h);
    b.ln1_bias = Matrix::Zero(1, h);
    b.w_q = RandomMatrix(h, h, w_std, rng);
    b.b_q = Matrix::Zero(1, h);
    b.w_k = RandomMatrix(h, h, w_std, rng);
    b.b_k = Matrix::Zero(1, h);
    b.w_v = RandomMatrix(h, h, w_std, rng);
    b.b_v = Matrix::Zero(1, h);
    b.w_o = RandomMatrix(h, h, residual_std, rng);
    b.b_o = Matrix::Zero(1, h);
    b.ln2_gain = Matrix::Ones(1, h);
    b.ln2_bias = Matrix::Zero(1, h);
    b.w_ff1 = RandomMatrix(h, f, w_std, rng);
    b.b_ff1 = Matrix::Zero(1, f);
    b.w_ff2 = RandomMatrix(f, h, residual_std / std::sqrt(f / double(h)), rng);
    b.b_ff2 = Matrix::Zero(1, h);
    p.blocks.push_back(std::move(b));
  }
  p.final_ln_gain = Matrix::Ones(1, h);
  p.final_ln_bias = Matrix::Zero(1, h);
  p.output_head = RandomMatrix(h, d, w_std, rng);
  p.output_bias = Matrix::Zero(1, d);
  return model;
}

int64_t RepairModel::ParameterCount() const {
  int64_t count = 0;
  ForEachTensor([&](const Matrix& t) { count += t.size(); }, params);
  return count;
}

ModelInput MakeModelInput(const RepairModel& model, const CspInstance& instance,
                          const Assignment& x, const DestroyMask& mask) {
  const int n = instance.num_variables();
  if (n > model.hyper.max_len) {
    throw CapacityError("instance has " + std::to_string(n) +
                        " variables but the model supports at most " +
                        std::to_string(model.hyper.max_len));
  }
  if (instance.domain_size() != model.hyper.domain_size) {
    throw ConfigError("model domain size " +
                      std::to_string(model.hyper.domain_size) +
                      " does not match instance domain size " +
                      std::to_string(instance.domain_size()));
  }
  if (mask.size() != n) throw ConfigError("destroy mask length mismatch");
  instance.ValidateAssignment(x);

  ModelInput input;
  input.values = x.values;
  input.destroyed = mask.selected;
  input.conflicts.assign(n, 0.0);
  if (model.hyper.conflict_feature) {
    for (const Constraint& c : instance.constraints()) {
      if (!IsViolated(c, x)) continue;
      for (int v : c.scope) input.conflicts[v] += 1.0;
    }
  }
  return input;
}

Matrix ForwardTokens(const RepairModel& model, const ModelInput& input,
                     ForwardCache* cache) {
  const ModelHyper& hy = model.hyper;
  const ModelParams& p = model.params;
  const int n = static_cast<int>(input.values.size());
  const int h = hy.width;
  const int head_dim = h / hy.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

  Matrix x(n, h);
  for (int i = 0; i < n; ++i) {
    x.row(i) = p.value_embedding.row(input.values[i]) + p.position_embedding.row(i);
    if (input.destroyed[i]) x.row(i) += p.destroy_flag.row(0);
    if (hy.conflict_feature) x.row(i) += input.conflicts[i] * p.conflict_feature.row(0);
  }

  ForwardCache local;
  ForwardCache& c = cache != nullptr ? *cache : local;
  c.input = input;
  c.blocks.assign(p.blocks.size(), BlockCache{});
  for (size_t layer = 0; layer < p.blocks.size(); ++layer) {
    const BlockParams& b = p.blocks[layer];
    BlockCache& bc = c.blocks[layer];
    bc.input = x;
    LayerNormForward(x, b.ln1_gain, b.ln1_bias, &bc.ln1_hat, &bc.ln1_rstd,
                     &bc.ln1_out);
    bc.q = bc.ln1_out * b.w_q;
    AddBias(bc.q, b.b_q);
    bc.k = bc.ln1_out * b.w_k;
    AddBias(bc.k, b.b_k);
    bc.v = bc.ln1_out * b.w_v;
    AddBias(bc.v, b.b_v);
    bc.attention.resize(hy.heads);
    bc.attention_out.resize(n, h);
    for (int head = 0; head < hy.heads; ++head) {
      const int off = head * head_dim;
      Matrix scores = scale * (bc.q.middleCols(off, head_dim) *
                               bc.k.middleCols(off, head_dim).transpose());
      for (int i = 0; i < n; ++i) scores.row(i) = SoftmaxRow(scores.row(i));
      bc.attention_out.middleCols(off, head_dim) =
          scores * bc.v.middleCols(off, head_dim);
      bc.attention[head] = std::move(scores);
    }
    bc.mid = x + bc.attention_out * b.w_o;
    AddBias(bc.mid, b.b_o);
    LayerNormForward(bc.mid, b.ln2_gain, b.ln2_bias, &bc.ln2_hat, &bc.ln2_rstd,
                     &bc.ln2_out);
    bc.ff_pre = bc.ln2_out * b.w_ff1;
    AddBias(bc.ff_pre, b.b_ff1);
    bc.ff_act = bc.ff_pre.unaryExpr(&Gelu);
    x = bc.mid + bc.ff_act * b.w_ff2;
    AddBias(x, b.b_ff2);
  }
  Matrix logits;
  LayerNormForward(x, p.final_ln_gain, p.final_ln_bias, &c.final_hat,
                   &c.final_rstd, &c.final_out);
  logits = c.final_out * p.output_head;
  AddBias(logits, p.output_bias);
  return logits;
}

LogitMatrix Forward(const RepairModel& model, const CspInstance& instance,
                    const Assignment& x, const DestroyMask& mask) {
  return {ForwardTokens(model, MakeModelInput(model, instance, x, mask), nullptr)};
}

void Backward(const RepairModel& model, const ForwardCache& c,
              const Matrix& grad_logits, ModelParams* grads) {
  const ModelHyper& hy = model.hyper;
  const ModelParams& p = model.params;
  ModelParams& g = *grads;
  const int n = static_cast<int>(c.input.values.size());
  const int head_dim = hy.width / hy.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));

  g.output_head.noalias() += c.final_out.transpose() * grad_logits;
  g.output_bias.row(0) += grad_logits.colwise().sum();
  Matrix grad_x = LayerNormBackward(grad_logits * p.output_head.transpose(),
                                    c.final_hat, c.final_rstd, p.final_ln_gain,
                                    &g.final_ln_gain, &g.final_ln_bias);

  for (int layer = static_cast<int>(p.blocks.size()) - 1; layer >= 0; --layer) {
    const BlockParams& b = p.blocks[layer];
    BlockParams& gb = g.blocks[layer];
    const BlockCache& bc = c.blocks[layer];

    // Feed-forward branch.
    gb.w_ff2.noalias() += bc.ff_act.transpose() * grad_x;
    gb.b_ff2.row(0) += grad_x.colwise().sum();
    Matrix grad_pre = grad_x * b.w_ff2.transpose();
    grad_pre.array() *= bc.ff_pre.unaryExpr(&GeluGrad).array();
    gb.w_ff1.noalias() += bc.ln2_out.transpose() * grad_pre;
    gb.b_ff1.row(0) += grad_pre.colwise().sum();
    Matrix grad_mid =
        grad_x + LayerNormBackward(grad_pre * b.w_ff1.transpose(), bc.ln2_hat,
                                   bc.ln2_rstd, b.ln2_gain, &gb.ln2_gain,
                                   &gb.ln2_bias);

    // Attention branch.
    gb.w_o.noalias() += bc.attention_out.transpose() * grad_mid;
    gb.b_o.row(0) += grad_mid.colwise().sum();
    const Matrix grad_attn_out = grad_mid * b.w_o.transpose();
    Matrix grad_q(n, hy.width), grad_k(n, hy.width), grad_v(n, hy.width);
    for (int head = 0; head < hy.heads; ++head) {
      const int off = head * head_dim;
      const Matrix& probs = bc.attention[head];
      const auto grad_o = grad_attn_out.middleCols(off, head_dim);
      grad_v.middleCols(off, head_dim) = probs.transpose() * grad_o;
      const Matrix grad_probs = grad_o * bc.v.middleCols(off, head_dim).transpose();
      Matrix grad_scores(n, n);
      for (int i = 0; i < n; ++i) {
        const double inner = grad_probs.row(i).dot(probs.row(i));
        grad_scores.row(i) =
            probs.row(i).array() * (grad_probs.row(i).array() - inner);
      }
      grad_scores *= scale;
      grad_q.middleCols(off, head_dim) =
          grad_scores * bc.k.middleCols(off, head_dim);
      grad_k.middleCols(off, head_dim) =
          grad_scores.transpose() * bc.q.middleCols(off, head_dim);
    }
    gb.w_q.noalias() += bc.ln1_out.transpose() * grad_q;
    gb.b_q.row(0) += grad_q.colwise().sum();
    gb.w_k.noalias() += bc.ln1_out.transpose() * grad_k;
    gb.b_k.row(0) += grad_k.colwise().sum();
    gb.w_v.noalias() += bc.ln1_out.transpose() * grad_v;
    gb.b_v.row(0) += grad_v.colwise().sum();
    Matrix grad_ln1 = grad_q * b.w_q.transpose();
    grad_ln1.noalias() += grad_k * b.w_k.transpose();
    grad_ln1.noalias() += grad_v * b.w_v.transpose();
    grad_x = grad_mid + LayerNormBackward(grad_ln1, bc.ln1_hat, bc.ln1_rstd,
                                          b.ln1_gain, &gb.ln1_gain, &gb.ln1_bias);
  }

  for (int i = 0; i < n; ++i) {
    g.value_embedding.row(c.input.values[i]) += grad_x.row(i);
    g.position_embedding.row(i) += grad_x.row(i);
    if (c.input.destroyed[i]) g.destroy_flag.row(0) += grad_x.row(i);
    if (hy.conflict_feature) {
      g.conflict_feature.row(0) += c.input.conflicts[i] * grad_x.row(i);
    }
  }
}

GumbelSample GumbelSoftmaxSample(const Eigen::Ref<const RowVector>& z,
                                 double tau, Rng& rng) {
  if (!(tau > 0.0)) throw ConfigError("Gumbel temperature must be positive");
  RowVector perturbed(z.size());
  for (Eigen::Index v = 0; v < z.size(); ++v) {
    perturbed(v) = (z(v) + Gumbel(rng)) / tau;
  }
  const RowVector soft = SoftmaxRow(perturbed);
  GumbelSample sample;
  sample.soft.assign(soft.data(), soft.data() + soft.size());
  for (int v = 1; v < static_cast<int>(sample.soft.size()); ++v) {
    if (sample.soft[v] > sample.soft[sample.hard]) sample.hard = v;
  }
  return sample;
}

}  // namespace nlns
