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

// A small pre-LayerNorm transformer that maps a complete assignment plus a
// destroy mask to per-variable logits.
//
// Token i is value_embedding[x_i] + position_embedding[i], plus destroy_flag
// when m_i = 1. Models built for graph problems also add
// conflict_feature * c_i, where c_i is the number of violated constraints
// touching variable i: positions alone carry no edge structure.
//
// Each block computes
//   h   = x + MultiHeadAttention(LayerNorm(x))
//   out = h + W2 gelu(W1 LayerNorm(h) + b1) + b2
// and the head maps LayerNorm(out) to d logits per token.

#ifndef NLNS_MODEL_H_
#define NLNS_MODEL_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "nlns/csp.h"
#include "nlns/destroy_mask.h"
#include "nlns/random.h"
#include "nlns/tensor.h"

namespace nlns {

struct ModelHyper {
  ProblemKind kind = ProblemKind::kSudoku;
  int domain_size = 4;
  int layers = 2;
  int width = 64;
  int heads = 4;
  int max_len = 256;
  int ffn_width = 256;
  bool conflict_feature = false;

  friend bool operator==(const ModelHyper&, const ModelHyper&) = default;
};

// Default desk-scale hyperparameters for a problem kind and domain size.
ModelHyper DefaultHyper(ProblemKind kind, int domain_size);

struct BlockParams {
  Matrix ln1_gain, ln1_bias;
  Matrix w_q, b_q, w_k, b_k, w_v, b_v, w_o, b_o;
  Matrix ln2_gain, ln2_bias;
  Matrix w_ff1, b_ff1, w_ff2, b_ff2;
};

struct ModelParams {
  Matrix value_embedding;     // (d + 1) x h; the last row is the blank token.
  Matrix position_embedding;  // max_len x h
  Matrix destroy_flag;        // 1 x h
  Matrix conflict_feature;    // 1 x h
  std::vector<BlockParams> blocks;
  Matrix final_ln_gain, final_ln_bias;
  Matrix output_head;  // h x d
  Matrix output_bias;  // 1 x d
};

// Visits matching tensors of one or more same-shaped parameter sets in
// declaration order. This order is also the on-disk order of the model file.
template <typename Fn, typename... Params>
void ForEachTensor(Fn&& fn, Params&... p) {
  fn(p.value_embedding...);
  fn(p.position_embedding...);
  fn(p.destroy_flag...);
  fn(p.conflict_feature...);
  const size_t num_blocks = std::get<0>(std::tie(p...)).blocks.size();
  for (size_t i = 0; i < num_blocks; ++i) {
    fn(p.blocks[i].ln1_gain...);
    fn(p.blocks[i].ln1_bias...);
    fn(p.blocks[i].w_q...);
    fn(p.blocks[i].b_q...);
    fn(p.blocks[i].w_k...);
    fn(p.blocks[i].b_k...);
    fn(p.blocks[i].w_v...);
    fn(p.blocks[i].b_v...);
    fn(p.blocks[i].w_o...);
    fn(p.blocks[i].b_o...);
    fn(p.blocks[i].ln2_gain...);
    fn(p.blocks[i].ln2_bias...);
    fn(p.blocks[i].w_ff1...);
    fn(p.blocks[i].b_ff1...);
    fn(p.blocks[i].w_ff2...);
    fn(p.blocks[i].b_ff2...);
  }
  fn(p.final_ln_gain...);
  fn(p.final_ln_bias...);
  fn(p.output_head...);
  fn(p.output_bias...);
}

// Same-shaped params with every entry zero.
ModelParams ZerosLike(const ModelParams& p);

struct RepairModel {
  ModelHyper hyper;
  ModelParams params;

  // Random initialization, fully determined by seed.
  static RepairModel Initialize(const ModelHyper& hyper, uint64_t seed);

  int64_t ParameterCount() const;
};

// Throws ConfigError if the hyperparameters are inconsistent.
void ValidateHyper(const ModelHyper& hyper);

// Per-token inputs of one forward pass.
struct ModelInput {
  std::vector<int> values;
  std::vector<uint8_t> destroyed;
  std::vector<double> conflicts;
};

ModelInput MakeModelInput(const RepairModel& model, const CspInstance& instance,
                          const Assignment& x, const DestroyMask& mask);

// Intermediates kept for the backward pass.
struct BlockCache {
  Matrix input;
  Matrix ln1_hat;
  Eigen::VectorXd ln1_rstd;
  Matrix ln1_out;
  Matrix q, k, v;
  std::vector<Matrix> attention;
  Matrix attention_out;
  Matrix mid;
  Matrix ln2_hat;
  Eigen::VectorXd ln2_rstd;
  Matrix ln2_out;
  Matrix ff_pre;
  Matrix ff_act;
};

struct ForwardCache {
  ModelInput input;
  std::vector<BlockCache> blocks;
  Matrix final_hat;
  Eigen::VectorXd final_rstd;
  Matrix final_out;
};

// Logits for every position. Throws CapacityError when the instance is
// longer than max_len and ConfigError when the domain size differs.
LogitMatrix Forward(const RepairModel& model, const CspInstance& instance,
                    const Assignment& x, const DestroyMask& mask);

// Forward on prepared inputs; fills cache when non-null.
Matrix ForwardTokens(const RepairModel& model, const ModelInput& input,
                     ForwardCache* cache);

// Accumulates dLoss/dParams into grads given dLoss/dLogits.
void Backward(const RepairModel& model, const ForwardCache& cache,
              const Matrix& grad_logits, ModelParams* grads);

struct GumbelSample {
  std::vector<double> soft;
  int hard = 0;
};

// soft = softmax((z + g) / tau) with g ~ Gumbel(0, 1) i.i.d.; hard is the
// argmax of soft. Throws ConfigError if tau <= 0.
GumbelSample GumbelSoftmaxSample(const Eigen::Ref<const RowVector>& z,
                                 double tau, Rng& rng);

// Binary model file: "NLNS", u32 version, u32 hyperparameter block, then
// every tensor in declaration order as little-endian float32.
inline constexpr uint32_t kModelFormatVersion = 1;

void SaveModel(const RepairModel& model, std::ostream& out);
void SaveModel(const RepairModel& model, const std::string& path);
// Throws ParseError on bad magic, version, truncation, trailing bytes or
// inconsistent dimensions.
RepairModel LoadModel(std::istream& in);
RepairModel LoadModel(const std::string& path);

}  // namespace nlns

#endif  // NLNS_MODEL_H_
