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

// Analytic gradients of the penalty loss L = sum_k w_k p_k^2.

#ifndef NLNS_DIFF_H_
#define NLNS_DIFF_H_

#include <vector>

#include "nlns/csp.h"
#include "nlns/tensor.h"

namespace nlns {

// dL/dq. For NotEqual(i,j), dp/dq_i = q_j. For AllDifferent, dp/dq_a is the
// sum of the other scope rows. Both chain through dL/dp = 2 w p.
GradMatrix LossGradWrtQ(const CspInstance& instance, const SoftAssignment& q);

// v_i = || dL(OneHot(x)) / dOneHot(x_i) ||_1.
std::vector<double> VariableViolationScores(const CspInstance& instance,
                                            const Assignment& x);

// dL(softmax(z))/dz, row-wise through the softmax Jacobian.
GradMatrix LossGradWrtLogits(const CspInstance& instance, const LogitMatrix& z);

// Chains a q-gradient through softmax: g_z = q * (g_q - <q, g_q>).
GradMatrix SoftmaxBackward(const Matrix& q, const Matrix& grad_q);

// Central-difference gradients of L, perturbing each entry by +-h.
GradMatrix NumericGradWrtQ(const CspInstance& instance, const Matrix& q,
                           double h);
GradMatrix NumericGradWrtLogits(const CspInstance& instance, const Matrix& z,
                                double h);

// max_ij |a - b| / max(|a|, |b|, 1e-8).
double MaxRelativeError(const Matrix& analytic, const Matrix& numeric);

// Analytic vs. central-difference gradient at a soft assignment or logits.
double FiniteDiffCheck(const CspInstance& instance, const SoftAssignment& q,
                       double h);
double FiniteDiffCheck(const CspInstance& instance, const LogitMatrix& z,
                       double h);

}  // namespace nlns

#endif  // NLNS_DIFF_H_
