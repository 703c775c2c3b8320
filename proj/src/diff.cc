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

#include "nlns/diff.h"

#include <algorithm>
#include <cmath>

#include "nlns/errors.h"

namespace nlns {
namespace {

Matrix RawGradWrtQ(const CspInstance& instance, const Matrix& q) {
  Matrix g = Matrix::Zero(q.rows(), q.cols());
  RowVector scope_sum(q.cols());
  for (const Constraint& c : instance.constraints()) {
    const double p = internal::RawPenalty(c, q);
    if (p == 0.0) continue;
    const double dl_dp = 2.0 * c.weight * p;
    const auto& s = c.scope;
    if (c.kind == ConstraintKind::kNotEqual) {
      g.row(s[0]) += dl_dp * q.row(s[1]);
      g.row(s[1]) += dl_dp * q.row(s[0]);
      continue;
    }
    scope_sum.setZero();
    for (int v : s) scope_sum += q.row(v);
    for (int v : s) g.row(v) += dl_dp * (scope_sum - q.row(v));
  }
  return g;
}

void CheckShape(const CspInstance& instance, const Matrix& m) {
  if (m.rows() != instance.num_variables() ||
      m.cols() != instance.domain_size()) {
    throw DomainError("matrix shape does not match the instance");
  }
}

}  // namespace

GradMatrix LossGradWrtQ(const CspInstance& instance, const SoftAssignment& q) {
  CheckShape(instance, q.q);
  return {RawGradWrtQ(instance, q.q)};
}

std::vector<double> VariableViolationScores(const CspInstance& instance,
                                            const Assignment& x) {
  const GradMatrix g = LossGradWrtQ(instance, OneHot(instance, x));
  std::vector<double> v(instance.num_variables());
  for (int i = 0; i < instance.num_variables(); ++i) {
    v[i] = g.g.row(i).cwiseAbs().sum();
  }
  return v;
}

GradMatrix SoftmaxBackward(const Matrix& q, const Matrix& grad_q) {
  Matrix g(q.rows(), q.cols());
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    const double inner = q.row(i).dot(grad_q.row(i));
    g.row(i) = q.row(i).array() * (grad_q.row(i).array() - inner);
  }
  return {g};
}

GradMatrix LossGradWrtLogits(const CspInstance& instance, const LogitMatrix& z) {
  CheckShape(instance, z.z);
  if (!z.z.allFinite()) throw DomainError("logits must be finite");
  const Matrix q = SoftmaxRows(z.z);
  return SoftmaxBackward(q, RawGradWrtQ(instance, q));
}

GradMatrix NumericGradWrtQ(const CspInstance& instance, const Matrix& q,
                           double h) {
  Matrix g(q.rows(), q.cols());
  Matrix probe = q;
  for (Eigen::Index i = 0; i < q.rows(); ++i) {
    for (Eigen::Index v = 0; v < q.cols(); ++v) {
      probe(i, v) = q(i, v) + h;
      const double up = internal::RawLoss(instance, probe);
      probe(i, v) = q(i, v) - h;
      const double down = internal::RawLoss(instance, probe);
      probe(i, v) = q(i, v);
      g(i, v) = (up - down) / (2.0 * h);
    }
  }
  return {g};
}

GradMatrix NumericGradWrtLogits(const CspInstance& instance, const Matrix& z,
                                double h) {
  Matrix g(z.rows(), z.cols());
  Matrix probe = z;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    for (Eigen::Index v = 0; v < z.cols(); ++v) {
      probe(i, v) = z(i, v) + h;
      const double up = internal::RawLoss(instance, SoftmaxRows(probe));
      probe(i, v) = z(i, v) - h;
      const double down = internal::RawLoss(instance, SoftmaxRows(probe));
      probe(i, v) = z(i, v);
      g(i, v) = (up - down) / (2.0 * h);
    }
  }
  return {g};
}

double MaxRelativeError(const Matrix& analytic, const Matrix& numeric) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < analytic.rows(); ++i) {
    for (Eigen::Index j = 0; j < analytic.cols(); ++j) {
      const double a = analytic(i, j);
      const double b = numeric(i, j);
      const double denom = std::max({std::abs(a), std::abs(b), 1e-8});
      worst = std::max(worst, std::abs(a - b) / denom);
    }
  }
  return worst;
}

double FiniteDiffCheck(const CspInstance& instance, const SoftAssignment& q,
                       double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  return MaxRelativeError(LossGradWrtQ(instance, q).g,
                          NumericGradWrtQ(instance, q.q, h).g);
}

double FiniteDiffCheck(const CspInstance& instance, const LogitMatrix& z,
                       double h) {
  if (!(h > 0.0)) throw DomainError("finite-difference step must be positive");
  return MaxRelativeError(LossGradWrtLogits(instance, z).g,
                          NumericGradWrtLogits(instance, z.z, h).g);
}

}  // namespace nlns
