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

#ifndef NLNS_TENSOR_H_
#define NLNS_TENSOR_H_

#include <Eigen/Dense>

namespace nlns {

using Matrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowVector = Eigen::Matrix<double, 1, Eigen::Dynamic>;

// n x d per-variable probability rows q_i. Rows are nonnegative and sum to 1.
struct SoftAssignment {
  Matrix q;
};

// n x d pre-softmax scores z_i.
struct LogitMatrix {
  Matrix z;
};

// n x d gradient rows g_i.
struct GradMatrix {
  Matrix g;
};

// Numerically stable softmax of one row.
inline RowVector SoftmaxRow(const Eigen::Ref<const RowVector>& z) {
  RowVector e = (z.array() - z.maxCoeff()).exp();
  return e / e.sum();
}

inline Matrix SoftmaxRows(const Matrix& z) {
  Matrix q(z.rows(), z.cols());
  for (Eigen::Index i = 0; i < z.rows(); ++i) q.row(i) = SoftmaxRow(z.row(i));
  return q;
}

}  // namespace nlns

#endif  // NLNS_TENSOR_H_
