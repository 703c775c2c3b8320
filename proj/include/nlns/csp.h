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

// Finite-domain CSP instances with the three constraint families used by the
// Sudoku, graph coloring and MaxCut benchmarks, plus hard (discrete) and soft
// (penalty) evaluation.

#ifndef NLNS_CSP_H_
#define NLNS_CSP_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlns/tensor.h"

namespace nlns {

enum class ProblemKind { kSudoku, kGraphColoring, kMaxCut };

std::string_view ProblemKindName(ProblemKind kind);
std::optional<ProblemKind> ParseProblemKind(std::string_view name);

enum class ConstraintKind { kAllDifferent, kNotEqual };

struct Constraint {
  ConstraintKind kind = ConstraintKind::kNotEqual;
  std::vector<int> scope;
  double weight = 1.0;
};

// A complete assignment of domain indices, one per variable.
struct Assignment {
  std::vector<int> values;

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

// Marker for a variable without a given value.
inline constexpr int kFree = -1;

// Immutable after construction. Domains are homogeneous: every variable
// ranges over the same ordered value list, addressed by index.
class CspInstance {
 public:
  // Throws StructureError when any invariant is violated.
  CspInstance(ProblemKind kind, int num_variables, std::vector<int> domain_values,
              std::vector<Constraint> constraints,
              std::vector<int> given_values = {},
              std::optional<Assignment> ground_truth = std::nullopt,
              std::string name = {});

  ProblemKind kind() const { return kind_; }
  int num_variables() const { return num_variables_; }
  int domain_size() const { return static_cast<int>(domain_values_.size()); }
  const std::vector<int>& domain_values() const { return domain_values_; }
  const std::vector<Constraint>& constraints() const { return constraints_; }
  int num_constraints() const { return static_cast<int>(constraints_.size()); }

  bool is_fixed(int i) const { return given_values_[i] != kFree; }
  // Domain index of a fixed variable, kFree otherwise.
  int given_value(int i) const { return given_values_[i]; }
  const std::vector<int>& given_values() const { return given_values_; }
  int num_free() const { return num_free_; }

  const std::optional<Assignment>& ground_truth() const { return ground_truth_; }
  const std::string& name() const { return name_; }

  // Indices of the constraints whose scope contains variable i.
  const std::vector<int>& constraints_of(int i) const { return incidence_[i]; }

  // Throws StructureError if x has the wrong length, an out-of-domain value,
  // or disagrees with a given.
  void ValidateAssignment(const Assignment& x) const;

 private:
  ProblemKind kind_;
  int num_variables_;
  std::vector<int> domain_values_;
  std::vector<Constraint> constraints_;
  std::vector<int> given_values_;
  std::optional<Assignment> ground_truth_;
  std::string name_;
  std::vector<std::vector<int>> incidence_;
  int num_free_ = 0;
};

struct HardEvaluation {
  int violated_count = 0;
  std::vector<int> violated_ids;
};

struct PenaltyReport {
  std::vector<double> per_constraint;
  double total_loss = 0.0;
  // Constraints with a strictly positive penalty. On a one-hot assignment
  // this is exactly the number of hard-violated constraints.
  int violated_count = 0;
};

// True iff the discrete assignment violates the constraint's relation.
bool IsViolated(const Constraint& c, const Assignment& x);

HardEvaluation EvalHard(const CspInstance& instance, const Assignment& x);

// Number of violated constraints.
int Cost(const CspInstance& instance, const Assignment& x);

// Number of cut edges for a MaxCut instance: |edges| - Cost.
int CutSize(const CspInstance& instance, const Assignment& x);

// Soft co-occurrence penalty. NotEqual(i,j): <q_i, q_j>. AllDifferent: sum of
// <q_a, q_b> over unordered scope pairs. Throws DomainError if a scope row is
// not a probability vector.
double ConstraintPenalty(const Constraint& c, const SoftAssignment& q);

// L = sum_k weight_k * p_k^2.
PenaltyReport TotalLoss(const CspInstance& instance, const SoftAssignment& q);

SoftAssignment OneHot(const CspInstance& instance, const Assignment& x);

// Row-wise argmax, ties to the smallest index.
Assignment ArgmaxAssignment(const Matrix& rows);

namespace internal {

// Penalty and loss on arbitrary real matrices, no probability checks. Used
// by gradient code and finite-difference oracles.
double RawPenalty(const Constraint& c, const Matrix& q);
double RawLoss(const CspInstance& instance, const Matrix& q);

}  // namespace internal

}  // namespace nlns

#endif  // NLNS_CSP_H_
