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

#include "nlns/csp.h"

#include <cmath>
#include <string>
#include <utility>

#include "nlns/errors.h"

namespace nlns {

std::string_view ProblemKindName(ProblemKind kind) {
  switch (kind) {
    case ProblemKind::kSudoku:
      return "sudoku";
    case ProblemKind::kGraphColoring:
      return "coloring";
    case ProblemKind::kMaxCut:
      return "maxcut";
  }
  return "unknown";
}

std::optional<ProblemKind> ParseProblemKind(std::string_view name) {
  if (name == "sudoku") return ProblemKind::kSudoku;
  if (name == "coloring") return ProblemKind::kGraphColoring;
  if (name == "maxcut") return ProblemKind::kMaxCut;
  return std::nullopt;
}

CspInstance::CspInstance(ProblemKind kind, int num_variables,
                         std::vector<int> domain_values,
                         std::vector<Constraint> constraints,
                         std::vector<int> given_values,
                         std::optional<Assignment> ground_truth,
                         std::string name)
    : kind_(kind),
      num_variables_(num_variables),
      domain_values_(std::move(domain_values)),
      constraints_(std::move(constraints)),
      given_values_(std::move(given_values)),
      ground_truth_(std::move(ground_truth)),
      name_(std::move(name)) {
  if (num_variables_ < 0) throw StructureError("negative variable count");
  if (domain_values_.empty()) throw StructureError("empty domain");
  if (kind_ == ProblemKind::kMaxCut && domain_values_.size() != 2) {
    throw StructureError("maxcut requires a domain of size 2");
  }
  if (given_values_.empty()) given_values_.assign(num_variables_, kFree);
  if (static_cast<int>(given_values_.size()) != num_variables_) {
    throw StructureError("given vector length does not match variable count");
  }
  for (int i = 0; i < num_variables_; ++i) {
    const int g = given_values_[i];
    if (g == kFree) {
      ++num_free_;
    } else if (g < 0 || g >= domain_size()) {
      throw StructureError("given value of variable " + std::to_string(i) +
                           " is not a valid domain index");
    }
  }
  const ConstraintKind allowed = kind_ == ProblemKind::kSudoku
                                     ? ConstraintKind::kAllDifferent
                                     : ConstraintKind::kNotEqual;
  incidence_.resize(num_variables_);
  for (int k = 0; k < num_constraints(); ++k) {
    const Constraint& c = constraints_[k];
    const std::string where = "constraint " + std::to_string(k);
    if (c.kind != allowed) {
      throw StructureError(where + ": kind not allowed for " +
                           std::string(ProblemKindName(kind_)));
    }
    if (c.kind == ConstraintKind::kNotEqual && c.scope.size() != 2) {
      throw StructureError(where + ": not-equal needs exactly 2 variables");
    }
    if (c.kind == ConstraintKind::kAllDifferent && c.scope.size() < 2) {
      throw StructureError(where + ": all-different needs at least 2 variables");
    }
    if (!(c.weight > 0.0) || !std::isfinite(c.weight)) {
      throw StructureError(where + ": weight must be positive and finite");
    }
    for (int v : c.scope) {
      if (v < 0 || v >= num_variables_) {
        throw StructureError(where + ": scope index " + std::to_string(v) +
                             " out of range");
      }
      incidence_[v].push_back(k);
    }
  }
  if (ground_truth_) ValidateAssignment(*ground_truth_);
}

void CspInstance::ValidateAssignment(const Assignment& x) const {
  if (static_cast<int>(x.values.size()) != num_variables_) {
    throw StructureError("assignment length " +
                         std::to_string(x.values.size()) + " != " +
                         std::to_string(num_variables_));
  }
  for (int i = 0; i < num_variables_; ++i) {
    const int v = x.values[i];
    if (v < 0 || v >= domain_size()) {
      throw StructureError("variable " + std::to_string(i) +
                           " has out-of-domain value " + std::to_string(v));
    }
    if (is_fixed(i) && v != given_values_[i]) {
      throw StructureError("variable " + std::to_string(i) +
                           " disagrees with its given value");
    }
  }
}

bool IsViolated(const Constraint& c, const Assignment& x) {
  if (c.kind == ConstraintKind::kNotEqual) {
    return x.values[c.scope[0]] == x.values[c.scope[1]];
  }
  for (size_t a = 0; a < c.scope.size(); ++a) {
    for (size_t b = a + 1; b < c.scope.size(); ++b) {
      if (x.values[c.scope[a]] == x.values[c.scope[b]]) return true;
    }
  }
  return false;
}

HardEvaluation EvalHard(const CspInstance& instance, const Assignment& x) {
  instance.ValidateAssignment(x);
  HardEvaluation eval;
  const auto& constraints = instance.constraints();
  for (int k = 0; k < static_cast<int>(constraints.size()); ++k) {
    if (IsViolated(constraints[k], x)) eval.violated_ids.push_back(k);
  }
  eval.violated_count = static_cast<int>(eval.violated_ids.size());
  return eval;
}

int Cost(const CspInstance& instance, const Assignment& x) {
  return EvalHard(instance, x).violated_count;
}

int CutSize(const CspInstance& instance, const Assignment& x) {
  return instance.num_constraints() - Cost(instance, x);
}

namespace {

void CheckProbabilityRow(const Matrix& q, int row) {
  if (row >= q.rows()) {
    throw DomainError("soft assignment has no row " + std::to_string(row));
  }
  double sum = 0.0;
  for (Eigen::Index v = 0; v < q.cols(); ++v) {
    const double p = q(row, v);
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw DomainError("row " + std::to_string(row) +
                        " has a negative or non-finite entry");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw DomainError("row " + std::to_string(row) + " sums to " +
                      std::to_string(sum));
  }
}

}  // namespace

namespace internal {

double RawPenalty(const Constraint& c, const Matrix& q) {
  const auto& s = c.scope;
  if (c.kind == ConstraintKind::kNotEqual) {
    return q.row(s[0]).dot(q.row(s[1]));
  }
  double p = 0.0;
  for (size_t a = 0; a < s.size(); ++a) {
    for (size_t b = a + 1; b < s.size(); ++b) {
      p += q.row(s[a]).dot(q.row(s[b]));
    }
  }
  return p;
}

double RawLoss(const CspInstance& instance, const Matrix& q) {
  double loss = 0.0;
  for (const Constraint& c : instance.constraints()) {
    const double p = RawPenalty(c, q);
    loss += c.weight * p * p;
  }
  return loss;
}

}  // namespace internal

double ConstraintPenalty(const Constraint& c, const SoftAssignment& q) {
  for (int v : c.scope) CheckProbabilityRow(q.q, v);
  return internal::RawPenalty(c, q.q);
}

PenaltyReport TotalLoss(const CspInstance& instance, const SoftAssignment& q) {
  if (q.q.rows() != instance.num_variables() ||
      q.q.cols() != instance.domain_size()) {
    throw DomainError("soft assignment shape does not match the instance");
  }
  for (int i = 0; i < instance.num_variables(); ++i) CheckProbabilityRow(q.q, i);
  PenaltyReport report;
  report.per_constraint.reserve(instance.num_constraints());
  for (const Constraint& c : instance.constraints()) {
    const double p = internal::RawPenalty(c, q.q);
    report.per_constraint.push_back(p);
    report.total_loss += c.weight * p * p;
    if (p > 0.0) ++report.violated_count;
  }
  return report;
}

SoftAssignment OneHot(const CspInstance& instance, const Assignment& x) {
  instance.ValidateAssignment(x);
  SoftAssignment q{Matrix::Zero(instance.num_variables(), instance.domain_size())};
  for (int i = 0; i < instance.num_variables(); ++i) q.q(i, x.values[i]) = 1.0;
  return q;
}

Assignment ArgmaxAssignment(const Matrix& rows) {
  Assignment x;
  x.values.resize(rows.rows());
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    int best = 0;
    for (Eigen::Index v = 1; v < rows.cols(); ++v) {
      if (rows(i, v) > rows(i, best)) best = static_cast<int>(v);
    }
    x.values[i] = best;
  }
  return x;
}

}  // namespace nlns
