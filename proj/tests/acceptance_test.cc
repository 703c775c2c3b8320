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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Pass --only=<n> to run a single criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "nlns/destroy.h"
#include "nlns/diff.h"
#include "nlns/lns.h"
#include "nlns/repair.h"
#include "test_util.h"

namespace nlns {
namespace {

using testing::OracleViolations;
using testing::RandomAssignment;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string Format(const char* fmt, ...) __attribute__((format(printf, 1, 2)));
std::string Format(const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof(buf), fmt, args);
  va_end(args);
  return buf;
}

// Graph with a hidden k-coloring: only edges between different hidden colors.
CspInstance PlantedGraph(int n, double p, int k, ProblemKind kind, Rng& rng,
                         Assignment* planted) {
  planted->values.resize(n);
  for (int& c : planted->values) c = UniformInt(rng, k);
  Graph g{n, {}};
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (planted->values[u] != planted->values[v] && Bernoulli(rng, p)) {
        g.edges.push_back({u, v});
      }
    }
  }
  return BuildInstance(g, kind, k);
}

Assignment Mutate(const CspInstance& inst, Assignment x, int flips, Rng& rng) {
  for (int f = 0; f < flips; ++f) {
    const int i = UniformInt(rng, inst.num_variables());
    if (!inst.is_fixed(i)) x.values[i] = UniformInt(rng, inst.domain_size());
  }
  return x;
}

// Ranking by descending score, ascending index on ties.
std::vector<int> Ranking(const std::vector<double>& scores) {
  std::vector<int> idx(scores.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  return idx;
}

std::vector<int> Selected(const DestroyMask& m) {
  std::vector<int> out;
  for (int i = 0; i < m.size(); ++i) {
    if (m[i]) out.push_back(i);
  }
  return out;
}

ModelHyper SmallHyper(ProblemKind kind, int d, int width, int max_len) {
  ModelHyper h = DefaultHyper(kind, d);
  h.width = width;
  h.heads = 2;
  h.ffn_width = 2 * width;
  h.max_len = max_len;
  return h;
}

// 1. total_loss(one_hot(x)) = 0 <=> eval_hard(x) = 0 on 1000 assignments per
// kind; half random, half perturbations of a known solution.
Outcome FeasibilityPenalty() {
  Rng rng(101);
  Outcome out;
  int feasible_seen[3] = {0, 0, 0};
  for (int kind = 0; kind < 3; ++kind) {
    for (int t = 0; t < 1000; ++t) {
      CspInstance inst = testing::Triangle(3);
      Assignment solution;
      if (kind == 0) {
        inst = GenSudoku(t % 2 ? 3 : 2, t % 2 ? 30 : 6, rng);
        solution = *inst.ground_truth();
      } else {
        inst = PlantedGraph(20, 0.3, kind == 1 ? 3 : 2,
                            kind == 1 ? ProblemKind::kGraphColoring : ProblemKind::kMaxCut,
                            rng, &solution);
      }
      const Assignment x = t % 2 == 0 ? RandomAssignment(inst, rng)
                                      : Mutate(inst, solution, UniformInt(rng, 3), rng);
      const bool zero_loss = TotalLoss(inst, OneHot(inst, x)).total_loss == 0.0;
      const bool hard_ok = EvalHard(inst, x).violated_count == 0;
      const bool oracle_ok = OracleViolations(inst, x).empty();
      if (zero_loss != hard_ok || hard_ok != oracle_ok) out.pass = false;
      feasible_seen[kind] += hard_ok;
    }
  }
  out.detail = Format("3x1000 assignments, feasible counts sudoku=%d coloring=%d maxcut=%d",
                      feasible_seen[0], feasible_seen[1], feasible_seen[2]);
  for (int c : feasible_seen) out.pass = out.pass && c > 0;
  return out;
}

// 2. Analytic penalty gradients vs central differences (h = 1e-5) on >= 20
// (instance, point) pairs, and backpropagated parameter gradients on width
// <= 8 models.
Outcome GradientCorrectness() {
  Rng rng(202);
  double worst_q = 0.0, worst_z = 0.0, worst_param = 0.0;
  int pairs = 0;
  for (int t = 0; t < 24; ++t) {
    CspInstance inst = testing::EmptySudoku(2);
    if (t % 3 == 1) inst = testing::RandomColoring(12, 0.35, 3, rng);
    if (t % 3 == 2) {
      inst = BuildInstance(GenRandomGraph(12, 0.3, rng), ProblemKind::kMaxCut, 2);
    }
    const int n = inst.num_variables(), d = inst.domain_size();
    const Matrix q = testing::RandomProbabilities(n, d, rng);
    const Matrix z = testing::RandomLogits(n, d, rng, 1.5);
    worst_q = std::max(worst_q, testing::RelErr(LossGradWrtQ(inst, {q}).g,
                                                testing::OracleGradQ(inst, q, 1e-5)));
    worst_z = std::max(worst_z, testing::RelErr(LossGradWrtLogits(inst, {z}).g,
                                                testing::OracleGradZ(inst, z, 1e-5)));
    ++pairs;
  }
  TrainConfig cfg;
  cfg.destroy_rate = 0.5;
  for (int width : {4, 8}) {
    for (ProblemKind kind : {ProblemKind::kSudoku, ProblemKind::kGraphColoring}) {
      const CspInstance inst = kind == ProblemKind::kSudoku
                                   ? GenSudoku(2, 6, rng)
                                   : testing::RandomColoring(10, 0.4, 3, rng);
      ModelHyper h = SmallHyper(kind, inst.domain_size(), width, 32);
      const RepairModel model = RepairModel::Initialize(h, 300 + width);
      const TrainSample s = DrawTrainSample(inst, cfg, rng);
      worst_param =
          std::max(worst_param, testing::ParamGradError(model, inst, s, 1.0, 1e-5));
    }
  }
  Outcome out;
  out.pass = worst_q <= 1e-4 && worst_z <= 1e-4 && worst_param <= 1e-3;
  out.detail = Format("%d pairs: max rel err dL/dq %.2e, dL/dz %.2e (<= 1e-4); "
                      "params %.2e (<= 1e-3)",
                      pairs, worst_q, worst_z, worst_param);
  return out;
}

// 3. Stochastic destroy statistics over 10k trials and a 10k-context fuzz of
// all nine operators for fixed-variable safety.
Outcome DestroyStatistics() {
  Rng rng(303);
  Outcome out;
  const int trials = 100000;  // 10x the minimum; sigma shrinks accordingly
  const double rate = 0.3;
  const CspInstance puzzle = GenSudoku(3, 30, rng);
  const int n_free = puzzle.num_free();
  const Assignment x = RandomAssignment(puzzle, rng);
  const LogitMatrix z{testing::RandomLogits(81, 9, rng, 1.5)};
  std::vector<uint8_t> free(81);
  for (int i = 0; i < 81; ++i) free[i] = !puzzle.is_fixed(i);

  // Worst and gradient scores must leave more than rate * n_free positive
  // free entries so the normalizer does not saturate and its mean is rate.
  auto positive_free = [&](const std::vector<double>& s) {
    int count = 0;
    for (int i = 0; i < 81; ++i) count += free[i] && s[i] > 0.0;
    return count;
  };
  if (positive_free(VariableViolationScores(puzzle, x)) <= rate * n_free ||
      positive_free(GradientScores(puzzle, z)) <= rate * n_free) {
    return {false, "precondition: score vectors saturate the normalizer"};
  }

  // Related: P(i in S) = 1 - (1 - rho')^deg_i over free i, conditioned on a
  // nonempty union (empty draws are redrawn).
  const double rho_c = RelatedConstraintRate(puzzle, rate);
  double related_expect = 0.0;
  for (int i = 0; i < 81; ++i) {
    if (free[i]) {
      related_expect += 1.0 - std::pow(1.0 - rho_c, puzzle.constraints_of(i).size());
    }
  }
  int live_constraints = 0;
  for (const Constraint& c : puzzle.constraints()) {
    live_constraints += std::any_of(c.scope.begin(), c.scope.end(),
                                    [&](int v) { return free[v] != 0; });
  }
  related_expect /= 1.0 - std::pow(1.0 - rho_c, live_constraints);

  const std::vector<DestroyKind> stochastic{
      DestroyKind::kRandom, DestroyKind::kWorstStochastic,
      DestroyKind::kRelatedStochastic, DestroyKind::kGradientStochastic,
      DestroyKind::kConfidenceStochastic};
  std::string detail;
  std::vector<int> worst_freq(81, 0);
  for (DestroyKind kind : stochastic) {
    double sum = 0.0, sum_sq = 0.0;
    for (int t = 0; t < trials; ++t) {
      const DestroyMask m = Destroy(kind, {puzzle, x, rate, &z, nullptr, rng});
      for (int i = 0; i < 81; ++i) {
        if (m[i] && !free[i]) out.pass = false;
        if (kind == DestroyKind::kWorstStochastic) worst_freq[i] += m[i];
      }
      const double frac = static_cast<double>(m.Count()) / n_free;
      sum += frac;
      sum_sq += frac * frac;
    }
    const double mean = sum / trials;
    double target = rate, sigma = std::sqrt(rate * (1 - rate) / (n_free * trials));
    if (kind == DestroyKind::kRelatedStochastic) {
      target = related_expect / n_free;
      sigma = std::sqrt((sum_sq / trials - mean * mean) / trials);
    }
    const double z_score = std::abs(mean - target) / sigma;
    if (z_score > 3.0) out.pass = false;
    detail += Format("%s %.4f vs %.4f (%.1f sigma); ", std::string(DestroyName(kind)).c_str(),
                     mean, target, z_score);
  }

  // Bias monotonicity for worst-stochastic.
  const std::vector<double> v = VariableViolationScores(puzzle, x);
  int inversions = 0;
  for (int a = 0; a < 81; ++a) {
    for (int b = 0; b < 81; ++b) {
      if (!free[a] || !free[b] || !(v[a] > v[b])) continue;
      const double slack = 3.0 * std::sqrt(static_cast<double>(worst_freq[a] + worst_freq[b]));
      if (worst_freq[a] < worst_freq[b] - slack) ++inversions;
    }
  }
  if (inversions > 0) out.pass = false;

  // Fuzz: no operator ever selects a fixed variable.
  int fuzz_violations = 0;
  for (int t = 0; t < 10000; ++t) {
    const bool big = t % 4 == 0;
    const CspInstance p =
        GenSudoku(big ? 3 : 2, UniformInt(rng, big ? 60 : 15) + 1, rng);
    const Assignment px = RandomAssignment(p, rng);
    const LogitMatrix pz{testing::RandomLogits(p.num_variables(), p.domain_size(), rng, 2.0)};
    const DestroyKind kind = kAllDestroyKinds[t % 9];
    const double r = 0.02 + 0.98 * UniformDouble(rng);
    const DestroyMask m =
        Destroy(kind, {p, px, r, Bernoulli(rng, 0.8) ? &pz : nullptr, nullptr, rng});
    for (int i = 0; i < p.num_variables(); ++i) fuzz_violations += m[i] && p.is_fixed(i);
    if (m.Count() == 0) ++fuzz_violations;
  }
  if (fuzz_violations > 0) out.pass = false;
  out.detail = detail + Format("bias inversions %d; fuzz 10000 contexts, violations %d",
                               inversions, fuzz_violations);
  return out;
}

// 4. Greedy destroy/repair determinism and the repair frame axiom.
Outcome DeterminismAndFrame() {
  Rng rng(404);
  int nondeterministic = 0, frame_breaks = 0;
  const DestroyKind greedy[] = {DestroyKind::kWorstGreedy, DestroyKind::kRelatedGreedy,
                                DestroyKind::kGradientGreedy,
                                DestroyKind::kConfidenceGreedy};
  for (int t = 0; t < 10000; ++t) {
    const CspInstance p = GenSudoku(2, UniformInt(rng, 14), rng);
    const Assignment x = RandomAssignment(p, rng);
    const LogitMatrix z{testing::RandomLogits(16, 4, rng, 2.0)};
    const double r = 0.05 + 0.95 * UniformDouble(rng);
    const DestroyKind kind = greedy[t % 4];
    Rng a(t), b(t + 1000003);
    const DestroyMask m1 = Destroy(kind, {p, x, r, &z, nullptr, a});
    const DestroyMask m2 = Destroy(kind, {p, x, r, &z, nullptr, b});
    nondeterministic += !(m1 == m2);

    DestroyMask mask = DestroyMask::None(16);
    for (auto& s : mask.selected) s = Bernoulli(rng, UniformDouble(rng));
    const RepairProposal g1 = RepairGreedy(p, z, mask, x);
    const RepairProposal g2 = RepairGreedy(p, z, mask, x);
    nondeterministic += !(g1.next == g2.next);
    const RepairProposal s = RepairSample(p, z, mask, x, 0.1 + UniformDouble(rng), rng);
    for (int i = 0; i < 16; ++i) {
      const bool frozen = !mask[i] || p.is_fixed(i);
      if (frozen && (g1.next.values[i] != x.values[i] || s.next.values[i] != x.values[i])) {
        ++frame_breaks;
      }
    }
  }
  return {nondeterministic == 0 && frame_breaks == 0,
          Format("10000 cases: nondeterministic %d, frame violations %d",
                 nondeterministic, frame_breaks)};
}

// 5. Worst-removal scores reproduce the ranking of a numeric perturbation
// oracle; related-removal sets equal hand-enumerated scope unions.
Outcome OracleEquivalence() {
  Rng rng(505);
  int ranking_mismatches = 0;
  for (int t = 0; t < 10; ++t) {
    const CspInstance inst =
        t < 5 ? testing::EmptySudoku(2) : testing::RandomColoring(12, 0.35, 3, rng);
    const Assignment x = RandomAssignment(inst, rng);
    const std::vector<double> oracle = testing::OracleViolationScores(inst, x);
    std::vector<double> rounded(oracle.size());
    for (size_t i = 0; i < oracle.size(); ++i) rounded[i] = std::round(oracle[i] * 1e6) / 1e6;
    if (Ranking(VariableViolationScores(inst, x)) != Ranking(rounded)) ++ranking_mismatches;
  }

  int related_mismatches = 0;
  // C0={0,1,2} p=3, C1={3,4,5,6} p=2, C2={2,7} p=1, C3={8,9} p=0; var 1 given.
  std::vector<int> givens(10, kFree);
  givens[1] = 0;
  const CspInstance crafted(
      ProblemKind::kSudoku, 10, {1, 2, 3, 4},
      {{ConstraintKind::kAllDifferent, {0, 1, 2}, 1.0},
       {ConstraintKind::kAllDifferent, {3, 4, 5, 6}, 1.0},
       {ConstraintKind::kAllDifferent, {2, 7}, 1.0},
       {ConstraintKind::kAllDifferent, {8, 9}, 1.0}},
      givens);
  const Assignment cx{{0, 0, 0, 1, 1, 2, 2, 0, 1, 2}};
  const std::pair<double, std::vector<int>> cases[] = {
      {0.2, {0, 2}},
      {0.5, {0, 2, 3, 4, 5, 6}},
      {0.75, {0, 2, 3, 4, 5, 6, 7}},
      {0.9, {0, 2, 3, 4, 5, 6, 7, 8, 9}},
  };
  for (const auto& [r, want] : cases) {
    related_mismatches += Selected(RelatedGreedy({crafted, cx, r, nullptr, nullptr, rng})) != want;
  }
  // 4x4 grid with one duplicated pair in row 2 (cells 4 and 5): that row and
  // column 2 and box 1 are the violated units.
  Assignment grid;
  for (char c : std::string("1234341221434321")) grid.values.push_back(c - '1');
  grid.values[5] = grid.values[4];
  const CspInstance empty = testing::EmptySudoku(2);
  // Penalties: row 1 (k=1) and box 0 (k=8) contain cells 4 and 5.
  related_mismatches +=
      Selected(RelatedGreedy({empty, grid, 0.25, nullptr, nullptr, rng})) !=
      std::vector<int>{4, 5, 6, 7};
  // Single constraint at rho' = 1: related-stochastic always yields its scope.
  const CspInstance edge = testing::SingleEdge(3);
  for (int t = 0; t < 100; ++t) {
    related_mismatches +=
        Selected(RelatedStochastic({edge, {{1, 1}}, 1.0, nullptr, nullptr, rng})) !=
        std::vector<int>{0, 1};
  }
  return {ranking_mismatches == 0 && related_mismatches == 0,
          Format("worst ranking mismatches %d/10 instances; related set mismatches %d",
                 ranking_mismatches, related_mismatches)};
}

// 6. best_cost non-increasing on 500 seeded runs; identical seed gives an
// identical RunRecord.
Outcome MonotonicityAndReproducibility() {
  Rng rng(606);
  const RepairModel sudoku_model =
      RepairModel::Initialize(SmallHyper(ProblemKind::kSudoku, 4, 16, 32), 61);
  const RepairModel color_model =
      RepairModel::Initialize(SmallHyper(ProblemKind::kGraphColoring, 3, 16, 32), 62);
  int monotone_breaks = 0, replay_breaks = 0;
  for (int run = 0; run < 500; ++run) {
    const bool graph = run % 3 == 2;
    const CspInstance inst = graph ? testing::RandomColoring(14, 0.3, 3, rng)
                                   : GenSudoku(2, 3 + UniformInt(rng, 6), rng);
    LnsConfig cfg;
    cfg.destroy_id = std::string(DestroyName(kAllDestroyKinds[run % 9]));
    cfg.repair_id = (run / 9) % 2 ? "greedy" : "sample";
    cfg.max_iterations = 40;
    cfg.seed = 7000 + run;
    const RepairModel& model = graph ? color_model : sudoku_model;
    const RunRecord r = LnsRun(inst, model, cfg);
    int prefix_min = r.cost[0];
    for (size_t t = 0; t < r.cost.size(); ++t) {
      prefix_min = std::min(prefix_min, r.cost[t]);
      if (r.best_cost[t] != prefix_min) ++monotone_breaks;
      if (t > 0 && r.best_cost[t] > r.best_cost[t - 1]) ++monotone_breaks;
    }
    if (!r.SameTrajectory(LnsRun(inst, model, cfg))) ++replay_breaks;
  }
  return {monotone_breaks == 0 && replay_breaks == 0,
          Format("500 runs, all 18 pairings: monotonicity breaks %d, replay mismatches %d",
                 monotone_breaks, replay_breaks)};
}

// Shared 4x4 model for criteria 7 and 8.
struct TrainedSudoku {
  RepairModel model;
  std::vector<CspInstance> held_out;
  double train_seconds = 0.0;
};

std::string GridKey(const CspInstance& p) { return SerializeSudoku(p).substr(0, 16); }

TrainedSudoku& SudokuModel() {
  static TrainedSudoku trained = [] {
    TrainedSudoku out;
    Rng test_rng(9901);
    std::set<std::string> held_keys;
    for (int i = 0; i < 100; ++i) {
      out.held_out.push_back(GenSudoku(2, 8, test_rng, "held" + std::to_string(i)));
      held_keys.insert(GridKey(out.held_out.back()));
    }
    Rng train_rng(1);
    std::vector<CspInstance> data;
    while (data.size() < 4000) {
      CspInstance p = GenSudoku(2, 8 + UniformInt(train_rng, 4), train_rng);
      if (!held_keys.count(GridKey(p))) data.push_back(std::move(p));
    }
    ModelHyper h = DefaultHyper(ProblemKind::kSudoku, 4);  // 2 blocks, width 64
    h.max_len = 16;
    out.model = RepairModel::Initialize(h, 11);
    TrainConfig cfg;
    cfg.steps = 3000;
    cfg.batch_size = 32;
    cfg.learning_rate = 1e-3;
    cfg.seed = 12;
    const auto start = std::chrono::steady_clock::now();
    Train(out.model, data, cfg);
    out.train_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
  }();
  return trained;
}

double SolvedFraction(const std::vector<CspInstance>& suite,
                      const std::function<RunRecord(const CspInstance&, uint64_t)>& run,
                      int seeds) {
  int solved = 0;
  for (int s = 0; s < seeds; ++s) {
    for (size_t i = 0; i < suite.size(); ++i) {
      solved += run(suite[i], DeriveSeed(500 + s, i)).solved;
    }
  }
  return static_cast<double>(solved) / (suite.size() * seeds);
}

// 7. Trained 2-block width-64 model: >= 90% solved on 100 held-out 4x4
// puzzles (8 givens), random destroy + sample repair, rho 0.3, 200
// iterations, strictly above the untrained baseline.
Outcome Trainability() {
  TrainedSudoku& t = SudokuModel();
  LnsConfig cfg;
  cfg.destroy_id = "random";
  cfg.repair_id = "sample";
  cfg.rate = 0.3;
  cfg.max_iterations = 200;
  const double trained = SolvedFraction(
      t.held_out,
      [&](const CspInstance& inst, uint64_t seed) {
        LnsConfig c = cfg;
        c.seed = seed;
        return LnsRun(inst, t.model, c);
      },
      1);
  const double baseline = SolvedFraction(
      t.held_out,
      [&](const CspInstance& inst, uint64_t seed) {
        LnsConfig c = cfg;
        c.seed = seed;
        return LnsRunUntrainedBaseline(inst, t.model.hyper, c);
      },
      1);
  return {trained >= 0.9 && trained > baseline && t.train_seconds <= 1800.0,
          Format("trained %.0f%% vs untrained %.0f%% solved (>= 90%%, strictly above); "
                 "training %.0f s (<= 1800 s)",
                 100 * trained, 100 * baseline, t.train_seconds)};
}

// 8. Stochastic worst destroy solves at least as many 4x4 puzzles as greedy
// worst destroy, 200 instances x 3 seeds.
Outcome Rq3Direction() {
  TrainedSudoku& t = SudokuModel();
  Rng rng(808);
  std::vector<CspInstance> suite;
  for (int i = 0; i < 200; ++i) suite.push_back(GenSudoku(2, 8, rng));
  auto runner = [&](const char* destroy) {
    return [&t, destroy](const CspInstance& inst, uint64_t seed) {
      LnsConfig c;
      c.destroy_id = destroy;
      c.repair_id = "sample";
      c.rate = 0.3;
      c.max_iterations = 200;
      c.seed = seed;
      return LnsRun(inst, t.model, c);
    };
  };
  const double stochastic = SolvedFraction(suite, runner("worst-stochastic"), 3);
  const double greedy = SolvedFraction(suite, runner("worst-greedy"), 3);
  return {stochastic >= greedy,
          Format("worst-stochastic %.1f%% vs worst-greedy %.1f%% solved (600 runs each)",
                 100 * stochastic, 100 * greedy)};
}

// 9. MaxCut: model trained on G(50, 0.1); on G(100, 0.06) the incumbent cut
// beats the initial random cut on >= 95% of 100 seeded 500-iteration runs.
Outcome MaxCutSmoke() {
  Rng rng(909);
  std::vector<CspInstance> train;
  for (int i = 0; i < 200; ++i) {
    train.push_back(BuildInstance(GenRandomGraph(50, 0.1, rng), ProblemKind::kMaxCut, 2));
  }
  ModelHyper h = DefaultHyper(ProblemKind::kMaxCut, 2);
  h.width = 32;
  h.ffn_width = 128;
  h.max_len = 128;
  RepairModel model = RepairModel::Initialize(h, 91);
  TrainConfig cfg;
  cfg.steps = 300;
  cfg.batch_size = 16;
  cfg.seed = 92;
  Train(model, train, cfg);

  const CspInstance graph =
      BuildInstance(GenRandomGraph(100, 0.06, rng), ProblemKind::kMaxCut, 2, "g100");
  int improved = 0;
  double gain = 0.0;
  for (int s = 0; s < 100; ++s) {
    LnsConfig c;
    c.max_iterations = 500;
    c.seed = DeriveSeed(93, s);
    const RunRecord r = LnsRun(graph, model, c);
    improved += r.best_cost.back() < r.cost.front();
    gain += r.cost.front() - r.best_cost.back();
  }
  return {improved >= 95,
          Format("%d/100 runs improved the cut (>= 95); mean gain %.1f edges of %d",
                 improved, gain / 100, graph.num_constraints())};
}

struct Criterion {
  const char* name;
  double limit_seconds;  // 0 = no runtime limit
  Outcome (*run)();
};

}  // namespace
}  // namespace nlns

int main(int argc, char** argv) {
  using nlns::Criterion;
  const Criterion criteria[] = {
      {"feasibility-penalty equivalence", 10, nlns::FeasibilityPenalty},
      {"gradient correctness", 60, nlns::GradientCorrectness},
      {"destroy-operator statistics", 120, nlns::DestroyStatistics},
      {"operator determinism and frame axioms", 60, nlns::DeterminismAndFrame},
      {"oracle equivalence", 60, nlns::OracleEquivalence},
      {"incumbent monotonicity and reproducibility", 120,
       nlns::MonotonicityAndReproducibility},
      {"end-to-end trainability (4x4 sudoku)", 0, nlns::Trainability},
      {"directional RQ3: stochastic >= greedy worst", 0, nlns::Rq3Direction},
      {"maxcut smoke", 0, nlns::MaxCutSmoke},
  };
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strncmp(argv[i], "--only=", 7) == 0) only = std::atoi(argv[i] + 7);
  }
  int failures = 0;
  for (int i = 0; i < static_cast<int>(std::size(criteria)); ++i) {
    if (only != 0 && only != i + 1) continue;
    const Criterion& c = criteria[i];
    const auto start = std::chrono::steady_clock::now();
    nlns::Outcome o = c.run();
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (c.limit_seconds > 0 && secs > c.limit_seconds) o.pass = false;
    failures += !o.pass;
    std::string timing = nlns::Format("%.1f s", secs);
    if (c.limit_seconds > 0) timing += nlns::Format(", limit %.0f s", c.limit_seconds);
    std::printf("%s [%d] %s: %s (%s)\n", o.pass ? "PASS" : "FAIL", i + 1, c.name,
                o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
