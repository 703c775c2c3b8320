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

// Instance formats, generators and on-disk datasets.
//
// Sudoku: one puzzle per line, 16 or 81 cells, digits for givens and '0' or
// '.' for blanks, optionally followed by whitespace or ',' and the solved
// grid. DIMACS graph coloring: "p edge n m" then "e u v". GSET: "n m" then
// "u v w". Both graph formats are 1-indexed.

#ifndef NLNS_IO_H_
#define NLNS_IO_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nlns/csp.h"
#include "nlns/random.h"

namespace nlns {

struct Graph {
  int num_nodes = 0;
  // Undirected, 0-indexed, u < v, sorted, no duplicates.
  std::vector<std::pair<int, int>> edges;

  friend bool operator==(const Graph&, const Graph&) = default;
};

// Throws ParseError naming the offending position, row, column or box.
CspInstance ParseSudoku(std::string_view line, std::string name = {});
std::string SerializeSudoku(const CspInstance& instance);

// Grid side (4 or 9) of a Sudoku instance.
int SudokuSide(const CspInstance& instance);

Graph ParseDimacsCol(std::string_view text);
std::string SerializeDimacsCol(const Graph& graph);
// Only unit weights are accepted.
Graph ParseGset(std::string_view text);
std::string SerializeGset(const Graph& graph);

// One NotEqual per edge over k colors (k = 2 for MaxCut).
CspInstance BuildInstance(const Graph& graph, ProblemKind kind, int k,
                          std::string name = {});
Graph GraphOf(const CspInstance& instance);

// Erdos-Renyi G(n, p).
Graph GenRandomGraph(int n, double p, Rng& rng);

// Random complete grid by randomized backtracking, then blanks cells until
// `givens` remain. The completed grid is kept as ground truth. box is 2
// (4x4) or 3 (9x9).
CspInstance GenSudoku(int box, int givens, Rng& rng, std::string name = {});

// A dataset directory holds dataset.json plus instance files. Sudoku files
// (*.sudoku) hold one puzzle per line; *.col files are graph coloring and
// *.gset files MaxCut instances.
struct DatasetManifest {
  ProblemKind kind = ProblemKind::kSudoku;
  int k = 0;  // colors for graph problems
  std::vector<std::string> files;
};

void WriteDataset(const std::filesystem::path& dir,
                  const std::vector<CspInstance>& instances, int k);
std::vector<CspInstance> LoadDataset(const std::filesystem::path& dir);

// Loads one instance file, choosing the format by extension. `k` is the color
// count for .col files. Sudoku files must hold exactly one puzzle.
CspInstance LoadInstanceFile(const std::filesystem::path& path, int k);

std::string ReadFile(const std::filesystem::path& path);
void WriteFile(const std::filesystem::path& path, std::string_view contents);

}  // namespace nlns

#endif  // NLNS_IO_H_
