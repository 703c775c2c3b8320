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

#include "nlns/io.h"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "nlns/errors.h"

namespace nlns {
namespace {

namespace fs = std::filesystem;

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitLines(std::string_view text) {
  std::vector<std::string_view> lines;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string> Tokens(std::string_view line) {
  std::istringstream in{std::string(line)};
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

long ParseLong(const std::string& tok, int line_no) {
  size_t used = 0;
  long v = 0;
  try {
    v = std::stol(tok, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != tok.size()) {
    throw ParseError("line " + std::to_string(line_no) + ": expected an integer, got '" +
                     tok + "'");
  }
  return v;
}

// Row, column and box scopes of a side x side grid, in that order.
std::vector<Constraint> SudokuConstraints(int box) {
  const int side = box * box;
  std::vector<Constraint> cs;
  for (int r = 0; r < side; ++r) {
    Constraint c{ConstraintKind::kAllDifferent, {}, 1.0};
    for (int col = 0; col < side; ++col) c.scope.push_back(r * side + col);
    cs.push_back(std::move(c));
  }
  for (int col = 0; col < side; ++col) {
    Constraint c{ConstraintKind::kAllDifferent, {}, 1.0};
    for (int r = 0; r < side; ++r) c.scope.push_back(r * side + col);
    cs.push_back(std::move(c));
  }
  for (int br = 0; br < box; ++br) {
    for (int bc = 0; bc < box; ++bc) {
      Constraint c{ConstraintKind::kAllDifferent, {}, 1.0};
      for (int r = br * box; r < (br + 1) * box; ++r) {
        for (int col = bc * box; col < (bc + 1) * box; ++col) {
          c.scope.push_back(r * side + col);
        }
      }
      cs.push_back(std::move(c));
    }
  }
  return cs;
}

std::string DescribeUnit(int constraint_index, int side) {
  const char* unit = constraint_index < side       ? "row"
                     : constraint_index < 2 * side ? "column"
                                                   : "box";
  return std::string(unit) + " " + std::to_string(constraint_index % side + 1);
}

std::vector<int> DomainOneTo(int side) {
  std::vector<int> values(side);
  std::iota(values.begin(), values.end(), 1);
  return values;
}

std::vector<int> ParseGrid(std::string_view cells, int side, bool allow_blank,
                           const char* what) {
  std::vector<int> grid(cells.size());
  for (size_t pos = 0; pos < cells.size(); ++pos) {
    const char ch = cells[pos];
    if ((ch == '0' || ch == '.') && allow_blank) {
      grid[pos] = kFree;
    } else if (ch >= '1' && ch <= '9' && ch - '0' <= side) {
      grid[pos] = ch - '1';
    } else {
      throw ParseError(std::string(what) + " position " + std::to_string(pos + 1) +
                       ": unexpected character '" + std::string(1, ch) + "'");
    }
  }
  return grid;
}

Graph FinishGraph(int n, std::vector<std::pair<int, int>> edges) {
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return {n, std::move(edges)};
}

std::pair<int, int> ParseEdge(long u, long v, long n, int line_no) {
  if (u < 1 || u > n || v < 1 || v > n) {
    throw ParseError("line " + std::to_string(line_no) +
                     ": vertex index out of range");
  }
  if (u == v) {
    throw ParseError("line " + std::to_string(line_no) + ": self-loop rejected");
  }
  return {static_cast<int>(std::min(u, v) - 1), static_cast<int>(std::max(u, v) - 1)};
}

}  // namespace

CspInstance ParseSudoku(std::string_view line, std::string name) {
  line = Trim(line);
  const size_t split = line.find_first_of(" \t,");
  const std::string_view puzzle = line.substr(0, split);
  std::string_view solution;
  if (split != std::string_view::npos) {
    solution = Trim(line.substr(split + 1));
    if (!solution.empty() && solution.front() == ',') solution = Trim(solution.substr(1));
  }
  int box;
  if (puzzle.size() == 16) {
    box = 2;
  } else if (puzzle.size() == 81) {
    box = 3;
  } else {
    throw ParseError("sudoku line has " + std::to_string(puzzle.size()) +
                     " cells; expected 16 or 81");
  }
  const int side = box * box;
  std::vector<int> givens = ParseGrid(puzzle, side, true, "puzzle");
  std::vector<Constraint> constraints = SudokuConstraints(box);

  for (int k = 0; k < static_cast<int>(constraints.size()); ++k) {
    std::vector<int> seen(side, 0);
    for (int v : constraints[k].scope) {
      if (givens[v] == kFree) continue;
      if (seen[givens[v]]++) {
        throw ParseError("duplicate given " + std::to_string(givens[v] + 1) +
                         " in " + DescribeUnit(k, side));
      }
    }
  }

  std::optional<Assignment> truth;
  if (!solution.empty()) {
    if (solution.size() != puzzle.size()) {
      throw ParseError("solution length does not match the puzzle");
    }
    Assignment sol{ParseGrid(solution, side, false, "solution")};
    for (size_t i = 0; i < givens.size(); ++i) {
      if (givens[i] != kFree && givens[i] != sol.values[i]) {
        throw ParseError("solution position " + std::to_string(i + 1) +
                         " disagrees with the given");
      }
    }
    for (int k = 0; k < static_cast<int>(constraints.size()); ++k) {
      if (IsViolated(constraints[k], sol)) {
        throw ParseError("solution violates " + DescribeUnit(k, side));
      }
    }
    truth = std::move(sol);
  }
  return CspInstance(ProblemKind::kSudoku, side * side, DomainOneTo(side),
                     std::move(constraints), std::move(givens), std::move(truth),
                     std::move(name));
}

int SudokuSide(const CspInstance& instance) {
  return instance.domain_size();
}

std::string SerializeSudoku(const CspInstance& instance) {
  if (instance.kind() != ProblemKind::kSudoku) {
    throw ConfigError("not a sudoku instance");
  }
  std::string out;
  for (int i = 0; i < instance.num_variables(); ++i) {
    out += instance.is_fixed(i) ? static_cast<char>('1' + instance.given_value(i))
                                : '.';
  }
  if (const auto& truth = instance.ground_truth()) {
    out += ' ';
    for (int v : truth->values) out += static_cast<char>('1' + v);
  }
  return out;
}

Graph ParseDimacsCol(std::string_view text) {
  long n = -1;
  std::vector<std::pair<int, int>> edges;
  int line_no = 0;
  for (std::string_view raw : SplitLines(text)) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty() || line.front() == 'c') continue;
    const auto tok = Tokens(line);
    if (tok[0] == "p") {
      if (n >= 0) throw ParseError("line " + std::to_string(line_no) + ": repeated header");
      if (tok.size() != 4 || (tok[1] != "edge" && tok[1] != "col")) {
        throw ParseError("line " + std::to_string(line_no) +
                         ": expected 'p edge <n> <m>'");
      }
      n = ParseLong(tok[2], line_no);
      ParseLong(tok[3], line_no);
      if (n < 0) throw ParseError("negative vertex count");
    } else if (tok[0] == "e") {
      if (n < 0) throw ParseError("line " + std::to_string(line_no) + ": edge before header");
      if (tok.size() != 3) {
        throw ParseError("line " + std::to_string(line_no) + ": expected 'e <u> <v>'");
      }
      edges.push_back(ParseEdge(ParseLong(tok[1], line_no),
                                ParseLong(tok[2], line_no), n, line_no));
    } else {
      throw ParseError("line " + std::to_string(line_no) + ": unrecognized line");
    }
  }
  if (n < 0) throw ParseError("missing 'p edge' header");
  return FinishGraph(static_cast<int>(n), std::move(edges));
}

std::string SerializeDimacsCol(const Graph& graph) {
  std::ostringstream out;
  out << "p edge " << graph.num_nodes << ' ' << graph.edges.size() << '\n';
  for (const auto& [u, v] : graph.edges) out << "e " << u + 1 << ' ' << v + 1 << '\n';
  return out.str();
}

Graph ParseGset(std::string_view text) {
  long n = -1;
  std::vector<std::pair<int, int>> edges;
  int line_no = 0;
  for (std::string_view raw : SplitLines(text)) {
    ++line_no;
    const std::string_view line = Trim(raw);
    if (line.empty()) continue;
    const auto tok = Tokens(line);
    if (n < 0) {
      if (tok.size() != 2) {
        throw ParseError("line " + std::to_string(line_no) + ": expected '<n> <m>'");
      }
      n = ParseLong(tok[0], line_no);
      ParseLong(tok[1], line_no);
      if (n < 0) throw ParseError("negative vertex count");
      continue;
    }
    if (tok.size() != 3) {
      throw ParseError("line " + std::to_string(line_no) + ": expected '<u> <v> <w>'");
    }
    const long w = ParseLong(tok[2], line_no);
    if (w != 1) {
      throw ParseError("line " + std::to_string(line_no) +
                       ": unsupported feature: edge weight " + tok[2] +
                       " (only unit weights are supported)");
    }
    edges.push_back(ParseEdge(ParseLong(tok[0], line_no), ParseLong(tok[1], line_no),
                              n, line_no));
  }
  if (n < 0) throw ParseError("missing '<n> <m>' header");
  return FinishGraph(static_cast<int>(n), std::move(edges));
}

std::string SerializeGset(const Graph& graph) {
  std::ostringstream out;
  out << graph.num_nodes << ' ' << graph.edges.size() << '\n';
  for (const auto& [u, v] : graph.edges) out << u + 1 << ' ' << v + 1 << " 1\n";
  return out.str();
}

CspInstance BuildInstance(const Graph& graph, ProblemKind kind, int k,
                          std::string name) {
  if (kind == ProblemKind::kSudoku) throw ConfigError("sudoku is not a graph problem");
  if (kind == ProblemKind::kMaxCut && k != 2) throw ConfigError("maxcut requires k = 2");
  if (k < 2) throw ConfigError("graph coloring requires k >= 2");
  std::vector<Constraint> constraints;
  constraints.reserve(graph.edges.size());
  for (const auto& [u, v] : graph.edges) {
    constraints.push_back({ConstraintKind::kNotEqual, {u, v}, 1.0});
  }
  std::vector<int> colors(k);
  std::iota(colors.begin(), colors.end(), 0);
  return CspInstance(kind, graph.num_nodes, std::move(colors), std::move(constraints),
                     {}, std::nullopt, std::move(name));
}

Graph GraphOf(const CspInstance& instance) {
  if (instance.kind() == ProblemKind::kSudoku) throw ConfigError("not a graph instance");
  std::vector<std::pair<int, int>> edges;
  for (const Constraint& c : instance.constraints()) {
    edges.emplace_back(std::min(c.scope[0], c.scope[1]),
                       std::max(c.scope[0], c.scope[1]));
  }
  return FinishGraph(instance.num_variables(), std::move(edges));
}

Graph GenRandomGraph(int n, double p, Rng& rng) {
  if (n < 0) throw ConfigError("node count must be nonnegative");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("edge probability must lie in [0, 1]");
  Graph g;
  g.num_nodes = n;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (Bernoulli(rng, p)) g.edges.emplace_back(u, v);
    }
  }
  return g;
}

namespace {

bool FillGrid(std::vector<int>& grid, int cell, int box, Rng& rng) {
  const int side = box * box;
  if (cell == side * side) return true;
  const int r = cell / side;
  const int c = cell % side;
  std::vector<int> order(side);
  std::iota(order.begin(), order.end(), 0);
  for (int i = side - 1; i > 0; --i) std::swap(order[i], order[UniformInt(rng, i + 1)]);
  for (int v : order) {
    bool ok = true;
    for (int j = 0; j < side && ok; ++j) {
      if (grid[r * side + j] == v || grid[j * side + c] == v) ok = false;
    }
    const int br = r / box * box, bc = c / box * box;
    for (int i = br; i < br + box && ok; ++i) {
      for (int j = bc; j < bc + box && ok; ++j) {
        if (grid[i * side + j] == v) ok = false;
      }
    }
    if (!ok) continue;
    grid[cell] = v;
    if (FillGrid(grid, cell + 1, box, rng)) return true;
    grid[cell] = kFree;
  }
  return false;
}

}  // namespace

CspInstance GenSudoku(int box, int givens, Rng& rng, std::string name) {
  if (box != 2 && box != 3) throw ConfigError("sudoku box size must be 2 or 3");
  const int side = box * box;
  const int cells = side * side;
  if (givens < 0 || givens > cells) {
    throw ConfigError("givens must lie in [0, " + std::to_string(cells) + "]");
  }
  std::vector<int> grid(cells, kFree);
  FillGrid(grid, 0, box, rng);
  std::vector<int> order(cells);
  std::iota(order.begin(), order.end(), 0);
  for (int i = cells - 1; i > 0; --i) std::swap(order[i], order[UniformInt(rng, i + 1)]);
  std::vector<int> given = grid;
  for (int j = 0; j < cells - givens; ++j) given[order[j]] = kFree;
  return CspInstance(ProblemKind::kSudoku, cells, DomainOneTo(side),
                     SudokuConstraints(box), std::move(given), Assignment{grid},
                     std::move(name));
}

std::string ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("failed writing " + path.string());
}

void WriteDataset(const fs::path& dir, const std::vector<CspInstance>& instances,
                  int k) {
  fs::create_directories(dir);
  nlohmann::json manifest;
  const ProblemKind kind =
      instances.empty() ? ProblemKind::kSudoku : instances.front().kind();
  manifest["kind"] = std::string(ProblemKindName(kind));
  manifest["k"] = k;
  std::vector<std::string> files;
  if (kind == ProblemKind::kSudoku) {
    std::string text;
    for (const CspInstance& inst : instances) text += SerializeSudoku(inst) + "\n";
    WriteFile(dir / "puzzles.sudoku", text);
    files.push_back("puzzles.sudoku");
  } else {
    const char* ext = kind == ProblemKind::kMaxCut ? ".gset" : ".col";
    for (size_t i = 0; i < instances.size(); ++i) {
      const CspInstance& inst = instances[i];
      if (inst.kind() != kind) throw ConfigError("mixed problem kinds in dataset");
      std::string stem = inst.name();
      if (stem.empty()) {
        std::ostringstream s;
        s << "g" << std::setw(4) << std::setfill('0') << i;
        stem = s.str();
      }
      const Graph g = GraphOf(inst);
      WriteFile(dir / (stem + ext),
                kind == ProblemKind::kMaxCut ? SerializeGset(g) : SerializeDimacsCol(g));
      files.push_back(stem + ext);
    }
  }
  manifest["files"] = files;
  WriteFile(dir / "dataset.json", manifest.dump(2) + "\n");
}

std::vector<CspInstance> LoadDataset(const fs::path& dir) {
  DatasetManifest manifest;
  try {
    const auto j = nlohmann::json::parse(ReadFile(dir / "dataset.json"));
    const auto kind = ParseProblemKind(j.at("kind").get<std::string>());
    if (!kind) throw ParseError("dataset.json: unknown kind");
    manifest.kind = *kind;
    manifest.k = j.value("k", 0);
    manifest.files = j.at("files").get<std::vector<std::string>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("dataset.json: ") + e.what());
  }
  std::vector<CspInstance> out;
  for (const std::string& file : manifest.files) {
    const fs::path path = dir / file;
    const std::string stem = path.stem().string();
    if (manifest.kind == ProblemKind::kSudoku) {
      int index = 0;
      const std::string text = ReadFile(path);
      for (std::string_view line : SplitLines(text)) {
        line = Trim(line);
        if (line.empty() || line.front() == '#') continue;
        std::ostringstream nm;
        nm << stem << '_' << std::setw(4) << std::setfill('0') << index++;
        out.push_back(ParseSudoku(line, nm.str()));
      }
    } else {
      const std::string text = ReadFile(path);
      const Graph g = manifest.kind == ProblemKind::kMaxCut ? ParseGset(text)
                                                            : ParseDimacsCol(text);
      out.push_back(BuildInstance(g, manifest.kind,
                                  manifest.kind == ProblemKind::kMaxCut ? 2 : manifest.k,
                                  stem));
    }
  }
  return out;
}

CspInstance LoadInstanceFile(const fs::path& path, int k) {
  const std::string ext = path.extension().string();
  const std::string text = ReadFile(path);
  const std::string stem = path.stem().string();
  if (ext == ".gset") return BuildInstance(ParseGset(text), ProblemKind::kMaxCut, 2, stem);
  if (ext == ".col") {
    return BuildInstance(ParseDimacsCol(text), ProblemKind::kGraphColoring, k, stem);
  }
  std::vector<std::string_view> lines;
  for (std::string_view line : SplitLines(text)) {
    line = Trim(line);
    if (!line.empty() && line.front() != '#') lines.push_back(line);
  }
  if (lines.size() != 1) {
    throw ParseError(path.string() + ": expected exactly one sudoku puzzle, found " +
                     std::to_string(lines.size()));
  }
  return ParseSudoku(lines.front(), stem);
}

}  // namespace nlns
