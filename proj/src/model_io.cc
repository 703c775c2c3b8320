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

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <string>

#include "nlns/errors.h"
#include "nlns/model.h"

namespace nlns {
namespace {

constexpr std::array<char, 4> kMagic = {'N', 'L', 'N', 'S'};
constexpr uint32_t kFlagConflictFeature = 1u;

void PutU32(std::ostream& out, uint32_t v) {
  const unsigned char bytes[4] = {
      static_cast<unsigned char>(v), static_cast<unsigned char>(v >> 8),
      static_cast<unsigned char>(v >> 16), static_cast<unsigned char>(v >> 24)};
  out.write(reinterpret_cast<const char*>(bytes), 4);
}

uint32_t GetU32(std::istream& in, const char* what) {
  unsigned char bytes[4];
  if (!in.read(reinterpret_cast<char*>(bytes), 4)) {
    throw ParseError(std::string("model file truncated while reading ") + what);
  }
  return static_cast<uint32_t>(bytes[0]) | static_cast<uint32_t>(bytes[1]) << 8 |
         static_cast<uint32_t>(bytes[2]) << 16 |
         static_cast<uint32_t>(bytes[3]) << 24;
}

int GetDim(std::istream& in, const char* what) {
  const uint32_t v = GetU32(in, what);
  if (v > (1u << 24)) {
    throw ParseError(std::string("model file has implausible ") + what);
  }
  return static_cast<int>(v);
}

}  // namespace

void SaveModel(const RepairModel& model, std::ostream& out) {
  const ModelHyper& h = model.hyper;
  out.write(kMagic.data(), kMagic.size());
  PutU32(out, kModelFormatVersion);
  PutU32(out, static_cast<uint32_t>(h.kind));
  PutU32(out, static_cast<uint32_t>(h.domain_size));
  PutU32(out, static_cast<uint32_t>(h.layers));
  PutU32(out, static_cast<uint32_t>(h.width));
  PutU32(out, static_cast<uint32_t>(h.heads));
  PutU32(out, static_cast<uint32_t>(h.max_len));
  PutU32(out, static_cast<uint32_t>(h.ffn_width));
  PutU32(out, h.conflict_feature ? kFlagConflictFeature : 0u);
  ForEachTensor(
      [&](const Matrix& t) {
        for (Eigen::Index i = 0; i < t.size(); ++i) {
          PutU32(out, std::bit_cast<uint32_t>(static_cast<float>(t.data()[i])));
        }
      },
      model.params);
  if (!out) throw Error("failed writing model");
}

void SaveModel(const RepairModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  SaveModel(model, out);
}

RepairModel LoadModel(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw ParseError("not a model file (bad magic)");
  }
  const uint32_t version = GetU32(in, "version");
  if (version != kModelFormatVersion) {
    throw ParseError("unsupported model format version " +
                     std::to_string(version));
  }
  ModelHyper h;
  const uint32_t kind = GetU32(in, "problem kind");
  if (kind > static_cast<uint32_t>(ProblemKind::kMaxCut)) {
    throw ParseError("model file has unknown problem kind");
  }
  h.kind = static_cast<ProblemKind>(kind);
  h.domain_size = GetDim(in, "domain size");
  h.layers = GetDim(in, "layer count");
  h.width = GetDim(in, "width");
  h.heads = GetDim(in, "head count");
  h.max_len = GetDim(in, "max length");
  h.ffn_width = GetDim(in, "ffn width");
  const uint32_t flags = GetU32(in, "flags");
  if (flags & ~kFlagConflictFeature) throw ParseError("unknown model flags");
  h.conflict_feature = (flags & kFlagConflictFeature) != 0;
  try {
    ValidateHyper(h);
  } catch (const ConfigError& e) {
    throw ParseError(std::string("inconsistent dimensions: ") + e.what());
  }

  const int64_t hw = h.width;
  const int64_t per_block = 4 * hw * hw + 9 * hw + 2 * hw * h.ffn_width + h.ffn_width;
  const int64_t expected = (h.domain_size + 1 + h.max_len + 4) * hw +
                           h.layers * per_block + (hw + 1) * h.domain_size;
  if (expected > (int64_t{1} << 27)) {
    throw ParseError("model file declares an implausibly large model");
  }

  // Shapes come from a deterministic initialization; values are overwritten.
  RepairModel model = RepairModel::Initialize(h, 0);
  ForEachTensor(
      [&](Matrix& t) {
        for (Eigen::Index i = 0; i < t.size(); ++i) {
          t.data()[i] = std::bit_cast<float>(GetU32(in, "tensor data"));
        }
      },
      model.params);
  if (in.peek() != std::char_traits<char>::eof()) {
    throw ParseError("trailing bytes after model tensors");
  }
  return model;
}

RepairModel LoadModel(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open model file " + path);
  return LoadModel(in);
}

}  // namespace nlns
