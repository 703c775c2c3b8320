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

#ifndef NLNS_DESTROY_MASK_H_
#define NLNS_DESTROY_MASK_H_

#include <algorithm>
#include <cstdint>
#include <vector>

#include "nlns/csp.h"

namespace nlns {

// m_i = 1 marks variable i as eligible for modification by the repair step.
struct DestroyMask {
  std::vector<uint8_t> selected;

  static DestroyMask None(int n) { return {std::vector<uint8_t>(n, 0)}; }

  int size() const { return static_cast<int>(selected.size()); }
  bool operator[](int i) const { return selected[i] != 0; }
  int Count() const {
    return static_cast<int>(std::count(selected.begin(), selected.end(), 1));
  }

  // Clears every fixed variable.
  void Sanitize(const CspInstance& instance) {
    for (int i = 0; i < size(); ++i) {
      if (instance.is_fixed(i)) selected[i] = 0;
    }
  }

  friend bool operator==(const DestroyMask&, const DestroyMask&) = default;
};

}  // namespace nlns

#endif  // NLNS_DESTROY_MASK_H_
