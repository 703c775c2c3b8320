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

#ifndef NLNS_ERRORS_H_
#define NLNS_ERRORS_H_

#include <stdexcept>
#include <string>

namespace nlns {

// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed instance, model file or dataset text.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Invalid user configuration: bad flag values, unknown operator ids,
// incompatible model/dataset pairs.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Inconsistent instance structure (scope index out of range, bad domain).
class StructureError : public Error {
 public:
  using Error::Error;
};

// A probability row that is negative or does not sum to one.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Sequence longer than the model's positional capacity.
class CapacityError : public Error {
 public:
  using Error::Error;
};

// Non-finite loss or gradient during training.
class TrainingFault : public Error {
 public:
  using Error::Error;
};

}  // namespace nlns

#endif  // NLNS_ERRORS_H_
