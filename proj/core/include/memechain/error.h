// Copyright 2026 The memechain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef MEMECHAIN_ERROR_H_
#define MEMECHAIN_ERROR_H_

#include <stdexcept>
#include <string>

namespace memechain {

// Malformed or inconsistent input: bad records, shape mismatches, unknown
// labels, missing files.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The optimizer or a numeric transform produced a non-finite value.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace memechain

#endif  // MEMECHAIN_ERROR_H_
