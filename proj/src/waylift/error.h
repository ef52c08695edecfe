// Copyright 2026 The Waylift Authors
//
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

#ifndef WAYLIFT_ERROR_H_
#define WAYLIFT_ERROR_H_

#include <stdexcept>
#include <string>

namespace waylift {

enum class ErrorCode {
  kInvalidArgument,
  kInvalidConfig,
  kParse,
  kNumeric,
  kDiverged,
};

// All library failures are reported by throwing Error. The C API maps the
// code onto its integer status values.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace waylift

#endif  // WAYLIFT_ERROR_H_
