// Copyright 2026 The pwreg Authors.
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

#include "pwreg/error.hpp"

namespace pwreg {

std::string_view ToString(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidDimension: return "invalid-dimension";
    case ErrorKind::kNumericInput: return "numeric-input";
    case ErrorKind::kInvalidConfig: return "invalid-config";
    case ErrorKind::kUnsupportedFeature: return "unsupported-feature";
    case ErrorKind::kEmptyDataset: return "empty-dataset";
    case ErrorKind::kBudgetExceeded: return "budget-exceeded";
    case ErrorKind::kIo: return "io";
    case ErrorKind::kParse: return "parse";
  }
  return "unknown";
}

void Fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, std::string(ToString(kind)) + ": " + what);
}

}  // namespace pwreg
