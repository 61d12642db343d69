// Copyright 2026 The qtele Authors
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

#include "qtele/core/error.hpp"

namespace qtele {

std::string_view error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument:
      return "invalid_argument";
    case ErrorKind::kDimensionMismatch:
      return "dimension_mismatch";
    case ErrorKind::kUnknownLabel:
      return "unknown_label";
    case ErrorKind::kDuplicateLabel:
      return "duplicate_label";
    case ErrorKind::kNotUnitary:
      return "not_unitary";
    case ErrorKind::kIncompleteMeasurement:
      return "incomplete_measurement";
    case ErrorKind::kCutoffTooSmall:
      return "cutoff_too_small";
    case ErrorKind::kConfig:
      return "config";
    case ErrorKind::kIo:
      return "io";
  }
  return "unknown";
}

}  // namespace qtele
