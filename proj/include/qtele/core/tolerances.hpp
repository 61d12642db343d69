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

#pragma once

namespace qtele::tol {

// Numerical tolerances shared by every module.
inline constexpr double kHermitian = 1e-10;
inline constexpr double kUnitary = 1e-10;
inline constexpr double kIdempotent = 1e-10;
inline constexpr double kTrace = 1e-9;
inline constexpr double kPositivity = 1e-9;
inline constexpr double kProbabilitySum = 1e-9;
inline constexpr double kNormalization = 1e-12;
inline constexpr double kFlux = 1e-10;
inline constexpr double kPovmCompleteness = 1e-10;

// Below this, a measurement branch is reported as impossible.
inline constexpr double kZeroProbability = 1e-300;

// Poisson mass allowed above the Fock cutoff.
inline constexpr double kFockTruncation = 1e-4;

}  // namespace qtele::tol
