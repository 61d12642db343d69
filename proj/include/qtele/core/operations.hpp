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

#include <span>
#include <string>
#include <vector>

#include "qtele/core/types.hpp"

namespace qtele::core {

DensityState tensor_product(std::span<const DensityState> factors);
LinearOperator tensor_product(std::span<const LinearOperator> factors);
DensityState tensor_product(const DensityState& a, const DensityState& b);
LinearOperator tensor_product(const LinearOperator& a, const LinearOperator& b);

/// Lifts \p op to \p layout, acting on \p targets (in the order of op's
/// factors) and as the identity elsewhere.
LinearOperator embed_operator(const LinearOperator& op,
                              std::span<const std::string> targets,
                              const HilbertLayout& layout);

/// U rho U^dagger with an operator on the full space.
DensityState apply_unitary(const DensityState& state, const LinearOperator& op);

/// U rho U^dagger where U acts only on \p targets. Equivalent to embedding
/// first, but costs O(dim^2 * target_dim).
DensityState apply_unitary(const DensityState& state, const LinearOperator& op,
                           std::span<const std::string> targets);

/// sum_k K rho K^dagger with Kraus matrices acting on \p targets. The result is
/// flagged sub-normalized when the set is not trace preserving.
DensityState apply_kraus(const DensityState& state,
                         std::span<const Matrix> kraus,
                         std::span<const std::string> targets);

/// Reduced state on \p keep (returned in layout order).
DensityState partial_trace(const DensityState& state,
                           std::span<const std::string> keep);

/// Measures the subsystems named by the projectors' layout. Branches come
/// back in projector order, each renormalized.
std::vector<Branch> projective_measure(const DensityState& state,
                                       std::span<const LinearOperator> projectors);

/// Applies a POVM on \p targets and discards the measured subsystems: the
/// conditional state of outcome k is Tr_targets(E_k rho) / p_k.
std::vector<Branch> measure_and_discard(const DensityState& state,
                                        std::span<const Matrix> povm,
                                        std::span<const std::string> targets);

/// <psi| rho |psi> for a normalized target.
double fidelity_pure(const DensityState& state, const Vector& target);

DensityState apply_noise(const DensityState& state, const std::string& target,
                         const NoiseChannelSpec& spec);

/// Expectation value Tr(O rho) of an operator acting on \p targets.
Complex expectation(const DensityState& state, const Matrix& op,
                    std::span<const std::string> targets);

}  // namespace qtele::core
