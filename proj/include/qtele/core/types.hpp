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

#include <complex>
#include <optional>

#include <Eigen/Dense>

#include "qtele/core/hilbert_layout.hpp"

namespace qtele::core {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Normalization {
  kNormalized,
  // Trace <= 1. Only produced inside conditional-branch bookkeeping.
  kSubNormalized,
};

/// Density matrix on an explicit composite space. Construction checks shape,
/// Hermiticity and trace; positivity is checked on demand (it needs an
/// eigendecomposition).
class DensityState {
 public:
  DensityState(HilbertLayout layout, Matrix matrix,
               Normalization normalization = Normalization::kNormalized);

  static DensityState from_pure(HilbertLayout layout, const Vector& psi);
  static DensityState basis(HilbertLayout layout, std::size_t index);
  static DensityState maximally_mixed(HilbertLayout layout);

  const HilbertLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t dim() const { return layout_.total_dim(); }
  Normalization normalization() const { return normalization_; }
  bool is_sub_normalized() const {
    return normalization_ == Normalization::kSubNormalized;
  }

  double trace() const;
  double min_eigenvalue() const;
  double max_hermitian_deviation() const;
  double purity() const;

  Complex operator()(std::size_t row, std::size_t col) const {
    return matrix_(static_cast<Eigen::Index>(row),
                   static_cast<Eigen::Index>(col));
  }

  /// Divides by the trace. Throws if the trace is zero.
  DensityState normalized() const;

 private:
  HilbertLayout layout_;
  Matrix matrix_;
  Normalization normalization_;
};

/// Square operator on a layout; the unitary flag is verified on construction.
class LinearOperator {
 public:
  LinearOperator(HilbertLayout layout, Matrix matrix, bool unitary = false);

  static LinearOperator identity(HilbertLayout layout);

  const HilbertLayout& layout() const { return layout_; }
  const Matrix& matrix() const { return matrix_; }
  bool is_unitary() const { return unitary_; }
  std::size_t dim() const { return layout_.total_dim(); }

  LinearOperator adjoint() const;
  /// this * rhs, both on the same layout.
  LinearOperator compose(const LinearOperator& rhs) const;

 private:
  HilbertLayout layout_;
  Matrix matrix_;
  bool unitary_;
};

/// One outcome of a measurement. A zero-probability outcome has no state.
struct Branch {
  double probability = 0.0;
  std::optional<DensityState> state;
};

enum class NoiseKind { kDephasing, kDepolarizing };

struct NoiseChannelSpec {
  NoiseKind kind = NoiseKind::kDephasing;
  double parameter = 0.0;
};

}  // namespace qtele::core
