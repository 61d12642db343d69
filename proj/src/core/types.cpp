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

#include "qtele/core/types.hpp"

#include <cmath>

#include "qtele/core/error.hpp"
#include "qtele/core/tolerances.hpp"

namespace qtele::core {

namespace {

void check_square(const HilbertLayout& layout, const Matrix& m,
                  const char* what) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  if (m.rows() != d || m.cols() != d) {
    throw Error(ErrorKind::kDimensionMismatch,
                std::string(what) + ": matrix is " + std::to_string(m.rows()) +
                    "x" + std::to_string(m.cols()) + ", layout needs " +
                    std::to_string(d));
  }
}

double hermitian_deviation(const Matrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

}  // namespace

DensityState::DensityState(HilbertLayout layout, Matrix matrix,
                           Normalization normalization)
    : layout_(std::move(layout)),
      matrix_(std::move(matrix)),
      normalization_(normalization) {
  check_square(layout_, matrix_, "DensityState");
  if (hermitian_deviation(matrix_) > tol::kHermitian) {
    throw Error(ErrorKind::kInvalidArgument, "density matrix is not Hermitian");
  }
  // Clean the round-off so downstream algebra sees an exactly Hermitian matrix.
  matrix_ = (0.5 * (matrix_ + matrix_.adjoint())).eval();
  const double tr = trace();
  if (normalization_ == Normalization::kNormalized) {
    if (std::abs(tr - 1.0) > tol::kTrace) {
      throw Error(ErrorKind::kInvalidArgument,
                  "density matrix trace " + std::to_string(tr) + " != 1");
    }
  } else if (tr > 1.0 + tol::kTrace || tr < -tol::kTrace) {
    throw Error(ErrorKind::kInvalidArgument,
                "sub-normalized trace " + std::to_string(tr) +
                    " outside [0, 1]");
  }
}

DensityState DensityState::from_pure(HilbertLayout layout, const Vector& psi) {
  if (static_cast<std::size_t>(psi.size()) != layout.total_dim()) {
    throw Error(ErrorKind::kDimensionMismatch, "state vector size mismatch");
  }
  return DensityState(std::move(layout), psi * psi.adjoint());
}

DensityState DensityState::basis(HilbertLayout layout, std::size_t index) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  Matrix m = Matrix::Zero(d, d);
  m(static_cast<Eigen::Index>(index), static_cast<Eigen::Index>(index)) = 1.0;
  return DensityState(std::move(layout), std::move(m));
}

DensityState DensityState::maximally_mixed(HilbertLayout layout) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  Matrix m = Matrix::Identity(d, d) / static_cast<double>(d);
  return DensityState(std::move(layout), std::move(m));
}

double DensityState::trace() const { return matrix_.trace().real(); }

double DensityState::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(matrix_,
                                               Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityState::max_hermitian_deviation() const {
  return hermitian_deviation(matrix_);
}

double DensityState::purity() const {
  return (matrix_ * matrix_).trace().real();
}

DensityState DensityState::normalized() const {
  const double tr = trace();
  if (!(tr > tol::kZeroProbability)) {
    throw Error(ErrorKind::kInvalidArgument, "cannot normalize a zero state");
  }
  return DensityState(layout_, matrix_ / tr, Normalization::kNormalized);
}

LinearOperator::LinearOperator(HilbertLayout layout, Matrix matrix,
                               bool unitary)
    : layout_(std::move(layout)), matrix_(std::move(matrix)), unitary_(unitary) {
  check_square(layout_, matrix_, "LinearOperator");
  if (unitary_) {
    const Matrix gram = matrix_.adjoint() * matrix_;
    const double dev =
        (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (dev > tol::kUnitary) {
      throw Error(ErrorKind::kNotUnitary,
                  "operator flagged unitary deviates from U^dag U = I by " +
                      std::to_string(dev));
    }
  }
}

LinearOperator LinearOperator::identity(HilbertLayout layout) {
  const auto d = static_cast<Eigen::Index>(layout.total_dim());
  return LinearOperator(std::move(layout), Matrix::Identity(d, d), true);
}

LinearOperator LinearOperator::adjoint() const {
  return LinearOperator(layout_, matrix_.adjoint(), unitary_);
}

LinearOperator LinearOperator::compose(const LinearOperator& rhs) const {
  if (!(layout_ == rhs.layout_)) {
    throw Error(ErrorKind::kDimensionMismatch,
                "cannot compose operators on different layouts");
  }
  return LinearOperator(layout_, matrix_ * rhs.matrix_,
                        unitary_ && rhs.unitary_);
}

}  // namespace qtele::core
