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

#include "qtele/core/operations.hpp"

#include <algorithm>
#include <cmath>

#include "qtele/core/error.hpp"
#include "qtele/core/tolerances.hpp"

namespace qtele::core {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

// (op (x) I_rest) * x, where op acts on the split's target digits.
Matrix left_apply(const IndexSplit& split, const Matrix& op, const Matrix& x) {
  const std::size_t dim = static_cast<std::size_t>(x.rows());
  const std::size_t dt = split.target_dim;
  Matrix out(x.rows(), x.cols());
  for (Index j = 0; j < x.cols(); ++j) {
    const Complex* xc = x.col(j).data();
    Complex* oc = out.col(j).data();
    for (std::size_t i = 0; i < dim; ++i) {
      const std::size_t ti = split.target_of[i];
      const std::size_t ri = split.rest_of[i];
      Complex acc = 0.0;
      for (std::size_t t = 0; t < dt; ++t) {
        const Complex c = op(idx(ti), idx(t));
        if (c == Complex(0.0)) continue;
        acc += c * xc[split.full(t, ri)];
      }
      oc[i] = acc;
    }
  }
  return out;
}

// K rho K^dagger for Hermitian rho: K (K rho)^dagger.
Matrix conjugate(const IndexSplit& split, const Matrix& op, const Matrix& rho) {
  const Matrix half = left_apply(split, op, rho);
  return left_apply(split, op, half.adjoint());
}

void check_target_dims(const HilbertLayout& layout,
                       std::span<const std::string> targets,
                       std::size_t op_dim) {
  std::size_t d = 1;
  for (const auto& label : targets) d *= layout.dim_of(label);
  if (d != op_dim) {
    throw Error(ErrorKind::kDimensionMismatch,
                "operator dimension " + std::to_string(op_dim) +
                    " does not match targeted subsystems (" +
                    std::to_string(d) + ")");
  }
}

bool is_identity(const Matrix& m, double tol) {
  return (m - Matrix::Identity(m.rows(), m.cols())).cwiseAbs().maxCoeff() <= tol;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// Tr_targets of an arbitrary matrix x, returned on the rest digits.
Matrix trace_out_targets(const IndexSplit& split, const Matrix& x) {
  Matrix out = Matrix::Zero(idx(split.rest_dim), idx(split.rest_dim));
  for (std::size_t r = 0; r < split.rest_dim; ++r) {
    for (std::size_t c = 0; c < split.rest_dim; ++c) {
      Complex acc = 0.0;
      for (std::size_t t = 0; t < split.target_dim; ++t) {
        acc += x(idx(split.full(t, r)), idx(split.full(t, c)));
      }
      out(idx(r), idx(c)) = acc;
    }
  }
  return out;
}

std::vector<std::string> rest_labels(const HilbertLayout& layout,
                                     std::span<const std::string> targets) {
  std::vector<std::string> rest;
  for (const auto& s : layout.subsystems()) {
    if (std::find(targets.begin(), targets.end(), s.label) == targets.end()) {
      rest.push_back(s.label);
    }
  }
  return rest;
}

}  // namespace

DensityState tensor_product(std::span<const DensityState> factors) {
  if (factors.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "tensor_product of nothing");
  }
  HilbertLayout layout = factors.front().layout();
  Matrix m = factors.front().matrix();
  bool sub = factors.front().is_sub_normalized();
  for (std::size_t k = 1; k < factors.size(); ++k) {
    layout = layout.concat(factors[k].layout());
    m = kron(m, factors[k].matrix());
    sub = sub || factors[k].is_sub_normalized();
  }
  return DensityState(std::move(layout), std::move(m),
                      sub ? Normalization::kSubNormalized
                          : Normalization::kNormalized);
}

LinearOperator tensor_product(std::span<const LinearOperator> factors) {
  if (factors.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "tensor_product of nothing");
  }
  HilbertLayout layout = factors.front().layout();
  Matrix m = factors.front().matrix();
  bool unitary = factors.front().is_unitary();
  for (std::size_t k = 1; k < factors.size(); ++k) {
    layout = layout.concat(factors[k].layout());
    m = kron(m, factors[k].matrix());
    unitary = unitary && factors[k].is_unitary();
  }
  return LinearOperator(std::move(layout), std::move(m), unitary);
}

DensityState tensor_product(const DensityState& a, const DensityState& b) {
  const DensityState both[] = {a, b};
  return tensor_product(std::span<const DensityState>(both));
}

LinearOperator tensor_product(const LinearOperator& a, const LinearOperator& b) {
  const LinearOperator both[] = {a, b};
  return tensor_product(std::span<const LinearOperator>(both));
}

LinearOperator embed_operator(const LinearOperator& op,
                              std::span<const std::string> targets,
                              const HilbertLayout& layout) {
  const auto& op_subs = op.layout().subsystems();
  if (op_subs.size() != targets.size()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "operator has " + std::to_string(op_subs.size()) +
                    " factors but " + std::to_string(targets.size()) +
                    " targets were given");
  }
  for (std::size_t k = 0; k < targets.size(); ++k) {
    if (layout.dim_of(targets[k]) != op_subs[k].dim) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "target '" + targets[k] + "' has dimension " +
                      std::to_string(layout.dim_of(targets[k])) +
                      ", operator factor has " +
                      std::to_string(op_subs[k].dim));
    }
  }
  const IndexSplit split = split_indices(layout, targets);
  const std::size_t dim = layout.total_dim();
  Matrix m = Matrix::Zero(idx(dim), idx(dim));
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t t = 0; t < split.target_dim; ++t) {
      const std::size_t i = split.full(t, split.rest_of[j]);
      m(idx(i), idx(j)) = op.matrix()(idx(t), idx(split.target_of[j]));
    }
  }
  return LinearOperator(layout, std::move(m), op.is_unitary());
}

DensityState apply_unitary(const DensityState& state, const LinearOperator& op) {
  if (op.dim() != state.dim()) {
    throw Error(ErrorKind::kDimensionMismatch,
                "operator and state dimensions differ");
  }
  if (!op.is_unitary()) {
    throw Error(ErrorKind::kNotUnitary, "apply_unitary needs a unitary operator");
  }
  const Matrix& u = op.matrix();
  return DensityState(state.layout(), u * state.matrix() * u.adjoint(),
                      state.normalization());
}

DensityState apply_unitary(const DensityState& state, const LinearOperator& op,
                           std::span<const std::string> targets) {
  if (!op.is_unitary()) {
    throw Error(ErrorKind::kNotUnitary, "apply_unitary needs a unitary operator");
  }
  check_target_dims(state.layout(), targets, op.dim());
  const IndexSplit split = split_indices(state.layout(), targets);
  return DensityState(state.layout(),
                      conjugate(split, op.matrix(), state.matrix()),
                      state.normalization());
}

DensityState apply_kraus(const DensityState& state,
                         std::span<const Matrix> kraus,
                         std::span<const std::string> targets) {
  if (kraus.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "empty Kraus set");
  }
  const auto op_dim = static_cast<std::size_t>(kraus.front().rows());
  check_target_dims(state.layout(), targets, op_dim);
  const IndexSplit split = split_indices(state.layout(), targets);

  Matrix completeness = Matrix::Zero(idx(op_dim), idx(op_dim));
  Matrix out = Matrix::Zero(state.matrix().rows(), state.matrix().cols());
  for (const Matrix& k : kraus) {
    if (static_cast<std::size_t>(k.rows()) != op_dim || k.rows() != k.cols()) {
      throw Error(ErrorKind::kDimensionMismatch, "Kraus operators differ in size");
    }
    completeness += k.adjoint() * k;
    out += conjugate(split, k, state.matrix());
  }
  const bool preserving = is_identity(completeness, 1e-9);
  if (!preserving) {
    const double excess =
        Eigen::SelfAdjointEigenSolver<Matrix>(completeness, Eigen::EigenvaluesOnly)
            .eigenvalues()
            .maxCoeff();
    if (excess > 1.0 + 1e-9) {
      throw Error(ErrorKind::kInvalidArgument,
                  "Kraus set increases the trace");
    }
  }
  return DensityState(state.layout(), std::move(out),
                      preserving ? state.normalization()
                                 : Normalization::kSubNormalized);
}

DensityState partial_trace(const DensityState& state,
                           std::span<const std::string> keep) {
  if (keep.empty()) {
    throw Error(ErrorKind::kInvalidArgument, "partial_trace needs a keep set");
  }
  for (const auto& label : keep) (void)state.layout().position(label);
  const std::vector<std::string> traced = rest_labels(state.layout(), keep);
  if (traced.empty()) return state;
  const IndexSplit split = split_indices(state.layout(), traced);
  const std::vector<std::string> kept = rest_labels(state.layout(), traced);
  return DensityState(state.layout().select(kept),
                      trace_out_targets(split, state.matrix()),
                      state.normalization());
}

std::vector<Branch> projective_measure(
    const DensityState& state, std::span<const LinearOperator> projectors) {
  if (projectors.empty()) {
    throw Error(ErrorKind::kIncompleteMeasurement, "no projectors given");
  }
  const HilbertLayout& measured = projectors.front().layout();
  const std::vector<std::string> targets = measured.labels();
  for (const auto& s : measured.subsystems()) {
    if (state.layout().dim_of(s.label) != s.dim) {
      throw Error(ErrorKind::kDimensionMismatch,
                  "projector factor '" + s.label + "' dimension mismatch");
    }
  }

  Matrix sum = Matrix::Zero(idx(measured.total_dim()), idx(measured.total_dim()));
  for (const auto& p : projectors) {
    if (!(p.layout() == measured)) {
      throw Error(ErrorKind::kIncompleteMeasurement,
                  "projectors act on different subsystems");
    }
    const Matrix& m = p.matrix();
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol::kHermitian ||
        (m * m - m).cwiseAbs().maxCoeff() > tol::kIdempotent) {
      throw Error(ErrorKind::kIncompleteMeasurement,
                  "measurement operator is not an orthogonal projector");
    }
    sum += m;
  }
  if (!is_identity(sum, tol::kIdempotent)) {
    throw Error(ErrorKind::kIncompleteMeasurement,
                "projectors do not sum to the identity");
  }

  const IndexSplit split = split_indices(state.layout(), targets);
  const double total = state.trace();
  std::vector<Branch> out;
  out.reserve(projectors.size());
  for (const auto& p : projectors) {
    Matrix post = conjugate(split, p.matrix(), state.matrix());
    const double prob = post.trace().real() / total;
    Branch b;
    b.probability = std::max(prob, 0.0);
    if (prob > tol::kZeroProbability) {
      b.state = DensityState(state.layout(), post / post.trace().real());
    }
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<Branch> measure_and_discard(const DensityState& state,
                                        std::span<const Matrix> povm,
                                        std::span<const std::string> targets) {
  if (povm.empty()) {
    throw Error(ErrorKind::kIncompleteMeasurement, "empty POVM");
  }
  const auto op_dim = static_cast<std::size_t>(povm.front().rows());
  check_target_dims(state.layout(), targets, op_dim);
  Matrix sum = Matrix::Zero(idx(op_dim), idx(op_dim));
  for (const auto& e : povm) sum += e;
  if (!is_identity(sum, tol::kPovmCompleteness)) {
    throw Error(ErrorKind::kIncompleteMeasurement,
                "POVM elements do not sum to the identity");
  }

  const IndexSplit split = split_indices(state.layout(), targets);
  const HilbertLayout rest = state.layout().select(
      rest_labels(state.layout(), targets));
  std::vector<Branch> out;
  out.reserve(povm.size());
  for (const auto& e : povm) {
    Matrix reduced = trace_out_targets(split, left_apply(split, e, state.matrix()));
    // E rho is not Hermitian, but its partial trace over the E factor is.
    reduced = (0.5 * (reduced + reduced.adjoint())).eval();
    const double prob = reduced.trace().real();
    Branch b;
    b.probability = std::max(prob, 0.0);
    if (prob > tol::kZeroProbability) {
      b.state = DensityState(rest, reduced / prob);
    }
    out.push_back(std::move(b));
  }
  return out;
}

double fidelity_pure(const DensityState& state, const Vector& target) {
  if (static_cast<std::size_t>(target.size()) != state.dim()) {
    throw Error(ErrorKind::kDimensionMismatch, "target vector size mismatch");
  }
  if (std::abs(target.squaredNorm() - 1.0) > tol::kNormalization) {
    throw Error(ErrorKind::kInvalidArgument, "fidelity target is not normalized");
  }
  const double f = (target.adjoint() * state.matrix() * target)(0, 0).real();
  return std::clamp(f, 0.0, 1.0);
}

DensityState apply_noise(const DensityState& state, const std::string& target,
                         const NoiseChannelSpec& spec) {
  if (!(spec.parameter >= 0.0 && spec.parameter <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "noise parameter " + std::to_string(spec.parameter) +
                    " outside [0, 1]");
  }
  if (state.layout().dim_of(target) != 2) {
    throw Error(ErrorKind::kDimensionMismatch,
                "noise channels act on qubit subsystems only");
  }
  const std::string targets[] = {target};
  const IndexSplit split = split_indices(state.layout(), targets);
  const Matrix& rho = state.matrix();
  const std::size_t dim = state.dim();
  const double p = spec.parameter;
  Matrix out(rho.rows(), rho.cols());

  if (spec.kind == NoiseKind::kDephasing) {
    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t i = 0; i < dim; ++i) {
        const double f = split.target_of[i] == split.target_of[j] ? 1.0 : 1.0 - p;
        out(idx(i), idx(j)) = f * rho(idx(i), idx(j));
      }
    }
  } else {
    const Matrix reduced = trace_out_targets(split, rho);
    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t i = 0; i < dim; ++i) {
        Complex v = (1.0 - p) * rho(idx(i), idx(j));
        if (split.target_of[i] == split.target_of[j]) {
          v += 0.5 * p * reduced(idx(split.rest_of[i]), idx(split.rest_of[j]));
        }
        out(idx(i), idx(j)) = v;
      }
    }
  }
  return DensityState(state.layout(), std::move(out), state.normalization());
}

Complex expectation(const DensityState& state, const Matrix& op,
                    std::span<const std::string> targets) {
  check_target_dims(state.layout(), targets, static_cast<std::size_t>(op.rows()));
  const IndexSplit split = split_indices(state.layout(), targets);
  return left_apply(split, op, state.matrix()).trace();
}

}  // namespace qtele::core
