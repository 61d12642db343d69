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

#include "qtele/photonics/photonics.hpp"

#include <cmath>
#include <numbers>

#include "qtele/core/error.hpp"
#include "qtele/core/operations.hpp"

namespace qtele::photonics {

namespace {

using core::Complex;
using core::HilbertLayout;
using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

double factorial(std::size_t n) { return std::tgamma(static_cast<double>(n) + 1.0); }

double binomial(std::size_t n, std::size_t k) {
  return factorial(n) / (factorial(k) * factorial(n - k));
}

Complex ipow(Complex z, std::size_t n) {
  Complex out = 1.0;
  for (std::size_t i = 0; i < n; ++i) out *= z;
  return out;
}

void check_probability(double value, const char* what) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                std::string(what) + " " + std::to_string(value) +
                    " outside [0, 1]");
  }
}

std::size_t mode_cutoff(const DensityState& state, const std::string& mode) {
  return state.layout().dim_of(mode) - 1;
}

// Applies a non-unitary (truncated) local map M rho M^dag and restores the
// trace; leakage beyond the cutoff larger than 1e-6 is an error.
DensityState apply_truncated(const DensityState& state, const Matrix& m,
                             std::span<const std::string> targets) {
  const Matrix ops[] = {m};
  const DensityState raw = core::apply_kraus(state, ops, targets);
  const double before = state.trace();
  const double after = raw.trace();
  if (before - after > 1e-6) {
    throw Error(ErrorKind::kCutoffTooSmall,
                "photonic state leaks " + std::to_string(before - after) +
                    " beyond the Fock cutoff");
  }
  const double scale = after > 0.0 ? before / after : 1.0;
  return DensityState(state.layout(), raw.matrix() * scale,
                      state.normalization());
}

DensityState pulse_in_mode(const Eigen::VectorXcd& amplitudes,
                           Polarization polarization, std::size_t cutoff) {
  PolarizationModePair pair;
  pair.cutoff = cutoff;
  pair.basis = (polarization == Polarization::kA || polarization == Polarization::kD)
                   ? PolarizationBasis::kAD
                   : PolarizationBasis::kRL;
  const bool in_first =
      polarization == Polarization::kA || polarization == Polarization::kR;
  const std::size_t levels = cutoff + 1;
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(idx(levels * levels));
  for (std::size_t n = 0; n < levels; ++n) {
    const std::size_t flat = in_first ? n * levels : n;
    psi(idx(flat)) = amplitudes(idx(n));
  }
  return DensityState::from_pure(pair_layout(pair), psi);
}

}  // namespace

double DetectorParams::dark_click_probability() const {
  return 1.0 - std::exp(-dark_count_rate_hz * gate_window_us * 1e-6);
}

double poisson_tail(double mean_photon_number, std::size_t cutoff) {
  double mass = 0.0;
  double term = std::exp(-mean_photon_number);
  for (std::size_t k = 0; k <= cutoff; ++k) {
    mass += term;
    term *= mean_photon_number / static_cast<double>(k + 1);
  }
  return std::max(0.0, 1.0 - mass);
}

std::size_t required_cutoff(double mean_photon_number, double tail) {
  std::size_t cutoff = 2;
  while (poisson_tail(mean_photon_number, cutoff) >= tail) {
    ++cutoff;
    if (cutoff > 64) {
      throw Error(ErrorKind::kCutoffTooSmall,
                  "no cutoff up to 64 bounds the Poisson tail");
    }
  }
  return cutoff;
}

HilbertLayout pair_layout(const PolarizationModePair& pair) {
  return HilbertLayout({{pair.first, pair.cutoff + 1},
                        {pair.second, pair.cutoff + 1}});
}

PolarizationModePair pair_for(const PulseConfig& config) {
  PolarizationModePair pair;
  pair.cutoff = config.fock_cutoff;
  pair.basis = (config.polarization == Polarization::kA ||
                config.polarization == Polarization::kD)
                   ? PolarizationBasis::kAD
                   : PolarizationBasis::kRL;
  return pair;
}

DensityState coherent_pulse_state(const PulseConfig& config) {
  const double n = config.mean_photon_number;
  if (!(n >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument, "mean photon number must be >= 0");
  }
  if (config.fock_cutoff < 2 ||
      poisson_tail(n, config.fock_cutoff) >= tol::kFockTruncation) {
    throw Error(ErrorKind::kCutoffTooSmall,
                "Fock cutoff " + std::to_string(config.fock_cutoff) +
                    " too small for <n> = " + std::to_string(n) +
                    "; required cutoff is " +
                    std::to_string(required_cutoff(n)));
  }
  const std::size_t levels = config.fock_cutoff + 1;
  Eigen::VectorXcd amp(idx(levels));
  const double alpha = std::sqrt(n);
  for (std::size_t k = 0; k < levels; ++k) {
    amp(idx(k)) = std::exp(-n / 2.0) * std::pow(alpha, static_cast<double>(k)) /
                  std::sqrt(factorial(k));
  }
  amp.normalize();
  return pulse_in_mode(amp, config.polarization, config.fock_cutoff);
}

DensityState fock_pulse_state(std::size_t photons, Polarization polarization,
                              std::size_t cutoff) {
  if (photons > cutoff) {
    throw Error(ErrorKind::kCutoffTooSmall,
                "Fock state |" + std::to_string(photons) +
                    "> does not fit under cutoff " + std::to_string(cutoff));
  }
  Eigen::VectorXcd amp = Eigen::VectorXcd::Zero(idx(cutoff + 1));
  amp(idx(photons)) = 1.0;
  return pulse_in_mode(amp, polarization, cutoff);
}

Matrix two_mode_transform(const Eigen::Matrix2cd& u, std::size_t cutoff) {
  const std::size_t levels = cutoff + 1;
  const std::size_t dim = levels * levels;
  Matrix m = Matrix::Zero(idx(dim), idx(dim));
  for (std::size_t n1 = 0; n1 < levels; ++n1) {
    for (std::size_t n2 = 0; n2 < levels; ++n2) {
      const std::size_t total = n1 + n2;
      if (total > cutoff) continue;
      const double in_norm = std::sqrt(factorial(n1) * factorial(n2));
      // (u00 a0 + u10 a1)^n1 (u01 a0 + u11 a1)^n2 acting on vacuum.
      for (std::size_t k1 = 0; k1 <= n1; ++k1) {
        const Complex c1 = binomial(n1, k1) * ipow(u(0, 0), k1) *
                           ipow(u(1, 0), n1 - k1);
        if (c1 == Complex(0.0)) continue;
        for (std::size_t k2 = 0; k2 <= n2; ++k2) {
          const Complex c2 = binomial(n2, k2) * ipow(u(0, 1), k2) *
                             ipow(u(1, 1), n2 - k2);
          if (c2 == Complex(0.0)) continue;
          const std::size_t m1 = k1 + k2;
          const std::size_t m2 = total - m1;
          const double out_norm = std::sqrt(factorial(m1) * factorial(m2));
          m(idx(m1 * levels + m2), idx(n1 * levels + n2)) +=
              c1 * c2 * out_norm / in_norm;
        }
      }
    }
  }
  return m;
}

Eigen::Matrix2cd beam_splitter_modes(double transmittance) {
  check_probability(transmittance, "transmittance");
  const double t = std::sqrt(transmittance);
  const Complex r(0.0, std::sqrt(1.0 - transmittance));
  Eigen::Matrix2cd u;
  u << t, r, r, t;
  return u;
}

DensityState beam_splitter(const DensityState& state, const std::string& mode_a,
                           const std::string& mode_b, double transmittance) {
  const std::size_t cutoff = mode_cutoff(state, mode_a);
  if (mode_cutoff(state, mode_b) != cutoff) {
    throw Error(ErrorKind::kDimensionMismatch,
                "beam splitter modes have different cutoffs");
  }
  const Matrix m = two_mode_transform(beam_splitter_modes(transmittance), cutoff);
  const std::string targets[] = {mode_a, mode_b};
  return apply_truncated(state, m, targets);
}

DensityState phase_shift(const DensityState& state, const std::string& mode,
                         double phi) {
  const std::size_t levels = state.layout().dim_of(mode);
  Matrix d = Matrix::Zero(idx(levels), idx(levels));
  for (std::size_t n = 0; n < levels; ++n) {
    d(idx(n), idx(n)) = std::polar(1.0, phi * static_cast<double>(n));
  }
  const core::LinearOperator op(HilbertLayout::single(mode, levels), d, true);
  const std::string targets[] = {mode};
  return core::apply_unitary(state, op, targets);
}

std::vector<Matrix> loss_kraus(double transmission, std::size_t cutoff) {
  check_probability(transmission, "transmission");
  const std::size_t levels = cutoff + 1;
  // Mode and ancilla through the beam splitter; keep <k|_anc U |0>_anc.
  const Matrix u = two_mode_transform(beam_splitter_modes(transmission), cutoff);
  std::vector<Matrix> kraus;
  kraus.reserve(levels);
  for (std::size_t k = 0; k < levels; ++k) {
    Matrix a = Matrix::Zero(idx(levels), idx(levels));
    for (std::size_t n = 0; n < levels; ++n) {
      for (std::size_t m = 0; m < levels; ++m) {
        a(idx(m), idx(n)) = u(idx(m * levels + k), idx(n * levels));
      }
    }
    kraus.push_back(std::move(a));
  }
  return kraus;
}

DensityState loss_channel(const DensityState& state, const std::string& mode,
                          double transmission) {
  const auto kraus = loss_kraus(transmission, mode_cutoff(state, mode));
  const std::string targets[] = {mode};
  const DensityState out = core::apply_kraus(state, kraus, targets);
  return DensityState(state.layout(), out.matrix(), state.normalization());
}

DensityState polarization_transform(const DensityState& state,
                                    const PolarizationModePair& pair,
                                    const Eigen::Matrix2cd& u) {
  const auto labels = pair.labels();
  return apply_truncated(state, two_mode_transform(u, pair.cutoff), labels);
}

BasisChange polarization_change_basis(const DensityState& state,
                                      const PolarizationModePair& pair,
                                      PolarizationBasis to) {
  if (pair.basis == to) return BasisChange{state, pair, true};
  const double s = 1.0 / std::numbers::sqrt2;
  Eigen::Matrix2cd u;
  if (to == PolarizationBasis::kRL) {
    // A = (R + L)/sqrt2, D = (L - R)/sqrt2.
    u << s, -s, s, s;
  } else {
    u << s, s, -s, s;
  }
  PolarizationModePair out_pair = pair;
  out_pair.basis = to;
  return BasisChange{polarization_transform(state, pair, u), out_pair, false};
}

DensityState depolarize_polarization(const DensityState& state,
                                     const PolarizationModePair& pair, double p) {
  check_probability(p, "depolarization");
  if (p == 0.0) return state;
  const Complex i(0.0, 1.0);
  Eigen::Matrix2cd x, y, z;
  x << 0, 1, 1, 0;
  y << 0, -i, i, 0;
  z << 1, 0, 0, -1;
  const auto labels = pair.labels();
  Matrix acc = (1.0 - 0.75 * p) * state.matrix();
  for (const auto& pauli : {x, y, z}) {
    acc += 0.25 * p * polarization_transform(state, pair, pauli).matrix();
  }
  return DensityState(state.layout(), std::move(acc), state.normalization());
}

std::array<Matrix, 4> click_povm(const DetectorParams& params, std::size_t cutoff) {
  check_probability(params.efficiency, "detector efficiency");
  if (!(params.dark_count_rate_hz >= 0.0) || !(params.gate_window_us >= 0.0)) {
    throw Error(ErrorKind::kInvalidArgument,
                "dark-count rate and gate window must be >= 0");
  }
  const double dark = params.dark_click_probability();
  const std::size_t levels = cutoff + 1;
  Eigen::VectorXd silent(idx(levels));
  for (std::size_t n = 0; n < levels; ++n) {
    silent(idx(n)) =
        std::pow(1.0 - params.efficiency, static_cast<double>(n)) * (1.0 - dark);
  }
  std::array<Matrix, 4> povm;
  for (std::size_t o = 0; o < 4; ++o) {
    const ClickOutcome outcome = ClickOutcome::from_index(o);
    Matrix e = Matrix::Zero(idx(levels * levels), idx(levels * levels));
    for (std::size_t na = 0; na < levels; ++na) {
      for (std::size_t nd = 0; nd < levels; ++nd) {
        const double fa = outcome.clicked_a ? 1.0 - silent(idx(na)) : silent(idx(na));
        const double fd = outcome.clicked_d ? 1.0 - silent(idx(nd)) : silent(idx(nd));
        const std::size_t flat = na * levels + nd;
        e(idx(flat), idx(flat)) = fa * fd;
      }
    }
    povm[o] = std::move(e);
  }
  return povm;
}

double mean_photon_number(const DensityState& state, const std::string& mode) {
  const Eigen::VectorXd p = photon_number_distribution(state, mode);
  double mean = 0.0;
  for (Index n = 0; n < p.size(); ++n) mean += static_cast<double>(n) * p(n);
  return mean;
}

Eigen::VectorXd photon_number_distribution(const DensityState& state,
                                           const std::string& mode) {
  const std::string keep[] = {mode};
  const DensityState reduced = core::partial_trace(state, keep);
  return reduced.matrix().diagonal().real();
}

}  // namespace qtele::photonics
