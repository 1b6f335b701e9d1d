#pragma once

// Thermal equilibrium states rho = exp(-H/T)/Z (k = 1).
//
// gibbs_state is the reference path (spectral decomposition); the closed
// form built from m1..m6 is an independent route for the degenerate-point
// Hamiltonian and is checked against it.

#include <cmath>
#include <sstream>

#include "chargeq/errors.hpp"
#include "chargeq/linalg.hpp"
#include "chargeq/model.hpp"

namespace chargeq {

/// Strictly positive temperature in units of E_m / k.
template <typename Scalar = double>
class Temperature {
 public:
  explicit Temperature(Scalar value) : value_(value) {
    using std::isfinite;
    if (!(value > Scalar(0)) || !isfinite(value)) {
      std::ostringstream msg;
      msg << "temperature must be finite and > 0 (got " << value
          << "); use zero_temperature_state for T = 0";
      throw DomainError(msg.str());
    }
  }

  Scalar value() const noexcept { return value_; }

 private:
  Scalar value_;
};

/// A validated two-qubit density matrix: real symmetric, unit trace, PSD.
template <typename Scalar = double>
class ThermalState {
 public:
  static constexpr double kTolerance = 1e-12;

  /// Validates `m` against the density-matrix invariants; throws ContractViolation otherwise.
  static ThermalState from_matrix(const Matrix4<Scalar>& m) {
    using std::abs;
    if (!m.allFinite()) throw ContractViolation("ThermalState: non-finite entries");
    const Scalar asym = max_asymmetry(m);
    if (asym > Scalar(kTolerance)) {
      std::ostringstream msg;
      msg << "ThermalState: matrix is not symmetric (max asymmetry " << asym << ")";
      throw ContractViolation(msg.str(), static_cast<double>(asym));
    }
    const Scalar trace_error = abs(m.trace() - Scalar(1));
    if (trace_error > Scalar(kTolerance)) {
      std::ostringstream msg;
      msg << "ThermalState: trace differs from 1 by " << trace_error;
      throw ContractViolation(msg.str(), static_cast<double>(trace_error));
    }
    const Scalar lowest = jacobi_eigen(m).values(0);
    if (lowest < -Scalar(kTolerance)) {
      std::ostringstream msg;
      msg << "ThermalState: negative eigenvalue " << lowest;
      throw ContractViolation(msg.str(), static_cast<double>(lowest));
    }
    return ThermalState(m);
  }

  const Matrix4<Scalar>& matrix() const noexcept { return matrix_; }
  Scalar operator()(int i, int j) const { return matrix_(i, j); }

  Scalar purity() const { return (matrix_ * matrix_).trace(); }

 private:
  explicit ThermalState(const Matrix4<Scalar>& m) : matrix_(m) {}

  Matrix4<Scalar> matrix_;
};

/// Gibbs state of a symmetric Hamiltonian. Boltzmann weights are shifted by the
/// lowest energy, so arbitrarily small temperatures do not overflow.
template <typename Scalar>
ThermalState<Scalar> gibbs_state(const Matrix4<Scalar>& h, Temperature<Scalar> t) {
  using std::exp;
  const auto es = jacobi_eigen(h);
  const Scalar e_min = es.values(0);
  Vector4<Scalar> w;
  for (int i = 0; i < 4; ++i) w(i) = exp(-(es.values(i) - e_min) / t.value());
  w /= w.sum();
  Matrix4<Scalar> rho = es.vectors * w.asDiagonal() * es.vectors.transpose();
  rho = (rho + rho.transpose()).eval() / Scalar(2);
  return ThermalState<Scalar>::from_matrix(rho);
}

/// Projector onto the ground eigenspace of `h`, mixed uniformly when degenerate.
/// Levels within `tolerance` of the lowest count as ground.
template <typename Scalar>
ThermalState<Scalar> ground_projector(const Matrix4<Scalar>& h, Scalar tolerance) {
  const auto es = jacobi_eigen(h);
  Matrix4<Scalar> rho = Matrix4<Scalar>::Zero();
  int count = 0;
  for (int i = 0; i < 4; ++i) {
    if (es.values(i) - es.values(0) > tolerance) break;
    rho += es.vectors.col(i) * es.vectors.col(i).transpose();
    ++count;
  }
  rho /= Scalar(count);
  rho = (rho + rho.transpose()).eval() / Scalar(2);
  return ThermalState<Scalar>::from_matrix(rho);
}

template <typename Scalar = double>
struct ClosedFormTerms {
  Scalar m1{}, m2{}, m3{}, m4{}, m5{}, m6{};
  Scalar x_a{}, x_b{};
  /// Partition function, always 4 * m1.
  Scalar z{};
  /// The m-terms and z are multiplied by exp(-log_scale). Zero unless
  /// max(x_a, x_b) > kOverflowThreshold.
  Scalar log_scale{};

  static constexpr double kOverflowThreshold = 700.0;
};

template <typename Scalar>
ClosedFormTerms<Scalar> closed_form_terms(Scalar e_j1, Scalar e_j2, Scalar e_m,
                                          Temperature<Scalar> t) {
  using std::cosh;
  using std::exp;
  using std::hypot;
  using std::max;
  using std::sinh;
  detail::require_coupling(e_m);

  const Scalar root_a = hypot(e_j1 - e_j2, Scalar(2) * e_m);
  const Scalar root_b = hypot(e_j1 + e_j2, Scalar(2) * e_m);

  ClosedFormTerms<Scalar> terms;
  terms.x_a = root_a / (Scalar(2) * t.value());
  terms.x_b = root_b / (Scalar(2) * t.value());
  const Scalar x_max = max(terms.x_a, terms.x_b);
  terms.log_scale = x_max > Scalar(ClosedFormTerms<Scalar>::kOverflowThreshold) ? x_max : Scalar(0);

  const Scalar shift = terms.log_scale;
  auto ch = [shift](Scalar x) {
    if (shift == Scalar(0)) return cosh(x);
    return (exp(x - shift) + exp(-x - shift)) / Scalar(2);
  };
  auto sh = [shift](Scalar x) {
    if (shift == Scalar(0)) return sinh(x);
    return (exp(x - shift) - exp(-x - shift)) / Scalar(2);
  };

  const Scalar ch_a = ch(terms.x_a), ch_b = ch(terms.x_b);
  const Scalar sh_a = sh(terms.x_a) / root_a, sh_b = sh(terms.x_b) / root_b;
  terms.m1 = (ch_a + ch_b) / Scalar(2);
  terms.m2 = e_m * (sh_a + sh_b);
  terms.m3 = (e_j1 + e_j2) * sh_b / Scalar(2);
  terms.m4 = (e_j1 - e_j2) * sh_a / Scalar(2);
  terms.m5 = (ch_b - ch_a) / Scalar(2);
  terms.m6 = e_m * (sh_a - sh_b);
  terms.z = Scalar(4) * terms.m1;
  return terms;
}

/// Thermal state of the degenerate-point Hamiltonian assembled from m1..m6.
template <typename Scalar>
ThermalState<Scalar> closed_form_density(Scalar e_j1, Scalar e_j2, Scalar e_m,
                                         Temperature<Scalar> t) {
  const auto c = closed_form_terms(e_j1, e_j2, e_m, t);
  Matrix4<Scalar> rho;
  // clang-format off
  rho << c.m1 - c.m2, c.m3 - c.m4, c.m3 + c.m4, c.m5 + c.m6,
         c.m3 - c.m4, c.m1 + c.m2, c.m5 - c.m6, c.m3 + c.m4,
         c.m3 + c.m4, c.m5 - c.m6, c.m1 + c.m2, c.m3 - c.m4,
         c.m5 + c.m6, c.m3 + c.m4, c.m3 - c.m4, c.m1 - c.m2;
  // clang-format on
  rho /= c.z;
  return ThermalState<Scalar>::from_matrix(rho);
}

/// T -> 0+ limit of the Gibbs family: the ground projector, or the equal
/// mixture of both ground projectors when the ground level is degenerate.
template <typename Scalar>
ThermalState<Scalar> zero_temperature_state(Scalar e_j1, Scalar e_j2, Scalar e_m) {
  const auto gs = ground_state(e_j1, e_j2, e_m);
  Matrix4<Scalar> rho = Matrix4<Scalar>::Zero();
  for (const auto& psi : gs.states) rho += psi * psi.transpose();
  rho /= Scalar(gs.states.size());
  return ThermalState<Scalar>::from_matrix(rho);
}

}  // namespace chargeq
