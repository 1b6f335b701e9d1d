#pragma once

// Wootters concurrence for real two-qubit density matrices.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <sstream>

#include "chargeq/errors.hpp"
#include "chargeq/linalg.hpp"
#include "chargeq/model.hpp"
#include "chargeq/thermal.hpp"

namespace chargeq {

/// Concurrence value in [0, 1]. Raw values within 1e-12 outside the range are clipped.
template <typename Scalar = double>
class Concurrence {
 public:
  static constexpr double kClipTolerance = 1e-12;

  explicit Concurrence(Scalar raw) {
    if (!(raw >= -Scalar(kClipTolerance) && raw <= Scalar(1) + Scalar(kClipTolerance))) {
      std::ostringstream msg;
      msg << "concurrence " << raw << " outside [0, 1]";
      throw InternalConsistencyError(msg.str());
    }
    value_ = std::clamp(raw, Scalar(0), Scalar(1));
  }

  Scalar value() const noexcept { return value_; }
  operator Scalar() const noexcept { return value_; }

 private:
  Scalar value_{};
};

/// sigma_y (x) sigma_y, which is real.
template <typename Scalar = double>
Matrix4<Scalar> spin_flip_matrix() {
  Matrix4<Scalar> f = Matrix4<Scalar>::Zero();
  f(0, 3) = -1;
  f(1, 2) = 1;
  f(2, 1) = 1;
  f(3, 0) = -1;
  return f;
}

/// The four lambda_i (descending) of the concurrence formula.
///
/// For real symmetric rho, rho* = rho and with S = sqrt(rho) the operator
/// S (F rho F) S equals (S F S)^2, so lambda_i = |eig(S F S)|. This avoids
/// square roots of rounding-level eigenvalues.
template <typename Scalar>
std::array<Scalar, 4> concurrence_lambdas(const ThermalState<Scalar>& rho) {
  using std::abs;
  const Matrix4<Scalar> root = psd_sqrt(rho.matrix());
  const Matrix4<Scalar> flip = spin_flip_matrix<Scalar>();
  Matrix4<Scalar> r = root * flip * root;
  r = (r + r.transpose()).eval() / Scalar(2);
  const auto es = jacobi_eigen(r);
  std::array<Scalar, 4> lambdas{};
  for (int i = 0; i < 4; ++i) lambdas[static_cast<std::size_t>(i)] = abs(es.values(i));
  std::stable_sort(lambdas.begin(), lambdas.end(), std::greater<>());
  return lambdas;
}

template <typename Scalar>
Concurrence<Scalar> wootters_concurrence(const ThermalState<Scalar>& rho) {
  const auto l = concurrence_lambdas(rho);
  const Scalar c = l[0] - l[1] - l[2] - l[3];
  return Concurrence<Scalar>(c > Scalar(0) ? c : Scalar(0));
}

/// Complex entry point. Only matrices with vanishing imaginary parts are supported.
template <typename Scalar>
Concurrence<Scalar> wootters_concurrence(const Matrix4<std::complex<Scalar>>& rho) {
  if (rho.imag().cwiseAbs().maxCoeff() != Scalar(0))
    throw UnsupportedInput(
        "wootters_concurrence: complex density matrices are not supported (all in-scope "
        "thermal states are real)");
  return wootters_concurrence(ThermalState<Scalar>::from_matrix(rho.real()));
}

/// Concurrence of a pure state: 2 |a00 a11 - a01 a10|.
template <typename Scalar>
Concurrence<Scalar> pure_state_concurrence(const Vector4<Scalar>& amps) {
  using std::abs;
  const Scalar norm = amps.norm();
  if (!(abs(norm - Scalar(1)) <= Scalar(1e-10))) {
    std::ostringstream msg;
    msg << "pure_state_concurrence: amplitudes must have unit norm (got " << norm << ")";
    throw DomainError(msg.str());
  }
  const Scalar c = Scalar(2) * abs(amps(0) * amps(3) - amps(1) * amps(2));
  return Concurrence<Scalar>(std::min(c, Scalar(1)));
}

/// T -> 0 concurrence of the degenerate-point model.
template <typename Scalar>
Concurrence<Scalar> ground_state_concurrence(Scalar e_j1, Scalar e_j2, Scalar e_m) {
  return wootters_concurrence(zero_temperature_state(e_j1, e_j2, e_m));
}

template <typename Scalar>
Concurrence<Scalar> thermal_concurrence(Scalar e_j1, Scalar e_j2, Scalar e_m,
                                        Temperature<Scalar> t) {
  return wootters_concurrence(gibbs_state(build_degenerate_hamiltonian(e_j1, e_j2, e_m), t));
}

}  // namespace chargeq
