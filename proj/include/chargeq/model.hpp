#pragma once

// Two capacitively coupled Cooper-pair-box charge qubits.
//
// Basis |00>, |01>, |10>, |11> with qubit 1 as the left tensor factor and
// sigma_z|0> = +|0>. Energies are in units of the mutual coupling E_m
// (k = 1), although E_m != 1 is accepted everywhere.

#include <array>
#include <cmath>
#include <optional>
#include <sstream>
#include <vector>

#include "chargeq/errors.hpp"
#include "chargeq/linalg.hpp"

namespace chargeq {

namespace pauli {

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> identity() {
  return Eigen::Matrix<Scalar, 2, 2>::Identity();
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> sigma_x() {
  Eigen::Matrix<Scalar, 2, 2> m;
  m << 0, 1, 1, 0;
  return m;
}

template <typename Scalar>
Eigen::Matrix<Scalar, 2, 2> sigma_z() {
  Eigen::Matrix<Scalar, 2, 2> m;
  m << 1, 0, 0, -1;
  return m;
}

/// a (x) b for 2x2 factors; `a` acts on qubit 1.
template <typename Scalar>
Matrix4<Scalar> kron(const Eigen::Matrix<Scalar, 2, 2>& a, const Eigen::Matrix<Scalar, 2, 2>& b) {
  Matrix4<Scalar> out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.template block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

}  // namespace pauli

template <typename Scalar = double>
struct QubitParams {
  Scalar e_c1{0};
  Scalar e_c2{0};
  Scalar e_j1{0};
  Scalar e_j2{0};
  Scalar e_m{1};
  Scalar n_g1{0.5};
  Scalar n_g2{0.5};

  void validate() const {
    using std::isfinite;
    if (!(isfinite(e_c1) && isfinite(e_c2) && isfinite(e_j1) && isfinite(e_j2) && isfinite(e_m) &&
          isfinite(n_g1) && isfinite(n_g2)))
      throw DomainError("QubitParams: all parameters must be finite");
    if (!(e_m > Scalar(0))) throw DomainError("QubitParams: e_m must be > 0");
  }
};

namespace detail {

template <typename Scalar>
void require_coupling(Scalar e_m) {
  using std::isfinite;
  if (!(e_m > Scalar(0)) || !isfinite(e_m))
    throw DomainError("mutual coupling energy e_m must be finite and > 0");
}

// -1/2 (hz1 sz1 + hz2 sz2 + ej1 sx1 + ej2 sx2 - 2 em szz)
template <typename Scalar>
Matrix4<Scalar> assemble_hamiltonian(Scalar hz1, Scalar hz2, Scalar ej1, Scalar ej2, Scalar em) {
  using namespace pauli;
  const auto i2 = identity<Scalar>();
  const auto sx = sigma_x<Scalar>();
  const auto sz = sigma_z<Scalar>();
  Matrix4<Scalar> h = hz1 * kron(sz, i2);
  h += hz2 * kron(i2, sz);
  h += ej1 * kron(sx, i2);
  h += ej2 * kron(i2, sx);
  h -= Scalar(2) * em * kron(sz, sz);
  return Scalar(-0.5) * h;
}

}  // namespace detail

/// Full Hamiltonian away from the charge-degeneracy point.
template <typename Scalar>
Matrix4<Scalar> build_full_hamiltonian(const QubitParams<Scalar>& p) {
  p.validate();
  const Scalar half(0.5);
  const Scalar hz1 = Scalar(4) * p.e_c1 * (half - p.n_g1) + Scalar(2) * p.e_m * (half - p.n_g2);
  const Scalar hz2 = Scalar(4) * p.e_c2 * (half - p.n_g2) + Scalar(2) * p.e_m * (half - p.n_g1);
  return detail::assemble_hamiltonian(hz1, hz2, p.e_j1, p.e_j2, p.e_m);
}

/// Hamiltonian at n_g1 = n_g2 = 1/2, where the charging energies drop out.
template <typename Scalar>
Matrix4<Scalar> build_degenerate_hamiltonian(Scalar e_j1, Scalar e_j2, Scalar e_m) {
  detail::require_coupling(e_m);
  return detail::assemble_hamiltonian(Scalar(0), Scalar(0), e_j1, e_j2, e_m);
}

/// Below this |E_J1 -+ E_J2| the a-coefficients are reported as degenerate limits.
template <typename Scalar>
Scalar degeneracy_tolerance(Scalar e_j1, Scalar e_j2) {
  using std::abs;
  using std::max;
  return Scalar(1e-9) * max(Scalar(1), abs(e_j1) + abs(e_j2));
}

/// Closed-form eigenpairs of the degenerate-point Hamiltonian.
///
/// Labels: Psi1 (-sqrt(A)/2), Psi2 (+sqrt(A)/2), Psi3 (+sqrt(B)/2),
/// Psi4 (-sqrt(B)/2), with A = (EJ1-EJ2)^2 + 4Em^2, B = (EJ1+EJ2)^2 + 4Em^2.
///
/// The states are built from r2 = a2 = 1/a1 and r4 = a4 = 1/a3 written as
/// (EJ1 -+ EJ2)/(sqrt(A|B) + 2Em), which stay finite at EJ1 = +-EJ2 and
/// land on the Bell states there:
///   Psi1 ~ r2(|00>-|11>) - (|01>-|10>)    Psi2 ~ (|00>-|11>) + r2(|01>-|10>)
///   Psi3 ~ (|00>+|11>) - r4(|01>+|10>)    Psi4 ~ r4(|00>+|11>) + (|01>+|10>)
template <typename Scalar = double>
struct AnalyticEigensystem {
  Scalar a_big{};
  Scalar b_big{};
  std::array<Scalar, 4> energies{};
  /// a1..a4; nullopt where the closed form is 0/0 or x/0 (degenerate limit).
  std::array<std::optional<Scalar>, 4> coeffs{};
  /// N1..N4 of the unnormalized coefficient-form vectors; nullopt alongside the coefficient.
  std::array<std::optional<Scalar>, 4> norms{};
  /// Columns are Psi1..Psi4, unit norm, largest amplitude positive.
  Matrix4<Scalar> states = Matrix4<Scalar>::Zero();

  bool difference_degenerate() const { return !coeffs[0].has_value(); }
  bool sum_degenerate() const { return !coeffs[2].has_value(); }
};

template <typename Scalar>
AnalyticEigensystem<Scalar> analytic_eigensystem(Scalar e_j1, Scalar e_j2, Scalar e_m) {
  using std::abs;
  using std::hypot;
  using std::sqrt;
  detail::require_coupling(e_m);

  const Scalar diff = e_j1 - e_j2;
  const Scalar sum = e_j1 + e_j2;
  const Scalar two_em = Scalar(2) * e_m;
  const Scalar root_a = hypot(diff, two_em);
  const Scalar root_b = hypot(sum, two_em);
  const Scalar eps = degeneracy_tolerance(e_j1, e_j2);

  AnalyticEigensystem<Scalar> es;
  es.a_big = diff * diff + two_em * two_em;
  es.b_big = sum * sum + two_em * two_em;
  es.energies = {-root_a / 2, root_a / 2, root_b / 2, -root_b / 2};

  auto coeff_norm = [](Scalar a) { return sqrt(Scalar(2) + Scalar(2) * a * a); };
  if (abs(diff) > eps) {
    const Scalar a1 = (root_a + two_em) / diff;
    const Scalar a2 = (root_a - two_em) / diff;
    es.coeffs[0] = a1;
    es.coeffs[1] = a2;
    es.norms[0] = coeff_norm(a1);
    es.norms[1] = coeff_norm(a2);
  }
  if (abs(sum) > eps) {
    const Scalar a3 = (root_b + two_em) / sum;
    const Scalar a4 = (root_b - two_em) / sum;
    es.coeffs[2] = a3;
    es.coeffs[3] = a4;
    es.norms[2] = coeff_norm(a4);  // Psi3 carries a4
    es.norms[3] = coeff_norm(a3);  // Psi4 carries a3
  }

  const Scalar r2 = diff / (root_a + two_em);
  const Scalar r4 = sum / (root_b + two_em);
  Vector4<Scalar> psi;
  auto store = [&](int col) {
    psi /= psi.norm();
    fix_sign(psi);
    es.states.col(col) = psi;
  };
  psi << r2, -1, 1, -r2;
  store(0);
  psi << 1, r2, -r2, -1;
  store(1);
  psi << 1, -r4, -r4, 1;
  store(2);
  psi << r4, 1, 1, r4;
  store(3);
  return es;
}

/// Eigenpairs for identical qubits (EJ1 = EJ2 = EJ): energies -Em, +Em, +sqrt(D), -sqrt(D).
template <typename Scalar = double>
struct IdenticalEigensystem {
  Scalar d_big{};
  /// xi_+ = (Em + sqrt(D))/EJ; nullopt at EJ = 0.
  std::optional<Scalar> xi_plus;
  /// xi_- = (Em - sqrt(D))/EJ = -EJ/(Em + sqrt(D)); limit 0 at EJ = 0.
  Scalar xi_minus{};
  std::optional<Scalar> norm_plus;   ///< N+ of psi3
  std::optional<Scalar> norm_minus;  ///< N- of psi4
  std::array<Scalar, 4> energies{};
  Matrix4<Scalar> states = Matrix4<Scalar>::Zero();
  /// Set at EJ = 0, where psi3/psi4 are the limits (|00>+|11>)/sqrt2 and (|01>+|10>)/sqrt2.
  bool degenerate = false;
};

template <typename Scalar>
IdenticalEigensystem<Scalar> identical_eigensystem(Scalar e_j, Scalar e_m) {
  using std::abs;
  using std::hypot;
  using std::sqrt;
  detail::require_coupling(e_m);

  IdenticalEigensystem<Scalar> es;
  const Scalar root_d = hypot(e_m, e_j);
  es.d_big = e_m * e_m + e_j * e_j;
  es.energies = {-e_m, e_m, root_d, -root_d};
  es.xi_minus = -e_j / (e_m + root_d);
  es.norm_plus = sqrt(Scalar(2) + Scalar(2) * es.xi_minus * es.xi_minus);
  es.degenerate = abs(e_j) <= degeneracy_tolerance(e_j, e_j);
  if (!es.degenerate) {
    const Scalar xi_plus = (e_m + root_d) / e_j;
    es.xi_plus = xi_plus;
    es.norm_minus = sqrt(Scalar(2) + Scalar(2) * xi_plus * xi_plus);
  }

  const Scalar h = Scalar(1) / sqrt(Scalar(2));
  es.states.col(0) << 0, h, -h, 0;
  es.states.col(1) << h, 0, 0, -h;

  Vector4<Scalar> psi;
  psi << 1, es.xi_minus, es.xi_minus, 1;
  psi /= psi.norm();
  fix_sign(psi);
  es.states.col(2) = psi;
  // (1, xi+, xi+, 1) rescaled by 1/xi+ = -xi-.
  psi << -es.xi_minus, 1, 1, -es.xi_minus;
  psi /= psi.norm();
  fix_sign(psi);
  es.states.col(3) = psi;
  return es;
}

template <typename Scalar = double>
struct GroundStateInfo {
  Scalar energy{};
  /// One state, or two spanning the ground eigenspace when degenerate.
  std::vector<Vector4<Scalar>> states;
  /// Analytic labels (1..4) of `states`.
  std::vector<int> labels;
  bool degenerate = false;
};

/// Ground eigenspace of the degenerate-point Hamiltonian: Psi4 for EJ1*EJ2 > 0,
/// Psi1 for EJ1*EJ2 < 0, and both when the two levels tie.
template <typename Scalar>
GroundStateInfo<Scalar> ground_state(Scalar e_j1, Scalar e_j2, Scalar e_m) {
  using std::abs;
  using std::sqrt;
  const auto es = analytic_eigensystem(e_j1, e_j2, e_m);
  const Scalar root_a = sqrt(es.a_big);
  const Scalar root_b = sqrt(es.b_big);
  // |sqrt(B) - sqrt(A)| / 2 without cancellation.
  const Scalar gap = Scalar(2) * abs(e_j1 * e_j2) / (root_a + root_b);

  GroundStateInfo<Scalar> info;
  if (gap <= degeneracy_tolerance(e_j1, e_j2)) {
    info.degenerate = true;
    info.energy = std::min(es.energies[0], es.energies[3]);
    info.states = {es.states.col(0), es.states.col(3)};
    info.labels = {1, 4};
  } else if (e_j1 * e_j2 > Scalar(0)) {
    info.energy = es.energies[3];
    info.states = {es.states.col(3)};
    info.labels = {4};
  } else {
    info.energy = es.energies[0];
    info.states = {es.states.col(0)};
    info.labels = {1};
  }
  return info;
}

}  // namespace chargeq
