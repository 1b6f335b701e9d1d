#pragma once

// Small dense real-symmetric linear algebra on top of Eigen storage.
//
// jacobi_eigen is a self-contained cyclic Jacobi solver; everything that
// needs a spectral decomposition in this library (Gibbs states, matrix
// square roots, concurrence) goes through it.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "chargeq/errors.hpp"

namespace chargeq {

template <typename Scalar>
using Matrix4 = Eigen::Matrix<Scalar, 4, 4>;
template <typename Scalar>
using Vector4 = Eigen::Matrix<Scalar, 4, 1>;

using Matrix4d = Matrix4<double>;
using Vector4d = Vector4<double>;

/// Relative symmetry tolerance accepted by jacobi_eigen.
inline constexpr double kSymmetryTolerance = 1e-12;
/// Eigenvalues in [-kPsdClipTolerance, 0) are treated as zero by psd_sqrt.
inline constexpr double kPsdClipTolerance = 1e-12;
/// Jacobi stops once max |offdiag| <= kJacobiTolerance * max |entry|.
inline constexpr double kJacobiTolerance = 1e-14;

template <typename Scalar, int Dim>
struct EigenSystem {
  Eigen::Matrix<Scalar, Dim, 1> values;    ///< ascending
  Eigen::Matrix<Scalar, Dim, Dim> vectors; ///< column i pairs with values(i)
};

template <typename Derived>
typename Derived::Scalar max_abs(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.size() == 0) return Scalar(0);
  return m.cwiseAbs().maxCoeff();
}

/// Largest |m(i,j) - m(j,i)|.
template <typename Derived>
typename Derived::Scalar max_asymmetry(const Eigen::MatrixBase<Derived>& m) {
  return max_abs(m - m.transpose());
}

/// Flip the sign of `v` so that its largest-magnitude amplitude is positive.
/// Among near-ties (within 1e-12 relative) the first index wins.
template <typename Derived>
void fix_sign(Eigen::MatrixBase<Derived>& v) {
  using Scalar = typename Derived::Scalar;
  using std::abs;
  const Scalar largest = max_abs(v);
  if (largest == Scalar(0)) return;
  const Scalar cutoff = largest - Scalar(1e-12) * largest;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (abs(v(i)) >= cutoff) {
      if (v(i) < Scalar(0)) v = -v;
      return;
    }
  }
}

template <typename Derived>
void check_square(const Eigen::MatrixBase<Derived>& m, const char* who) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    std::ostringstream msg;
    msg << who << ": expected a non-empty square matrix, got " << m.rows() << "x" << m.cols();
    throw DimensionMismatch(msg.str());
  }
}

template <typename Derived>
void check_symmetric(const Eigen::MatrixBase<Derived>& m, const char* who) {
  using Scalar = typename Derived::Scalar;
  using std::max;
  const Scalar asym = max_asymmetry(m);
  const Scalar bound = Scalar(kSymmetryTolerance) * max(Scalar(1), max_abs(m));
  if (!(asym <= bound)) {
    std::ostringstream msg;
    msg << who << ": matrix is not symmetric (max asymmetry " << asym << ")";
    throw ContractViolation(msg.str(), static_cast<double>(asym));
  }
}

/// Eigendecomposition of a real symmetric matrix by cyclic Jacobi rotations.
///
/// Values come back ascending; ties keep the order in which the rotations
/// left them. Each eigenvector has its largest amplitude made positive, but
/// callers should not rely on eigenvector signs beyond that.
template <typename Derived>
EigenSystem<typename Derived::Scalar, Derived::RowsAtCompileTime> jacobi_eigen(
    const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  constexpr int Dim = Derived::RowsAtCompileTime;
  using Mat = Eigen::Matrix<Scalar, Dim, Dim>;
  using std::abs;
  using std::sqrt;

  check_square(m, "jacobi_eigen");
  if (!m.allFinite()) throw ContractViolation("jacobi_eigen: matrix has non-finite entries");
  check_symmetric(m, "jacobi_eigen");

  const Eigen::Index n = m.rows();
  Mat a = (m + m.transpose()) / Scalar(2);
  Mat v = Mat::Identity(n, n);

  const Scalar tol = Scalar(kJacobiTolerance) * max_abs(a);
  auto max_off = [&] {
    Scalar off(0);
    for (Eigen::Index p = 0; p < n; ++p)
      for (Eigen::Index q = p + 1; q < n; ++q) off = std::max(off, abs(a(p, q)));
    return off;
  };

  constexpr int kMaxSweeps = 100;
  for (int sweep = 0; sweep < kMaxSweeps && max_off() > tol; ++sweep) {
    for (Eigen::Index p = 0; p < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;

        const Scalar theta = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        Scalar t;
        if (abs(theta) > Scalar(1e150)) {
          t = Scalar(1) / (Scalar(2) * theta);
        } else {
          t = Scalar(1) / (abs(theta) + sqrt(Scalar(1) + theta * theta));
          if (theta < Scalar(0)) t = -t;
        }
        const Scalar c = Scalar(1) / sqrt(Scalar(1) + t * t);
        const Scalar s = t * c;
        const Scalar tau = s / (Scalar(1) + c);

        a(p, p) -= t * apq;
        a(q, q) += t * apq;
        a(p, q) = a(q, p) = Scalar(0);
        for (Eigen::Index r = 0; r < n; ++r) {
          if (r == p || r == q) continue;
          const Scalar g = a(r, p);
          const Scalar h = a(r, q);
          a(r, p) = a(p, r) = g - s * (h + g * tau);
          a(r, q) = a(q, r) = h + s * (g - h * tau);
        }
        for (Eigen::Index r = 0; r < n; ++r) {
          const Scalar g = v(r, p);
          const Scalar h = v(r, q);
          v(r, p) = g - s * (h + g * tau);
          v(r, q) = h + s * (g - h * tau);
        }
      }
    }
  }
  if (max_off() > tol) throw InternalConsistencyError("jacobi_eigen: no convergence");

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) < a(j, j); });

  EigenSystem<Scalar, Dim> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    out.values(k) = a(src, src);
    out.vectors.col(k) = v.col(src);
    auto col = out.vectors.col(k);
    fix_sign(col);
  }
  return out;
}

/// Checked matrix product.
template <typename DerivedA, typename DerivedB>
Eigen::Matrix<typename DerivedA::Scalar, DerivedA::RowsAtCompileTime, DerivedB::ColsAtCompileTime>
mat_mul(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  if (a.cols() != b.rows()) {
    std::ostringstream msg;
    msg << "mat_mul: cannot multiply " << a.rows() << "x" << a.cols() << " by " << b.rows()
        << "x" << b.cols();
    throw DimensionMismatch(msg.str());
  }
  return a * b;
}

/// Principal square root of a symmetric positive-semidefinite matrix.
/// Eigenvalues down to -kPsdClipTolerance are clipped to zero; anything lower throws.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Derived::RowsAtCompileTime, Derived::RowsAtCompileTime>
psd_sqrt(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  using std::sqrt;
  auto es = jacobi_eigen(m);
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    Scalar& lambda = es.values(i);
    if (lambda < -Scalar(kPsdClipTolerance)) {
      std::ostringstream msg;
      msg << "psd_sqrt: matrix is not positive semidefinite (eigenvalue " << lambda << ")";
      throw NotPositiveSemidefinite(msg.str(), static_cast<double>(lambda));
    }
    lambda = lambda < Scalar(0) ? Scalar(0) : sqrt(lambda);
  }
  const auto root = (es.vectors * es.values.asDiagonal() * es.vectors.transpose()).eval();
  return (root + root.transpose()) / Scalar(2);
}

}  // namespace chargeq
