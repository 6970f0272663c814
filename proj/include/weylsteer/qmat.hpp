#pragma once

#include <Eigen/Dense>
#include <complex>

#include "weylsteer/errors.hpp"

namespace weylsteer {

using ComplexScalar = std::complex<double>;
using Mat2c = Eigen::Matrix2cd;
using Mat4c = Eigen::Matrix4cd;
using Vec4d = Eigen::Vector4d;

// Centralized tolerances.
inline constexpr double kUnitarityTol = 1e-12;
inline constexpr double kReconTol = 1e-8;
inline constexpr double kDegeneracyEps = 1e-9;
inline constexpr double kClusterTol = 1e-9;

double max_abs(const Mat4c& m);

/// 4x4 Hermitian matrix; validated on construction (H = H^dagger within
/// kUnitarityTol, scaled by the matrix magnitude).
class HermitianGenerator {
 public:
  explicit HermitianGenerator(const Mat4c& m);
  const Mat4c& mat() const { return mat_; }

 private:
  Mat4c mat_;
};

/// 4x4 unitary; validated on construction (U^dagger U = 1 and |det U| = 1
/// within kUnitarityTol).
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(const Mat4c& m);
  const Mat4c& mat() const { return mat_; }

 private:
  Mat4c mat_;
};

enum class PauliAxis { x, y, z };

Mat2c pauli(PauliAxis axis);

/// sigma_axis acting on the given qubit (1 or 2) tensored with identity
/// on the other. No i/2 prefactor.
HermitianGenerator pauli_on_qubit(PauliAxis axis, int qubit);

/// exp(-i H t) via eigendecomposition of H (exact up to floating point).
UnitaryMatrix expm_hermitian(const HermitianGenerator& h, double t);

/// Unchecked core of expm_hermitian for internal hot paths; `h` must be
/// Hermitian.
Mat4c expm_ih(const Mat4c& h, double t);

/// exp(S) for anti-Hermitian S (exactly unitary result).
Mat4c expm_skew(const Mat4c& s);

/// Global-phase-invariant gate agreement, |tr(U^dagger V)| / 4, in [0, 1].
double fidelity(const UnitaryMatrix& u, const UnitaryMatrix& v);
double fidelity_mat(const Mat4c& u, const Mat4c& v);

/// Eigenvalues of a normal matrix, via simultaneous diagonalization of its
/// commuting Hermitian parts. Near-degenerate eigenvalues of the Hermitian
/// part are clustered with `cluster_tol` before the second stage.
Eigen::Vector4cd eig_normal(const Mat4c& m, double cluster_tol = kClusterTol);

/// Principal logarithm of a unitary; returns an anti-Hermitian matrix with
/// eigenphases in (-pi, pi].
Mat4c log_unitary(const Mat4c& u);

}  // namespace weylsteer
