#include "weylsteer/qmat.hpp"

#include <cmath>

namespace weylsteer {

double max_abs(const Mat4c& m) { return m.cwiseAbs().maxCoeff(); }

HermitianGenerator::HermitianGenerator(const Mat4c& m) : mat_(m) {
  const double scale = std::max(1.0, max_abs(m));
  if (max_abs(m - m.adjoint()) > kUnitarityTol * scale) {
    throw NumericalError("HermitianGenerator: matrix is not Hermitian, |H - H^+| = " +
                         std::to_string(max_abs(m - m.adjoint())));
  }
  mat_ = 0.5 * (m + m.adjoint().eval());
}

UnitaryMatrix::UnitaryMatrix(const Mat4c& m) : mat_(m) {
  const double dev = max_abs(m.adjoint() * m - Mat4c::Identity());
  if (dev > kUnitarityTol) {
    throw NumericalError("UnitaryMatrix: U^+ U deviates from identity by " +
                         std::to_string(dev));
  }
  const double det_dev = std::abs(std::abs(m.determinant()) - 1.0);
  if (det_dev > kUnitarityTol) {
    throw NumericalError("UnitaryMatrix: |det U| deviates from 1 by " +
                         std::to_string(det_dev));
  }
}

Mat2c pauli(PauliAxis axis) {
  Mat2c m;
  switch (axis) {
    case PauliAxis::x: m << 0, 1, 1, 0; break;
    case PauliAxis::y: m << 0, ComplexScalar(0, -1), ComplexScalar(0, 1), 0; break;
    case PauliAxis::z: m << 1, 0, 0, -1; break;
  }
  return m;
}

HermitianGenerator pauli_on_qubit(PauliAxis axis, int qubit) {
  if (qubit != 1 && qubit != 2) {
    throw std::invalid_argument("pauli_on_qubit: qubit must be 1 or 2");
  }
  const Mat2c s = pauli(axis);
  const Mat2c id = Mat2c::Identity();
  Mat4c out;
  const Mat2c& a = (qubit == 1) ? s : id;
  const Mat2c& b = (qubit == 1) ? id : s;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return HermitianGenerator(out);
}

Mat4c expm_ih(const Mat4c& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat4c> es(h);
  Eigen::Vector4cd phases;
  for (int i = 0; i < 4; ++i) {
    phases(i) = std::polar(1.0, -es.eigenvalues()(i) * t);
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Mat4c expm_skew(const Mat4c& s) {
  return expm_ih(Mat4c(ComplexScalar(0, 1) * s), 1.0);
}

UnitaryMatrix expm_hermitian(const HermitianGenerator& h, double t) {
  return UnitaryMatrix(expm_ih(h.mat(), t));
}

double fidelity_mat(const Mat4c& u, const Mat4c& v) {
  return std::abs((u.adjoint() * v).trace()) / 4.0;
}

double fidelity(const UnitaryMatrix& u, const UnitaryMatrix& v) {
  return fidelity_mat(u.mat(), v.mat());
}

namespace {

// Common orthonormal eigenbasis of a commuting Hermitian pair (a, b):
// diagonalize a, then diagonalize b restricted to each near-degenerate
// eigenspace of a.
void commuting_pair_eigs(const Mat4c& a, const Mat4c& b, double cluster_tol,
                         Vec4d& av, Vec4d& bv, Mat4c& vecs) {
  Eigen::SelfAdjointEigenSolver<Mat4c> es(a);
  Mat4c v = es.eigenvectors();
  const Vec4d lam = es.eigenvalues();
  int i = 0;
  while (i < 4) {
    int j = i + 1;
    while (j < 4 && lam(j) - lam(j - 1) < cluster_tol) ++j;
    const int n = j - i;
    if (n > 1) {
      const Eigen::MatrixXcd sub = v.middleCols(i, n);
      Eigen::MatrixXcd bsub = sub.adjoint() * b * sub;
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esb(bsub);
      v.middleCols(i, n) = sub * esb.eigenvectors();
    }
    i = j;
  }
  vecs = v;
  for (int c = 0; c < 4; ++c) {
    av(c) = (v.col(c).adjoint() * a * v.col(c))(0).real();
    bv(c) = (v.col(c).adjoint() * b * v.col(c))(0).real();
  }
}

}  // namespace

Eigen::Vector4cd eig_normal(const Mat4c& m, double cluster_tol) {
  const Mat4c a = 0.5 * (m + m.adjoint().eval());
  const Mat4c b = ComplexScalar(0, -0.5) * (m - m.adjoint().eval());
  Vec4d av, bv;
  Mat4c vecs;
  commuting_pair_eigs(a, b, cluster_tol, av, bv, vecs);
  Eigen::Vector4cd out;
  for (int i = 0; i < 4; ++i) out(i) = ComplexScalar(av(i), bv(i));
  return out;
}

Mat4c log_unitary(const Mat4c& u) {
  const Mat4c a = 0.5 * (u + u.adjoint().eval());
  const Mat4c b = ComplexScalar(0, -0.5) * (u - u.adjoint().eval());
  Vec4d av, bv;
  Mat4c vecs;
  commuting_pair_eigs(a, b, kClusterTol, av, bv, vecs);
  Eigen::Vector4cd phases;
  for (int i = 0; i < 4; ++i) {
    phases(i) = ComplexScalar(0, std::atan2(bv(i), av(i)));
  }
  Mat4c out = vecs * phases.asDiagonal() * vecs.adjoint();
  return 0.5 * (out - out.adjoint().eval());
}

}  // namespace weylsteer
