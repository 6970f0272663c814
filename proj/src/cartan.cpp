#include "weylsteer/cartan.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace weylsteer {

namespace {

constexpr double kPi = 3.14159265358979323846;

Mat4c kron(const Mat2c& a, const Mat2c& b) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

const Mat4c& pauli_pair(PauliAxis axis) {
  static const Mat4c xx = kron(pauli(PauliAxis::x), pauli(PauliAxis::x));
  static const Mat4c yy = kron(pauli(PauliAxis::y), pauli(PauliAxis::y));
  static const Mat4c zz = kron(pauli(PauliAxis::z), pauli(PauliAxis::z));
  switch (axis) {
    case PauliAxis::x: return xx;
    case PauliAxis::y: return yy;
    default: return zz;
  }
}

LocalInvariants invariants_of_matrix(const Mat4c& u) {
  const Mat4c& b = magic_basis();
  const Mat4c ub = b.adjoint() * u * b;
  const Mat4c m = ub.transpose() * ub;
  const ComplexScalar det = u.determinant();
  const ComplexScalar tr = m.trace();
  const ComplexScalar tr2 = (m * m).trace();
  return LocalInvariants{tr * tr / (16.0 * det),
                         ((tr * tr - tr2) / (4.0 * det)).real()};
}

}  // namespace

double invariants_distance(const LocalInvariants& a, const LocalInvariants& b) {
  return std::abs(a.g1 - b.g1) + std::abs(a.g2 - b.g2);
}

const Mat4c& magic_basis() {
  static const Mat4c b = [] {
    const ComplexScalar i(0, 1);
    const double s = 1.0 / std::sqrt(2.0);
    Mat4c m;
    m << s, -i * s, 0, 0,
         0, 0, -i * s, s,
         0, 0, -i * s, -s,
         s, i * s, 0, 0;
    return m;
  }();
  return b;
}

UnitaryMatrix entangler_from_class(const ClassVector& c) {
  const Mat4c h = 0.5 * (c.c1 * pauli_pair(PauliAxis::x) +
                         c.c2 * pauli_pair(PauliAxis::y) +
                         c.c3 * pauli_pair(PauliAxis::z));
  return UnitaryMatrix(expm_ih(h, 1.0));
}

LocalInvariants local_invariants(const UnitaryMatrix& u) {
  return invariants_of_matrix(u.mat());
}

LocalInvariants invariants_from_class(const ClassVector& c) {
  const double k1 = std::cos(c.c1) * std::cos(c.c1);
  const double k2 = std::cos(c.c2) * std::cos(c.c2);
  const double k3 = std::cos(c.c3) * std::cos(c.c3);
  const double s1 = 1.0 - k1, s2 = 1.0 - k2, s3 = 1.0 - k3;
  const double prod_c = k1 * k2 * k3;
  const double prod_s = s1 * s2 * s3;
  const double sines = std::sin(2 * c.c1) * std::sin(2 * c.c2) * std::sin(2 * c.c3);
  const ComplexScalar g1(prod_c - prod_s, -0.25 * sines);
  const double g2 = 4 * prod_c - 4 * prod_s -
                    std::cos(2 * c.c1) * std::cos(2 * c.c2) * std::cos(2 * c.c3);
  return LocalInvariants{g1, g2};
}

ClassVector class_vector_from_unitary(const UnitaryMatrix& u) {
  // Normalize to det 1 so the Bell-basis spectrum phases sum to 0 mod 2pi.
  const ComplexScalar det = u.mat().determinant();
  const Mat4c un = u.mat() / std::pow(det, 0.25);
  const Mat4c& b = magic_basis();
  const Mat4c ub = b.adjoint() * un * b;
  const Mat4c m = ub.transpose() * ub;
  const Eigen::Vector4cd ev = eig_normal(m);
  std::array<double, 4> theta;
  for (int i = 0; i < 4; ++i) theta[i] = std::arg(ev(i));

  const LocalInvariants target = invariants_of_matrix(un);

  const double sum = theta[0] + theta[1] + theta[2] + theta[3];
  const int k = static_cast<int>(std::lround(sum / (2 * kPi)));

  // Branch-shift patterns: move |k| phases by -sign(k) * 2pi so the sum is
  // zero; all subsets of size |k| are candidates.
  std::vector<std::array<double, 4>> phase_sets;
  if (k == 0) {
    phase_sets.push_back(theta);
  } else {
    const double shift = (k > 0) ? -2 * kPi : 2 * kPi;
    const int count = std::min(std::abs(k), 4);
    for (int mask = 0; mask < 16; ++mask) {
      if (__builtin_popcount(mask) != count) continue;
      std::array<double, 4> t = theta;
      for (int i = 0; i < 4; ++i)
        if (mask & (1 << i)) t[i] += shift;
      phase_sets.push_back(t);
    }
  }

  ClassVector best{};
  double best_residual = std::numeric_limits<double>::infinity();
  bool have_best = false;
  std::array<int, 4> perm{0, 1, 2, 3};
  for (const auto& phases : phase_sets) {
    std::array<int, 4> p = perm;
    std::sort(p.begin(), p.end());
    do {
      const ClassVector cand_raw{0.5 * (phases[p[1]] + phases[p[3]]),
                                 0.5 * (phases[p[0]] + phases[p[3]]),
                                 0.5 * (phases[p[2]] + phases[p[3]])};
      const ClassVector cand = canonicalize_weyl(cand_raw);
      const double r = invariants_distance(invariants_from_class(cand), target);
      const bool better =
          !have_best || r < best_residual - 1e-15 ||
          (r < best_residual + 1e-15 &&
           std::array<double, 3>{cand.c1, cand.c2, cand.c3} <
               std::array<double, 3>{best.c1, best.c2, best.c3});
      if (better) {
        best = cand;
        best_residual = r;
        have_best = true;
      }
    } while (std::next_permutation(p.begin(), p.end()));
  }
  if (!have_best || best_residual > 1e-6) {
    throw NumericalError("class_vector_from_unitary: no phase branch matches the invariants, residual " +
                         std::to_string(best_residual));
  }
  return best;
}

UnitaryMatrix canonical_cnot() {
  Mat4c m = Mat4c::Zero();
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(2, 3) = 1;
  m(3, 2) = 1;
  return UnitaryMatrix(m);
}

UnitaryMatrix assemble_cnot(const UnitaryMatrix& u) {
  const LocalInvariants inv = local_invariants(u);
  const LocalInvariants cnot_inv{ComplexScalar(0, 0), 1.0};
  if (invariants_distance(inv, cnot_inv) > 1e-6) {
    const ClassVector c = class_vector_from_unitary(u);
    std::ostringstream msg;
    msg << "assemble_cnot: input is not in the CNOT class; invariants ("
        << inv.g1.real() << (inv.g1.imag() < 0 ? " - " : " + ")
        << std::abs(inv.g1.imag()) << "i, " << inv.g2 << "), class ("
        << c.c1 / (kPi / 2) << ", " << c.c2 / (kPi / 2) << ", "
        << c.c3 / (kPi / 2) << ") in units of pi/2";
    throw InfeasibleError(msg.str());
  }
  const Mat4c s1y = pauli_on_qubit(PauliAxis::y, 1).mat();
  const Mat4c s1x = pauli_on_qubit(PauliAxis::x, 1).mat();
  const Mat4c s2x = pauli_on_qubit(PauliAxis::x, 2).mat();
  const Mat4c k1 = expm_ih(s1y, kPi / 4) * expm_ih(Mat4c(s1x - s2x), -kPi / 4);
  const Mat4c k2 = expm_ih(s1y, -kPi / 4);
  const ComplexScalar phase = std::polar(1.0, kPi / 4);
  return UnitaryMatrix(phase * k1 * u.mat() * k2);
}

}  // namespace weylsteer
