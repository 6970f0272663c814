#include "weylsteer/lie_l0.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

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

const std::array<Mat4c, kGeneratorCount>& generator_table() {
  static const std::array<Mat4c, kGeneratorCount> table = [] {
    const Mat2c sx = pauli(PauliAxis::x);
    const Mat2c sy = pauli(PauliAxis::y);
    const Mat2c sz = pauli(PauliAxis::z);
    const Mat2c id = Mat2c::Identity();
    const ComplexScalar half_i(0, 0.5);
    std::array<Mat4c, kGeneratorCount> t;
    t[0] = half_i * kron(sx, id);
    t[1] = half_i * kron(id, sx);
    t[2] = half_i * kron(sx, sx);
    t[3] = half_i * kron(sy, sy);
    t[4] = half_i * kron(sz, sz);
    t[5] = half_i * kron(sy, sz);
    t[6] = half_i * kron(sz, sy);
    return t;
  }();
  return table;
}

// Commutator table: entry (row, col) is a signed generator index or -1 for 0.
struct TableEntry {
  int index;
  int sign;
};

constexpr int X1 = 0, X2 = 1, XX = 2, YY = 3, ZZ = 4, YZ = 5, ZY = 6;
constexpr TableEntry kNone{-1, 0};

constexpr TableEntry kCommutators[kGeneratorCount][kGeneratorCount] = {
    //            X1        X2       XX     YY        ZZ        YZ        ZY
    /* X1 */ {kNone, kNone, kNone, {ZY, -1}, {YZ, +1}, {ZZ, -1}, {YY, +1}},
    /* X2 */ {kNone, kNone, kNone, {YZ, -1}, {ZY, +1}, {YY, +1}, {ZZ, -1}},
    /* XX */ {kNone, kNone, kNone, kNone, kNone, kNone, kNone},
    /* YY */ {{ZY, +1}, {YZ, +1}, kNone, kNone, kNone, {X2, -1}, {X1, -1}},
    /* ZZ */ {{YZ, -1}, {ZY, -1}, kNone, kNone, kNone, {X1, +1}, {X2, +1}},
    /* YZ */ {{ZZ, +1}, {YY, -1}, kNone, {X2, +1}, {X1, -1}, kNone, kNone},
    /* ZY */ {{YY, -1}, {ZZ, +1}, kNone, {X1, +1}, {X2, -1}, kNone, kNone},
};

// The canonical-chamber conditions, scored as a max violation. Condition
// (iii) applies on the c3 = 0 face only; inputs are face-snapped first so
// the exact comparison is meaningful.
double chamber_violation(const std::array<double, 3>& c) {
  double v = 0.0;
  v = std::max(v, c[0] - kPi);
  v = std::max(v, c[1] - c[0]);
  v = std::max(v, c[2] - c[1]);
  v = std::max(v, -c[2]);
  v = std::max(v, c[0] + c[1] - kPi);
  if (c[2] == 0.0) v = std::max(v, c[0] - kPi / 2);
  return v;
}

// The shift symmetry identifies the c = 0 and c = pi faces of [0, pi).
double snap_face(double x) {
  constexpr double tol = 1e-13;
  if (std::abs(x) < tol || std::abs(x - kPi) < tol) return 0.0;
  return x;
}

double mod_pi(double x) {
  double r = std::fmod(x, kPi);
  if (r < 0) r += kPi;
  return snap_face(r);
}

}  // namespace

const char* generator_name(GeneratorLabel label) {
  static constexpr const char* names[] = {"X1", "X2", "XX", "YY",
                                          "ZZ", "YZ", "ZY"};
  return names[static_cast<int>(label)];
}

Mat4c L0Element::to_matrix() const {
  Mat4c out = Mat4c::Zero();
  for (int i = 0; i < kGeneratorCount; ++i) {
    if (coeffs[i] != 0.0) out += coeffs[i] * generator_table()[i];
  }
  return out;
}

Mat4c generator_matrix(GeneratorLabel label) {
  return generator_table()[static_cast<int>(label)];
}

L0Element commutator(GeneratorLabel a, GeneratorLabel b) {
  const TableEntry e = kCommutators[static_cast<int>(a)][static_cast<int>(b)];
  if (e.index < 0) return L0Element::zero();
  return L0Element::unit(static_cast<GeneratorLabel>(e.index),
                         static_cast<double>(e.sign));
}

bool in_weyl_chamber(const ClassVector& c, double tol) {
  std::array<double, 3> v{snap_face(c.c1), snap_face(c.c2), snap_face(c.c3)};
  return chamber_violation(v) <= tol;
}

ClassVector canonicalize_weyl(const ClassVector& c) {
  if (!std::isfinite(c.c1) || !std::isfinite(c.c2) || !std::isfinite(c.c3)) {
    throw std::invalid_argument("canonicalize_weyl: non-finite class vector");
  }
  const std::array<double, 3> base{mod_pi(c.c1), mod_pi(c.c2), mod_pi(c.c3)};

  // Reflection patterns: even-size subsets of coordinates, realized by
  // simultaneous sign flips of a pair (mod pi turns -x into pi - x).
  static constexpr int kPatterns[4][3] = {
      {0, 0, 0}, {1, 1, 0}, {1, 0, 1}, {0, 1, 1}};

  std::array<double, 3> best{};
  double best_violation = std::numeric_limits<double>::infinity();
  bool have_best = false;
  for (const auto& pattern : kPatterns) {
    std::array<double, 3> w = base;
    for (int i = 0; i < 3; ++i) {
      if (pattern[i]) w[i] = snap_face(mod_pi(kPi - w[i]));
    }
    std::sort(w.begin(), w.end(), std::greater<>());
    const double viol = chamber_violation(w);
    if (!have_best || viol < best_violation - 1e-15 ||
        (viol < best_violation + 1e-15 && w < best)) {
      best = w;
      best_violation = viol;
      have_best = true;
    }
  }
  if (best_violation > 1e-9) {
    throw NumericalError("canonicalize_weyl: no orbit member satisfies the chamber conditions");
  }
  return ClassVector{best[0], best[1], best[2]};
}

}  // namespace weylsteer
