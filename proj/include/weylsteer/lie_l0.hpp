#pragma once

#include <array>

#include "weylsteer/qmat.hpp"

namespace weylsteer {

// Seven-generator subalgebra of su(4) closed under commutation, with the
// two-qubit exchange terms and one homogeneous pair of local operators.
enum class GeneratorLabel { X1 = 0, X2, XX, YY, ZZ, YZ, ZY };

inline constexpr int kGeneratorCount = 7;
inline constexpr std::array<GeneratorLabel, kGeneratorCount> kAllGenerators = {
    GeneratorLabel::X1, GeneratorLabel::X2, GeneratorLabel::XX,
    GeneratorLabel::YY, GeneratorLabel::ZZ, GeneratorLabel::YZ,
    GeneratorLabel::ZY};

const char* generator_name(GeneratorLabel label);

/// Element of the subalgebra as coefficients over the seven generators.
struct L0Element {
  std::array<double, kGeneratorCount> coeffs{};

  static L0Element zero() { return {}; }
  static L0Element unit(GeneratorLabel label, double scale = 1.0) {
    L0Element e;
    e.coeffs[static_cast<int>(label)] = scale;
    return e;
  }
  double operator[](GeneratorLabel label) const {
    return coeffs[static_cast<int>(label)];
  }
  Mat4c to_matrix() const;
};

/// (i/2) times the corresponding Pauli product; anti-Hermitian, traceless.
Mat4c generator_matrix(GeneratorLabel label);

/// Commutator [a, b] from the closed algebra table.
L0Element commutator(GeneratorLabel a, GeneratorLabel b);

/// Local-equivalence class coordinates (radians).
struct ClassVector {
  double c1 = 0, c2 = 0, c3 = 0;
};

/// True when c satisfies the canonical chamber conditions:
/// pi > c1 >= c2 >= c3 >= 0, c1 + c2 <= pi, and c1 <= pi/2 when c3 = 0.
bool in_weyl_chamber(const ClassVector& c, double tol = 1e-12);

/// Map a class vector to its canonical chamber representative. The orbit is
/// generated by coordinate permutations, simultaneous sign flips of two
/// coordinates, and per-coordinate shifts by pi; ties on the chamber
/// boundary resolve to the lexicographically smallest member.
ClassVector canonicalize_weyl(const ClassVector& c);

}  // namespace weylsteer
