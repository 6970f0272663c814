#include "weylsteer/lie_l0.hpp"

#include <random>

#include "doctest.h"
#include "test_util.hpp"
#include "weylsteer/cartan.hpp"

using namespace weylsteer;
using weylsteer::testing::kPi;

TEST_CASE("generator matrices are (i/2) Pauli products, traceless") {
  const ComplexScalar half_i(0, 0.5);
  const Mat4c x1 = generator_matrix(GeneratorLabel::X1);
  CHECK(max_abs(Mat4c(x1 - half_i * pauli_on_qubit(PauliAxis::x, 1).mat())) == 0.0);
  const Mat4c xx = generator_matrix(GeneratorLabel::XX);
  const Mat4c sxsx = pauli_on_qubit(PauliAxis::x, 1).mat() *
                     pauli_on_qubit(PauliAxis::x, 2).mat();
  CHECK(max_abs(Mat4c(xx - half_i * sxsx)) == 0.0);
  for (GeneratorLabel l : kAllGenerators) {
    const Mat4c m = generator_matrix(l);
    CHECK(std::abs(m.trace()) == 0.0);
    CHECK(max_abs(Mat4c(m + m.adjoint())) == 0.0);  // anti-Hermitian
  }
}

TEST_CASE("commutator table matches brute-force matrix commutators") {
  for (GeneratorLabel a : kAllGenerators) {
    for (GeneratorLabel b : kAllGenerators) {
      const Mat4c ma = generator_matrix(a);
      const Mat4c mb = generator_matrix(b);
      const Mat4c brute = ma * mb - mb * ma;
      const Mat4c table = commutator(a, b).to_matrix();
      CHECK(max_abs(Mat4c(brute - table)) <= 1e-14);
    }
  }
}

TEST_CASE("commutator spot values") {
  const L0Element e1 = commutator(GeneratorLabel::X1, GeneratorLabel::YY);
  CHECK(e1[GeneratorLabel::ZY] == -1.0);
  for (GeneratorLabel l : kAllGenerators) {
    CHECK(commutator(GeneratorLabel::XX, l).to_matrix().isZero(0));
    CHECK(commutator(l, GeneratorLabel::XX).to_matrix().isZero(0));
  }
  const L0Element e2 = commutator(GeneratorLabel::YY, GeneratorLabel::YZ);
  CHECK(e2[GeneratorLabel::X2] == -1.0);
}

TEST_CASE("canonicalize_weyl fixed points and chamber projection") {
  const ClassVector a = canonicalize_weyl({kPi / 2, 0, 0});
  CHECK(a.c1 == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(a.c2 == 0.0);
  CHECK(a.c3 == 0.0);

  const ClassVector zero = canonicalize_weyl({0, 0, 0});
  CHECK(zero.c1 == 0.0);

  const ClassVector b = canonicalize_weyl({3 * kPi / 4, 0, 0});
  CHECK(b.c1 == doctest::Approx(kPi / 4).epsilon(1e-14));
  CHECK(b.c2 == 0.0);
  CHECK(b.c3 == 0.0);
}

TEST_CASE("canonicalize_weyl is idempotent and preserves the invariants") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> dist(-2 * kPi, 2 * kPi);
  for (int trial = 0; trial < 1000; ++trial) {
    const ClassVector c{dist(rng), dist(rng), dist(rng)};
    const ClassVector cc = canonicalize_weyl(c);
    CHECK(in_weyl_chamber(cc));
    const ClassVector ccc = canonicalize_weyl(cc);
    CHECK(std::abs(cc.c1 - ccc.c1) < 1e-12);
    CHECK(std::abs(cc.c2 - ccc.c2) < 1e-12);
    CHECK(std::abs(cc.c3 - ccc.c3) < 1e-12);
    CHECK(invariants_distance(invariants_from_class(c), invariants_from_class(cc)) <
          1e-10);
  }
}

TEST_CASE("canonicalize_weyl handles chamber-boundary orbits") {
  // (pi, pi, pi) is the identity class.
  const ClassVector c = canonicalize_weyl({kPi, kPi, kPi});
  CHECK(c.c1 == 0.0);
  CHECK(c.c2 == 0.0);
  CHECK(c.c3 == 0.0);
  // boundary c1 + c2 = pi stays put
  const ClassVector b = canonicalize_weyl({0.7 * kPi, 0.3 * kPi, 0.1 * kPi});
  CHECK(b.c1 + b.c2 <= kPi + 1e-12);
  CHECK(in_weyl_chamber(b));
}
