#include "weylsteer/cartan.hpp"

#include <random>

#include "doctest.h"
#include "test_util.hpp"

using namespace weylsteer;
using weylsteer::testing::kPi;

namespace {

// Independent oracle: invariants straight from the Bell-basis m matrix,
// kept separate from the library path.
LocalInvariants oracle_invariants(const Mat4c& u) {
  const ComplexScalar i(0, 1);
  const double s = 1.0 / std::sqrt(2.0);
  Mat4c b;
  b << s, -i * s, 0, 0,
       0, 0, -i * s, s,
       0, 0, -i * s, -s,
       s, i * s, 0, 0;
  const Mat4c ub = b.adjoint() * u * b;
  const Mat4c m = ub.transpose() * ub;
  const ComplexScalar det = u.determinant();
  const ComplexScalar tr = m.trace();
  return LocalInvariants{tr * tr / (16.0 * det),
                         ((tr * tr - (m * m).trace()) / (4.0 * det)).real()};
}

Mat4c bare_exchange_gate() {
  const double s = 1.0 / std::sqrt(2.0);
  Mat4c m;
  m << s, 0, 0, ComplexScalar(0, -s),
       0, s, ComplexScalar(0, -s), 0,
       0, ComplexScalar(0, -s), s, 0,
       ComplexScalar(0, -s), 0, 0, s;
  return m;
}

}  // namespace

TEST_CASE("entangler_from_class anchors") {
  CHECK(max_abs(Mat4c(entangler_from_class({0, 0, 0}).mat() - Mat4c::Identity())) <
        1e-15);
  CHECK(max_abs(Mat4c(entangler_from_class({kPi / 2, 0, 0}).mat() -
                      bare_exchange_gate())) < 1e-12);

  // brute-force exponential of the summed generator
  const ClassVector c{kPi / 2, kPi / 2, kPi / 2};
  const Mat4c sum =
      0.5 * (c.c1 * (pauli_on_qubit(PauliAxis::x, 1).mat() *
                     pauli_on_qubit(PauliAxis::x, 2).mat()) +
             c.c2 * (pauli_on_qubit(PauliAxis::y, 1).mat() *
                     pauli_on_qubit(PauliAxis::y, 2).mat()) +
             c.c3 * (pauli_on_qubit(PauliAxis::z, 1).mat() *
                     pauli_on_qubit(PauliAxis::z, 2).mat()));
  CHECK(max_abs(Mat4c(entangler_from_class(c).mat() - expm_ih(sum, 1.0))) < 1e-13);
}

TEST_CASE("entangler factors over the commuting Cartan generators") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 25; ++trial) {
    const ClassVector c{dist(rng), dist(rng), dist(rng)};
    Mat4c prod = Mat4c::Identity();
    const PauliAxis axes[3] = {PauliAxis::x, PauliAxis::y, PauliAxis::z};
    const double coeff[3] = {c.c1, c.c2, c.c3};
    for (int i = 0; i < 3; ++i) {
      const Mat4c pair = pauli_on_qubit(axes[i], 1).mat() *
                         pauli_on_qubit(axes[i], 2).mat();
      prod = prod * expm_ih(Mat4c(0.5 * coeff[i] * pair), 1.0);
    }
    CHECK(max_abs(Mat4c(prod - entangler_from_class(c).mat())) < 1e-13);
  }
}

TEST_CASE("local_invariants anchors: identity, CNOT class, SWAP") {
  const LocalInvariants id = local_invariants(UnitaryMatrix(Mat4c::Identity()));
  CHECK(std::abs(id.g1 - ComplexScalar(1, 0)) < 1e-12);
  CHECK(id.g2 == doctest::Approx(3.0).epsilon(1e-12));

  const LocalInvariants cn = local_invariants(UnitaryMatrix(bare_exchange_gate()));
  CHECK(std::abs(cn.g1) < 1e-12);
  CHECK(cn.g2 == doctest::Approx(1.0).epsilon(1e-12));

  Mat4c swap = Mat4c::Zero();
  swap(0, 0) = swap(3, 3) = swap(1, 2) = swap(2, 1) = 1;
  const LocalInvariants sw = local_invariants(UnitaryMatrix(swap));
  CHECK(std::abs(sw.g1 - ComplexScalar(-1, 0)) < 1e-12);
  CHECK(sw.g2 == doctest::Approx(-3.0).epsilon(1e-12));

  // cross-check all three against the independent oracle
  for (const Mat4c& u : {Mat4c(Mat4c::Identity()), bare_exchange_gate(), swap}) {
    const LocalInvariants a = local_invariants(UnitaryMatrix(u));
    const LocalInvariants b = oracle_invariants(u);
    CHECK(invariants_distance(a, b) < 1e-13);
  }
}

TEST_CASE("invariants_from_class equals the entangler route") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> dist(-kPi, kPi);
  CHECK(invariants_distance(invariants_from_class({0, 0, 0}),
                            LocalInvariants{ComplexScalar(1, 0), 3.0}) < 1e-14);
  CHECK(invariants_distance(invariants_from_class({kPi / 2, 0, 0}),
                            LocalInvariants{ComplexScalar(0, 0), 1.0}) < 1e-14);
  // golden value for the (pi/2, pi/2, pi/2) class, from the entangler oracle
  const LocalInvariants iswapish =
      local_invariants(entangler_from_class({kPi / 2, kPi / 2, kPi / 2}));
  CHECK(invariants_distance(invariants_from_class({kPi / 2, kPi / 2, kPi / 2}),
                            iswapish) < 1e-12);
  CHECK(std::abs(iswapish.g1 - ComplexScalar(-1, 0)) < 1e-12);  // SWAP class
  for (int trial = 0; trial < 200; ++trial) {
    const ClassVector c{dist(rng), dist(rng), dist(rng)};
    CHECK(invariants_distance(invariants_from_class(c),
                              local_invariants(entangler_from_class(c))) < 1e-12);
  }
}

TEST_CASE("class_vector_from_unitary anchors") {
  const ClassVector c = class_vector_from_unitary(UnitaryMatrix(bare_exchange_gate()));
  CHECK(c.c1 == doctest::Approx(kPi / 2).epsilon(1e-10));
  CHECK(std::abs(c.c2) < 1e-10);
  CHECK(std::abs(c.c3) < 1e-10);

  std::mt19937_64 rng(31);
  const ClassVector local = class_vector_from_unitary(
      UnitaryMatrix(weylsteer::testing::random_local(rng)));
  CHECK(std::abs(local.c1) < 1e-8);
  CHECK(std::abs(local.c2) < 1e-8);
  CHECK(std::abs(local.c3) < 1e-8);

  const Mat4c xx = pauli_on_qubit(PauliAxis::x, 1).mat() *
                   pauli_on_qubit(PauliAxis::x, 2).mat();
  for (double gt : {0.2, 0.9, kPi / 2}) {
    const ClassVector line =
        class_vector_from_unitary(expm_hermitian(HermitianGenerator(0.5 * xx), gt));
    CHECK(line.c1 == doctest::Approx(gt).epsilon(1e-10));
    CHECK(std::abs(line.c2) < 1e-9);
    CHECK(std::abs(line.c3) < 1e-9);
  }
}

TEST_CASE("class extraction inverts locally dressed entanglers") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> dist(0, kPi);
  for (int trial = 0; trial < 300; ++trial) {
    const ClassVector raw{dist(rng), dist(rng), dist(rng)};
    const ClassVector target = canonicalize_weyl(raw);
    const Mat4c u = weylsteer::testing::random_local(rng) *
                    entangler_from_class(raw).mat() *
                    weylsteer::testing::random_local(rng);
    const ClassVector got = class_vector_from_unitary(UnitaryMatrix(u));
    CHECK(std::abs(got.c1 - target.c1) < 1e-8);
    CHECK(std::abs(got.c2 - target.c2) < 1e-8);
    CHECK(std::abs(got.c3 - target.c3) < 1e-8);
  }
}

TEST_CASE("local_invariants is invariant under local dressing") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> dist(0, kPi);
  for (int trial = 0; trial < 200; ++trial) {
    const ClassVector c{dist(rng), dist(rng), dist(rng)};
    const Mat4c base = entangler_from_class(c).mat();
    const Mat4c dressed = weylsteer::testing::random_local(rng) * base *
                          weylsteer::testing::random_local(rng);
    CHECK(invariants_distance(local_invariants(UnitaryMatrix(base)),
                              local_invariants(UnitaryMatrix(dressed))) < 1e-10);
  }
}

TEST_CASE("canonical_cnot and assemble_cnot") {
  const Mat4c cnot = canonical_cnot().mat();
  CHECK(cnot(2, 3) == ComplexScalar(1, 0));
  CHECK(cnot(3, 2) == ComplexScalar(1, 0));

  const UnitaryMatrix assembled = assemble_cnot(UnitaryMatrix(bare_exchange_gate()));
  CHECK(max_abs(Mat4c(assembled.mat() - cnot)) < 1e-10);

  const ClassVector c = class_vector_from_unitary(assembled);
  CHECK(c.c1 == doctest::Approx(kPi / 2).epsilon(1e-9));
  CHECK(std::abs(c.c2) < 1e-9);
  CHECK(std::abs(c.c3) < 1e-9);

  // squaring the exchange gate leaves the CNOT class (identity class)
  const Mat4c twice = bare_exchange_gate() * bare_exchange_gate();
  CHECK_THROWS_AS(assemble_cnot(UnitaryMatrix(twice)), InfeasibleError);
}
