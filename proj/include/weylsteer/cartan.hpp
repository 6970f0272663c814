#pragma once

#include "weylsteer/lie_l0.hpp"
#include "weylsteer/qmat.hpp"

namespace weylsteer {

/// Pair of local invariants: complex g1 and real g2, constant on local
/// equivalence classes. (1, 3) is the identity class, (0, 1) the CNOT class,
/// (-1, -3) SWAP.
struct LocalInvariants {
  ComplexScalar g1;
  double g2;
};

double invariants_distance(const LocalInvariants& a, const LocalInvariants& b);

/// Fixed Bell-basis change used for invariant extraction. Columns:
/// (|00>+|11>, -i|00>+i|11>, -i|01>-i|10>, |01>-|10>) / sqrt(2).
const Mat4c& magic_basis();

/// exp(-(i/2)(c1 XsXs + c2 YsYs + c3 ZsZs)); the three terms commute so the
/// exponential factorizes exactly.
UnitaryMatrix entangler_from_class(const ClassVector& c);

LocalInvariants local_invariants(const UnitaryMatrix& u);

/// Closed form of the invariants as a function of the class vector; agrees
/// with local_invariants(entangler_from_class(c)) to 1e-12.
LocalInvariants invariants_from_class(const ClassVector& c);

/// Canonical class coordinates of an arbitrary two-qubit unitary, extracted
/// from the Bell-basis spectrum and verified against the invariants.
ClassVector class_vector_from_unitary(const UnitaryMatrix& u);

/// The standard CNOT permutation matrix (control on qubit 1).
UnitaryMatrix canonical_cnot();

/// Dress a CNOT-class gate at the axis point with the fixed local rotations
/// and phase that turn the bare exchange gate into the canonical CNOT.
/// Rejects inputs whose invariants deviate from the CNOT class by more than
/// 1e-6 (the exception message reports the measured class).
UnitaryMatrix assemble_cnot(const UnitaryMatrix& u);

/// U = e^{i phase} k1 u_ent k2 with k1, k2 local.
struct CartanFactorization {
  double phase;
  UnitaryMatrix k1;
  UnitaryMatrix u_ent;
  UnitaryMatrix k2;
  ClassVector klass;  // pre-canonical coordinates of u_ent
};

}  // namespace weylsteer
