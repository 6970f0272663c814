#include "weylsteer/design.hpp"

#include <cmath>
#include <random>

#include "doctest.h"
#include "test_util.hpp"
#include "weylsteer/tables.hpp"

using namespace weylsteer;
using weylsteer::testing::kPi;

TEST_CASE("build_design_hamiltonian: direct substitution anchors") {
  const DesignModel sym{DesignVariant::sym_dc_minus, 1.0, 0.3};
  const Mat4c h = build_design_hamiltonian(sym, 0.0, 0.0).mat();
  const Mat4c expect =
      0.5 * (pauli_on_qubit(PauliAxis::x, 1).mat() -
             pauli_on_qubit(PauliAxis::y, 1).mat() +
             pauli_on_qubit(PauliAxis::x, 1).mat() *
                 pauli_on_qubit(PauliAxis::x, 2).mat() +
             pauli_on_qubit(PauliAxis::y, 1).mat() *
                 pauli_on_qubit(PauliAxis::y, 2).mat() +
             0.3 * pauli_on_qubit(PauliAxis::z, 1).mat() *
                 pauli_on_qubit(PauliAxis::z, 2).mat());
  CHECK(max_abs(Mat4c(h - expect)) < 1e-15);

  // k = 0 removes the zz exchange term entirely
  const DesignModel asym{DesignVariant::asym_dc_minus, 1.0, 0.0};
  const Mat4c ha = build_design_hamiltonian(asym, 0.2, 0.4).mat();
  const Mat4c zz = pauli_on_qubit(PauliAxis::z, 1).mat() *
                   pauli_on_qubit(PauliAxis::z, 2).mat();
  CHECK(std::abs((ha * zz).trace()) < 1e-14);  // no zz component

  // plus/minus variants differ only in the local drive sign
  const DesignModel sp{DesignVariant::sym_dc_plus, 1.0, 0.3};
  const Mat4c hp = build_design_hamiltonian(sp, 0.1, 0.2).mat();
  const Mat4c hm = build_design_hamiltonian(
      DesignModel{DesignVariant::sym_dc_minus, 1.0, 0.3}, 0.1, 0.2).mat();
  const Mat4c sy = pauli_on_qubit(PauliAxis::y, 1).mat();
  const Mat4c sy2 = pauli_on_qubit(PauliAxis::y, 2).mat();
  CHECK(max_abs(Mat4c(hp - hm - (1.0 * sy + 0.1 * sy2))) < 1e-15);
}

TEST_CASE("plus and minus variants are related by an exact local rotation") {
  // conjugation by a joint z rotation maps the minus drive onto the plus
  // drive while fixing the exchange part, so the two residual maps agree
  // pointwise
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double k = dist(rng) * 0.4;
    const double a = dist(rng), b = dist(rng), t = 1.0 + dist(rng);
    for (DesignVariant minus : {DesignVariant::sym_dc_minus, DesignVariant::asym_dc_minus}) {
      const DesignVariant plus = (minus == DesignVariant::sym_dc_minus)
                                     ? DesignVariant::sym_dc_plus
                                     : DesignVariant::asym_dc_plus;
      const Eigen::Vector3d rm =
          cnot_residual(DesignModel{minus, 1.0, k}, t, {a, b});
      const Eigen::Vector3d rp =
          cnot_residual(DesignModel{plus, 1.0, k}, t, {a, b});
      CHECK((rm - rp).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("cnot_residual anchors") {
  // bare exchange setup at the CNOT time is an exact zero of the residual
  DesignModel model{DesignVariant::sym_dc_minus, 1.0, 0.0};
  const Eigen::Vector3d r0 = cnot_residual(model, 0.0, {0.0, 0.0});
  CHECK(r0(0) == doctest::Approx(1.0).epsilon(1e-9));  // identity class g1 = 1
  CHECK(std::abs(r0(1)) < 1e-12);
  CHECK(r0(2) == doctest::Approx(2.0).epsilon(1e-9));  // g2 - 1 = 2

  // the reference row at k = 0 is a near-root
  const Eigen::Vector3d r1 =
      cnot_residual(model, 1.595776 * kPi / 2, {0.000000, 0.755502});
  CHECK(r1.norm() < 1e-6);
}

TEST_CASE("solve_design reproduces the k = 0 reference rows") {
  const DesignSolution sym =
      solve_design(DesignModel{DesignVariant::sym_dc_minus, 1.0, 0.0},
                   default_seed(DesignVariant::sym_dc_minus));
  CHECK(sym.t_pi2 == doctest::Approx(1.595776).epsilon(1e-4));
  CHECK(std::abs(sym.rabi.at("omega2")) < 1e-4);
  CHECK(sym.rabi.at("omega3") == doctest::Approx(0.755502).epsilon(1e-4));
  CHECK(sym.eta == doctest::Approx(2.5066).epsilon(1e-3));
  CHECK(sym.constraints_ok);

  const DesignSolution asym =
      solve_design(DesignModel{DesignVariant::asym_dc_minus, 1.0, 0.0},
                   default_seed(DesignVariant::asym_dc_minus));
  CHECK(asym.t_pi2 == doctest::Approx(1.553771).epsilon(1e-4));
  CHECK(std::abs(asym.rabi.at("omega2")) < 1e-4);
  CHECK(asym.rabi.at("omega4") == doctest::Approx(0.402539).epsilon(1e-4));
  CHECK(asym.eta == doctest::Approx(2.5744).epsilon(1e-3));
}

TEST_CASE("solve_design converges from perturbed seeds") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> bump(-0.10, 0.10);
  for (int trial = 0; trial < 4; ++trial) {
    DesignSolution seed = default_seed(DesignVariant::sym_dc_minus);
    seed.t_pi2 *= 1.0 + bump(rng);
    seed.rabi["omega3"] *= 1.0 + bump(rng);
    const DesignSolution sol =
        solve_design(DesignModel{DesignVariant::sym_dc_minus, 1.0, 0.05}, seed);
    CHECK(sol.t_pi2 == doctest::Approx(1.594657).epsilon(1e-4));
    CHECK(sol.rabi.at("omega2") == doctest::Approx(0.013257).epsilon(2e-4));
    CHECK(sol.rabi.at("omega3") == doctest::Approx(0.757500).epsilon(1e-4));
  }
}

TEST_CASE("plus/minus design solutions coincide") {
  for (double k : {0.0, 0.25}) {
    const DesignSolution minus = solve_design(
        DesignModel{DesignVariant::sym_dc_minus, 1.0, k}, default_seed(DesignVariant::sym_dc_minus));
    const DesignSolution plus = solve_design(
        DesignModel{DesignVariant::sym_dc_plus, 1.0, k}, default_seed(DesignVariant::sym_dc_plus));
    // the residual maps agree exactly, so both solves walk to the same root;
    // positions agree to the quadratic-degeneracy floor
    CHECK(std::abs(minus.t_pi2 - plus.t_pi2) < 1e-6);
    CHECK(std::abs(minus.rabi.at("omega3") - plus.rabi.at("omega3")) < 1e-6);
    // the minus-variant root is a root of the plus-variant residual
    const Eigen::Vector3d cross = cnot_residual(
        DesignModel{DesignVariant::sym_dc_plus, 1.0, k}, minus.t_seconds,
        {minus.rabi.at("omega2"), minus.rabi.at("omega3")});
    CHECK(cross.norm() < 1e-10);
  }
}

TEST_CASE("efficiency in table units") {
  CHECK(efficiency(1.595776 * kPi / 2, 1.0) == doctest::Approx(2.5066).epsilon(1e-4));
  CHECK(efficiency(1.553771 * kPi / 2, 1.0) == doctest::Approx(2.5744).epsilon(1e-4));
  CHECK(efficiency((4.0 / 2.5) * kPi / 2, 1.0) == doctest::Approx(2.5).epsilon(1e-14));
  // unit identity eta * t_pi2 = 4
  const DesignSolution sol =
      solve_design(DesignModel{DesignVariant::sym_dc_minus, 1.0, 0.1},
                   default_seed(DesignVariant::sym_dc_minus));
  CHECK(sol.eta * sol.t_pi2 == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("continuation_scan: single point equals solve_design") {
  const DesignModel base{DesignVariant::asym_dc_minus, 1.0, 0.0};
  const auto scan = continuation_scan(base, {0.0});
  const DesignSolution direct = solve_design(base, default_seed(base.variant));
  REQUIRE(scan.size() == 1);
  CHECK(std::abs(scan[0].t_pi2 - direct.t_pi2) < 1e-9);
}

TEST_CASE("continuation_scan walks the symmetric reference column") {
  // subset of the reference rows to keep the unit suite quick; the full
  // sweep runs in the acceptance suite
  std::vector<double> ks;
  std::vector<tables::ConstrainedRow> rows;
  for (size_t i : {size_t{0}, size_t{6}, size_t{10}, size_t{13}, size_t{16}}) {
    ks.push_back(tables::kSymmetric[i].k);
    rows.push_back(tables::kSymmetric[i]);
  }
  const auto scan =
      continuation_scan(DesignModel{DesignVariant::sym_dc_minus, 1.0, 0.0}, ks);
  REQUIRE(scan.size() == rows.size());
  for (size_t i = 0; i < rows.size(); ++i) {
    CHECK(std::abs(scan[i].t_pi2 - rows[i].t_pi2) < 1e-4);
    CHECK(std::abs(scan[i].rabi.at("omega2") - rows[i].omega2) < 1e-4);
    CHECK(std::abs(scan[i].rabi.at("omega3") - rows[i].omega_b) < 1e-4);
    CHECK(std::abs(scan[i].eta - rows[i].eta) < 1e-3);
  }
}

TEST_CASE("constraint flags") {
  // k outside the box is solved but flagged
  const auto scan = continuation_scan(
      DesignModel{DesignVariant::asym_dc_minus, 1.0, 0.0},
      {0.0, 0.1, 0.25, 0.35, 0.45, 0.5});
  CHECK(scan.back().constraints_ok == false);
  CHECK(scan.front().constraints_ok == true);
}
