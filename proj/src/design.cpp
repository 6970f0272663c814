#include "weylsteer/design.hpp"

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

struct PauliSet {
  Mat4c s1x, s1y, s1z, s2x, s2y, s2z, xx, yy, zz;
};

const PauliSet& paulis() {
  static const PauliSet p = [] {
    const Mat2c sx = pauli(PauliAxis::x);
    const Mat2c sy = pauli(PauliAxis::y);
    const Mat2c sz = pauli(PauliAxis::z);
    const Mat2c id = Mat2c::Identity();
    PauliSet s;
    s.s1x = kron(sx, id);
    s.s1y = kron(sy, id);
    s.s1z = kron(sz, id);
    s.s2x = kron(id, sx);
    s.s2y = kron(id, sy);
    s.s2z = kron(id, sz);
    s.xx = kron(sx, sx);
    s.yy = kron(sy, sy);
    s.zz = kron(sz, sz);
    return s;
  }();
  return p;
}

const LocalInvariants kCnotInvariants{ComplexScalar(0, 0), 1.0};

std::string rabi_b_name(DesignVariant v) {
  return is_symmetric(v) ? "omega3" : "omega4";
}

}  // namespace

const char* design_variant_name(DesignVariant v) {
  switch (v) {
    case DesignVariant::sym_dc_minus: return "sym-dc(-)";
    case DesignVariant::sym_dc_plus: return "sym-dc(+)";
    case DesignVariant::asym_dc_minus: return "asym-dc(-)";
    case DesignVariant::asym_dc_plus: return "asym-dc(+)";
  }
  return "?";
}

bool is_symmetric(DesignVariant v) {
  return v == DesignVariant::sym_dc_minus || v == DesignVariant::sym_dc_plus;
}

HermitianGenerator build_design_hamiltonian(const DesignModel& model,
                                            double rabi_a, double rabi_b) {
  const PauliSet& p = paulis();
  const double g = model.g;
  const double sign = (model.variant == DesignVariant::sym_dc_plus ||
                       model.variant == DesignVariant::asym_dc_plus)
                          ? 1.0
                          : -1.0;
  const Mat4c exchange = g * (p.xx + p.yy + model.k * p.zz);
  Mat4c local;
  if (is_symmetric(model.variant)) {
    // drive (g, rabi_a) on the two qubits, detuning amplitude rabi_b
    local = g * (p.s1x + sign * p.s1y) + rabi_a * (p.s2x + sign * p.s2y) +
            rabi_b * (p.s1z - p.s2z);
  } else {
    // drive (g, rabi_a); detuning g on qubit 1 and rabi_b on qubit 2
    local = g * (p.s1x + sign * p.s1y) + rabi_a * (p.s2x + sign * p.s2y) +
            g * p.s1z - rabi_b * p.s2z;
  }
  return HermitianGenerator(0.5 * (local + exchange));
}

Eigen::Vector3d cnot_residual(const DesignModel& model, double t,
                              const Eigen::Vector2d& rabi) {
  const HermitianGenerator h = build_design_hamiltonian(model, rabi(0), rabi(1));
  const LocalInvariants inv = local_invariants(expm_hermitian(h, t));
  return Eigen::Vector3d(inv.g1.real(), inv.g1.imag(), inv.g2 - 1.0);
}

double efficiency(double t_gate_seconds, double g) {
  if (!(t_gate_seconds > 0)) {
    throw std::invalid_argument("efficiency: t_gate must be > 0");
  }
  return 2 * kPi / (g * t_gate_seconds);
}

DesignSolution default_seed(DesignVariant variant) {
  DesignSolution s;
  if (is_symmetric(variant)) {
    s.t_pi2 = 1.5958;
    s.rabi = {{"omega2", 0.0}, {"omega3", 0.7555}};
  } else {
    s.t_pi2 = 1.5538;
    s.rabi = {{"omega2", 0.0}, {"omega4", 0.4025}};
  }
  return s;
}

DesignSolution solve_design(const DesignModel& model,
                            const DesignSolution& guess) {
  const double g = model.g;
  const std::string name_b = rabi_b_name(model.variant);
  Eigen::Vector3d x;  // (t_seconds, rabi_a, rabi_b)
  x(0) = guess.t_pi2 * (kPi / 2) / g;
  x(1) = guess.rabi.count("omega2") ? guess.rabi.at("omega2") * g : 0.0;
  x(2) = guess.rabi.count(name_b) ? guess.rabi.at(name_b) * g : 0.5 * g;

  const auto residual = [&](const Eigen::Vector3d& v) {
    return cnot_residual(model, v(0), Eigen::Vector2d(v(1), v(2)));
  };

  // Damped Newton with a central-difference Jacobian. The target is a
  // quadratically degenerate root of the invariant residual, so convergence
  // is linear; iterate to the numerical floor with stall detection.
  Eigen::Vector3d r = residual(x);
  double rnorm = r.norm();
  int stall = 0;
  const int max_iterations = 160;
  int it = 0;
  for (; it < max_iterations && rnorm > 1e-14; ++it) {
    Eigen::Matrix3d jac;
    for (int j = 0; j < 3; ++j) {
      const double step = 1e-6 * std::max(1.0, std::abs(x(j)));
      Eigen::Vector3d xp = x, xm = x;
      xp(j) += step;
      xm(j) -= step;
      jac.col(j) = (residual(xp) - residual(xm)) / (2 * step);
    }
    const Eigen::Vector3d dx = jac.fullPivLu().solve(r);
    if (!dx.allFinite()) break;
    // Backtracking: accept the best contraction among damped candidates.
    double best_lambda = 0.0;
    double best_norm = rnorm;
    Eigen::Vector3d best_r = r;
    for (double lambda = 1.0; lambda > 1e-3; lambda *= 0.5) {
      const Eigen::Vector3d xc = x - lambda * dx;
      const Eigen::Vector3d rc = residual(xc);
      if (rc.norm() < best_norm) {
        best_norm = rc.norm();
        best_lambda = lambda;
        best_r = rc;
        if (rc.norm() < 0.8 * rnorm) break;
      }
    }
    if (best_lambda == 0.0) break;  // no descent available
    x -= best_lambda * dx;
    stall = (best_norm > 0.99 * rnorm) ? stall + 1 : 0;
    r = best_r;
    rnorm = best_norm;
    if (stall >= 4) break;
  }

  if (rnorm > 1e-10) {
    std::ostringstream msg;
    msg << "solve_design(" << design_variant_name(model.variant)
        << ", k = " << model.k << "): no convergence, best residual " << rnorm
        << " after " << it << " iterations";
    throw NumericalError(msg.str());
  }

  DesignSolution sol;
  sol.t_seconds = x(0);
  sol.t_pi2 = x(0) * g / (kPi / 2);
  sol.rabi = {{"omega2", x(1) / g}, {name_b, x(2) / g}};
  sol.eta = efficiency(x(0), g);
  sol.class_residual = rnorm;

  const DesignConstraints box;
  std::ostringstream note;
  if (std::abs(model.k) >= 0.5) {
    sol.constraints_ok = false;
    note << "|k| = " << std::abs(model.k) << " outside |k| < 0.5; ";
  }
  for (const auto& [name, value] : sol.rabi) {
    if (std::abs(value) > box.max_rabi_ratio + 1e-12) {
      sol.constraints_ok = false;
      note << "|" << name << "|/g = " << std::abs(value) << " > 1; ";
    }
  }
  if (sol.eta < box.min_efficiency) {
    sol.constraints_ok = false;
    note << "eta = " << sol.eta << " < " << box.min_efficiency << "; ";
  }
  sol.constraint_note = note.str();
  return sol;
}

std::vector<DesignSolution> continuation_scan(
    const DesignModel& base, const std::vector<double>& k_values) {
  std::vector<DesignSolution> out;
  out.reserve(k_values.size());
  DesignSolution seed = default_seed(base.variant);
  bool have_chain = false;
  for (double k : k_values) {
    DesignModel model = base;
    model.k = k;
    try {
      DesignSolution sol = solve_design(model, seed);
      seed = sol;  // chain
      have_chain = true;
      out.push_back(std::move(sol));
    } catch (const NumericalError&) {
      if (!have_chain) throw;
      // Continuation break: restart from the default seed and flag the row.
      DesignSolution sol = solve_design(model, default_seed(base.variant));
      sol.constraint_note += "continuation break, reseeded; ";
      seed = sol;
      out.push_back(std::move(sol));
    }
  }
  return out;
}

// Defined here so the closed-form device conditions can verify their output
// against the propagated gate.
DesignSolution cnot_condition(const DeviceModel& model, int n, int m) {
  if (!(model.g > 0)) {
    throw std::invalid_argument("cnot_condition: require g > 0");
  }
  DesignSolution sol;
  const double g = model.g;
  DeviceModel solved = model;
  switch (model.kind) {
    case DeviceKind::capacitive_rf: {
      // single drive: both integer indices coincide
      const auto [o1, o2] =
          rabi_for_axis_point(g, g, 0.0, kPi / 2, n, m > 0 ? m : n);
      if (std::abs(o2) > 1e-9) {
        throw InfeasibleError(
            "cnot_condition: capacitive device needs omega2 = 0; choose m = n");
      }
      solved.omega1 = o1;
      solved.omega2 = 0.0;
      sol.t_seconds = kPi / (2 * g);
      sol.rabi = {{"omega1", o1 / g}};
      break;
    }
    case DeviceKind::inductive_rf: {
      const auto [o1, o2] =
          rabi_for_axis_point(g, g, model.k * g, kPi / 2, n, m > 0 ? m : n);
      solved.omega1 = o1;
      solved.omega2 = o2;
      sol.t_seconds = kPi / (2 * g);
      sol.rabi = {{"omega1", o1 / g}, {"omega2", o2 / g}};
      break;
    }
    case DeviceKind::inductive_dc_detune: {
      const double radicand = (2 * model.k * n) * (2 * model.k * n) - 1.0;
      if (radicand <= 0) {
        std::ostringstream msg;
        msg << "cnot_condition: (2 k n)^2 - 1 = " << radicand
            << " not positive for k = " << model.k << ", n = " << n;
        throw InfeasibleError(msg.str());
      }
      solved.omega1 = g * std::sqrt(radicand);
      sol.t_seconds = kPi / (2 * model.k * g);
      sol.rabi = {{"omega1", solved.omega1 / g}};
      break;
    }
  }
  sol.t_pi2 = sol.t_seconds * g / (kPi / 2);
  sol.eta = efficiency(sol.t_seconds, g);

  // Verify the closed form by propagating the device and checking the class.
  const HamiltonianSpec spec = HamiltonianSpec::from_tracking(solved.tracking());
  const UnitaryMatrix u = direct_propagate(spec, sol.t_seconds);
  const ClassVector c = class_vector_from_unitary(u);
  const double class_dev =
      std::max(std::abs(c.c1 - kPi / 2), std::max(std::abs(c.c2), std::abs(c.c3)));
  sol.class_residual = std::max(
      class_dev, invariants_distance(local_invariants(u), kCnotInvariants));
  if (sol.class_residual > 1e-8) {
    throw NumericalError(
        "cnot_condition: propagated gate misses the CNOT class, residual " +
        std::to_string(sol.class_residual));
  }
  return sol;
}

}  // namespace weylsteer
