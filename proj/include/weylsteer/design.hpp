#pragma once

#include <vector>

#include "weylsteer/steer_ode.hpp"
#include "weylsteer/tracking.hpp"

namespace weylsteer {

/// Constrained CNOT designs driven by a symmetric or asymmetric dc
/// detuning; the +/- variants differ in the sign inside the (sx +/- sy)
/// local drive and are locally equivalent.
enum class DesignVariant { sym_dc_minus, sym_dc_plus, asym_dc_minus, asym_dc_plus };

const char* design_variant_name(DesignVariant v);
bool is_symmetric(DesignVariant v);

struct DesignModel {
  DesignVariant variant = DesignVariant::sym_dc_minus;
  double g = 1.0;
  double k = 0.0;
};

/// Design constraint box: drive amplitudes at most g, a single application,
/// and efficiency eta = 2 pi / (g t_gate) of at least 2.5.
struct DesignConstraints {
  double max_rabi_ratio = 1.0;
  double min_efficiency = 2.5;
  int applications = 1;
};

/// The model Hamiltonian at unit envelope for the two free Rabi amplitudes
/// ((omega2, omega3) symmetric, (omega2, omega4) asymmetric).
HermitianGenerator build_design_hamiltonian(const DesignModel& model,
                                            double rabi_a, double rabi_b);

/// (Re g1, Im g1, g2 - 1) of the propagated gate; zero exactly on the CNOT
/// class. t in seconds.
Eigen::Vector3d cnot_residual(const DesignModel& model, double t,
                              const Eigen::Vector2d& rabi);

/// Damped Newton on (t, rabi_a, rabi_b) from the guess; converges the
/// residual to its numerical floor (the CNOT point is a critical value of
/// the invariants, so the residual vanishes quadratically and plain
/// tolerance targets stall early). Throws NumericalError when the residual
/// stays above 1e-10.
DesignSolution solve_design(const DesignModel& model,
                            const DesignSolution& guess);

/// Continuation in k: each converged solution seeds the next value. On a
/// continuation break the scan reseeds from the last good solution and
/// flags the row.
std::vector<DesignSolution> continuation_scan(const DesignModel& base,
                                              const std::vector<double>& k_values);

/// eta = 2 pi / (g t_gate); equals 4 / t when t is measured in pi/(2 g).
double efficiency(double t_gate_seconds, double g);

/// Default guesses for the k = 0 designs.
DesignSolution default_seed(DesignVariant variant);

}  // namespace weylsteer
