#pragma once

#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "weylsteer/cartan.hpp"
#include "weylsteer/numerics.hpp"
#include "weylsteer/tracking.hpp"

namespace weylsteer {

/// Concrete generator basis for a local frame, ordered as
/// (local1, local2, central, exch2, exch3, mixed23, mixed32).
/// The x frame is (X1, X2, XX, YY, ZZ, YZ, ZY); the z frame applies the
/// cyclic relabeling x -> z -> y -> x, giving (Z1, Z2, ZZ, XX, YY, XY, YX).
struct GeneratorFrame {
  LocalFrame kind;
  std::array<Mat4c, kGeneratorCount> basis;
};

const GeneratorFrame& generator_frame(LocalFrame kind);

using ControlFn = std::function<double(double)>;

/// The seven steering controls as functions of time. Slot meaning in the
/// x frame: (omega_1x, omega_2x, g_xx, g_yy, g_zz, g_yz, g_zy); a z-frame
/// spec reads the same slots on the relabeled generators.
struct ControlSignals {
  std::array<ControlFn, kGeneratorCount> u;
  std::vector<double> breakpoints;  // control discontinuities, sorted

  std::array<double, kGeneratorCount> at(double t) const;
};

/// The seven Cartan-form parameters.
struct SteeringState {
  double alpha = 0, beta = 0, c1 = 0, c2 = 0, c3 = 0, zeta = 0, xi = 0;
};

/// Trigonometric products entering the steering system, with the
/// determinant identity det M = cos^2 c2 - cos^2 c3 cross-checked on every
/// evaluation (two independent floating routes).
struct TrigIntermediates {
  double A1, A2, A3, A4;
  double C1, C2, C3, C4;
  double C22, C33;
  double detM;

  static TrigIntermediates from_state(const SteeringState& s);
};

/// Assembled 7x7 system matrix mapping parameter derivatives to controls
/// (rows ordered central, local1, local2, exch2, exch3, mixed23, mixed32;
/// columns c1', alpha', beta', c2', c3', zeta', xi').
Eigen::Matrix<double, 7, 7> steering_matrix(const SteeringState& s);

enum class AnsatzKind {
  full_system,
  tracking_symmetric,  // alpha = zeta, beta = xi
  case1,               // c3 = 0, beta = xi = 0
  case2_sym_detune,    // beta = -alpha, xi = -zeta
  case3                // c3 = c2, xi = 0
};

struct TrajectorySample {
  double t;
  SteeringState state;
  double recon_fidelity;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  AnsatzKind ansatz;
  LocalFrame frame;
};

/// Hamiltonian handed to the steering machinery: generic controls over one
/// frame, plus the tracking structure when the controls have it (enables
/// the analytic seed and exact propagation).
struct HamiltonianSpec {
  LocalFrame frame = LocalFrame::x;
  ControlSignals controls;
  std::optional<TrackingHamiltonian> tracking;

  static HamiltonianSpec from_tracking(const TrackingHamiltonian& h);
  /// Piecewise-constant controls over uniform slices (slice i active on
  /// [i dt, (i+1) dt)); used with the slice-product propagation oracle.
  static HamiltonianSpec piecewise_constant(
      LocalFrame frame, std::vector<std::array<double, kGeneratorCount>> slices,
      double t_end);

  /// H(t) as a 4x4 Hermitian matrix.
  Mat4c matrix_at(double t) const;
};

/// Full seven-parameter steering system. Throws SingularStateError when
/// det M is below kDegeneracyEps while the degenerate rows carry nonzero
/// controls.
SteeringState rhs_full(const SteeringState& s,
                       const std::array<double, kGeneratorCount>& u);

/// Reduced systems for the three special ansatz families.
SteeringState rhs_case1(const SteeringState& s, double omega1, double g1,
                        double g2);
SteeringState rhs_case2(const SteeringState& s, double omega1, double g1,
                        double g2, double g3);
SteeringState rhs_case3(const SteeringState& s, double omega1, double omega2,
                        double g1, double g2);
/// Regular reduction under alpha = zeta, beta = xi for tracking-form
/// Hamiltonians.
SteeringState rhs_tracking(const SteeringState& s, double gamma, double omega1,
                           double omega2, double g1, double g2, double g3);

/// Eq-of-motion propagator: exact exponential for tracking-form (commuting
/// family) and piecewise-constant Hamiltonians, adaptive 4th-order Magnus
/// product otherwise. Result is unitary to machine precision.
UnitaryMatrix direct_propagate(const HamiltonianSpec& h, double t);

/// Three-factor Cartan-form reconstruction of a steering state.
Mat4c reconstruct(const SteeringState& s, const GeneratorFrame& frame);

CartanFactorization factorization_from_state(const SteeringState& s,
                                             LocalFrame frame);

/// Integrate the steering system from the identity, sampling n_samples
/// uniform times on [0, t_end]. Every sample carries the fidelity between
/// its reconstruction and direct propagation; the run is rejected with the
/// worst sample reported when fidelity drops below the acceptance
/// threshold (kReconTol, overridable through WEYLSTEER_TOL).
Trajectory integrate(const HamiltonianSpec& h, AnsatzKind ansatz, double t_end,
                     int n_samples);

/// Acceptance threshold on 1 - fidelity used by integrate();
/// reads WEYLSTEER_TOL once per call site.
double reconstruction_tolerance();

}  // namespace weylsteer
