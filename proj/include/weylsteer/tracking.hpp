#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "weylsteer/lie_l0.hpp"
#include "weylsteer/numerics.hpp"

namespace weylsteer {

/// Shared envelope gamma(t) of a tracking Hamiltonian, with its running
/// integral. Closed forms for the constant and sin^2 envelopes; sampled
/// tables use a monotone cubic whose integral is evaluated piecewise.
class Envelope {
 public:
  static Envelope constant(double value = 1.0);
  /// gamma(t) = sin^2(pi t / period).
  static Envelope sin_squared(double period);
  static Envelope sampled(std::vector<double> t, std::vector<double> gamma);

  double gamma(double t) const;
  /// area(t) = integral of gamma over [0, t].
  double area(double t) const;

 private:
  Envelope() = default;
  enum class Kind { constant, sin2, table } kind_ = Kind::constant;
  double value_ = 1.0;
  double period_ = 1.0;
  std::optional<MonotoneCubic> table_;
};

/// integral of gamma over [0, t]; sampled envelopes fall back to adaptive
/// quadrature of the interpolant when cross-checking is wanted.
double envelope_area(const Envelope& e, double t);

/// Which homogeneous local pair the steering parameters attach to. The
/// z frame relabels the generator basis; the equations are unchanged.
enum class LocalFrame { x, z };

/// Hamiltonian of the tracking form: all controls share one envelope,
/// the central coupling g1 may additionally vary in time.
struct TrackingHamiltonian {
  double omega1 = 0.0;
  double omega2 = 0.0;
  double g1 = 0.0;
  std::function<double(double)> g1_fn;  // optional; overrides g1 when set
  double g2 = 0.0;
  double g3 = 0.0;
  Envelope envelope = Envelope::constant();
  LocalFrame frame = LocalFrame::x;

  /// c1(t) = integral of gamma * g1 over [0, t].
  double c1_at(double t) const;
};

/// Closed-form pair f+/- at a given envelope area; both lie in [-1, 1].
std::pair<double, double> f_plus_minus(const TrackingHamiltonian& h,
                                       double area);

/// Analytic class trajectory (pre-canonical, full Cartan subalgebra).
ClassVector class_vector_tracking(const TrackingHamiltonian& h, double t);

/// Local-rotation angles alpha(t), beta(t) by adaptive quadrature along the
/// analytic class curves. Throws NumericalError naming the earliest time at
/// which the integrand denominator collapses.
std::pair<double, double> alpha_beta_tracking(const TrackingHamiltonian& h,
                                              double t);

/// Rabi pair steering a tracking system onto the axis point (c1, 0, 0).
/// Throws InfeasibleError when a radicand is negative for the given (n, m).
std::pair<double, double> rabi_for_axis_point(double g1, double g2, double g3,
                                              double c1_target, int n, int m);

enum class DeviceKind { capacitive_rf, inductive_rf, inductive_dc_detune };

/// One of the three device models, with coupling g, anisotropy k and the
/// Rabi amplitudes. The dc-detuned device steers on the z-frame generators.
struct DeviceModel {
  DeviceKind kind;
  double g = 1.0;
  double k = 0.0;
  double omega1 = 0.0;
  double omega2 = 0.0;

  TrackingHamiltonian tracking(Envelope envelope = Envelope::constant()) const;
  LocalFrame frame() const;
};

/// A solved CNOT design point.
struct DesignSolution {
  double t_pi2 = 0.0;      // gate time in units of pi/(2 g)
  double t_seconds = 0.0;  // same time in 1/(rad/s)
  std::map<std::string, double> rabi;  // amplitudes in units of g
  double eta = 0.0;
  double class_residual = 0.0;  // invariant distance to the CNOT class
  bool constraints_ok = true;
  std::string constraint_note;
};

/// Envelope area and Rabi frequencies putting the device in the CNOT class;
/// the returned solution is verified by propagating the model and checking
/// the invariants (residual < 1e-8). `m` is ignored by the single-drive
/// models.
DesignSolution cnot_condition(const DeviceModel& model, int n, int m = 0);

}  // namespace weylsteer
