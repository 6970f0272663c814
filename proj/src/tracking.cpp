#include "weylsteer/tracking.hpp"

#include <cmath>
#include <sstream>

#include "weylsteer/cartan.hpp"

namespace weylsteer {

namespace {

constexpr double kPi = 3.14159265358979323846;

// arcsin(amp * sin(phi)) following the branch that keeps the class
// coordinates continuous on the full Cartan subalgebra. For amp < 1 the
// principal value is already continuous; at amp = 1 the principal value
// folds at phi = pi/2 + n pi and the unfolded branch is phi itself.
double arcsin_path(double amp, double phi) {
  if (amp > 1.0 - 1e-9) return phi;
  return std::asin(amp * std::sin(phi));
}

struct FCoeffs {
  double amp;   // (g2 +/- g3) / s
  double rate;  // s = sqrt((g2 +/- g3)^2 + (omega1 -/+ omega2)^2)
};

FCoeffs f_coeffs(const TrackingHamiltonian& h, int sign) {
  const double gsum = h.g2 + sign * h.g3;
  const double od = h.omega1 - sign * h.omega2;
  const double s = std::hypot(gsum, od);
  if (s == 0.0) return FCoeffs{0.0, 0.0};
  return FCoeffs{gsum / s, s};
}

}  // namespace

Envelope Envelope::constant(double value) {
  Envelope e;
  e.kind_ = Kind::constant;
  e.value_ = value;
  return e;
}

Envelope Envelope::sin_squared(double period) {
  if (!(period > 0)) {
    throw std::invalid_argument("Envelope::sin_squared: period must be > 0");
  }
  Envelope e;
  e.kind_ = Kind::sin2;
  e.period_ = period;
  return e;
}

Envelope Envelope::sampled(std::vector<double> t, std::vector<double> gamma) {
  Envelope e;
  e.kind_ = Kind::table;
  e.table_.emplace(std::move(t), std::move(gamma));
  return e;
}

double Envelope::gamma(double t) const {
  switch (kind_) {
    case Kind::constant: return value_;
    case Kind::sin2: {
      const double s = std::sin(kPi * t / period_);
      return s * s;
    }
    case Kind::table: return (*table_)(t);
  }
  return 0.0;
}

double Envelope::area(double t) const {
  switch (kind_) {
    case Kind::constant: return value_ * t;
    case Kind::sin2:
      return 0.5 * t - period_ / (4 * kPi) * std::sin(2 * kPi * t / period_);
    case Kind::table: return table_->integral_from_start(t);
  }
  return 0.0;
}

double envelope_area(const Envelope& e, double t) { return e.area(t); }

double TrackingHamiltonian::c1_at(double t) const {
  if (!g1_fn) return g1 * envelope.area(t);
  return integrate_adaptive(
      [this](double s) { return envelope.gamma(s) * g1_fn(s); }, 0.0, t);
}

std::pair<double, double> f_plus_minus(const TrackingHamiltonian& h,
                                       double area) {
  const FCoeffs p = f_coeffs(h, +1);
  const FCoeffs m = f_coeffs(h, -1);
  return {p.amp * std::sin(0.5 * p.rate * area),
          m.amp * std::sin(0.5 * m.rate * area)};
}

ClassVector class_vector_tracking(const TrackingHamiltonian& h, double t) {
  const double area = h.envelope.area(t);
  const FCoeffs p = f_coeffs(h, +1);
  const FCoeffs m = f_coeffs(h, -1);
  const double ap = arcsin_path(p.amp, 0.5 * p.rate * area);
  const double am = arcsin_path(m.amp, 0.5 * m.rate * area);
  return ClassVector{h.c1_at(t), ap + am, ap - am};
}

std::pair<double, double> alpha_beta_tracking(const TrackingHamiltonian& h,
                                              double t) {
  if (h.omega1 == 0.0 && h.omega2 == 0.0) return {0.0, 0.0};

  const FCoeffs p = f_coeffs(h, +1);
  const FCoeffs m = f_coeffs(h, -1);
  const auto denominator = [&](double tau) {
    // cos c2 + cos c3 = 2 cos((c2+c3)/2) cos((c2-c3)/2)
    const double area = h.envelope.area(tau);
    const double cp = std::cos(arcsin_path(p.amp, 0.5 * p.rate * area));
    const double cm = std::cos(arcsin_path(m.amp, 0.5 * m.rate * area));
    return 2.0 * cp * cm;
  };

  // Locate the earliest denominator collapse before integrating.
  constexpr int kScan = 2048;
  for (int i = 0; i <= kScan; ++i) {
    const double tau = t * i / kScan;
    if (std::abs(denominator(tau)) < 1e-9) {
      throw NumericalError(
          "alpha_beta_tracking: cos c2 + cos c3 vanishes at t = " +
          std::to_string(tau));
    }
  }

  const auto integrand = [&](double tau, bool first) {
    const double area = h.envelope.area(tau);
    const double ap = arcsin_path(p.amp, 0.5 * p.rate * area);
    const double am = arcsin_path(m.amp, 0.5 * m.rate * area);
    const double c2 = ap + am, c3 = ap - am;
    const double cos2 = std::cos(c2), cos3 = std::cos(c3);
    const double sin2 = std::sin(c2), sin3 = std::sin(c3);
    const double den = cos2 + cos3;
    const double oa = first ? h.omega1 : h.omega2;
    const double ob = first ? h.omega2 : h.omega1;
    return h.envelope.gamma(tau) * (oa * (1 + cos2 * cos3) - ob * sin2 * sin3) /
           (den * den);
  };
  const double alpha = integrate_adaptive(
      [&](double tau) { return integrand(tau, true); }, 0.0, t);
  const double beta = integrate_adaptive(
      [&](double tau) { return integrand(tau, false); }, 0.0, t);
  return {alpha, beta};
}

std::pair<double, double> rabi_for_axis_point(double g1, double g2, double g3,
                                              double c1_target, int n, int m) {
  if (!(c1_target > 0)) {
    throw std::invalid_argument("rabi_for_axis_point: c1 target must be > 0");
  }
  const double qn = 2 * kPi * n * g1 / c1_target;
  const double qm = 2 * kPi * m * g1 / c1_target;
  const double rad_n = qn * qn - (g2 - g3) * (g2 - g3);
  const double rad_m = qm * qm - (g2 + g3) * (g2 + g3);
  if (rad_n < 0 || rad_m < 0) {
    std::ostringstream msg;
    msg << "rabi_for_axis_point: negative radicand for (n, m) = (" << n << ", "
        << m << "): ";
    if (rad_n < 0) msg << "(2 pi n g1/c1)^2 - (g2-g3)^2 = " << rad_n << " ";
    if (rad_m < 0) msg << "(2 pi m g1/c1)^2 - (g2+g3)^2 = " << rad_m;
    throw InfeasibleError(msg.str());
  }
  const double a = std::sqrt(rad_n);
  const double b = std::sqrt(rad_m);
  return {0.5 * (a + b), 0.5 * (a - b)};
}

TrackingHamiltonian DeviceModel::tracking(Envelope envelope) const {
  TrackingHamiltonian h;
  h.envelope = std::move(envelope);
  h.frame = frame();
  switch (kind) {
    case DeviceKind::capacitive_rf:
      h.omega1 = omega1;
      h.omega2 = 0.0;
      h.g1 = g;
      h.g2 = g;
      h.g3 = 0.0;
      break;
    case DeviceKind::inductive_rf:
      h.omega1 = omega1;
      h.omega2 = omega2;
      h.g1 = g;
      h.g2 = g;
      h.g3 = k * g;
      break;
    case DeviceKind::inductive_dc_detune:
      // Detuning acts as (omega1/2)(s1z - s2z); on the z-frame generators the
      // local pair carries (omega1, -omega1), the central coupling is k g and
      // both exchange couplings equal g.
      h.omega1 = omega1;
      h.omega2 = -omega1;
      h.g1 = k * g;
      h.g2 = g;
      h.g3 = g;
      break;
  }
  return h;
}

LocalFrame DeviceModel::frame() const {
  return kind == DeviceKind::inductive_dc_detune ? LocalFrame::z
                                                 : LocalFrame::x;
}

}  // namespace weylsteer
