#include "weylsteer/steer_ode.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>
#include <set>
#include <sstream>

namespace weylsteer {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSeedFraction = 1e-4;  // seed-step size relative to t_end

Mat4c kron(const Mat2c& a, const Mat2c& b) {
  Mat4c out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

GeneratorFrame make_frame(LocalFrame kind) {
  const Mat2c sx = pauli(PauliAxis::x);
  const Mat2c sy = pauli(PauliAxis::y);
  const Mat2c sz = pauli(PauliAxis::z);
  const Mat2c id = Mat2c::Identity();
  const ComplexScalar half_i(0, 0.5);
  GeneratorFrame f;
  f.kind = kind;
  if (kind == LocalFrame::x) {
    f.basis = {half_i * kron(sx, id), half_i * kron(id, sx),
               half_i * kron(sx, sx), half_i * kron(sy, sy),
               half_i * kron(sz, sz), half_i * kron(sy, sz),
               half_i * kron(sz, sy)};
  } else {
    // cyclic relabeling x -> z, y -> x, z -> y
    f.basis = {half_i * kron(sz, id), half_i * kron(id, sz),
               half_i * kron(sz, sz), half_i * kron(sx, sx),
               half_i * kron(sy, sy), half_i * kron(sx, sy),
               half_i * kron(sy, sx)};
  }
  return f;
}

// Exchange-control magnitude used to decide whether a degenerate system
// actually couples to the singular rows.
double exchange_scale(const std::array<double, kGeneratorCount>& u) {
  return std::max(std::max(std::abs(u[3]), std::abs(u[4])),
                  std::max(std::abs(u[5]), std::abs(u[6])));
}

}  // namespace

const GeneratorFrame& generator_frame(LocalFrame kind) {
  static const GeneratorFrame fx = make_frame(LocalFrame::x);
  static const GeneratorFrame fz = make_frame(LocalFrame::z);
  return kind == LocalFrame::x ? fx : fz;
}

std::array<double, kGeneratorCount> ControlSignals::at(double t) const {
  std::array<double, kGeneratorCount> out{};
  for (int i = 0; i < kGeneratorCount; ++i) {
    out[i] = u[i] ? u[i](t) : 0.0;
  }
  return out;
}

TrigIntermediates TrigIntermediates::from_state(const SteeringState& s) {
  TrigIntermediates v{};
  const double ca = std::cos(s.alpha), sa = std::sin(s.alpha);
  const double cb = std::cos(s.beta), sb = std::sin(s.beta);
  const double c2 = std::cos(s.c2), s2 = std::sin(s.c2);
  const double c3 = std::cos(s.c3), s3 = std::sin(s.c3);
  v.A1 = ca * cb;
  v.A2 = sa * sb;
  v.A3 = ca * sb;
  v.A4 = sa * cb;
  v.C1 = c2 * c3;
  v.C2 = s2 * s3;
  v.C3 = c2 * s3;
  v.C4 = s2 * c3;
  v.C22 = c2 * s2;
  v.C33 = c3 * s3;
  // det M = cos^2 c2 - cos^2 c3; C3^2 - C4^2 is the same quantity through an
  // independent floating route, kept as a running cross-check.
  v.detM = v.C3 * v.C3 - v.C4 * v.C4;
  const double direct = c2 * c2 - c3 * c3;
  if (std::abs(v.detM - direct) > 1e-13) {
    throw NumericalError("TrigIntermediates: det M identity violated by " +
                         std::to_string(std::abs(v.detM - direct)));
  }
  return v;
}

Eigen::Matrix<double, 7, 7> steering_matrix(const SteeringState& s) {
  const TrigIntermediates v = TrigIntermediates::from_state(s);
  Eigen::Matrix<double, 7, 7> m = Eigen::Matrix<double, 7, 7>::Zero();
  m(0, 0) = 1;
  m(1, 1) = 1;
  m(1, 5) = v.C1;
  m(1, 6) = v.C2;
  m(2, 2) = 1;
  m(2, 5) = v.C2;
  m(2, 6) = v.C1;
  m(3, 3) = v.A1;
  m(3, 4) = v.A2;
  m(3, 5) = -v.A3 * v.C3 + v.A4 * v.C4;
  m(3, 6) = v.A3 * v.C4 - v.A4 * v.C3;
  m(4, 3) = v.A2;
  m(4, 4) = v.A1;
  m(4, 5) = v.A4 * v.C3 - v.A3 * v.C4;
  m(4, 6) = -v.A4 * v.C4 + v.A3 * v.C3;
  m(5, 3) = v.A3;
  m(5, 4) = -v.A4;
  m(5, 5) = v.A1 * v.C3 + v.A2 * v.C4;
  m(5, 6) = -v.A1 * v.C4 - v.A2 * v.C3;
  m(6, 3) = v.A4;
  m(6, 4) = -v.A3;
  m(6, 5) = -v.A2 * v.C3 - v.A1 * v.C4;
  m(6, 6) = v.A2 * v.C4 + v.A1 * v.C3;
  return m;
}

SteeringState rhs_full(const SteeringState& s,
                       const std::array<double, kGeneratorCount>& u) {
  const TrigIntermediates v = TrigIntermediates::from_state(s);
  const double gyy = u[3], gzz = u[4], gyz = u[5], gzy = u[6];
  SteeringState d;
  d.c1 = u[2];
  d.c2 = gyy * v.A1 + gzz * v.A2 + gyz * v.A3 + gzy * v.A4;
  d.c3 = gyy * v.A2 + gzz * v.A1 - gyz * v.A4 - gzy * v.A3;
  if (std::abs(v.detM) < kDegeneracyEps) {
    if (exchange_scale(u) < 1e-13) {
      d.alpha = u[0];
      d.beta = u[1];
      d.zeta = 0.0;
      d.xi = 0.0;
      return d;
    }
    throw SingularStateError(
        "rhs_full: det M = " + std::to_string(v.detM) +
            " below degeneracy threshold with active exchange controls",
        std::numeric_limits<double>::quiet_NaN());
  }
  d.alpha = u[0] + (gyy * (v.A3 * v.C33 + v.A4 * v.C22) -
                    gzz * (v.A3 * v.C22 + v.A4 * v.C33) -
                    gyz * (v.A1 * v.C33 - v.A2 * v.C22) -
                    gzy * (v.A1 * v.C22 - v.A2 * v.C33)) /
                       v.detM;
  d.beta = u[1] + (gyy * (v.A3 * v.C22 + v.A4 * v.C33) -
                   gzz * (v.A3 * v.C33 + v.A4 * v.C22) -
                   gyz * (v.A1 * v.C22 - v.A2 * v.C33) -
                   gzy * (v.A1 * v.C33 - v.A2 * v.C22)) /
                      v.detM;
  d.zeta = (-gyy * (v.A3 * v.C3 + v.A4 * v.C4) +
            gzz * (v.A3 * v.C4 + v.A4 * v.C3) +
            gyz * (v.A1 * v.C3 - v.A2 * v.C4) +
            gzy * (v.A1 * v.C4 - v.A2 * v.C3)) /
           v.detM;
  d.xi = (-gyy * (v.A3 * v.C4 + v.A4 * v.C3) +
          gzz * (v.A3 * v.C3 + v.A4 * v.C4) +
          gyz * (v.A1 * v.C4 - v.A2 * v.C3) +
          gzy * (v.A1 * v.C3 - v.A2 * v.C4)) /
         v.detM;
  return d;
}

SteeringState rhs_case1(const SteeringState& s, double omega1, double g1,
                        double g2) {
  SteeringState d;
  d.c1 = g1;
  d.c2 = g2 * std::cos(s.alpha);
  if (std::abs(g2) < 1e-13) {
    d.alpha = omega1;
    return d;
  }
  const double sc2 = std::sin(s.c2);
  if (std::abs(sc2) < kDegeneracyEps) {
    throw SingularStateError("rhs_case1: sin c2 vanishes",
                             std::numeric_limits<double>::quiet_NaN());
  }
  const double sa = std::sin(s.alpha);
  d.alpha = omega1 - g2 * sa * std::cos(s.c2) / sc2;
  d.zeta = g2 * sa / sc2;
  return d;
}

SteeringState rhs_case2(const SteeringState& s, double omega1, double g1,
                        double g2, double g3) {
  const double c2 = std::cos(s.c2), c3 = std::cos(s.c3);
  const double detM = c2 * c2 - c3 * c3;
  const double sum23 = std::cos(s.c2) * std::sin(s.c3) +
                       std::sin(s.c2) * std::cos(s.c3);  // sin(c2 + c3)
  const bool coupled = std::max(std::abs(g2), std::abs(g3)) > 1e-13;
  if (coupled &&
      (std::abs(detM) < kDegeneracyEps || std::abs(sum23) < kDegeneracyEps)) {
    throw SingularStateError("rhs_case2: degenerate denominator",
                             std::numeric_limits<double>::quiet_NaN());
  }
  const double ca = std::cos(s.alpha), sa = std::sin(s.alpha);
  SteeringState d;
  d.c1 = g1;
  d.c2 = g2 * ca * ca - g3 * sa * sa;
  d.c3 = g3 * ca * ca - g2 * sa * sa;
  if (coupled) {
    const double cs = ca * sa;
    d.alpha = omega1 - (g2 + g3) * cs *
                           (std::cos(s.c3) * std::sin(s.c3) -
                            std::sin(s.c2) * std::cos(s.c2)) /
                           detM;
    d.zeta = (g2 + g3) * cs / sum23;
  } else {
    d.alpha = omega1;
    d.zeta = 0.0;
  }
  d.beta = -d.alpha;
  d.xi = -d.zeta;
  return d;
}

SteeringState rhs_case3(const SteeringState& s, double omega1, double omega2,
                        double g1, double g2) {
  const double cc = std::cos(s.c2), sc = std::sin(s.c2);
  const bool coupled = std::abs(g2) > 1e-13;
  if (coupled && std::abs(cc * sc) < kDegeneracyEps) {
    throw SingularStateError("rhs_case3: cos c2 sin c2 vanishes",
                             std::numeric_limits<double>::quiet_NaN());
  }
  const double ca = std::cos(s.alpha), sa = std::sin(s.alpha);
  const double cb = std::cos(s.beta), sb = std::sin(s.beta);
  const double a12 = ca * cb + sa * sb;   // A1 + A2
  const double a34 = ca * sb - sa * cb;   // A3 - A4
  SteeringState d;
  d.c1 = g1;
  d.c2 = g2 * a12;
  d.c3 = d.c2;
  if (coupled) {
    d.alpha = omega1 + g2 * a34 * cc / sc;
    d.beta = omega2 + g2 * a34 * sc / cc;
    d.zeta = -g2 * a34 / (cc * sc);
  } else {
    d.alpha = omega1;
    d.beta = omega2;
    d.zeta = 0.0;
  }
  return d;
}

SteeringState rhs_tracking(const SteeringState& s, double gamma, double omega1,
                           double omega2, double g1, double g2, double g3) {
  const double c2 = std::cos(s.c2), c3 = std::cos(s.c3);
  const double den = (c2 + c3) * (c2 + c3);
  if (den < kDegeneracyEps) {
    throw SingularStateError("rhs_tracking: (cos c2 + cos c3)^2 vanishes",
                             std::numeric_limits<double>::quiet_NaN());
  }
  const double s2 = std::sin(s.c2), s3 = std::sin(s.c3);
  const double A1 = std::cos(s.alpha) * std::cos(s.beta);
  const double A2 = std::sin(s.alpha) * std::sin(s.beta);
  SteeringState d;
  d.alpha = gamma * (omega1 * (1 + c2 * c3) - omega2 * s2 * s3) / den;
  d.beta = gamma * (omega2 * (1 + c2 * c3) - omega1 * s2 * s3) / den;
  d.c1 = gamma * g1;
  d.c2 = gamma * (g2 * A1 + g3 * A2);
  d.c3 = gamma * (g2 * A2 + g3 * A1);
  d.zeta = d.alpha;
  d.xi = d.beta;
  return d;
}

HamiltonianSpec HamiltonianSpec::from_tracking(const TrackingHamiltonian& h) {
  HamiltonianSpec spec;
  spec.frame = h.frame;
  spec.tracking = h;
  const auto gamma = [h](double t) { return h.envelope.gamma(t); };
  spec.controls.u[0] = [h, gamma](double t) { return gamma(t) * h.omega1; };
  spec.controls.u[1] = [h, gamma](double t) { return gamma(t) * h.omega2; };
  spec.controls.u[2] = [h, gamma](double t) {
    return gamma(t) * (h.g1_fn ? h.g1_fn(t) : h.g1);
  };
  spec.controls.u[3] = [h, gamma](double t) { return gamma(t) * h.g2; };
  spec.controls.u[4] = [h, gamma](double t) { return gamma(t) * h.g3; };
  spec.controls.u[5] = [](double) { return 0.0; };
  spec.controls.u[6] = [](double) { return 0.0; };
  return spec;
}

HamiltonianSpec HamiltonianSpec::piecewise_constant(
    LocalFrame frame, std::vector<std::array<double, kGeneratorCount>> slices,
    double t_end) {
  if (slices.empty() || !(t_end > 0)) {
    throw std::invalid_argument("piecewise_constant: need slices and t_end > 0");
  }
  HamiltonianSpec spec;
  spec.frame = frame;
  const auto values = std::make_shared<
      const std::vector<std::array<double, kGeneratorCount>>>(std::move(slices));
  const int n = static_cast<int>(values->size());
  const double dt = t_end / n;
  for (int i = 0; i < kGeneratorCount; ++i) {
    spec.controls.u[i] = [values, dt, n, i](double t) {
      int idx = static_cast<int>(std::floor(t / dt));
      idx = std::clamp(idx, 0, n - 1);
      return (*values)[idx][i];
    };
  }
  spec.controls.breakpoints.resize(n - 1);
  for (int i = 1; i < n; ++i) spec.controls.breakpoints[i - 1] = i * dt;
  return spec;
}

Mat4c HamiltonianSpec::matrix_at(double t) const {
  const GeneratorFrame& f = generator_frame(frame);
  const auto u = controls.at(t);
  Mat4c sum = Mat4c::Zero();
  for (int i = 0; i < kGeneratorCount; ++i) {
    if (u[i] != 0.0) sum += u[i] * f.basis[i];
  }
  // iH = sum(u_i E_i)  =>  H = -i sum
  return Mat4c(ComplexScalar(0, -1) * sum);
}

Mat4c reconstruct(const SteeringState& s, const GeneratorFrame& f) {
  const Mat4c left = expm_skew(Mat4c(-(s.alpha * f.basis[0] + s.beta * f.basis[1])));
  const Mat4c mid = expm_skew(Mat4c(
      -(s.c1 * f.basis[2] + s.c2 * f.basis[3] + s.c3 * f.basis[4])));
  const Mat4c right = expm_skew(Mat4c(-(s.zeta * f.basis[0] + s.xi * f.basis[1])));
  return left * mid * right;
}

CartanFactorization factorization_from_state(const SteeringState& s,
                                             LocalFrame frame) {
  const GeneratorFrame& f = generator_frame(frame);
  const ClassVector klass = (frame == LocalFrame::x)
                                ? ClassVector{s.c1, s.c2, s.c3}
                                : ClassVector{s.c2, s.c3, s.c1};
  return CartanFactorization{
      0.0,
      UnitaryMatrix(expm_skew(Mat4c(-(s.alpha * f.basis[0] + s.beta * f.basis[1])))),
      entangler_from_class(klass),
      UnitaryMatrix(expm_skew(Mat4c(-(s.zeta * f.basis[0] + s.xi * f.basis[1])))),
      klass};
}

namespace {

Mat4c generator_sum(const GeneratorFrame& f,
                    const std::array<double, kGeneratorCount>& u) {
  Mat4c sum = Mat4c::Zero();
  for (int i = 0; i < kGeneratorCount; ++i) {
    if (u[i] != 0.0) sum += u[i] * f.basis[i];
  }
  return sum;
}

// Fourth-order Magnus step over [t, t+h] built from two Gauss nodes; the
// exponent is exactly anti-Hermitian so each factor is exactly unitary.
Mat4c magnus4_step(const HamiltonianSpec& h, const GeneratorFrame& f, double t,
                   double step) {
  const double node = std::sqrt(3.0) / 6.0;
  const double t1 = t + (0.5 - node) * step;
  const double t2 = t + (0.5 + node) * step;
  const Mat4c a1 = -generator_sum(f, h.controls.at(t1));
  const Mat4c a2 = -generator_sum(f, h.controls.at(t2));
  const Mat4c omega = 0.5 * step * (a1 + a2) +
                      (std::sqrt(3.0) / 12.0) * step * step * (a2 * a1 - a1 * a2);
  return expm_skew(omega);
}

Mat4c propagate_general(const HamiltonianSpec& h, double t0, double t1) {
  // Subdivision-doubling until two refinement levels agree.
  Mat4c prev = Mat4c::Identity();
  for (int n = 8; n <= (1 << 16); n *= 2) {
    Mat4c u = Mat4c::Identity();
    const double step = (t1 - t0) / n;
    for (int i = 0; i < n; ++i) {
      u = magnus4_step(h, generator_frame(h.frame), t0 + i * step, step) * u;
    }
    if (n > 8 && max_abs(u - prev) < 1e-12) return u;
    prev = u;
  }
  return prev;
}

}  // namespace

UnitaryMatrix direct_propagate(const HamiltonianSpec& h, double t) {
  if (t == 0.0) return UnitaryMatrix(Mat4c::Identity());
  const GeneratorFrame& f = generator_frame(h.frame);
  if (h.tracking) {
    // All non-central controls share the envelope and the central term
    // commutes with everything, so the time-ordered product collapses to a
    // single exponential of the integrated generator.
    const TrackingHamiltonian& th = *h.tracking;
    const double area = th.envelope.area(t);
    const Mat4c sum = th.omega1 * f.basis[0] + th.omega2 * f.basis[1] +
                      th.g2 * f.basis[3] + th.g3 * f.basis[4];
    const Mat4c exponent = -(area * sum + th.c1_at(t) * f.basis[2]);
    return UnitaryMatrix(expm_skew(exponent));
  }
  if (!h.controls.breakpoints.empty()) {
    // Piecewise-constant controls: exact exponential per slice.
    Mat4c u = Mat4c::Identity();
    double t_prev = 0.0;
    for (double b : h.controls.breakpoints) {
      if (b >= t) break;
      const double mid = 0.5 * (t_prev + b);
      u = expm_skew(Mat4c(-(b - t_prev) * generator_sum(f, h.controls.at(mid)))) * u;
      t_prev = b;
    }
    if (t > t_prev) {
      const double mid = 0.5 * (t_prev + t);
      u = expm_skew(Mat4c(-(t - t_prev) * generator_sum(f, h.controls.at(mid)))) * u;
    }
    return UnitaryMatrix(u);
  }
  return UnitaryMatrix(propagate_general(h, 0.0, t));
}

namespace {

int state_dim(AnsatzKind ansatz) {
  switch (ansatz) {
    case AnsatzKind::full_system: return 7;
    case AnsatzKind::tracking_symmetric: return 5;
    case AnsatzKind::case1: return 4;
    case AnsatzKind::case2_sym_detune: return 5;
    case AnsatzKind::case3: return 5;
  }
  return 7;
}

VecXd pack_state(AnsatzKind ansatz, const SteeringState& s) {
  VecXd y(state_dim(ansatz));
  switch (ansatz) {
    case AnsatzKind::full_system:
      y << s.alpha, s.beta, s.c1, s.c2, s.c3, s.zeta, s.xi;
      break;
    case AnsatzKind::tracking_symmetric:
      y << s.alpha, s.beta, s.c1, s.c2, s.c3;
      break;
    case AnsatzKind::case1:
      y << s.alpha, s.c1, s.c2, s.zeta;
      break;
    case AnsatzKind::case2_sym_detune:
      y << s.alpha, s.c1, s.c2, s.c3, s.zeta;
      break;
    case AnsatzKind::case3:
      y << s.alpha, s.beta, s.c1, s.c2, s.zeta;
      break;
  }
  return y;
}

SteeringState unpack_state(AnsatzKind ansatz, const VecXd& y) {
  SteeringState s;
  switch (ansatz) {
    case AnsatzKind::full_system:
      s = {y(0), y(1), y(2), y(3), y(4), y(5), y(6)};
      break;
    case AnsatzKind::tracking_symmetric:
      s = {y(0), y(1), y(2), y(3), y(4), y(0), y(1)};
      break;
    case AnsatzKind::case1:
      s = {y(0), 0.0, y(1), y(2), 0.0, y(3), 0.0};
      break;
    case AnsatzKind::case2_sym_detune:
      s = {y(0), -y(0), y(1), y(2), y(3), y(4), -y(4)};
      break;
    case AnsatzKind::case3:
      s = {y(0), y(1), y(2), y(3), y(3), y(4), 0.0};
      break;
  }
  return s;
}

OdeRhs make_rhs(const HamiltonianSpec& h, AnsatzKind ansatz) {
  return [&h, ansatz](double t, const VecXd& y) -> VecXd {
    const SteeringState s = unpack_state(ansatz, y);
    const auto u = h.controls.at(t);
    SteeringState d;
    switch (ansatz) {
      case AnsatzKind::full_system:
        d = rhs_full(s, u);
        break;
      case AnsatzKind::tracking_symmetric: {
        const TrackingHamiltonian& th = *h.tracking;
        d = rhs_tracking(s, th.envelope.gamma(t), th.omega1, th.omega2,
                         th.g1_fn ? th.g1_fn(t) : th.g1, th.g2, th.g3);
        break;
      }
      case AnsatzKind::case1:
        d = rhs_case1(s, u[0], u[2], u[3]);
        break;
      case AnsatzKind::case2_sym_detune:
        d = rhs_case2(s, u[0], u[2], u[3], u[4]);
        break;
      case AnsatzKind::case3:
        d = rhs_case3(s, u[0], u[1], u[2], u[3]);
        break;
    }
    return pack_state(ansatz, d);
  };
}

std::array<double, kGeneratorCount> l0_components(const Mat4c& log_u,
                                                  const GeneratorFrame& f) {
  std::array<double, kGeneratorCount> m{};
  for (int i = 0; i < kGeneratorCount; ++i) {
    m[i] = -(f.basis[i] * log_u).trace().real();
  }
  return m;
}

// Cartan-form parameters of a near-identity unitary, resolved per ansatz.
// Accurate to second order in the exponent size, which is ample for the
// seed step.
SteeringState seed_from_log(const Mat4c& u_seed, const GeneratorFrame& f,
                            AnsatzKind ansatz) {
  const auto m = l0_components(log_unitary(u_seed), f);
  const double w1 = -m[0], w2 = -m[1];
  const double c1 = -m[2], c2 = -m[3], c3 = -m[4];
  SteeringState s;
  s.c1 = c1;
  s.c2 = c2;
  s.c3 = c3;
  switch (ansatz) {
    case AnsatzKind::full_system: {
      double s1 = 0.0, s2 = 0.0;
      const double det = c3 * c3 - c2 * c2;
      if (std::abs(det) > 1e-30) {
        s1 = (c3 * m[5] + c2 * m[6]) / det;
        s2 = (c2 * m[5] + c3 * m[6]) / det;
      }
      s.alpha = 0.5 * w1 + s1;
      s.zeta = 0.5 * w1 - s1;
      s.beta = 0.5 * w2 + s2;
      s.xi = 0.5 * w2 - s2;
      break;
    }
    case AnsatzKind::tracking_symmetric:
      s.alpha = s.zeta = 0.5 * w1;
      s.beta = s.xi = 0.5 * w2;
      break;
    case AnsatzKind::case1: {
      const double s1 = (std::abs(c2) > 1e-30) ? -m[6] / c2 : 0.0;
      s.alpha = 0.5 * w1 + s1;
      s.zeta = 0.5 * w1 - s1;
      s.c3 = 0.0;
      break;
    }
    case AnsatzKind::case2_sym_detune: {
      const double s1 = (std::abs(c2 + c3) > 1e-30) ? m[5] / (c2 + c3) : 0.0;
      s.alpha = 0.5 * w1 + s1;
      s.zeta = 0.5 * w1 - s1;
      s.beta = -s.alpha;
      s.xi = -s.zeta;
      break;
    }
    case AnsatzKind::case3: {
      s.beta = -m[1];
      const double s1 = 0.5 * s.beta + ((std::abs(c2) > 1e-30) ? m[5] / c2 : 0.0);
      s.alpha = 0.5 * w1 + s1;
      s.zeta = w1 - s.alpha;
      s.c3 = s.c2;
      s.xi = 0.0;
      break;
    }
  }
  return s;
}

SteeringState tracking_state_at(const TrackingHamiltonian& th, double t) {
  const auto [alpha, beta] = alpha_beta_tracking(th, t);
  const ClassVector c = class_vector_tracking(th, t);
  SteeringState s;
  s.alpha = alpha;
  s.beta = beta;
  s.c1 = c.c1;
  s.c2 = c.c2;
  s.c3 = c.c3;
  s.zeta = alpha;
  s.xi = beta;
  return s;
}

}  // namespace

double reconstruction_tolerance() {
  if (const char* env = std::getenv("WEYLSTEER_TOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end != env && v > 0) return v;
  }
  return kReconTol;
}

Trajectory integrate(const HamiltonianSpec& h, AnsatzKind ansatz, double t_end,
                     int n_samples) {
  if (!(t_end > 0) || n_samples < 2) {
    throw std::invalid_argument("integrate: need t_end > 0 and n_samples >= 2");
  }
  if (ansatz == AnsatzKind::tracking_symmetric && !h.tracking) {
    throw std::invalid_argument(
        "integrate: tracking_symmetric ansatz requires a tracking-form spec");
  }

  const GeneratorFrame& frame = generator_frame(h.frame);
  const OdeRhs rhs = make_rhs(h, ansatz);
  OdeOptions opt;
  opt.rel_tol = 1e-10;
  opt.abs_tol = 1e-12;

  std::vector<double> sample_times(n_samples);
  for (int i = 0; i < n_samples; ++i) {
    sample_times[i] = t_end * i / (n_samples - 1);
  }
  // Integration knots: sample times plus control discontinuities; knots
  // closer than 1e-12 * t_end merge to avoid vanishing segments.
  std::set<double> knots(sample_times.begin(), sample_times.end());
  for (double b : h.controls.breakpoints) {
    if (b <= 0 || b >= t_end) continue;
    auto near = knots.lower_bound(b - 1e-12 * t_end);
    if (near == knots.end() || std::abs(*near - b) > 1e-12 * t_end) {
      knots.insert(b);
    }
  }

  const double delta =
      std::min(kSeedFraction * t_end, 0.5 * *knots.upper_bound(0.0));
  const bool needs_seed = (ansatz != AnsatzKind::tracking_symmetric);

  double t = 0.0;
  VecXd y = VecXd::Zero(state_dim(ansatz));
  if (needs_seed) {
    SteeringState s0;
    if (ansatz == AnsatzKind::full_system && h.tracking) {
      s0 = tracking_state_at(*h.tracking, delta);
    } else {
      s0 = seed_from_log(direct_propagate(h, delta).mat(), frame, ansatz);
    }
    t = delta;
    y = pack_state(ansatz, s0);
  }

  Trajectory traj;
  traj.ansatz = ansatz;
  traj.frame = h.frame;
  traj.samples.reserve(n_samples);

  const double tol = reconstruction_tolerance();
  double worst_gap = 0.0;
  double worst_t = 0.0;
  const auto record = [&](double ts, const SteeringState& s) {
    const double fid =
        fidelity_mat(reconstruct(s, frame), direct_propagate(h, ts).mat());
    if (1.0 - fid > worst_gap) {
      worst_gap = 1.0 - fid;
      worst_t = ts;
    }
    traj.samples.push_back(TrajectorySample{ts, s, fid});
  };

  record(0.0, SteeringState{});
  size_t next_sample = 1;

  int consecutive_hops = 0;
  bool analytic_mode = false;
  auto knot_it = knots.upper_bound(t);
  while (next_sample < sample_times.size()) {
    const double target = *knot_it;
    if (analytic_mode) {
      if (std::find(sample_times.begin(), sample_times.end(), target) !=
          sample_times.end()) {
        record(target, tracking_state_at(*h.tracking, target));
        ++next_sample;
      }
      t = target;
      ++knot_it;
      continue;
    }
    // Adaptive march to the next knot with retry on singular states.
    double hstep = std::min(target - t, t_end / 200.0);
    bool escalate = false;
    while (t < target) {
      hstep = std::min(hstep, target - t);
      OdeStepResult step;
      bool singular = false;
      try {
        step = dopri5_trial_step(rhs, t, y, hstep, opt);
      } catch (const SingularStateError&) {
        singular = true;
      }
      if (!singular && step.error_norm <= 1.0) {
        t += hstep;
        y = step.y_new;
        const double grow =
            (step.error_norm > 0) ? 0.9 * std::pow(step.error_norm, -0.2) : 5.0;
        hstep *= std::clamp(grow, 0.2, 5.0);
        consecutive_hops = 0;
      } else {
        hstep *= singular ? 0.5
                          : std::max(0.2, 0.9 * std::pow(step.error_norm, -0.2));
        if (hstep < 1e-12 * t_end) {
          escalate = true;
          break;
        }
      }
    }
    if (escalate) {
      if (!(h.tracking && ansatz == AnsatzKind::full_system)) {
        throw SingularStateError(
            "integrate: steering system degenerate at t = " + std::to_string(t),
            t);
      }
      // Seed-stepper escalation: hop across the degenerate zone on the
      // analytic tracking solution; switch to it entirely when the
      // degeneracy persists.
      if (++consecutive_hops > 2) {
        analytic_mode = true;
        continue;
      }
      const double t_hop = std::min(t + delta, target);
      y = pack_state(ansatz, tracking_state_at(*h.tracking, t_hop));
      t = t_hop;
      if (t < target) continue;
    }
    if (std::find(sample_times.begin(), sample_times.end(), target) !=
        sample_times.end()) {
      record(target, unpack_state(ansatz, y));
      ++next_sample;
    }
    ++knot_it;
  }

  if (worst_gap > tol) {
    std::ostringstream msg;
    msg << "integrate: reconstruction fidelity " << (1.0 - worst_gap)
        << " at t = " << worst_t << " is below the acceptance threshold "
        << (1.0 - tol);
    throw NumericalError(msg.str());
  }
  return traj;
}

}  // namespace weylsteer
