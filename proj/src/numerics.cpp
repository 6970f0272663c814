#include "weylsteer/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "weylsteer/errors.hpp"

namespace weylsteer {

namespace {

// Gauss-Kronrod 15-point nodes/weights on [-1, 1]; the embedded 7-point
// Gauss rule uses the odd-indexed nodes.
constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0};
constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct PanelResult {
  double integral;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double resk = 0.0, resg = 0.0;
  const double fc = f(c);
  resk += kKronrodWeights[7] * fc;
  resg += kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double x = h * kKronrodNodes[i];
    const double fsum = f(c - x) + f(c + x);
    resk += kKronrodWeights[i] * fsum;
    if (i % 2 == 1) resg += kGaussWeights[i / 2] * fsum;
  }
  return PanelResult{resk * h, std::abs(resk - resg) * h};
}

double integrate_panel(const std::function<double(double)>& f, double a,
                       double b, double tol, int depth) {
  const PanelResult r = gk15(f, a, b);
  if (r.error <= tol || depth >= 48) {
    if (depth >= 48 && r.error > 1e3 * tol) {
      throw NumericalError("integrate_adaptive: panel refinement exhausted");
    }
    return r.integral;
  }
  const double c = 0.5 * (a + b);
  return integrate_panel(f, a, c, 0.5 * tol, depth + 1) +
         integrate_panel(f, c, b, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, double abs_tol) {
  if (a == b) return 0.0;
  const PanelResult whole = gk15(f, a, b);
  const double tol =
      std::max(abs_tol, rel_tol * std::max(1e-300, std::abs(whole.integral)));
  if (whole.error <= tol) return whole.integral;
  const double c = 0.5 * (a + b);
  return integrate_panel(f, a, c, 0.5 * tol, 1) +
         integrate_panel(f, c, b, 0.5 * tol, 1);
}

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  if (n < 2 || y_.size() != n) {
    throw std::invalid_argument("MonotoneCubic: need >= 2 knots, equal sizes");
  }
  for (size_t i = 1; i < n; ++i) {
    if (!(x_[i] > x_[i - 1])) {
      throw std::invalid_argument("MonotoneCubic: knots must be increasing");
    }
  }
  std::vector<double> d(n - 1);
  for (size_t i = 0; i + 1 < n; ++i) {
    d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  }
  slope_.assign(n, 0.0);
  slope_[0] = d[0];
  slope_[n - 1] = d[n - 2];
  for (size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0) {
      slope_[i] = 0.0;
    } else {
      // Fritsch-Carlson weighted harmonic mean keeps the piece monotone.
      const double w1 = 2 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
      const double w2 = (x_[i + 1] - x_[i]) + 2 * (x_[i] - x_[i - 1]);
      slope_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  // Clamp endpoint slopes that would overshoot.
  for (size_t i : {size_t{0}, n - 1}) {
    const double dd = (i == 0) ? d[0] : d[n - 2];
    if (slope_[i] * dd <= 0) {
      slope_[i] = 0.0;
    } else if (std::abs(slope_[i]) > 3 * std::abs(dd)) {
      slope_[i] = 3 * dd;
    }
  }
  cum_.assign(n, 0.0);
  for (size_t i = 0; i + 1 < n; ++i) {
    const double h = x_[i + 1] - x_[i];
    // Exact integral of the Hermite cubic over the segment.
    cum_[i + 1] = cum_[i] + h * (0.5 * (y_[i] + y_[i + 1]) +
                                 h * (slope_[i] - slope_[i + 1]) / 12.0);
  }
}

int MonotoneCubic::segment(double t) const {
  auto it = std::upper_bound(x_.begin(), x_.end(), t);
  int i = static_cast<int>(it - x_.begin()) - 1;
  return std::clamp(i, 0, static_cast<int>(x_.size()) - 2);
}

double MonotoneCubic::operator()(double t) const {
  t = std::clamp(t, x_.front(), x_.back());
  const int i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  const double h00 = (1 + 2 * s) * (1 - s) * (1 - s);
  const double h10 = s * (1 - s) * (1 - s);
  const double h01 = s * s * (3 - 2 * s);
  const double h11 = s * s * (s - 1);
  return h00 * y_[i] + h10 * h * slope_[i] + h01 * y_[i + 1] +
         h11 * h * slope_[i + 1];
}

double MonotoneCubic::integral_from_start(double t) const {
  t = std::clamp(t, x_.front(), x_.back());
  const int i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  // Antiderivatives of the Hermite basis polynomials at s.
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
  const double H00 = s - s3 + 0.5 * s4;
  const double H10 = 0.5 * s2 - (2.0 / 3.0) * s3 + 0.25 * s4;
  const double H01 = s3 - 0.5 * s4;
  const double H11 = 0.25 * s4 - s3 / 3.0;
  return cum_[i] + h * (H00 * y_[i] + H10 * h * slope_[i] + H01 * y_[i + 1] +
                        H11 * h * slope_[i + 1]);
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
constexpr double kE[7] = {71.0 / 57600,    0.0,          -71.0 / 16695,
                          71.0 / 1920,     -17253.0 / 339200,
                          22.0 / 525,      -1.0 / 40};

}  // namespace

OdeStepResult dopri5_trial_step(const OdeRhs& rhs, double t, const VecXd& y,
                                double h, const OdeOptions& opt) {
  const int n = static_cast<int>(y.size());
  std::array<VecXd, 7> k;
  k[0] = rhs(t, y);
  for (int s = 1; s < 7; ++s) {
    VecXd ys = y;
    for (int j = 0; j < s; ++j) {
      if (kA[s][j] != 0.0) ys += (h * kA[s][j]) * k[j];
    }
    k[s] = rhs(t + kC[s] * h, ys);
  }
  // Stage 7 is evaluated at the 5th-order solution (FSAL form).
  VecXd y5 = y;
  for (int j = 0; j < 6; ++j) {
    if (kA[6][j] != 0.0) y5 += (h * kA[6][j]) * k[j];
  }
  VecXd err = VecXd::Zero(n);
  for (int j = 0; j < 7; ++j) {
    if (kE[j] != 0.0) err += (h * kE[j]) * k[j];
  }
  double norm = 0.0;
  for (int i = 0; i < n; ++i) {
    const double scale =
        opt.abs_tol + opt.rel_tol * std::max(std::abs(y(i)), std::abs(y5(i)));
    const double e = err(i) / scale;
    norm += e * e;
  }
  norm = std::sqrt(norm / n);
  return OdeStepResult{std::move(y5), norm};
}

VecXd ode_integrate(const OdeRhs& rhs, double t0, double t1, VecXd y0,
                    const OdeOptions& opt) {
  if (t1 == t0) return y0;
  const double dir = (t1 > t0) ? 1.0 : -1.0;
  const double span = std::abs(t1 - t0);
  double h = (opt.initial_step > 0) ? opt.initial_step : span / 100.0;
  h = std::min(h, span);
  double t = t0;
  VecXd y = std::move(y0);
  int steps = 0;
  while (dir * (t1 - t) > 0) {
    if (++steps > opt.max_steps) {
      throw NumericalError("ode_integrate: step budget exhausted");
    }
    h = std::min(h, std::abs(t1 - t));
    const OdeStepResult r = dopri5_trial_step(rhs, t, y, dir * h, opt);
    if (r.error_norm <= 1.0) {
      t += dir * h;
      y = r.y_new;
      const double grow =
          (r.error_norm > 0) ? 0.9 * std::pow(r.error_norm, -0.2) : 5.0;
      h *= std::clamp(grow, 0.2, 5.0);
    } else {
      h *= std::max(0.2, 0.9 * std::pow(r.error_norm, -0.2));
      if (h < 1e-15 * span) {
        throw NumericalError("ode_integrate: step size collapsed at t = " +
                             std::to_string(t));
      }
    }
  }
  return y;
}

}  // namespace weylsteer
