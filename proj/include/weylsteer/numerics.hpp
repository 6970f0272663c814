#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace weylsteer {

using VecXd = Eigen::VectorXd;

/// Adaptive Gauss-Kronrod (7, 15) quadrature with recursive bisection.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol = 1e-12,
                          double abs_tol = 1e-14);

/// Monotone piecewise-cubic interpolant (Fritsch-Carlson slopes) with an
/// exact piecewise integral. Knots must be strictly increasing.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double t) const;
  /// Integral of the interpolant from the first knot to t.
  double integral_from_start(double t) const;
  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

 private:
  int segment(double t) const;
  std::vector<double> x_, y_, slope_, cum_;
};

struct OdeOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 0.0;  // 0: choose automatically
  int max_steps = 2'000'000;
};

using OdeRhs = std::function<VecXd(double, const VecXd&)>;

/// One embedded Dormand-Prince 5(4) trial step from (t, y) with step h.
/// Returns the 5th-order solution and the scaled error-norm estimate.
struct OdeStepResult {
  VecXd y_new;
  double error_norm = 0.0;  // <= 1 means step accepted at tolerance
};
OdeStepResult dopri5_trial_step(const OdeRhs& rhs, double t, const VecXd& y,
                                double h, const OdeOptions& opt);

/// Integrate from t0 to t1 with adaptive step control; steps are capped so
/// the trajectory lands exactly on t1. Throws NumericalError when the step
/// size collapses.
VecXd ode_integrate(const OdeRhs& rhs, double t0, double t1, VecXd y0,
                    const OdeOptions& opt = {});

}  // namespace weylsteer
