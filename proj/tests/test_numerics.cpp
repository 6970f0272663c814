#include "weylsteer/numerics.hpp"

#include <cmath>

#include "doctest.h"
#include "test_util.hpp"

using namespace weylsteer;
using weylsteer::testing::kPi;

TEST_CASE("adaptive quadrature on known integrals") {
  CHECK(integrate_adaptive([](double) { return 1.0; }, 0, 3.5) ==
        doctest::Approx(3.5).epsilon(1e-14));
  const double T = 2.3;
  CHECK(integrate_adaptive(
            [T](double t) { return std::pow(std::sin(kPi * t / T), 2); }, 0, T) ==
        doctest::Approx(T / 2).epsilon(1e-12));
  // oscillatory integrand with a known antiderivative
  CHECK(integrate_adaptive([](double t) { return std::exp(-t) * std::cos(10 * t); },
                           0, 5.0) ==
        doctest::Approx((1.0 - std::exp(-5.0) * (std::cos(50.0) - 10 * std::sin(50.0))) /
                        101.0)
            .epsilon(1e-12));
  CHECK(integrate_adaptive([](double) { return 1.0; }, 1.0, 1.0) == 0.0);
}

TEST_CASE("monotone cubic: interpolation, monotonicity, exact integral") {
  const std::vector<double> x{0.0, 0.5, 1.2, 2.0, 3.0};
  const std::vector<double> y{0.0, 0.4, 0.9, 1.0, 1.0};
  const MonotoneCubic f(x, y);
  for (size_t i = 0; i < x.size(); ++i) {
    CHECK(f(x[i]) == doctest::Approx(y[i]).epsilon(1e-14));
  }
  double prev = f(0.0);
  for (double t = 0.0; t <= 3.0; t += 0.01) {
    const double v = f(t);
    CHECK(v >= prev - 1e-12);  // monotone data stays monotone
    prev = v;
  }
  // closed-form segment integral vs quadrature of the interpolant
  const double quad = integrate_adaptive([&](double t) { return f(t); }, 0.0, 2.7);
  CHECK(f.integral_from_start(2.7) == doctest::Approx(quad).epsilon(1e-11));
}

TEST_CASE("dopri5 integrates stiff-free problems to tolerance") {
  // y' = -y, y(0) = 1
  const OdeRhs decay = [](double, const VecXd& y) { return VecXd(-y); };
  VecXd y0(1);
  y0 << 1.0;
  const VecXd y1 = ode_integrate(decay, 0.0, 3.0, y0);
  CHECK(y1(0) == doctest::Approx(std::exp(-3.0)).epsilon(1e-9));

  // harmonic oscillator over many periods
  const OdeRhs osc = [](double, const VecXd& y) {
    VecXd d(2);
    d << y(1), -y(0);
    return d;
  };
  VecXd z0(2);
  z0 << 1.0, 0.0;
  const VecXd z1 = ode_integrate(osc, 0.0, 10 * kPi, z0);
  CHECK(z1(0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(std::abs(z1(1)) < 1e-7);
}
