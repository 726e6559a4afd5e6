#include <cmath>

#include "doctest.h"

#include "da2gc/quadrature.hpp"
#include "da2gc/units.hpp"

using namespace da2gc;

TEST_CASE("polynomials are integrated exactly by a single rule") {
  const auto r = integrate([](double x) { return 3 * x * x - 2 * x + 1; }, -1.0, 2.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(9.0 - 3.0 + 3.0).epsilon(1e-14));
}

TEST_CASE("reversed bounds flip the sign") {
  const auto f = [](double x) { return std::exp(x); };
  CHECK(integrate(f, 1.0, 0.0).value == doctest::Approx(-(std::exp(1.0) - 1.0)).epsilon(1e-12));
  CHECK(integrate(f, 0.5, 0.5).value == 0.0);
}

TEST_CASE("peaked integrand converges to the closed form") {
  // Lorentzian with a sharp peak; exact value is atan(b/eps) - atan(a/eps) over eps.
  const double eps = 1e-3;
  const auto r = integrate([&](double x) { return 1.0 / (x * x + eps * eps); }, -1.0, 2.0);
  const double exact = (std::atan(2.0 / eps) + std::atan(1.0 / eps)) / eps;
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(exact).epsilon(1e-9));
}

TEST_CASE("2-D integral of a separable function") {
  const auto r = integrate_2d([](double x, double y) { return std::sin(x) * std::exp(y); }, 0.0, kPi, 0.0, 1.0);
  CHECK(r.converged);
  CHECK(r.value == doctest::Approx(2.0 * (std::exp(1.0) - 1.0)).epsilon(1e-11));
}
