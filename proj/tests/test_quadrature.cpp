#include <cmath>

#include "doctest.h"
#include "vsum/gamma.hpp"
#include "vsum/quadrature.hpp"

using namespace vsum;

TEST_CASE("Gauss-Legendre rules") {
  for (int n : {4, 16, 64}) {
    const GaussRule& r = gauss_legendre(n);
    double s = 0.0;
    for (double w : r.w) s += w;
    CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
    // exact for degree 2n - 1
    double m = 0.0;
    for (int i = 0; i < n; ++i) m += r.w[i] * std::pow(r.x[i], 2 * n - 2);
    CHECK(m == doctest::Approx(2.0 / (2 * n - 1)).epsilon(1e-12));
  }
  cplx v = integrate_gl([](double x) { return cplx(std::exp(x), 0.0); }, 0.0, 1.0, 4, 16);
  CHECK(v.real() == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-14));
}

TEST_CASE("adaptive Gauss-Kronrod") {
  AdaptiveOptions o;
  o.abstol = 1e-12;
  QuadResult r = integrate_gk([](double x) { return cplx(std::sqrt(x), 0.0); }, 0.0, 1.0, o);
  CHECK(std::abs(r.value.real() - 2.0 / 3.0) < 1e-11);
  CHECK(r.err < 1e-11);
  QuadResult s = integrate_gk([](double x) { return std::exp(cplx(0.0, 40.0 * x)); }, 0.0, 1.0, o);
  cplx exact = (std::exp(cplx(0.0, 40.0)) - 1.0) / cplx(0.0, 40.0);
  CHECK(std::abs(s.value - exact) < 1e-11);
}

TEST_CASE("log Gamma") {
  CHECK(std::exp(log_gamma(cplx(5.0, 0.0))).real() == doctest::Approx(24.0).epsilon(1e-13));
  CHECK(std::exp(log_gamma(cplx(0.5, 0.0))).real() == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
  // reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z)
  for (cplx z : {cplx(0.3, 2.0), cplx(-2.7, 0.4), cplx(0.1, -15.0)}) {
    cplx lhs = log_gamma(z) + log_gamma(1.0 - z);
    cplx rhs = std::log(M_PI) - log_sin_pi(z);
    cplx d = std::exp(lhs - rhs);
    CHECK(std::abs(d - 1.0) < 1e-12);
  }
  CHECK(near_gamma_pole(cplx(-3.0, 0.0)));
  CHECK_THROWS_AS(log_gamma(cplx(-2.0, 0.0)), PoleError);
}
