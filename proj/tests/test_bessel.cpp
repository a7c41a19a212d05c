#include <boost/math/special_functions/bessel.hpp>
#include <cmath>
#include <random>

#include "doctest.h"
#include "vsum/bessel.hpp"

using namespace vsum;

namespace {

// Stirling series after shifting z by 12, independent of the library's log_gamma
cplx gamma_oracle(cplx z) {
  cplx shift = 1.0;
  while (z.real() < 12.0) {
    shift *= z;
    z += 1.0;
  }
  cplx l = (z - 0.5) * std::log(z) - z + 0.5 * std::log(kTwoPi);
  cplx z2 = z * z, zp = z;
  const double B[] = {1.0 / 12, -1.0 / 360, 1.0 / 1260, -1.0 / 1680, 1.0 / 1188, -691.0 / 360360};
  for (double b : B) {
    l += b / zp;
    zp *= z2;
  }
  return std::exp(l) / shift;
}

}  // namespace

TEST_CASE("local gamma factors") {
  CHECK(std::abs(gamma_factor_real(0.5, 0) - 1.0) < 1e-14);
  CHECK(std::abs(gamma_factor_real(0.5, 1) - cplx(0.0, 1.0)) < 1e-14);
  CHECK(std::abs(gamma_factor_real(1.0, 0)) < 1e-14);
  CHECK(std::abs(gamma_factor_complex(0.5, 0) - 1.0) < 1e-14);
  CHECK(std::abs(gamma_factor_complex(0.5, 2) + 1.0) < 1e-14);
  // G_m(s) = i^|m| (2 pi)^{1-2s} Gamma(s + |m|/2) / Gamma(1 - s + |m|/2)
  cplx s(0.3, 2.0);
  cplx want = cplx(0.0, 1.0) * std::pow(kTwoPi, 1.0 - 2.0 * s) * gamma_oracle(s + 0.5) / gamma_oracle(1.0 - s + 0.5);
  CHECK(std::abs(gamma_factor_complex(s, 1) - want) < 1e-10 * std::abs(want));
  CHECK_THROWS_AS(gamma_factor_real(-2.0, 0), PoleError);
}

TEST_CASE("GL2 kernel is the classical order-11 Bessel function") {
  RealKernel k(delta_params());
  std::vector<double> ratio;
  for (int i = 0; i < 50; ++i) {
    double x = 2.0 + 8.0 * i / 49.0;
    double j = boost::math::cyl_bessel_j(11, 4.0 * M_PI * x);
    if (std::abs(j) < 1e-3) continue;  // skip near zeros of the oracle
    ratio.push_back(bessel_kernel_real(k, x * x, 1e-13).value.real() / j);
  }
  double m = 0.0, v = 0.0;
  for (double r : ratio) m += r;
  m /= ratio.size();
  for (double r : ratio) v += (r - m) * (r - m);
  CHECK(std::sqrt(v / ratio.size()) / std::abs(m) < 1e-6);
  CHECK(m == doctest::Approx(2.0 * M_PI).epsilon(1e-8));
  // discrete series: J vanishes on the negative axis
  CHECK(std::abs(bessel_kernel_real(k, -4.0, 1e-12).value) < 1e-12);
}

TEST_CASE("small-argument bound") {
  RealKernel k(delta_params());
  double C = 0.0;
  for (double x = 1e-3; x <= 1.0; x *= 1.5) C = std::max(C, std::abs(bessel_kernel_real(k, x, 1e-13).value) * std::sqrt(x));
  CHECK(C < 10.0);
}

TEST_CASE("contour independence") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> X(0.5, 30.0), S(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    BesselParamsReal p = i % 2 ? delta_params() : sym2_delta_params();
    double x = X(rng) * (S(rng) < 0.3 ? -1.0 : 1.0);
    ContourSpec a, b;
    a.sigma1 = -1.0;
    b.sigma1 = -1.5;
    KernelValue va = bessel_kernel_real(p, x, 1e-12, a), vb = bessel_kernel_real(p, x, 1e-12, b);
    CHECK(std::abs(va.value - vb.value) < 1e-8);
  }
}

TEST_CASE("asymptotic frequency and the negative axis") {
  std::vector<double> g;
  for (int i = 0; i < 400; ++i) g.push_back(5.0 + 45.0 * i / 399.0);
  AsymptoticReport r2 = asymptotic_check_real(delta_params(), g, 1e-10);
  CHECK(r2.frequency_pos == doctest::Approx(2.0).epsilon(0.005));

  std::vector<double> g3;
  for (int i = 0; i < 600; ++i) g3.push_back(10.0 + 30.0 * i / 599.0);
  AsymptoticReport r3 = asymptotic_check_real(sym2_delta_params(), g3, 1e-10);
  CHECK(r3.frequency_pos == doctest::Approx(3.0).epsilon(0.01 / 3.0));

  // principal series r = 2: J(-x^2) falls like exp(-4 pi x)
  BesselParamsReal ps{2, {cplx(0.0, 1.3), cplx(0.0, -1.3)}, {0, 0}};
  RealKernel k(ps);
  double a = std::abs(bessel_kernel_real(k, -25.0, 1e-30).value);
  double b = std::abs(bessel_kernel_real(k, -100.0, 1e-30).value);
  CHECK(b / a < std::exp(-kTwoPi * 2.0 * 5.0) * 1.5);
}

TEST_CASE("complex kernel") {
  BesselParamsComplex p{2, {cplx(0.0, 0.7), cplx(0.0, -0.7)}, {0, 0}, 60};
  cplx z(0.8, 0.5);
  ComplexKernelValue a = bessel_kernel_complex(p, z, 1e-10), b = bessel_kernel_complex(p, std::conj(z), 1e-10);
  CHECK(std::abs(a.value - std::conj(b.value)) < 1e-8);

  double C = 0.0;
  for (double r : {0.05, 0.1, 0.3, 0.6, 1.0})
    for (double phi : {0.0, 1.0, 2.5})
      C = std::max(C, std::abs(bessel_kernel_complex(p, std::polar(r, phi), 1e-10).value) * r);
  CHECK(C < 50.0);

  for (double r : {0.5, 1.0, 2.0}) {
    cplx w = std::polar(r, 0.9);
    ComplexKernelValue t1 = bessel_kernel_complex(p, w, 1e-10, 40), t2 = bessel_kernel_complex(p, w, 1e-10, 45);
    CHECK(std::abs(t1.value - t2.value) < 1e-8);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS(validate(BesselParamsReal{2, {cplx(1.0, 0.0), cplx(0.0, 0.0)}, {0, 0}}));
  CHECK_THROWS(validate(BesselParamsReal{3, {cplx(1.0, 0.0)}, {0}}));
}
