#include <cmath>

#include "doctest.h"
#include "vsum/hankel.hpp"

using namespace vsum;

namespace {

TestFunction bump(double T, double rho, double amp = 1.0) {
  TestFunction f;
  f.w.T = T;
  f.w.Delta = 2.0;
  f.w.amplitude = amp;
  f.rho = rho;
  return f;
}

}  // namespace

TEST_CASE("weights") {
  WeightSpec w;
  w.T = 10.0;
  CHECK(weight_real(w, 9.99) == 0.0);
  CHECK(weight_real(w, 20.01) == 0.0);
  CHECK(weight_real(w, 15.0) == doctest::Approx(1.0));
  CHECK(weight_real(w, -15.0) == doctest::Approx(1.0));
  CHECK(smooth_step(-0.1) == 0.0);
  CHECK(smooth_step(1.1) == 1.0);
  CHECK(smooth_step(0.5) == doctest::Approx(0.5));
}

TEST_CASE("zero weight has zero transform") {
  RealKernel k(delta_params());
  TestFunction f = bump(10.0, 0.3, 0.0);
  CHECK(std::abs(hankel_real(k, f, 0.7, 1e-10).value) == 0.0);
  HankelPlan plan(k, f);
  CHECK(std::abs(plan(0.7)) == 0.0);
}

TEST_CASE("panel refinement converges") {
  RealKernel k(delta_params());
  TestFunction f = bump(10.0, 0.5);
  for (double y : {0.01, 2.0}) {
    HankelValue a = hankel_real(k, f, y, 1e-9, 8.0), b = hankel_real(k, f, y, 1e-9, 16.0);
    CHECK(std::abs(a.value - b.value) <= 1e-7 * std::max(1.0, std::abs(b.value)));
  }
}

TEST_CASE("plan agrees with direct quadrature") {
  for (const auto& p : {delta_params(), sym2_delta_params()}) {
    RealKernel k(p);
    TestFunction f = bump(8.0, 0.4);
    HankelPlan plan(k, f);
    for (double y : {-0.05, 0.002, 0.4, 3.0}) {
      HankelValue d = hankel_real(k, f, y, 1e-9);
      HankelValue q = plan.eval(y);
      CHECK(std::abs(d.value - q.value) < 1e-6 * std::max(1.0, std::abs(d.value)) + 3.0 * q.err);
    }
  }
}

TEST_CASE("decay regimes") {
  RealKernel k(delta_params());
  std::vector<double> grid = log_grid(1e-4, 1e3, 80);

  // rho = 0: bounded for T|y| <= 1, then rapid decay
  TestFunction f0 = bump(20.0, 0.0);
  DecayReport d0 = decay_scan(k, f0, grid, 2.0, 1e3, 2e4);
  CHECK(d0.small_sup < 1e2);
  CHECK(d0.tail_points > 0);
  CHECK(d0.tail_ok);

  // the stationary window plateau is stable when T grows at fixed T rho
  double sup[2];
  int i = 0;
  for (double T : {20.0, 80.0}) {
    TestFunction f = bump(T, 50.0 / T);
    DecayReport d = decay_scan(k, f, log_grid(1e-3, 1e3, 200), 2.0, 1e4, 1e5);
    CHECK(d.window_reached);
    sup[i++] = d.window_sup;
  }
  CHECK(sup[1] / sup[0] < 2.0);
  CHECK(sup[1] / sup[0] > 0.5);
}

TEST_CASE("complex place rotation") {
  BesselParamsComplex p{2, {cplx(0.0, 0.4), cplx(0.0, -0.4)}, {0, 0}, 40};
  TestFunction f;
  f.w.complex_place = true;
  f.w.T = 1.0;
  f.w.Delta = 2.0;
  f.w.angular_mode = 1;
  f.w.angular_amp = 0.5;
  TestFunction g = f;
  const double a = 0.7;
  g.w.angular_phase = -a;
  // g(z) = f(z e^{i a}), so g~(u) = f~(u e^{-i a})
  for (cplx u : {cplx(0.3, 0.1), cplx(-0.2, 0.5)}) {
    HankelValue fu = hankel_complex(p, f, u * std::polar(1.0, -a), 1e-6);
    HankelValue gu = hankel_complex(p, g, u, 1e-6);
    CHECK(std::abs(fu.value - gu.value) < 1e-4 * std::max(1.0, std::abs(fu.value)));
  }
}
