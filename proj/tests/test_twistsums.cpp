#include <cmath>
#include <random>

#include "doctest.h"
#include "vsum/twistsums.hpp"

using namespace vsum;

namespace {

std::shared_ptr<const CoefficientProvider> delta() { return make_provider("delta"); }

}  // namespace

TEST_CASE("sharp sums over Q") {
  auto p = delta();
  CHECK(sharp_sum_q(*p, 0.0, 5.0).real() == doctest::Approx(0.939339827).epsilon(1e-9));
  CHECK(sharp_sum_q(*p, 0.5, 5.0).real() == doctest::Approx(-3.060660172).epsilon(1e-9));
  CHECK(std::abs(sharp_sum_q(*p, 0.3, 1.9)) == 0.0);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  for (int i = 0; i < 20; ++i) {
    double th = U(rng);
    cplx s = sharp_sum_q(*p, th, 300.0);
    CHECK(std::abs(s - sharp_sum_q(*p, th + 1.0, 300.0)) < 1e-10);
    CHECK(std::abs(std::conj(s) - sharp_sum_q(*p, -th, 300.0)) < 1e-10);
  }
}

TEST_CASE("field sharp sum reduces to Q") {
  NumberField Q = NumberField::rationals();
  auto p = delta();
  TwistQuery q;
  q.field = &Q;
  q.provider = p.get();
  q.theta.real = {0.5};
  q.T = 5.0;
  CHECK(sharp_sum(q).real() == doctest::Approx(-3.060660172).epsilon(1e-9));
}

TEST_CASE("smooth sums") {
  auto p = delta();
  WeightSpec w;
  w.T = 40.0;
  w.Delta = 2.0;
  for (double th : {0.0, 0.137, 0.5}) {
    cplx want = 0.0;
    for (long long n = 40; n <= 80; ++n)
      for (int s : {1, -1}) want += p->a(n) * weight_real(w, double(s * n)) * e(th * s * n);
    CHECK(std::abs(smooth_sum_q(*p, th, w) - want) < 1e-10);
  }
  w.amplitude = 0.0;
  CHECK(std::abs(smooth_sum_q(*p, 0.2, w)) == 0.0);
}

TEST_CASE("smooth sum on Gaussian integers") {
  NumberField F = NumberField::load(std::string(VSUM_SOURCE_DIR) + "/configs/fields/Qi.json");
  auto p = make_provider("synthetic2", 3);
  WeightSpec w;
  w.complex_place = true;
  w.T = 4.0;
  w.Delta = 2.0;
  TwistQuery q;
  q.field = &F;
  q.provider = p.get();
  q.smooth = true;
  q.w = {w};
  q.theta.cpx = {cplx(0.21, 0.37)};
  cplx want = 0.0;
  for (long long a = -10; a <= 10; ++a)
    for (long long b = -10; b <= 10; ++b) {
      if (a == 0 && b == 0) continue;
      FieldElement g = FieldElement::from_ints({a, b});
      double wv = weight_complex(w, cplx(double(a), double(b)));
      if (wv == 0.0) continue;
      // Tr(theta g) = 2 Re(theta g)
      want += p->at(F, g) * wv * e(2.0 * (q.theta.cpx[0] * cplx(double(a), double(b))).real());
    }
  CHECK(std::abs(smooth_sum(q) - want) < 1e-9);
}

TEST_CASE("annulus and sharp-from-smooth") {
  auto p = delta();
  AnnulusComparison a = annulus_comparison(*p, 0.3, 40.0);
  CHECK(std::abs(a.sharp - annulus_sum_q(*p, 0.3, 40.0)) < 1e-12);
  CHECK(a.outside == 0);
  CHECK(a.diff < 1e-12);
  AnnulusComparison b = annulus_comparison(*p, 0.3, 40.0, 3.0);
  CHECK(b.outside > 0);
  CHECK(b.diff == doctest::Approx(std::abs(b.sharp - b.smooth)));

  for (double th : {0.0, 0.25, 0.618}) {
    AssemblyReport r = sharp_from_smooth(*p, th, 24);
    CHECK(std::abs(r.sharp - annulus_sum_q(*p, th, 24.0)) < 1e-12);
    CHECK(r.within);
    CHECK(r.diff <= r.envelope);
  }
}

TEST_CASE("smoothing kernel") {
  NumberField Q = NumberField::rationals();
  SmoothingKernel k(Q, 16.0);
  CHECK(k.g(8.0) == 1.0);
  CHECK(k.g(8.5) == doctest::Approx(0.5));
  CHECK(k.g(9.0) == 0.0);
  CHECK(k.ghat(0.0) == doctest::Approx(17.0));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int i = 0; i < 100; ++i) {
    double t = U(rng);
    CHECK(std::abs(k.ghat(t) - k.ghat_quad(t)) < 1e-8);
  }
  CHECK_THROWS(SmoothingKernel(Q, 3.0, 1.0));

  for (double X : {4.0, 16.0, 64.0}) {
    SmoothingKernel kx(Q, X);
    DualCheck d = dual_property_check(kx, static_cast<long long>(4 * X));
    CHECK(d.violations == 0);
    CHECK(d.max_err < 1e-6);
  }
  CHECK(k.dual({1}) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(std::abs(k.dual({10})) < 1e-6);

  double err = 0.0;
  double l1 = k.l1(&err);
  CHECK(err < 1e-3);
  CHECK(l1 > 1.0);
  CHECK(l1 < 10.0);
}

TEST_CASE("Parseval") {
  auto p = delta();
  ParsevalReport r = parseval_check(*p, 256.0);
  CHECK(r.rel_diff < 1e-10);
  CHECK(r.samples > 0);
}

TEST_CASE("line fit") {
  LinearFit f = fit_line({0.0, 1.0, 2.0, 3.0}, {1.0, 3.0, 5.0, 7.0});
  CHECK(f.slope == doctest::Approx(2.0));
  CHECK(f.intercept == doctest::Approx(1.0));
  CHECK(f.stderr_slope < 1e-12);
}

TEST_CASE("exponent scans") {
  auto c = make_provider("constant");
  ScanReport rc = exponent_scan(*c, {0.0}, dyadic_grid(6, 12));
  CHECK(rc.slope == doctest::Approx(1.0).epsilon(0.02));

  auto p = delta();
  std::vector<double> grid = default_theta_grid(16);
  CHECK(grid.size() == 32);
  ScanReport r = exponent_scan(*p, grid, dyadic_grid(8, 13));
  CHECK(r.n_points == 6);
  CHECK(r.slope < 0.75);
  CHECK(r.slope > 0.25);
  CHECK(r.ci > 0.0);
  for (size_t i = 0; i < r.T.size(); ++i) CHECK(r.max_abs[i] == doctest::Approx(std::abs(r.at(i, r.argmax[i]))));
}

TEST_CASE("pipeline") {
  auto p = delta();
  const double th = std::sqrt(2.0) - 1.0;
  for (double T : {1e4, 2e4}) {
    PipelineReport r = pipeline_bound_check(p, th, T);
    CHECK(r.approx_ok);
    CHECK(r.beta <= std::sqrt(T) + 1e-9);
    CHECK(r.rel_residual < 1e-3);
    CHECK(r.scale > 0.01);
    CHECK(r.scale < 100.0);
  }
  PipelineReport q = pipeline_bound_check(p, 0.375, 1e4);
  CHECK(q.alpha == 3);
  CHECK(q.beta == 8);
  CHECK(q.eta == 0.0);
  CHECK(q.approx_residual == 0.0);

  PipelineReport g = pipeline_bound_check(make_provider("sym2delta"), 0.3, 500.0);
  CHECK(g.rank == 3);
  REQUIRE(g.divisors.size() == 4);
  REQUIRE(g.predicted.size() == 4);
  const double r1 = g.divisors[0].abs_sum / g.predicted[0];
  for (size_t i = 1; i < g.divisors.size(); ++i) CHECK(g.divisors[i].abs_sum / g.predicted[i] <= 2.0 * r1);
}
