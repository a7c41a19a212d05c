#include <cmath>

#include "doctest.h"
#include "vsum/voronoi.hpp"

using namespace vsum;

namespace {

cplx lhs_oracle(const VoronoiInstance& inst) {
  cplx s = 0.0;
  long long lo = static_cast<long long>(std::ceil(inst.f.support_lo()));
  long long hi = static_cast<long long>(std::floor(inst.f.support_hi()));
  for (long long n = lo; n <= hi; ++n)
    for (int sg : {1, -1}) {
      double x = double(sg * n);
      s += inst.provider->a(n) * e(double(inst.alpha) * x / double(inst.beta)) * inst.f.real_value(x);
    }
  return s;
}

}  // namespace

TEST_CASE("empty support") {
  VoronoiInstance inst = make_gl2_instance(1, 3, 20.0, 0.0);
  inst.f.w.amplitude = 0.0;
  VoronoiReport r = verify_identity(inst);
  CHECK(std::abs(r.lhs) == 0.0);
  CHECK(std::abs(r.rhs) == 0.0);
  CHECK(r.pass);
}

TEST_CASE("left side against a direct sum") {
  for (auto [a, b] : {std::pair{0LL, 1LL}, {1LL, 2LL}, {2LL, 7LL}, {-3LL, 10LL}}) {
    VoronoiInstance inst = make_gl2_instance(a, b, 25.0, 0.03);
    CHECK(std::abs(lhs_sum(inst) - lhs_oracle(inst)) < 1e-12);
  }
  // at 1/2 the twist is (-1)^n
  VoronoiInstance h = make_gl2_instance(1, 2, 10.0, 0.0);
  cplx s = 0.0;
  for (long long n = 10; n <= 20; ++n) s += 2.0 * (n % 2 ? -1.0 : 1.0) * h.provider->a(n) * h.f.real_value(double(n));
  CHECK(std::abs(lhs_sum(h) - s) < 1e-12);
}

TEST_CASE("GL2 identity") {
  for (auto [a, b] : {std::pair{1LL, 3LL}, {5LL, 12LL}}) {
    VoronoiReport r = verify_identity(make_gl2_instance(a, b, 50.0, 0.0));
    CHECK(r.pass);
    CHECK(r.rel_residual < 1e-4);
    CHECK(r.abar * a % b == ((1 % b) + b) % b);
  }
  VoronoiReport r = verify_identity(make_gl2_instance(2, 5, 100.0, 0.01));
  CHECK(r.pass);
}

TEST_CASE("dual truncation") {
  VoronoiInstance inst = make_gl2_instance(1, 4, 30.0, 0.0);
  RealKernel k(inst.kernel);
  HankelPlan plan(k, inst.f);
  inst.min_terms = 2000;
  RhsResult a = rhs_sum_gl2(inst, plan, 1e-8);
  inst.min_terms = 4000;
  RhsResult b = rhs_sum_gl2(inst, plan, 1e-8);
  CHECK(b.terms >= a.terms);
  CHECK(std::abs(a.value - b.value) <= a.tail + 1e-9);
}

TEST_CASE("GL3 identity and divisor blocks") {
  VoronoiInstance inst = make_gl3_instance(1, 2, 20.0, 0.0);
  VoronoiReport r = verify_identity(inst);
  CHECK(r.pass);
  REQUIRE(r.blocks.size() == 2);
  CHECK(r.blocks[0].d == 1);
  CHECK(r.blocks[1].d == 2);
  cplx s = 0.0;
  for (const auto& d : r.blocks) s += d.value;
  CHECK(std::abs(s - r.rhs) < 1e-12 * std::max(1.0, std::abs(s)));

  // the sign of the divisor generator does not matter
  RealKernel k(inst.kernel);
  HankelPlan plan(k, inst.f);
  RhsResult p = rhs_sum_gl3(inst, plan, 1e-6);
  inst.gammap_sign = -1;
  RhsResult m = rhs_sum_gl3(inst, plan, 1e-6);
  CHECK(std::abs(p.value - m.value) < 1e-10);
}

TEST_CASE("stationary window") {
  TestFunction f;
  f.w.T = 100.0;
  f.w.Delta = 2.0;
  f.rho = 0.0;
  auto [lo0, hi0] = stationary_window(f, 2);
  CHECK(lo0 == 0.0);
  CHECK(hi0 == doctest::Approx(0.02));
  f.rho = 0.1;
  auto [lo, hi] = stationary_window(f, 2);
  CHECK(lo == doctest::Approx(0.01 * 100.0 / 2.0));
  CHECK(hi == doctest::Approx(2.0 * 0.01 * 200.0));
}

TEST_CASE("field mode over Q matches the rational identity") {
  NumberField Q = NumberField::rationals();
  VoronoiInstance base = make_gl2_instance(1, 3, 20.0, 0.0);
  FieldVoronoiInstance inst;
  inst.field = &Q;
  inst.provider = base.provider;
  inst.kernel = base.kernel;
  inst.alpha = FieldElement::from_ints({1});
  inst.beta = FieldElement::from_ints({3});
  inst.f = {base.f};
  inst.dual_box = 300;
  long long lt = 0, rt = 0;
  cplx l = lhs_sum_field(inst, &lt), r = rhs_sum_field_gl2(inst, &rt);
  CHECK(lt > 0);
  CHECK(rt > 0);
  CHECK(std::abs(l - lhs_sum(base)) < 1e-12);
  CHECK(std::abs(l - r) < 1e-4 * std::max(1.0, std::abs(l)));
}
