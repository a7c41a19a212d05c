#include <cmath>
#include <complex>
#include <cstdio>

#include "doctest.h"
#include "vsum/coeffs.hpp"

using namespace vsum;

namespace {

// q prod (1 - q^k)^24 by repeated multiplication, the slow way
std::vector<long long> eta24(int n) {
  std::vector<long long> c(n + 1, 0);
  c[0] = 1;
  for (int k = 1; k <= n; ++k)
    for (int r = 0; r < 24; ++r)
      for (int i = n; i >= k; --i) c[i] -= c[i - k];
  return c;  // coefficient of q^(m+1) in Delta is c[m]
}

// Schur polynomial s_(l1,l2,l3) at x by the bialternant formula
std::complex<double> schur3(int l1, int l2, int l3, std::complex<double> x[3]) {
  auto det = [](std::complex<double> m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  int lam[3] = {l1 + 2, l2 + 1, l3};
  std::complex<double> a[3][3], v[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      a[i][j] = std::pow(x[i], lam[j]);
      v[i][j] = std::pow(x[i], 2 - j);
    }
  return det(a) / det(v);
}

}  // namespace

TEST_CASE("tau against the eta product") {
  auto c = eta24(300);
  for (int n = 1; n <= 300; ++n) CHECK(tau(n) == c[n - 1]);
  CHECK(tau(1) == 1);
  CHECK(tau(2) == -24);
  CHECK(tau(6) == -6048);
  CHECK(tau(6) == tau(2) * tau(3));
}

TEST_CASE("tau Hecke relation is exact") {
  HeckeReport r = hecke_check(200);
  CHECK(r.pairs == 40000);
  CHECK(r.violations == 0);
}

TEST_CASE("tau cache round trip") {
  TauTable t(5000);
  t.ensure(5000);
  std::string path = "tau_cache_test.bin";
  t.save(path);
  TauTable u(5000);
  u.load(path);
  for (uint64_t n : {1ULL, 2ULL, 97ULL, 4096ULL, 5000ULL}) CHECK(u.tau(n) == t.tau(n));
  std::remove(path.c_str());
  std::remove((path + ".json").c_str());
}

TEST_CASE("normalised GL2 coefficients") {
  CHECK(gl2_lambda(1) == doctest::Approx(1.0));
  CHECK(gl2_lambda(2) == doctest::Approx(-0.530330086).epsilon(1e-9));
  CHECK(gl2_lambda(4) == doctest::Approx(-0.71875).epsilon(1e-12));
  CHECK(gl2_lambda(4) == doctest::Approx(gl2_lambda(2) * gl2_lambda(2) - 1.0));
  // Deligne
  for (uint64_t p : {2, 3, 5, 7, 11, 101, 997}) CHECK(std::abs(gl2_lambda(p)) <= 2.0);
}

TEST_CASE("symmetric square coefficients") {
  CHECK(gl3_sym2(1, 1) == doctest::Approx(1.0));
  CHECK(gl3_sym2(2, 1) == doctest::Approx(-0.71875));
  // Weyl character at the Satake parameters {a^2, 1, a^-2}, a + 1/a = lambda(2)
  const double L = gl2_lambda(2);
  std::complex<double> a = std::polar(1.0, std::acos(L / 2.0));
  std::complex<double> x[3] = {a * a, 1.0, 1.0 / (a * a)};
  CHECK(gl3_sym2(4, 1) == doctest::Approx(schur3(2, 0, 0, x).real()).epsilon(1e-12));
  CHECK(gl3_sym2(2, 2) == doctest::Approx(schur3(2, 1, 0, x).real()).epsilon(1e-12));
  CHECK(gl3_sym2(1, 4) == doctest::Approx(gl3_sym2(4, 1)));
  // multiplicative in coprime arguments
  CHECK(gl3_sym2(6, 1) == doctest::Approx(gl3_sym2(2, 1) * gl3_sym2(3, 1)));
  Sym2DeltaProvider s;
  for (uint64_t n : {1, 2, 3, 12, 30, 97, 1024}) CHECK(s.a(n) == doctest::Approx(gl3_sym2(1, n)).epsilon(1e-12));
}

TEST_CASE("providers") {
  DeltaProvider d;
  CHECK(d.a(2) == doctest::Approx(gl2_lambda(2)));
  ConstantProvider c;
  CHECK(c.a(12345) == 1.0);
  CHECK_THROWS(make_provider("nope"));
  auto s1 = make_provider("synthetic2", 3), s2 = make_provider("synthetic2", 3);
  CHECK(s1->a(360) == s2->a(360));
  CHECK(std::abs(s1->a(7)) <= 2.0 + 1e-12);
}

TEST_CASE("Rankin-Selberg averages") {
  DeltaProvider d;
  RankinAverage one = rankin_average(d, 1);
  CHECK(one.ratio_sq == doctest::Approx(1.0));
  CHECK(one.ratio_abs == doctest::Approx(1.0));
  RankinAverage r100 = rankin_average(d, 100);
  CHECK(r100.ratio_sq > 0.1);
  CHECK(r100.ratio_sq < 10.0);
  double lo = 1e9, hi = 0.0;
  for (uint64_t X : {100, 1000, 10000}) {
    double v = rankin_average(d, X).ratio_sq;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo < 3.0);
}
