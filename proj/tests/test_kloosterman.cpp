#include <cmath>

#include "doctest.h"
#include "vsum/kloosterman.hpp"
#include "vsum/numberfield.hpp"

using namespace vsum;

namespace {

double brute(long long a, long long b, long long c) {
  double s = 0.0;
  for (long long x = 0; x < c; ++x)
    for (long long y = 0; y < c; ++y)
      if ((x * y) % c == 1 % c) s += std::cos(kTwoPi * double((a * x + b * y) % c) / c);
  return s;
}

bool is_prime(long long p) {
  if (p < 2) return false;
  for (long long q = 2; q * q <= p; ++q)
    if (p % q == 0) return false;
  return true;
}

}  // namespace

TEST_CASE("small values") {
  CHECK(kloosterman_rational(1, 1, 3) == doctest::Approx(-1.0));
  CHECK(kloosterman_rational(0, 0, 12) == doctest::Approx(4.0));
  CHECK(kloosterman_rational(5, 7, 1) == doctest::Approx(1.0));
  for (long long c : {7, 12, 30, 49})
    for (long long a = 0; a < c; a += 3)
      for (long long b = 0; b < c; b += 5) {
        CHECK(kloosterman_rational(a, b, c) == doctest::Approx(brute(a, b, c)).epsilon(1e-9));
        CHECK(kloosterman_rational(a, b, c) == doctest::Approx(kloosterman_rational(b, a, c)).epsilon(1e-9));
      }
  std::vector<double> row = kloosterman_row(2, 18);
  for (long long k = 0; k < 18; ++k) CHECK(std::abs(row[k] - brute(2, k, 18)) < 1e-9);
}

TEST_CASE("twisted multiplicativity") {
  // S(a,b;c1c2) = S(a c2bar, b c2bar; c1) S(a c1bar, b c1bar; c2)
  for (long long c1 = 2; c1 <= 20; ++c1)
    for (long long c2 = 2; c1 * c2 <= 200; ++c2) {
      if (gcd_ll(c1, c2) != 1) continue;
      long long i1 = inverse_mod(c2 % c1, c1), i2 = inverse_mod(c1 % c2, c2);
      for (long long a : {1LL, 3LL, 10LL}) {
        long long b = 7;
        double lhs = kloosterman_rational(a, b, c1 * c2);
        double rhs = kloosterman_rational(a * i1, b * i1, c1) * kloosterman_rational(a * i2, b * i2, c2);
        CHECK(std::abs(lhs - rhs) < 1e-8);
      }
    }
}

TEST_CASE("Weil bound") {
  WeilReport r = weil_check(500, 0);
  CHECK(r.violations == 0);
  CHECK(r.rows.size() == 500);
  CHECK(r.max_ratio <= 1.0);
  for (long long p = 3; p <= 997; p += 2)
    if (is_prime(p))
      for (long long a : {1LL, 2LL, p - 1})
        CHECK(std::abs(kloosterman_rational(a, 1, p)) <= 2.0 * std::sqrt(double(p)) + 1e-9);
}

TEST_CASE("Gaussian integers") {
  NumberField F = NumberField::load(std::string(VSUM_SOURCE_DIR) + "/configs/fields/Qi.json");
  FieldInteger one = FieldElement::from_ints({1, 1});
  CHECK(std::abs(kloosterman_field(F, one, F.one(), F.one()) - 1.0) < 1e-12);
  // beta = 3: residues a + b i mod 3, units are the nonzero ones
  FieldInteger three = FieldElement::from_ints({3, 0});
  FieldElement g = FieldElement::from_ints({1, 0}), gp = FieldElement::from_ints({0, 1});
  cplx want = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      if (a == 0 && b == 0) continue;
      // inverse of a + b i mod 3 in Z[i]/3 = F_9
      int ia = -1, ib = -1;
      for (int c = 0; c < 3 && ia < 0; ++c)
        for (int d = 0; d < 3; ++d)
          if (((a * c - b * d) % 3 + 3) % 3 == 1 && ((a * d + b * c) % 3 + 3) % 3 == 0) {
            ia = c;
            ib = d;
            break;
          }
      // Tr((g nu + g' nubar) / 3) with g = 1, g' = i: Tr(x + y i) = 2x
      double x = a + (-ib);
      want += e(2.0 * x / 3.0);
    }
  CHECK(std::abs(kloosterman_field(F, three, g, gp) - want) < 1e-10);
}
