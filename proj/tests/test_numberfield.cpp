#include <cmath>

#include "doctest.h"
#include "vsum/numberfield.hpp"

using namespace vsum;

namespace {

NumberField field(const char* name) { return NumberField::load(std::string(VSUM_SOURCE_DIR) + "/configs/fields/" + name); }

FieldElement ints(std::initializer_list<long long> v) { return FieldElement::from_ints(v); }

EmbeddedPoint point(const NumberField& F, const std::vector<double>& y) {
  EmbeddedPoint p;
  for (int v = 0; v < F.places(); ++v) {
    cplx s = 0.0;
    for (int j = 0; j < F.degree(); ++j) s += y[j] * F.embedding(v, j);
    if (v < F.r1()) p.real.push_back(s.real());
    else p.cpx.push_back(s);
  }
  return p;
}

// continued-fraction convergents of x with denominator <= Q
std::pair<long long, long long> best_convergent(double x, long long Q) {
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = x;
  for (int i = 0; i < 40; ++i) {
    long long a = static_cast<long long>(std::floor(r));
    long long p2 = a * p1 + p0, q2 = a * q1 + q0;
    if (q2 > Q) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    if (r - a < 1e-15) break;
    r = 1.0 / (r - a);
  }
  return {p1, q1};
}

}  // namespace

TEST_CASE("embeddings") {
  NumberField Q = NumberField::rationals();
  CHECK(Q.embed(ints({5})).real[0] == doctest::Approx(5.0));

  NumberField Qi = field("Qi.json");
  REQUIRE(Qi.r2() == 1);
  EmbeddedPoint z = Qi.embed(ints({3, 2}));
  CHECK(std::abs(z.cpx[0] - cplx(3, 2)) < 1e-14);

  NumberField Q2 = field("Qsqrt2.json");
  EmbeddedPoint u = Q2.embed(ints({1, 1}));
  REQUIRE(u.real.size() == 2);
  double a = std::max(u.real[0], u.real[1]), b = std::min(u.real[0], u.real[1]);
  CHECK(std::abs(a - (1 + std::sqrt(2.0))) < 1e-12);
  CHECK(std::abs(b - (1 - std::sqrt(2.0))) < 1e-12);

  for (const char* f : {"Qi.json", "Qsqrt2.json", "Qsqrt-3.json", "Qsqrt5.json"}) CHECK(field(f).root_residual() < 1e-12);
}

TEST_CASE("norm and trace are exact") {
  NumberField Qi = field("Qi.json"), Q2 = field("Qsqrt2.json"), Q = NumberField::rationals();
  CHECK(Qi.norm(ints({3, 2})) == 13);
  CHECK(Qi.trace(ints({3, 2})) == 6);
  CHECK(Q2.norm(ints({1, 1})) == -1);
  CHECK(Q2.trace(ints({1, 1})) == 2);
  CHECK(Q.norm(ints({-7})) == -7);
  CHECK(Q.trace(ints({-7})) == -7);

  // the half-integral basis of Q(sqrt -3): w = (1 + sqrt -3)/2 has N = 1, Tr = 1
  NumberField E = field("Qsqrt-3.json");
  CHECK(E.norm(ints({0, 1})) == 1);
  CHECK(E.trace(ints({0, 1})) == 1);
  // norm is multiplicative
  FieldElement x = ints({2, -3}), y = ints({5, 7});
  CHECK(E.norm(E.mul(x, y)) == E.norm(x) * E.norm(y));
  CHECK(E.mul(x, E.inverse(x)) == E.one());
}

TEST_CASE("lattice enumeration uses the closed box") {
  CHECK(enumerate_lattice(NumberField::rationals(), 5, true).size() == 4);
  CHECK(enumerate_lattice(field("Qi.json"), 2, true).size() == 8);
  CHECK(enumerate_lattice(field("Qsqrt2.json"), 4, true).size() == 24);
  CHECK_THROWS_AS(enumerate_lattice(field("Qi.json"), 1e5, true, 1000), CapError);
}

TEST_CASE("Dirichlet approximation") {
  NumberField Q = NumberField::rationals();
  Approximation a = dirichlet_approx(Q, point(Q, {std::sqrt(2.0)}), 10);
  CHECK(a.alpha.to_ints()[0] == 7);
  CHECK(a.beta.to_ints()[0] == 5);
  CHECK(a.residual[0] == doctest::Approx(std::abs(5 * std::sqrt(2.0) - 7)).epsilon(1e-9));
  CHECK(a.bounds_ok);

  // agrees with the best continued-fraction convergent
  for (double x : {0.3183098861837907, 0.7071067811865476, 0.5772156649015329}) {
    auto [p, q] = best_convergent(x, 50);
    Approximation b = dirichlet_approx(Q, point(Q, {x}), 50);
    CHECK(std::abs(b.beta.to_ints()[0] * x - b.alpha.to_ints()[0]) <= std::abs(q * x - p) + 1e-12);
  }

  for (const char* f : {"Q.json", "Qi.json", "Qsqrt2.json"}) {
    NumberField F = field(f);
    Approximation z = dirichlet_approx(F, point(F, std::vector<double>(F.degree(), 0.0)), 10);
    CHECK(z.beta == F.one());
    CHECK(z.alpha.is_zero());
    CHECK(z.quality == 0.0);
  }

  NumberField Q2 = field("Qsqrt2.json");
  EmbeddedPoint th;
  th.real = {M_PI, M_E};
  Approximation c = dirichlet_approx(Q2, th, 20);
  CHECK(c.bounds_ok);

  // rational theta = a/q with q <= Q comes back exactly
  Approximation r = dirichlet_approx(Q, point(Q, {3.0 / 7.0}), 10);
  CHECK(r.alpha.to_ints()[0] == 3);
  CHECK(r.beta.to_ints()[0] == 7);
}

TEST_CASE("Dirichlet sweep on three fields") {
  for (const char* f : {"Q.json", "Qi.json", "Qsqrt2.json"}) {
    NumberField F = field(f);
    for (double Q : {10.0, 50.0}) {
      DirichletSweep s = dirichlet_sweep(F, Q, 200, 7);
      CHECK(s.violations == 0);
      CHECK(s.max_quality <= F.c_f() * (1 + 1e-10));
    }
  }
}

TEST_CASE("coprime reduction") {
  NumberField Q = NumberField::rationals(), Qi = field("Qi.json");
  CoprimeSplit a = make_coprime(Q, ints({4}), ints({6}));
  CHECK(a.alpha == ints({2}));
  CHECK(a.beta == ints({3}));
  CHECK(a.delta == ints({2}));
  CoprimeSplit b = make_coprime(Q, ints({3}), ints({5}));
  CHECK(b.delta == ints({1}));

  CoprimeSplit c = make_coprime(Qi, ints({1, 1}), ints({2, 0}));
  CHECK(Qi.mul(c.alpha, c.delta) == ints({1, 1}));
  CHECK(Qi.mul(c.beta, c.delta) == ints({2, 0}));
  CHECK(abs(Qi.norm(c.delta)) == 2);
  CHECK(is_unit(Qi, field_gcd(Qi, c.alpha, c.beta)));
}

TEST_CASE("inverse modulo an integer") {
  NumberField Q = NumberField::rationals(), Qi = field("Qi.json");
  CHECK(mod_inverse(Q, ints({3}), ints({7})) == ints({5}));
  CHECK_THROWS_AS(mod_inverse(Q, ints({2}), ints({4})), NotCoprime);

  // any representative works; check the defining congruence and compare with 2 - 2i
  FieldInteger inv = mod_inverse(Qi, ints({1, 1}), ints({3, 0}));
  ResidueRing R(Qi, ints({3, 0}));
  CHECK(R.size() == 9);
  CHECK(R.reduce(Qi.mul(inv, ints({1, 1}))) == R.reduce(Qi.one()));
  CHECK(R.reduce(inv) == R.reduce(ints({2, -2})));
  CHECK(R.elements().size() == 9);
}

TEST_CASE("unit orbit counting") {
  NumberField Q = NumberField::rationals(), Q2 = field("Qsqrt2.json");
  CHECK(unit_orbit_count(Q, ints({5}), {10}) == 2);
  CHECK(unit_orbit_count(Q2, ints({1, 0}), {10, 10}) == 10);
  CHECK(unit_orbit_count(Q2, ints({1, 0}), {1, 1}) == 2);
}

TEST_CASE("config errors") {
  CHECK_THROWS(NumberField::from_json_text(R"({"min_poly": [1, 0, 1], "basis": [[1, 0], [2, 0]]})"));
  CHECK_THROWS(NumberField::load("/nonexistent/field.json"));
}
