#pragma once

#include <vector>

#include "vsum/common.hpp"
#include "vsum/numberfield.hpp"

namespace vsum {

long long gcd_ll(long long a, long long b);
long long divisor_count(long long n);
// x with a x = 1 mod c, in [0, c); c >= 1; throws NotCoprime
long long inverse_mod(long long a, long long c);

// S(a, b; c) = sum over x mod |c| coprime to c of e((a x + b xbar) / c). Real-valued.
double kloosterman_rational(long long a, long long b, long long c);

// Row S(g, k; c) for k = 0..c-1, from one length-c DFT.
std::vector<double> kloosterman_row(long long g, long long c);

// S_beta(gamma, gamma'; beta) = sum over nu in (O/beta)^x of e(Tr((gamma nu + gamma' nubar) / beta)).
// A unit beta gives the single term nu = 1.
cplx kloosterman_field(const NumberField& F, const FieldInteger& beta, const FieldElement& gamma,
                       const FieldElement& gammap);

struct WeilRow {
  long long c = 0;
  double max_abs = 0.0;   // max |S(a,b;c)| over the checked pairs
  double bound = 0.0;     // d(c) sqrt(c) at the maximising pair times sqrt(gcd(a,b,c))
  double ratio = 0.0;     // max over pairs of |S| / bound
  long long violations = 0;
};

struct WeilReport {
  std::vector<WeilRow> rows;
  long long pairs = 0;
  long long violations = 0;
  double max_ratio = 0.0;  // over c >= 2; at c = 1 the sum and the bound are both 1
};

// All c <= c_max and all a, b in [1, c] (exhaustive). S(a,b;c) is read from
// S(g, u^{-1} b; c) with g = gcd(a, c) and u a unit with u a = g mod c.
WeilReport weil_check(long long c_max, int threads = 0);

}  // namespace vsum
