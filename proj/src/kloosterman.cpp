#include "vsum/kloosterman.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numeric>

#include "vsum/parallel.hpp"

namespace vsum {

namespace {
std::mutex g_plan_mu;
}

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

long long divisor_count(long long n) {
  n = std::llabs(n);
  if (n == 0) throw Error("kloosterman", "d(0) is undefined");
  long long d = 1;
  for (long long p = 2; p * p <= n; ++p) {
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    d *= e + 1;
  }
  if (n > 1) d *= 2;
  return d;
}

long long inverse_mod(long long a, long long c) {
  if (c < 1) throw Error("kloosterman", "modulus must be positive");
  if (c == 1) return 0;
  long long r0 = c, r1 = ((a % c) + c) % c, s0 = 0, s1 = 1;
  while (r1 != 0) {
    long long q = r0 / r1;
    long long t = r0 - q * r1;
    r0 = r1;
    r1 = t;
    t = s0 - q * s1;
    s0 = s1;
    s1 = t;
  }
  if (r0 != 1) throw NotCoprime(std::to_string(a) + " and " + std::to_string(c) + " share the divisor " + std::to_string(r0));
  return ((s0 % c) + c) % c;
}

double kloosterman_rational(long long a, long long b, long long c) {
  if (c == 0) throw Error("kloosterman", "modulus must be nonzero");
  c = std::llabs(c);
  if (c == 1) return 1.0;
  const long long am = ((a % c) + c) % c, bm = ((b % c) + c) % c;
  cplx s = 0.0;
  for (long long x = 1; x < c; ++x) {
    if (std::gcd(x, c) != 1) continue;
    long long xb = inverse_mod(x, c);
    long long num = static_cast<long long>((static_cast<__int128>(am) * x + static_cast<__int128>(bm) * xb) % c);
    s += e(static_cast<double>(num) / static_cast<double>(c));
  }
  if (std::abs(s.imag()) > 1e-10 * std::max(1.0, std::abs(s.real())))
    throw Error("kloosterman", "imaginary part did not cancel");
  return s.real();
}

std::vector<double> kloosterman_row(long long g, long long c) {
  if (c < 1) throw Error("kloosterman", "modulus must be positive");
  std::vector<cplx> v(c, 0.0);
  const long long gm = ((g % c) + c) % c;
  for (long long y = 0; y < c; ++y) {
    if (std::gcd(y, c) != 1) continue;
    long long yb = inverse_mod(y, c);
    v[y] = e(static_cast<double>(static_cast<long long>((static_cast<__int128>(gm) * yb) % c)) / c);
  }
  auto* p = reinterpret_cast<fftw_complex*>(v.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lk(g_plan_mu);
    plan = fftw_plan_dft_1d(static_cast<int>(c), p, p, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lk(g_plan_mu);
    fftw_destroy_plan(plan);
  }
  std::vector<double> row(c);
  for (long long k = 0; k < c; ++k) row[k] = v[k].real();
  return row;
}

cplx kloosterman_field(const NumberField& F, const FieldInteger& beta, const FieldElement& gamma,
                       const FieldElement& gammap) {
  if (!F.norm_euclidean()) throw UnsupportedField("Kloosterman sums need a norm-Euclidean field");
  if (beta.is_zero()) throw Error("kloosterman", "modulus must be nonzero");
  F.check(beta);
  F.check(gamma);
  F.check(gammap);
  const FieldElement binv = F.inverse(beta);
  auto term = [&](const FieldElement& nu, const FieldElement& nubar) {
    FieldElement x = F.mul(F.add(F.mul(gamma, nu), F.mul(gammap, nubar)), binv);
    mpq_class t = F.trace(x);
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
    mpq_class frac = t - mpq_class(fl);
    return e(frac.get_d());
  };
  if (is_unit(F, beta)) return term(F.one(), F.one());
  ResidueRing R(F, beta);
  cplx s = 0.0;
  for (const auto& nu : R.elements()) {
    FieldInteger nubar;
    try {
      nubar = mod_inverse(F, nu, beta);
    } catch (const NotCoprime&) {
      continue;
    }
    s += term(nu, nubar);
  }
  return s;
}

WeilReport weil_check(long long c_max, int threads) {
  if (c_max < 1 || c_max > 10000) throw Error("kloosterman", "weil_check needs 1 <= c_max <= 10^4");
  WeilReport rep;
  rep.rows.resize(c_max);
  parallel_for(
      static_cast<size_t>(c_max),
      [&](size_t idx) {
        const long long c = static_cast<long long>(idx) + 1;
        WeilRow row;
        row.c = c;
        const double dc = static_cast<double>(divisor_count(c)) * std::sqrt(static_cast<double>(c));
        std::vector<std::vector<double>> rows(c + 1);
        for (long long g = 1; g <= c; ++g)
          if (c % g == 0) rows[g] = kloosterman_row(g, c);
        for (long long a = 1; a <= c; ++a) {
          const long long g = std::gcd(a, c);
          const long long cg = c / g;
          long long u = inverse_mod((a / g) % cg, cg);
          while (std::gcd(u, c) != 1) u += cg;
          const long long ub = inverse_mod(u, c);
          const auto& tab = rows[g];
          for (long long b = 1; b <= c; ++b) {
            double s = std::abs(tab[static_cast<long long>((static_cast<__int128>(ub) * b) % c)]);
            double bound = dc * std::sqrt(static_cast<double>(std::gcd(g, b)));
            double ratio = s / bound;
            if (s > bound * (1.0 + 1e-9) + 1e-9) ++row.violations;
            if (ratio > row.ratio) {
              row.ratio = ratio;
              row.max_abs = s;
              row.bound = bound;
            }
          }
        }
        rep.rows[idx] = row;
      },
      threads);
  for (const auto& r : rep.rows) {
    rep.pairs += r.c * r.c;
    rep.violations += r.violations;
    if (r.c > 1) rep.max_ratio = std::max(rep.max_ratio, r.ratio);
  }
  return rep;
}

}  // namespace vsum
