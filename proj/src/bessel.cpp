#include "vsum/bessel.hpp"

#include <algorithm>
#include <cmath>

#include "vsum/gamma.hpp"
#include "vsum/quadrature.hpp"

namespace vsum {

namespace {

const double kLog2Pi = std::log(kTwoPi);
const double kLogPi = std::log(kPi);

bool is_integer(double v, double tol = 1e-12) { return std::abs(v - std::round(v)) < tol; }

// log G_delta(a); returns false when G vanishes (pole of the denominator).
bool log_g_real(cplx a, int delta, cplx& out) {
  cplx num = 0.5 * (a + static_cast<double>(delta));
  cplx den = 0.5 * (1.0 - a + static_cast<double>(delta));
  if (near_gamma_pole(num)) throw PoleError("gamma_factor_real pole at s = " + std::to_string(a.real()));
  if (near_gamma_pole(den, 1e-13)) return false;
  out = cplx(0.0, 0.5 * kPi * delta) + (0.5 - a) * kLogPi + log_gamma(num) - log_gamma(den);
  return true;
}

bool log_g_complex(cplx s, int m, cplx& out) {
  double h = 0.5 * std::abs(m);
  cplx num = s + h, den = 1.0 - s + h;
  if (near_gamma_pole(num)) throw PoleError("gamma_factor_complex pole at s = " + std::to_string(s.real()));
  if (near_gamma_pole(den, 1e-13)) return false;
  out = cplx(0.0, 0.5 * kPi * std::abs(m)) + (1.0 - 2.0 * s) * kLog2Pi + log_gamma(num) - log_gamma(den);
  return true;
}

// i^{m+1} (2 pi)^{1-2a} Gamma(a + m/2) / Gamma(1 - a + m/2)
bool log_pair(cplx a, int m, cplx& out) {
  cplx num = a + 0.5 * m, den = 1.0 - a + 0.5 * m;
  if (near_gamma_pole(num)) throw PoleError("discrete pair pole at s = " + std::to_string(a.real()));
  if (near_gamma_pole(den, 1e-13)) return false;
  out = cplx(0.0, 0.5 * kPi * (m + 1)) + (1.0 - 2.0 * a) * kLog2Pi + log_gamma(num) - log_gamma(den);
  return true;
}

}  // namespace

BesselParamsReal delta_params() { return {2, {cplx(5.5, 0.0), cplx(-5.5, 0.0)}, {0, 0}}; }

BesselParamsReal sym2_delta_params() { return {3, {cplx(11.0, 0.0), cplx(0.0, 0.0), cplx(-11.0, 0.0)}, {0, 1, 1}}; }

cplx gamma_factor_real(cplx s, int delta) {
  cplx l;
  if (!log_g_real(s, delta & 1, l)) return 0.0;
  return std::exp(l);
}

cplx gamma_factor_complex(cplx s, int m) {
  cplx l;
  if (!log_g_complex(s, m, l)) return 0.0;
  return std::exp(l);
}

void validate(const BesselParamsReal& p) {
  if (p.rank < 2 || p.rank > 3) throw Error("bessel", "rank must be 2 or 3");
  if (static_cast<int>(p.mu.size()) != p.rank || static_cast<int>(p.delta.size()) != p.rank)
    throw Error("bessel", "mu/delta length must equal the rank");
  cplx sum = 0.0;
  for (auto m : p.mu) sum += m;
  if (std::abs(sum) > 1e-10) throw Error("bessel", "mu must sum to zero");
  for (int d : p.delta)
    if (d != 0 && d != 1) throw Error("bessel", "delta entries must be 0 or 1");
}

void validate(const BesselParamsComplex& p) {
  if (p.rank < 2 || p.rank > 3) throw Error("bessel", "rank must be 2 or 3");
  if (static_cast<int>(p.mu.size()) != p.rank || static_cast<int>(p.m.size()) != p.rank)
    throw Error("bessel", "mu/m length must equal the rank");
  cplx sum = 0.0;
  for (auto m : p.mu) {
    sum += m;
    if (std::abs(m.real()) >= 0.5) throw Error("bessel", "complex place needs |Re mu| < 1/2");
  }
  if (std::abs(sum) > 1e-10) throw Error("bessel", "mu must sum to zero");
}

RealKernel::RealKernel(BesselParamsReal p) : p_(std::move(p)) {
  validate(p_);
  const int r = p_.rank;
  // look for a discrete-series pair mu_i - mu_j = m > 0 with delta_i + delta_j = m + 1 mod 2
  int pi = -1, pj = -1;
  for (int i = 0; i < r && pi < 0; ++i)
    for (int j = 0; j < r; ++j) {
      if (i == j) continue;
      cplx d = p_.mu[i] - p_.mu[j];
      if (std::abs(d.imag()) < 1e-12 && d.real() > 0.5 && is_integer(d.real())) {
        int m = static_cast<int>(std::lround(d.real()));
        if ((p_.delta[i] + p_.delta[j]) % 2 == (m + 1) % 2) {
          pi = i;
          pj = j;
          pair_m_ = m;
          break;
        }
      }
    }
  bool principal = true;
  for (auto m : p_.mu)
    if (std::abs(m.real()) >= 0.5) principal = false;

  if (pi >= 0) {
    pair_center_ = 0.5 * (p_.mu[pi] + p_.mu[pj]);
    double pole = pair_center_.real() - 0.5 * pair_m_;
    if (r == 2) {
      form_ = Form::Gl2Discrete;
      pole_max_ = pole;
    } else {
      form_ = Form::PairTimesGl1;
      single_ = 3 - pi - pj;
      if (std::abs(p_.mu[single_].real()) >= 0.5)
        throw Error("bessel", "GL1 factor next to a discrete pair must be tempered");
      pole_max_ = std::max(pole, p_.mu[single_].real());
    }
    return;
  }
  if (!principal) throw Error("bessel", "parameters are neither principal series nor a discrete-series pattern");
  form_ = (r == 2) ? Form::Gl2Principal : Form::Generic;
  pole_max_ = -1e300;
  for (auto m : p_.mu) pole_max_ = std::max(pole_max_, m.real());
}

double RealKernel::max_imag_mu() const {
  double h = 0.0;
  for (auto m : p_.mu) h = std::max(h, std::abs(m.imag()));
  return h;
}

cplx RealKernel::integrand(cplx s, int sign, double logx) const {
  const cplx xs = -s * logx;
  switch (form_) {
    case Form::Gl2Discrete: {
      if (sign < 0) return 0.0;
      cplx l;
      if (!log_pair(s - pair_center_, pair_m_, l)) return 0.0;
      return std::exp(l + xs);
    }
    case Form::Gl2Principal: {
      const cplx a = s - p_.mu[0], b = s - p_.mu[1];
      if (near_gamma_pole(a) || near_gamma_pole(b)) throw PoleError("GL2 principal-series pole");
      cplx lp = std::log(4.0) - 2.0 * s * kLog2Pi + log_gamma(a) + log_gamma(b);
      const bool mixed = (p_.delta[0] + p_.delta[1]) % 2 == 1;
      cplx out;
      if (sign > 0) {
        out = std::exp(lp + xs + (mixed ? log_sin_pi(s) : log_cos_pi(s)));
        if (mixed) out *= kI;
      } else {
        // constant trigonometric factor in (mu2 - mu1) / 2
        cplx w = 0.5 * (p_.mu[1] - p_.mu[0]);
        cplx c = mixed ? kI * std::sin(kPi * w) : std::cos(kPi * w);
        if (mixed ? p_.delta[0] == 0 : p_.delta[0] == 1) c = -c;
        out = c * std::exp(lp + xs);
      }
      return 0.5 * out;
    }
    case Form::PairTimesGl1: {
      cplx lpair;
      if (!log_pair(s - pair_center_, pair_m_, lpair)) return 0.0;
      const cplx a = s - p_.mu[single_];
      if (near_gamma_pole(a)) throw PoleError("GL1 factor pole");
      double eps = (sign < 0 && p_.delta[single_] == 1) ? -1.0 : 1.0;
      cplx l1 = std::log(2.0) - a * kLog2Pi + log_gamma(a) + (sign > 0 ? 1.0 : -1.0) * kI * (0.5 * kPi) * a;
      return 0.5 * eps * std::exp(lpair + l1 + xs);
    }
    case Form::Generic: {
      cplx l1 = 0.0, l2 = 0.0;
      bool z1 = false, z2 = false;
      for (int i = 0; i < p_.rank; ++i) {
        cplx a = s - p_.mu[i], t;
        if (!z1) {
          if (log_g_real(a, p_.delta[i], t)) l1 += t;
          else z1 = true;
        }
        if (!z2) {
          if (log_g_real(a, (p_.delta[i] + 1) % 2, t)) l2 += t;
          else z2 = true;
        }
      }
      cplx v1 = z1 ? cplx(0.0) : std::exp(l1 + xs);
      cplx v2 = z2 ? cplx(0.0) : std::exp(l2 + xs);
      return 0.5 * (sign > 0 ? v1 + v2 : v1 - v2);
    }
  }
  return 0.0;
}

KernelValue contour_integral(const std::function<cplx(cplx)>& F, double sigma0, double sigma1,
                             double t_bend, double tail_angle, double tol, int rank, double logx) {
  KernelValue out;
  const double piece_tol = tol * kTwoPi / 5.0;

  // vertical piece: panel count follows the phase variation r log(|t|/2pi) - log x
  double phase = 0.0;
  const int probes = 400;
  for (int i = 0; i < probes; ++i) {
    double t = -t_bend + (i + 0.5) * (2.0 * t_bend / probes);
    double at = std::max(std::abs(t), 1.0);
    phase += std::abs(rank * std::log(at / kTwoPi) - logx) * (2.0 * t_bend / probes);
  }
  AdaptiveOptions vopt;
  vopt.abstol = piece_tol;
  vopt.initial_panels = std::max(8, static_cast<int>(std::ceil(phase / kPi)) + 4);
  vopt.max_intervals = 200000;
  QuadResult v = integrate_gk([&](double t) { return kI * F(cplx(sigma0, t)); }, -t_bend, t_bend, vopt);
  out.value += v.value;
  out.err += v.err;
  out.evals += v.evals;

  const bool bend = sigma1 < sigma0;
  const cplx A_up(sigma0, t_bend), A_dn(sigma0, -t_bend);
  const cplx B_up = bend ? cplx(sigma1, t_bend + (sigma0 - sigma1)) : A_up;
  const cplx B_dn = std::conj(B_up);
  if (bend) {
    AdaptiveOptions bopt;
    bopt.abstol = piece_tol;
    bopt.initial_panels = 4;
    QuadResult up = integrate_gk([&](double u) { return F(A_up + u * (B_up - A_up)) * (B_up - A_up); }, 0.0, 1.0, bopt);
    QuadResult dn = integrate_gk([&](double u) { return F(B_dn + u * (A_dn - B_dn)) * (A_dn - B_dn); }, 0.0, 1.0, bopt);
    out.value += up.value + dn.value;
    out.err += up.err + dn.err;
    out.evals += up.evals + dn.evals;
  }

  // rays into the left half plane; the integrand decays superexponentially there
  const cplx dir_up = std::polar(1.0, tail_angle), dir_dn = std::conj(dir_up);
  auto ray_len = [&](cplx base, cplx dir) {
    double rho = 2.0;
    int small = 0;
    while (rho < 1e5) {
      double m = std::abs(F(base + rho * dir)) * std::max(1.0, rho);
      if (m < 1e-4 * tol) {
        if (++small >= 2) break;
      } else {
        small = 0;
      }
      rho *= 1.4;
    }
    return rho;
  };
  double L_up = ray_len(B_up, dir_up), L_dn = ray_len(B_dn, dir_dn);
  AdaptiveOptions ropt;
  ropt.abstol = piece_tol;
  ropt.initial_panels = std::max(4, static_cast<int>(L_up / 4.0));
  QuadResult ru = integrate_gk([&](double r) { return F(B_up + r * dir_up) * dir_up; }, 0.0, L_up, ropt);
  ropt.initial_panels = std::max(4, static_cast<int>(L_dn / 4.0));
  QuadResult rd = integrate_gk([&](double r) { return -F(B_dn + r * dir_dn) * dir_dn; }, 0.0, L_dn, ropt);
  double tail = std::abs(F(B_up + L_up * dir_up)) + std::abs(F(B_dn + L_dn * dir_dn));
  out.value += ru.value + rd.value;
  out.err += ru.err + rd.err + tail;
  out.evals += ru.evals + rd.evals;

  out.value /= (kTwoPi * kI);
  out.err /= kTwoPi;
  return out;
}

KernelValue bessel_kernel_real(const RealKernel& k, double x, double tol, const ContourSpec& c) {
  if (x == 0.0) throw Error("bessel", "kernel argument must be nonzero");
  const int sign = x > 0 ? 1 : -1;
  const double ax = std::abs(x), logx = std::log(ax);
  if (sign < 0 && k.negative_vanishes()) return {};
  const int r = k.params().rank;
  double sigma0 = c.sigma0;
  bool steep = false;
  if (std::isnan(sigma0)) {
    sigma0 = std::max(0.5, k.pole_max() + 0.5);
    if (k.form() == RealKernel::Form::Gl2Principal && sign < 0) {
      // exponentially small regime: sit on the real saddle of Gamma^2 (2 pi)^{-2s} x^{-s}
      double saddle = kTwoPi * std::sqrt(ax);
      if (saddle > sigma0) {
        sigma0 = saddle;
        steep = true;
      }
    }
  }
  if (sigma0 <= k.pole_max()) throw Error("bessel", "contour anchor must lie right of all poles");
  double t_bend = c.bend;
  if (std::isnan(t_bend)) t_bend = std::max(2.0 + k.max_imag_mu(), 1.5 * kTwoPi * std::pow(ax, 1.0 / r) + 5.0);
  auto F = [&](cplx s) { return k.integrand(s, sign, logx); };
  double eff_tol = tol;
  if (steep) eff_tol = std::min(tol, tol * std::abs(F(cplx(sigma0, 0.0))));
  return contour_integral(F, sigma0, c.sigma1, t_bend, c.tail_angle, eff_tol, r, logx);
}

KernelValue bessel_kernel_real(const BesselParamsReal& p, double x, double tol, const ContourSpec& c) {
  RealKernel k(p);
  return bessel_kernel_real(k, x, tol, c);
}

KernelValue bessel_j_complex(const std::vector<cplx>& mu, const std::vector<int>& m, double x, double tol,
                             const ContourSpec& c) {
  if (!(x > 0.0)) throw Error("bessel", "j-integral needs x > 0");
  const int r = static_cast<int>(mu.size());
  double pole = -1e300, himag = 0.0;
  for (int l = 0; l < r; ++l) {
    pole = std::max(pole, mu[l].real() - 0.5 * std::abs(m[l]));
    himag = std::max(himag, std::abs(mu[l].imag()));
  }
  double sigma0 = std::isnan(c.sigma0) ? std::max(0.5, pole + 0.5) : c.sigma0;
  if (sigma0 <= pole) throw Error("bessel", "contour anchor must lie right of all poles");
  const double logx = std::log(x);
  double t_bend = c.bend;
  if (std::isnan(t_bend)) t_bend = std::max(2.0 + himag, 1.5 * kTwoPi * std::pow(x, 1.0 / r) + 5.0);
  auto F = [&](cplx s) -> cplx {
    cplx l = -2.0 * s * logx, t;
    for (int i = 0; i < r; ++i) {
      if (!log_g_complex(s - mu[i], m[i], t)) return 0.0;
      l += t;
    }
    return std::exp(l);
  };
  // the vertical phase rate is 2 (r log(t/2pi) - log x); doubling logx and rank keeps the estimate
  return contour_integral(F, sigma0, c.sigma1, t_bend, c.tail_angle, tol, 2 * r, 2.0 * logx);
}

ComplexKernelValue bessel_kernel_complex(const BesselParamsComplex& p, cplx z, double tol, int m_max) {
  validate(p);
  if (z == 0.0) throw Error("bessel", "kernel argument must be nonzero");
  if (m_max < 0) m_max = p.m_max;
  const double x = std::abs(z), phi = std::arg(z);
  bool even = true;
  for (int v : p.m) even = even && v == 0;
  ComplexKernelValue out;
  const double term_tol = tol * 1e-2;
  auto j_of = [&](int k) {
    std::vector<int> mk(p.m);
    for (auto& v : mk) v += k;
    return bessel_j_complex(p.mu, mk, x, term_tol);
  };
  KernelValue j0 = j_of(0);
  cplx sum = j0.value;
  double err = j0.err;
  int quiet = 0;
  int k = 1;
  for (; k <= m_max; ++k) {
    KernelValue jp = j_of(k);
    KernelValue jm = even ? jp : j_of(-k);
    sum += jp.value * std::polar(1.0, k * phi) + jm.value * std::polar(1.0, -k * phi);
    err += jp.err + jm.err;
    double mag = std::abs(jp.value) + std::abs(jm.value);
    if (mag < tol * 0.1 * kTwoPi) {
      if (++quiet >= 3 && k >= 3) {
        err += mag;
        break;
      }
    } else {
      quiet = 0;
    }
  }
  if (k > m_max) throw ToleranceError("bessel", "Fourier series did not settle within m_max terms");
  out.value = sum / kTwoPi;
  out.err = err / kTwoPi;
  out.terms = k;
  return out;
}

double dominant_frequency(const std::vector<double>& x, const std::vector<cplx>& g, double fmin, double fmax) {
  const size_t n = x.size();
  if (n < 8) throw Error("bessel", "frequency analysis needs at least 8 samples");
  const double span = x.back() - x.front();
  std::vector<double> w(n);
  for (size_t i = 0; i < n; ++i) w[i] = 0.5 - 0.5 * std::cos(kTwoPi * (x[i] - x.front()) / span);
  auto power = [&](double f) {
    cplx acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += w[i] * g[i] * e(-f * x[i]);
    return std::abs(acc);
  };
  double step = 0.25 / span, best = fmin, bestp = -1.0;
  for (double f = fmin; f <= fmax; f += step) {
    double p = power(f);
    if (p > bestp) {
      bestp = p;
      best = f;
    }
  }
  double a = best - step, b = best + step;
  const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - gr * (b - a), d = a + gr * (b - a);
  double pc = power(c), pd = power(d);
  for (int it = 0; it < 80; ++it) {
    if (pc > pd) {
      b = d;
      d = c;
      pd = pc;
      c = b - gr * (b - a);
      pc = power(c);
    } else {
      a = c;
      c = d;
      pc = pd;
      d = a + gr * (b - a);
      pd = power(d);
    }
  }
  return 0.5 * (a + b);
}

AsymptoticReport asymptotic_check_real(const BesselParamsReal& p, const std::vector<double>& x_grid, double tol) {
  RealKernel k(p);
  const int r = p.rank;
  if (x_grid.size() < 8) throw Error("bessel", "grid too small");
  if (x_grid.front() < 1.0) throw Error("bessel", "grid outside the asymptotic regime (x >= 1 expected)");
  AsymptoticReport rep;
  std::vector<cplx> gp, gn;
  rep.envelope_sup = 0.0;
  rep.envelope_inf = 1e300;
  double prev2 = 0.0, prev1 = 0.0;
  for (size_t i = 0; i < x_grid.size(); ++i) {
    double x = x_grid[i];
    double scale = std::pow(x, 0.5 * (r - 1));
    cplx vp = bessel_kernel_real(k, std::pow(x, r), tol).value * scale;
    gp.push_back(vp);
    double a = std::abs(vp);
    rep.envelope_sup = std::max(rep.envelope_sup, a);
    if (i >= 2 && prev1 >= prev2 && prev1 >= a) rep.envelope_inf = std::min(rep.envelope_inf, prev1);
    prev2 = prev1;
    prev1 = a;
    if (!k.negative_vanishes()) {
      cplx vn = bessel_kernel_real(k, -std::pow(x, r), tol).value;
      if (r == 2) rep.neg_decay.push_back(std::abs(vn));
      gn.push_back(vn * scale);
    }
  }
  rep.frequency_pos = dominant_frequency(x_grid, gp, 0.25, 2.0 * r);
  if (k.negative_vanishes()) {
    rep.frequency_neg = std::numeric_limits<double>::quiet_NaN();
  } else if (r == 2) {
    rep.frequency_neg = std::numeric_limits<double>::quiet_NaN();
    // exponentially small: compare against exp(-2 pi r sin(pi/r) dx)
    for (size_t i = 1; i < rep.neg_decay.size(); ++i) {
      double dx = x_grid[i] - x_grid[0];
      double env = std::exp(-kTwoPi * r * std::sin(kPi / r) * dx);
      if (rep.neg_decay[i] > 1.5 * env * rep.neg_decay[0]) rep.neg_exponential_ok = false;
    }
  } else {
    rep.frequency_neg = dominant_frequency(x_grid, gn, 0.25, 2.0 * r);
  }
  return rep;
}

}  // namespace vsum
