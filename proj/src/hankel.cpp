#include "vsum/hankel.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>

#include "vsum/quadrature.hpp"

namespace vsum {

namespace {

std::mutex g_fftw_mu;

// In-place forward DFT: X_k = sum_j x_j e^{-2 pi i jk/n}.
void fft_forward(std::vector<cplx>& a) {
  auto* p = reinterpret_cast<fftw_complex*>(a.data());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lk(g_fftw_mu);
    plan = fftw_plan_dft_1d(static_cast<int>(a.size()), p, p, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard<std::mutex> lk(g_fftw_mu);
  fftw_destroy_plan(plan);
}

double mollifier(double t) {
  if (t <= 0.0 || t >= 1.0) return 0.0;
  return std::exp(-1.0 / (4.0 * t * (1.0 - t)));
}

double phi_raw(double v) {
  const GaussRule& g = gauss_legendre(64);
  double s = 0.0;
  for (size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * mollifier(0.5 * v * (g.x[i] + 1.0));
  return 0.5 * v * s;
}

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  double mx = 0, my = 0;
  for (size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxx > 0 ? sxy / sxx : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

double smooth_step(double v) {
  if (v <= 0.0) return 0.0;
  if (v >= 1.0) return 1.0;
  static const double total = phi_raw(1.0);
  if (v > 0.5) return 1.0 - phi_raw(1.0 - v) / total;
  return phi_raw(v) / total;
}

double bump_profile(double u, double plateau) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  const double a = 0.5 * (1.0 - plateau);
  if (a <= 0.0) return 1.0;
  if (u < a) return smooth_step(u / a);
  if (u > 1.0 - a) return smooth_step((1.0 - u) / a);
  return 1.0;
}

double weight_real(const WeightSpec& w, double x) {
  if (w.amplitude == 0.0) return 0.0;
  const double u = (std::abs(x) - w.T) / ((w.Delta - 1.0) * w.T);
  return w.amplitude * bump_profile(u, w.plateau);
}

double weight_complex(const WeightSpec& w, cplx z) {
  double r = weight_real(w, std::abs(z));
  if (r == 0.0 || w.angular_amp == 0.0) return r;
  return r * (1.0 + w.angular_amp * std::cos(w.angular_mode * (std::arg(z) - w.angular_phase)));
}

cplx TestFunction::real_value(double x) const {
  double v = weight_real(w, x);
  if (v == 0.0) return 0.0;
  return v * e(-rho.real() * x);
}

cplx TestFunction::complex_value(cplx z) const {
  double v = weight_complex(w, z);
  if (v == 0.0) return 0.0;
  return v * e(-2.0 * (rho * z).real());
}

HankelValue hankel_real(const RealKernel& k, const TestFunction& f, double y, double tol, double panel_density) {
  if (y == 0.0) throw Error("hankel", "transform argument must be nonzero");
  HankelValue out;
  if (f.zero()) return out;
  const int r = k.params().rank;
  const double a = f.support_lo(), b = f.support_hi();
  const double ay = std::abs(y);
  const double turns = r * std::pow(ay, 1.0 / r) * (std::pow(b, 1.0 / r) - std::pow(a, 1.0 / r)) +
                       std::abs(f.rho.real()) * (b - a);
  const int panels = static_cast<int>(std::ceil(panel_density * turns)) + 8;
  if (panels > 200000) throw CapError("hankel", "node budget exhausted: " + std::to_string(panels) + " panels");
  const double ktol = std::max(1e-14, 0.1 * tol / (b - a));
  const int order = 16;
  const GaussRule& g = gauss_legendre(order);

  auto side = [&](int sgn, int np) {
    cplx acc = 0.0;
    const double w = (b - a) / np;
    for (int p = 0; p < np; ++p) {
      const double c = a + (p + 0.5) * w;
      for (int i = 0; i < order; ++i) {
        double x = c + 0.5 * w * g.x[i];
        cplx fv = f.real_value(sgn * x);
        if (fv == 0.0) continue;
        KernelValue kv = bessel_kernel_real(k, sgn * x * y, ktol);
        acc += 0.5 * w * g.w[i] * kv.value * fv;
        ++out.nodes;
      }
    }
    return acc;
  };
  cplx fine = 0.0, coarse = 0.0;
  for (int sgn : {1, -1}) {
    if (k.negative_vanishes() && sgn * y < 0) continue;
    fine += side(sgn, panels);
    coarse += side(sgn, (panels + 1) / 2);
  }
  out.value = fine;
  out.err = std::abs(fine - coarse);
  return out;
}

HankelValue hankel_complex(const BesselParamsComplex& p, const TestFunction& f, cplx u, double tol,
                           double panel_density) {
  validate(p);
  if (u == 0.0) throw Error("hankel", "transform argument must be nonzero");
  HankelValue out;
  if (f.zero()) return out;
  const int r = p.rank;
  const double a = f.support_lo(), b = f.support_hi();
  const double au = std::abs(u), alpha = std::arg(u);
  const double rho_turns = 2.0 * std::abs(f.rho) * (b - a);
  const double turns = 2.0 * r * (std::pow(b * au, 1.0 / r) - std::pow(a * au, 1.0 / r)) + rho_turns;
  const int panels = static_cast<int>(std::ceil(panel_density * turns)) + 8;
  if (panels > 20000) throw CapError("hankel", "node budget exhausted: " + std::to_string(panels) + " panels");
  const int order = 16;
  const GaussRule& g = gauss_legendre(order);

  // angular resolution: highest harmonic of f on the support plus a margin
  const int kf = static_cast<int>(std::ceil(kTwoPi * 2.0 * std::abs(f.rho) * b)) + std::abs(f.w.angular_mode) + 12;
  int M = 16;
  while (M < 2 * kf + 16) M *= 2;

  auto run = [&](int np, long& nodes) {
    cplx acc = 0.0;
    const double w = (b - a) / np;
    std::vector<cplx> samples(M);
    for (int pnl = 0; pnl < np; ++pnl) {
      const double c = a + (pnl + 0.5) * w;
      for (int i = 0; i < order; ++i) {
        const double rad = c + 0.5 * w * g.x[i];
        for (int l = 0; l < M; ++l) samples[l] = f.complex_value(std::polar(rad, kTwoPi * l / M));
        fft_forward(samples);  // samples[k] / M = f_k(rad)
        double fmax = 0.0;
        for (auto& s : samples) fmax = std::max(fmax, std::abs(s) / M);
        if (fmax == 0.0) continue;
        cplx inner = 0.0;
        for (int kk = -M / 2 + 1; kk < M / 2; ++kk) {
          // coefficient f_{-k}
          cplx fk = samples[(M - kk) % M] / static_cast<double>(M);
          if (std::abs(fk) < 1e-15 * fmax) continue;
          std::vector<int> mk(p.m);
          for (auto& v : mk) v += kk;
          KernelValue jv = bessel_j_complex(p.mu, mk, rad * au, 1e-3 * tol / (b * b));
          inner += jv.value * std::polar(1.0, kk * alpha) * fk;
          ++nodes;
        }
        acc += 0.5 * w * g.w[i] * 2.0 * rad * inner;
      }
    }
    return acc;
  };
  long n1 = 0, n2 = 0;
  cplx fine = run(panels, n1);
  cplx coarse = run((panels + 1) / 2, n2);
  out.value = fine;
  out.err = std::abs(fine - coarse);
  out.nodes = n1 + n2;
  return out;
}

HankelPlan::HankelPlan(const RealKernel& k, const TestFunction& f, const PlanOptions& opt) {
  sigma0_ = std::max(0.5, k.pole_max() + 1.0);
  const double h = opt.h;
  const double period = kTwoPi / h;
  if (f.zero()) {
    dv_ = 1.0;
    v0_ = -1e300;
    return;
  }
  const double lo = std::log(f.support_lo()), hi = std::log(f.support_hi());
  const double u0 = lo - 1.0;

  // Mellin transforms F_+-(sigma0 + i t_k), t_k = k h, by FFT in u = log x
  std::vector<cplx> Fp, Fm;
  int N1 = 0;
  for (int lg = 12; lg <= opt.max_log2; ++lg) {
    N1 = 1 << lg;
    const double du = period / N1;
    if (du > (hi - lo) / 256.0) continue;
    Fp.assign(N1, 0.0);
    Fm.assign(N1, 0.0);
    for (int j = 0; j < N1; ++j) {
      double uj = u0 + j * du;
      if (uj <= lo || uj >= hi) continue;
      double x = std::exp(uj), jac = std::exp(uj * (1.0 - sigma0_));
      Fp[j] = f.real_value(x) * jac * du;
      Fm[j] = f.real_value(-x) * jac * du;
    }
    fft_forward(Fp);
    fft_forward(Fm);
    double top = 0.0, edge = 0.0;
    for (int kk = 0; kk < N1; ++kk) {
      double m = std::abs(Fp[kk]) + std::abs(Fm[kk]);
      top = std::max(top, m);
      int kc = kk < N1 / 2 ? kk : N1 - kk;
      if (kc > 3 * N1 / 8) edge = std::max(edge, m);
    }
    if (edge <= opt.eps * top) break;
    if (lg == opt.max_log2) throw CapError("hankel", "Mellin transform of the test function is not resolved");
  }

  // Phi_+- and the spectral cut
  std::vector<cplx> Pp(N1), Pm(N1);
  double pmax = 0.0;
  for (int kk = 0; kk < N1; ++kk) {
    int ks = kk < N1 / 2 ? kk : kk - N1;
    double t = ks * h;
    cplx ph = std::polar(1.0, -t * u0);
    cplx fp = Fp[kk] * ph, fm = Fm[kk] * ph;
    cplx s(sigma0_, t);
    cplx kp = k.symbol(s, 1), km = k.symbol(s, -1);
    Pp[kk] = kp * fp + km * fm;
    Pm[kk] = km * fp + kp * fm;
    pmax = std::max(pmax, std::max(std::abs(Pp[kk]), std::abs(Pm[kk])));
  }
  int kcut = 0;
  for (int kk = 0; kk < N1; ++kk) {
    int ks = kk < N1 / 2 ? kk : N1 - kk;
    if (std::max(std::abs(Pp[kk]), std::abs(Pm[kk])) > opt.eps * pmax) kcut = std::max(kcut, ks);
  }
  t_max_ = (kcut + 1) * h;

  int N2 = 4096;
  while (N2 < opt.oversample * t_max_ / h || N2 < 2 * kcut + 2) N2 *= 2;
  if (N2 > (1 << opt.max_log2)) throw CapError("hankel", "output grid exceeds the FFT budget");
  dv_ = period / N2;
  v0_ = -lo - 0.4 * period;
  std::vector<cplx> Gp(N2, 0.0), Gm(N2, 0.0);
  for (int ks = -kcut; ks <= kcut; ++ks) {
    int src = ks >= 0 ? ks : N1 + ks;
    int dst = ks >= 0 ? ks : N2 + ks;
    cplx ph = std::polar(h / kTwoPi, -ks * h * v0_);
    Gp[dst] = Pp[src] * ph;
    Gm[dst] = Pm[src] * ph;
  }
  fft_forward(Gp);
  fft_forward(Gm);

  double gmax = 0.0;
  for (int j = 0; j < N2; ++j) gmax = std::max({gmax, std::abs(Gp[j]), std::abs(Gm[j])});
  noise_ = std::max(1e-14, 10.0 * opt.eps) * gmax;
  int jlast = 0;
  for (int j = N2 - 1; j >= 0; --j)
    if (std::max(std::abs(Gp[j]), std::abs(Gm[j])) > 10.0 * noise_) {
      jlast = j;
      break;
    }
  int keep = std::min(N2, jlast + 64);
  Gp.resize(keep);
  Gm.resize(keep);
  gp_ = std::move(Gp);
  gn_ = std::move(Gm);
  y_cut_ = std::exp(v0_ + jlast * dv_);
}

double HankelPlan::noise(double y) const { return noise_ * std::pow(std::abs(y), -sigma0_); }

cplx HankelPlan::interp(const std::vector<cplx>& g, double v, int order) const {
  const double pos = (v - v0_) / dv_;
  long j0 = static_cast<long>(std::floor(pos)) - (order / 2 - 1);
  if (j0 < 0) throw Error("hankel", "argument below the plan's range");
  if (j0 + order > static_cast<long>(g.size())) return 0.0;
  // barycentric weights for equispaced nodes
  cplx num = 0.0;
  double den = 0.0;
  double binom = 1.0;
  for (int i = 0; i < order; ++i) {
    double d = pos - static_cast<double>(j0 + i);
    if (d == 0.0) return g[j0 + i];
    double w = ((i % 2) ? -1.0 : 1.0) * binom / d;
    num += w * g[j0 + i];
    den += w;
    binom = binom * (order - 1 - i) / (i + 1);
  }
  return num / den;
}

HankelValue HankelPlan::eval(double y) const {
  if (y == 0.0) throw Error("hankel", "transform argument must be nonzero");
  HankelValue out;
  if (gp_.empty()) return out;
  const std::vector<cplx>& g = y > 0 ? gp_ : gn_;
  const double v = std::log(std::abs(y));
  const double scale = std::exp(-sigma0_ * v);
  cplx a = interp(g, v, 12), b = interp(g, v, 10);
  out.value = a * scale;
  out.err = std::abs(a - b) * scale + noise(y);
  return out;
}

std::vector<double> log_grid(double a, double b, int n) {
  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = a * std::pow(b / a, n == 1 ? 0.0 : static_cast<double>(i) / (n - 1));
  return g;
}

DecayReport decay_scan(const RealKernel& k, const TestFunction& f, const std::vector<double>& y_grid,
                       double tail_order, double tail_start, double tail_end) {
  DecayReport rep;
  HankelPlan plan(k, f);
  const int r = k.params().rank;
  const double T = f.w.T, D = f.w.Delta;
  const double tr = T * std::abs(f.rho.real());
  const double wlo = std::pow(tr, r) / std::pow(D, r * (r - 1)), whi = std::pow(tr, r) * std::pow(D, r * (r - 1));
  std::vector<double> xs_s, ys_s, xs_w, ys_w, xs_t, ys_t;
  for (double y : y_grid) {
    DecayPoint p;
    p.y = y;
    HankelValue hv = plan.eval(y);
    p.value = hv.value;
    p.err = hv.err;
    const double ty = T * std::abs(y);
    if (ty <= 1.0) p.regime = "small";
    else if (tr > 0.0 && ty >= wlo && ty <= whi) p.regime = "window";
    else if ((tr > 0.0 && ty > whi) || (tr == 0.0 && ty >= tail_start && ty <= tail_end)) p.regime = "tail";
    else p.regime = "mid";
    const double mag = std::abs(p.value);
    const double scaled = mag * std::sqrt(std::abs(y) / T);
    const bool resolved = mag > 100.0 * p.err;
    if (p.regime == "small") {
      rep.small_sup = std::max(rep.small_sup, scaled);
      if (resolved) {
        xs_s.push_back(std::log(ty));
        ys_s.push_back(std::log(mag));
      }
    } else if (p.regime == "window") {
      rep.window_reached = true;
      rep.window_sup = std::max(rep.window_sup, scaled);
      if (resolved) {
        xs_w.push_back(std::log(ty));
        ys_w.push_back(std::log(mag));
      }
    } else if (p.regime == "tail" && resolved) {
      xs_t.push_back(std::log(ty));
      ys_t.push_back(std::log(mag));
    }
    rep.points.push_back(p);
  }
  rep.slope_small = least_squares_slope(xs_s, ys_s);
  rep.slope_window = least_squares_slope(xs_w, ys_w);
  rep.slope_tail = least_squares_slope(xs_t, ys_t);
  rep.tail_points = static_cast<int>(xs_t.size());
  rep.tail_ok = rep.tail_points >= 2 && rep.slope_tail <= -tail_order;
  return rep;
}

}  // namespace vsum
