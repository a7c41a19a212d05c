// One PASS/FAIL line per acceptance criterion; exit status 0 only if all pass.
#include <boost/math/special_functions/bessel.hpp>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "vsum/parallel.hpp"
#include "vsum/report.hpp"

using namespace vsum;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt_s(const char* f, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

Outcome gl2_voronoi() {
  double worst = 0.0, slowest = 0.0;
  int n = 0;
  bool ok = true;
  for (auto [a, b] : {std::pair{0LL, 1LL}, {1LL, 1LL}, {1LL, 2LL}, {2LL, 3LL}, {3LL, 5LL}})
    for (double T : {20.0, 50.0})
      for (double rho : {0.0, 1.0 / T}) {
        VoronoiReport r = verify_identity(make_gl2_instance(a, b, T, rho, 1e-4));
        worst = std::max(worst, r.rel_residual);
        slowest = std::max(slowest, r.seconds);
        ok = ok && r.rel_residual < 1e-4 && r.seconds < 300.0;
        ++n;
      }
  return {ok, fmt_s("%.0f instances, max rel residual %.2e, slowest %.1fs", n, worst, slowest)};
}

Outcome gl3_voronoi() {
  double worst = 0.0, slowest = 0.0;
  bool ok = true;
  for (auto [a, b] : {std::pair{0LL, 1LL}, {1LL, 2LL}}) {
    VoronoiReport r = verify_identity(make_gl3_instance(a, b, 20.0, 0.0, 1e-2));
    worst = std::max(worst, r.rel_residual);
    slowest = std::max(slowest, r.seconds);
    ok = ok && r.rel_residual < 1e-2 && r.seconds < 1800.0;
  }
  return {ok, fmt_s("max rel residual %.2e, slowest %.1fs", worst, slowest)};
}

Outcome gl2_exponent() {
  auto p = make_provider("delta");
  std::vector<double> th = default_theta_grid(48);
  ScanReport r = exponent_scan(*p, th, dyadic_grid(8, 14));
  auto c = make_provider("constant");
  ScanReport rc = exponent_scan(*c, th, dyadic_grid(8, 14));
  bool ok = th.size() == 64 && r.slope >= 0.35 && r.slope <= 0.62 && rc.slope > 0.9;
  return {ok, fmt_s("slope %.3f +- %.3f over %.0f theta, control slope %.3f", r.slope, r.ci, double(th.size()), rc.slope)};
}

Outcome gl3_exponent() {
  auto p = make_provider("sym2delta");
  ScanReport r = exponent_scan(*p, default_theta_grid(48), dyadic_grid(8, 12));
  return {r.slope <= 0.85, fmt_s("slope %.3f +- %.3f", r.slope, r.ci)};
}

Outcome hecke() {
  HeckeReport h = hecke_check(200);
  // q prod (1 - q^k)^24 directly
  std::vector<long long> c(8, 0);
  c[0] = 1;
  for (int k = 1; k < 8; ++k)
    for (int r = 0; r < 24; ++r)
      for (int i = 7; i >= k; --i) c[i] -= c[i - k];
  bool ok = h.violations == 0 && c[1] == -24 && c[5] == -6048 && tau(2) == -24 && tau(6) == -6048;
  return {ok, fmt_s("%.0f pairs, %.0f violations, tau(2) = %.0f, tau(6) = %.0f", double(h.pairs), double(h.violations),
                    double(tau(2)), double(tau(6)))};
}

Outcome weil() {
  WeilReport w = weil_check(500);
  double s = kloosterman_rational(1, 1, 3);
  bool ok = w.violations == 0 && std::abs(s + 1.0) < 1e-10;
  return {ok, fmt_s("%.0f pairs, %.0f violations, max ratio %.3f, S(1,1;3) = %.12f", double(w.pairs),
                    double(w.violations), w.max_ratio, s)};
}

Outcome bessel() {
  RealKernel k(delta_params());
  std::vector<double> ratio;
  for (int i = 0; i < 50; ++i) {
    double x = 2.0 + 8.0 * i / 49.0;
    double j = boost::math::cyl_bessel_j(11, 4.0 * kPi * x);
    if (std::abs(j) < 1e-3) continue;
    ratio.push_back(bessel_kernel_real(k, x * x, 1e-13).value.real() / j);
  }
  double m = 0.0, v = 0.0;
  for (double r : ratio) m += r;
  m /= ratio.size();
  for (double r : ratio) v += (r - m) * (r - m);
  double rsd = std::sqrt(v / ratio.size()) / std::abs(m);

  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> X(0.5, 30.0), S(0.0, 1.0);
  double cdiff = 0.0;
  for (int i = 0; i < 20; ++i) {
    BesselParamsReal p = i % 2 ? delta_params() : sym2_delta_params();
    double x = X(rng) * (S(rng) < 0.3 ? -1.0 : 1.0);
    ContourSpec a, b;
    a.sigma1 = -1.0;
    b.sigma1 = -1.5;
    cdiff = std::max(cdiff, std::abs(bessel_kernel_real(p, x, 1e-12, a).value - bessel_kernel_real(p, x, 1e-12, b).value));
  }

  std::vector<double> g2, g3;
  for (int i = 0; i < 400; ++i) g2.push_back(5.0 + 45.0 * i / 399.0);
  for (int i = 0; i < 600; ++i) g3.push_back(10.0 + 30.0 * i / 599.0);
  double f2 = asymptotic_check_real(delta_params(), g2).frequency_pos;
  double f3 = asymptotic_check_real(sym2_delta_params(), g3).frequency_pos;
  bool ok = rsd < 1e-6 && cdiff < 1e-8 && std::abs(f2 - 2.0) <= 0.01 && std::abs(f3 - 3.0) <= 0.01;
  return {ok, fmt_s("ratio rsd %.1e, contour diff %.1e, frequencies %.4f %.4f", rsd, cdiff, f2, f3)};
}

Outcome hankel() {
  RealKernel k(delta_params());
  std::vector<double> sup;
  for (double T : {20.0, 40.0, 80.0}) {
    TestFunction f;
    f.w.T = T;
    f.rho = 50.0 / T;
    sup.push_back(decay_scan(k, f, log_grid(1e-3, 1e3, 200), 2.0, 1e4, 1e5).window_sup);
  }
  double spread = 1.0;
  for (size_t i = 1; i < sup.size(); ++i) spread = std::max(spread, std::max(sup[i] / sup[i - 1], sup[i - 1] / sup[i]));
  TestFunction f0;
  f0.w.T = 20.0;
  DecayReport d = decay_scan(k, f0, log_grid(1e-4, 1e3, 80), 2.0, 1e3, 2e4);
  bool ok = spread <= 2.0 && d.tail_ok;
  return {ok, fmt_s("window sup %.3g / %.3g / %.3g, tail exponent %.2f", sup[0], sup[1], sup[2], -d.slope_tail)};
}

Outcome dirichlet() {
  long long viol = 0, trials = 0;
  double q = 0.0;
  for (const char* name : {"Q.json", "Qi.json", "Qsqrt2.json"}) {
    NumberField F = NumberField::load(std::string(VSUM_SOURCE_DIR) + "/configs/fields/" + name);
    for (double Q : {10.0, 50.0}) {
      DirichletSweep s = dirichlet_sweep(F, Q, 1000, 1);
      viol += s.violations;
      trials += s.trials;
      q = std::max(q, s.max_quality);
    }
  }
  return {viol == 0, fmt_s("%.0f trials, %.0f violations, worst quality %.3f", double(trials), double(viol), q)};
}

Outcome smoothing() {
  NumberField Q = NumberField::rationals();
  long long viol = 0, pts = 0;
  for (double X : {4.0, 16.0, 64.0}) {
    DualCheck d = dual_property_check(SmoothingKernel(Q, X), static_cast<long long>(4 * X));
    viol += d.violations;
    pts += d.points;
  }
  double lo = 1e300, hi = 0.0;
  for (double X = 4.0; X <= 256.0; X *= 2.0) {
    double r = SmoothingKernel(Q, X).l1() / std::log(X);
    lo = std::min(lo, r);
    hi = std::max(hi, r);
  }
  bool ok = viol == 0 && hi / lo <= 3.0;
  return {ok, fmt_s("%.0f lattice points, %.0f violations, L1/log X spread %.2f", double(pts), double(viol), hi / lo)};
}

Outcome parseval() {
  ParsevalReport r = parseval_check(*make_provider("delta"), 1024.0);
  return {r.rel_diff < 0.02, fmt_s("rel diff %.2e over %.0f samples", r.rel_diff, r.samples)};
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"voronoi-gl2", gl2_voronoi}, {"voronoi-gl3", gl3_voronoi}, {"gl2-exponent", gl2_exponent},
      {"gl3-exponent", gl3_exponent},  {"hecke-tau", hecke},         {"weil-bound", weil},
      {"bessel-kernel", bessel},    {"hankel-decay", hankel},     {"dirichlet", dirichlet},
      {"smoothing-kernel", smoothing}, {"parseval", parseval}};
  int failed = 0, i = 0;
  for (const auto& [name, fn] : criteria) {
    ++i;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2d %-17s %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", i, name, o.detail.c_str(), s);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
