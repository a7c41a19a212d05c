#include "vsum/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

namespace vsum {

namespace {

GaussRule build_rule(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    double p0 = 1.0, p1 = 0.0;
    for (int k = 1; k <= n; ++k) {
      double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
    }
    dp = n * (z * p0 - p1) / (z * z - 1.0);
    double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  return r;
}

// Kronrod 15 / Gauss 7 abscissae and weights (QUADPACK qk15).
constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                           0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                           0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                           0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                          0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b;
  cplx value;
  double err;
  bool operator<(const Segment& o) const { return err < o.err; }
};

Segment gk15(const std::function<cplx(double)>& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  cplx fc = f(c);
  cplx rk = fc * wgk[7];
  cplx rg = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    cplx f1 = f(c - h * xgk[j]);
    cplx f2 = f(c + h * xgk[j]);
    rk += wgk[j] * (f1 + f2);
    if (j % 2 == 1) rg += wg[j / 2] * (f1 + f2);
  }
  Segment s{a, b, rk * h, std::abs((rk - rg) * h)};
  return s;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
  return it->second;
}

QuadResult integrate_gk(const std::function<cplx(double)>& f, double a, double b,
                        const AdaptiveOptions& opt) {
  QuadResult res;
  if (a == b) return res;
  std::priority_queue<Segment> heap;
  int panels = std::max(1, opt.initial_panels);
  cplx total = 0.0;
  double err = 0.0;
  for (int i = 0; i < panels; ++i) {
    double lo = a + (b - a) * i / panels;
    double hi = (i + 1 == panels) ? b : a + (b - a) * (i + 1) / panels;
    Segment s = gk15(f, lo, hi);
    res.evals += 15;
    total += s.value;
    err += s.err;
    heap.push(s);
  }
  int count = panels;
  while (err > std::max(opt.abstol, opt.reltol * std::abs(total)) && count < opt.max_intervals) {
    Segment s = heap.top();
    heap.pop();
    double m = 0.5 * (s.a + s.b);
    if (m <= s.a || m >= s.b) break;
    Segment l = gk15(f, s.a, m), r = gk15(f, m, s.b);
    res.evals += 30;
    total += l.value + r.value - s.value;
    err += l.err + r.err - s.err;
    heap.push(l);
    heap.push(r);
    ++count;
  }
  // resum to avoid drift from incremental updates
  cplx sum = 0.0;
  double esum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    esum += heap.top().err;
    heap.pop();
  }
  res.value = sum;
  res.err = esum;
  return res;
}

cplx integrate_gl(const std::function<cplx(double)>& f, double a, double b, int panels, int order) {
  const GaussRule& g = gauss_legendre(order);
  cplx sum = 0.0;
  double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    double c = a + (p + 0.5) * h;
    cplx part = 0.0;
    for (int i = 0; i < order; ++i) part += g.w[i] * f(c + 0.5 * h * g.x[i]);
    sum += part * (0.5 * h);
  }
  return sum;
}

}  // namespace vsum
