#include "vsum/twistsums.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <chrono>
#include <cmath>
#include <numeric>

#include "vsum/parallel.hpp"
#include "vsum/quadrature.hpp"

namespace vsum {

namespace {

cplx e_prod(double theta, long long n) {
  long double x = static_cast<long double>(theta) * static_cast<long double>(n);
  x -= std::floor(x);
  return e(static_cast<double>(x));
}

void check_query(const TwistQuery& q) {
  if (!q.field) throw Error("twistsums", "query has no field");
  if (!q.provider) throw Error("twistsums", "query has no coefficient provider");
  if (q.theta.places() != q.field->places()) throw Error("twistsums", "theta must have one entry per place");
}

// sum_v Tr_{F_v/R}(theta_v x_v)
double trace_pair(const NumberField& F, const EmbeddedPoint& theta, const EmbeddedPoint& x) {
  double t = 0.0;
  for (int v = 0; v < F.r1(); ++v) t += theta.real[v] * x.real[v];
  for (int v = 0; v < F.r2(); ++v) t += 2.0 * (theta.cpx[v] * x.cpx[v]).real();
  return t;
}

uint64_t abs_norm(const EmbeddedPoint& x) {
  const double n = x.norm();
  if (!(n < 9.0e15)) throw CapError("twistsums", "norm too large for exact rounding");
  return static_cast<uint64_t>(std::llround(std::abs(n)));
}

cplx lattice_term(const TwistQuery& q, const std::vector<long long>& c, double weight) {
  EmbeddedPoint x = q.field->embed_ints(c);
  const uint64_t n = abs_norm(x);
  if (n == 0) return 0.0;
  return weight * q.provider->a(n) * e(trace_pair(*q.field, q.theta, x));
}

// Lattice points with |c_j| <= box[j], lexicographic.
template <class Fn>
void for_box(const std::vector<long long>& box, size_t cap, Fn&& fn) {
  const int n = static_cast<int>(box.size());
  double count = 1.0;
  for (long long b : box) count *= 2.0 * b + 1.0;
  if (count > static_cast<double>(cap))
    throw CapError("twistsums", "enumeration needs " + std::to_string(count) + " points (cap " +
                                    std::to_string(cap) + ")");
  std::vector<long long> c(n);
  for (int j = 0; j < n; ++j) c[j] = -box[j];
  while (true) {
    fn(c);
    int k = n - 1;
    while (k >= 0 && c[k] == box[k]) {
      c[k] = -box[k];
      --k;
    }
    if (k < 0) break;
    ++c[k];
  }
}

double sinc(double z) {
  if (std::abs(z) < 1e-4) return 1.0 - z * z / 6.0;
  return std::sin(z) / z;
}

double det(std::vector<std::vector<double>> a) {
  const int n = static_cast<int>(a.size());
  double d = 1.0;
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    if (a[p][c] == 0.0) return 0.0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (int r = c + 1; r < n; ++r) {
      double f = a[r][c] / a[c][c];
      for (int k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

WeightSpec annulus_weight(double T, double margin) {
  WeightSpec w;
  w.T = T - margin;
  w.Delta = (2.0 * T + margin) / (T - margin);
  w.plateau = T / (T + 2.0 * margin);
  return w;
}

}  // namespace

cplx sharp_sum(const TwistQuery& q) {
  check_query(q);
  if (q.field->degree() == 1 && q.field->r1() == 1 && q.field->embedding(0, 0) == cplx(1.0, 0.0))
    return sharp_sum_q(*q.provider, q.theta.real[0], q.T);
  if (q.T < 2.0) return 0.0;
  auto pts = enumerate_lattice(*q.field, q.T, true, q.cap);
  std::vector<cplx> v(pts.size());
  parallel_for(pts.size(), [&](size_t i) { v[i] = lattice_term(q, pts[i], 1.0); });
  return pairwise_sum(v);
}

cplx smooth_sum(const TwistQuery& q) {
  check_query(q);
  const NumberField& F = *q.field;
  if (static_cast<int>(q.w.size()) != F.places()) throw Error("twistsums", "need one WeightSpec per place");
  for (const auto& w : q.w)
    if (w.amplitude == 0.0) return 0.0;
  std::vector<double> pb;
  for (const auto& w : q.w) pb.push_back(w.Delta * w.T);
  std::vector<double> cb = coordinate_bounds(F, pb);
  std::vector<long long> box;
  for (double b : cb) box.push_back(static_cast<long long>(std::floor(b + 1e-9)));
  std::vector<std::vector<long long>> pts;
  std::vector<double> wts;
  for_box(box, q.cap, [&](const std::vector<long long>& c) {
    EmbeddedPoint x = F.embed_ints(c);
    double wt = 1.0;
    for (int v = 0; v < F.r1() && wt != 0.0; ++v) wt *= weight_real(q.w[v], x.real[v]);
    for (int v = 0; v < F.r2() && wt != 0.0; ++v) wt *= weight_complex(q.w[F.r1() + v], x.cpx[v]);
    if (wt != 0.0) {
      pts.push_back(c);
      wts.push_back(wt);
    }
  });
  std::vector<cplx> v(pts.size());
  parallel_for(pts.size(), [&](size_t i) { v[i] = lattice_term(q, pts[i], wts[i]); });
  return pairwise_sum(v);
}

cplx sharp_sum_q(const CoefficientProvider& p, double theta, double T) {
  const long long h = static_cast<long long>(std::floor(T / 2.0 + 1e-12));
  if (h < 1) return 0.0;
  p.reserve(static_cast<uint64_t>(h));
  std::vector<cplx> v(static_cast<size_t>(h));
  for (long long n = 1; n <= h; ++n)
    v[n - 1] = p.a(static_cast<uint64_t>(n)) * (e_prod(theta, n) + e_prod(theta, -n));
  return pairwise_sum(v);
}

cplx smooth_sum_q(const CoefficientProvider& p, double theta, const WeightSpec& w) {
  if (w.amplitude == 0.0) return 0.0;
  const long long lo = std::max(1LL, static_cast<long long>(std::ceil(w.T)));
  const long long hi = static_cast<long long>(std::floor(w.Delta * w.T));
  if (hi < lo) return 0.0;
  p.reserve(static_cast<uint64_t>(hi));
  std::vector<cplx> v;
  for (long long n = lo; n <= hi; ++n) {
    const double wp = weight_real(w, static_cast<double>(n)), wn = weight_real(w, -static_cast<double>(n));
    if (wp == 0.0 && wn == 0.0) continue;
    v.push_back(p.a(static_cast<uint64_t>(n)) * (wp * e_prod(theta, n) + wn * e_prod(theta, -n)));
  }
  return pairwise_sum(v);
}

cplx annulus_sum_q(const CoefficientProvider& p, double theta, double T) {
  const long long lo = std::max(1LL, static_cast<long long>(std::ceil(T)));
  const long long hi = static_cast<long long>(std::floor(2.0 * T));
  if (hi < lo) return 0.0;
  p.reserve(static_cast<uint64_t>(hi));
  std::vector<cplx> v;
  for (long long n = lo; n <= hi; ++n)
    v.push_back(p.a(static_cast<uint64_t>(n)) * (e_prod(theta, n) + e_prod(theta, -n)));
  return pairwise_sum(v);
}

std::vector<double> default_theta_grid(int irrationals) {
  std::vector<double> g = {0.0,       1.0 / 2,   1.0 / 3,   2.0 / 3,   1.0 / 4,   3.0 / 4,   1.0 / 5,   2.0 / 5,
                           3.0 / 5,   4.0 / 5,   1.0 / 6,   5.0 / 6,   1.0 / 7,   2.0 / 7,   3.0 / 7,   1.0 / 8};
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0, shift = std::sqrt(2.0) / 7.0;
  for (int k = 1; k <= irrationals; ++k) {
    double x = k * phi + shift;
    g.push_back(x - std::floor(x));
  }
  return g;
}

std::vector<double> dyadic_grid(int lo_log2, int hi_log2) {
  std::vector<double> out;
  for (int k = lo_log2; k <= hi_log2; ++k) out.push_back(std::ldexp(1.0, k));
  return out;
}

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const size_t n = x.size();
  if (n < 2 || y.size() != n) throw Error("twistsums", "degenerate grid for the fit");
  double mx = std::accumulate(x.begin(), x.end(), 0.0) / n, my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw Error("twistsums", "degenerate grid for the fit");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  if (n > 2) {
    double ssr = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double r = y[i] - f.intercept - f.slope * x[i];
      ssr += r * r;
    }
    f.stderr_slope = std::sqrt(ssr / (n - 2) / sxx);
    boost::math::students_t dist(static_cast<double>(n - 2));
    f.ci = boost::math::quantile(boost::math::complement(dist, 0.025)) * f.stderr_slope;
  }
  return f;
}

ScanReport exponent_scan(const CoefficientProvider& p, const std::vector<double>& theta_grid,
                         const std::vector<double>& T_grid, int threads) {
  if (theta_grid.empty() || T_grid.size() < 2) throw Error("twistsums", "degenerate grid");
  ScanReport r;
  r.T = T_grid;
  r.theta = theta_grid;
  const size_t nt = theta_grid.size();
  p.reserve(static_cast<uint64_t>(*std::max_element(T_grid.begin(), T_grid.end()) / 2.0 + 1.0));
  r.values.assign(T_grid.size() * nt, 0.0);
  parallel_for(
      r.values.size(), [&](size_t i) { r.values[i] = sharp_sum_q(p, theta_grid[i % nt], T_grid[i / nt]); }, threads);
  std::vector<double> lx, ly;
  for (size_t i = 0; i < T_grid.size(); ++i) {
    size_t best = 0;
    for (size_t k = 1; k < nt; ++k)
      if (std::abs(r.at(i, k)) > std::abs(r.at(i, best))) best = k;
    r.argmax.push_back(best);
    r.max_abs.push_back(std::abs(r.at(i, best)));
    if (r.max_abs.back() > 0.0) {
      lx.push_back(std::log(T_grid[i]));
      ly.push_back(std::log(r.max_abs.back()));
    }
  }
  LinearFit f = fit_line(lx, ly);
  r.slope = f.slope;
  r.intercept = f.intercept;
  r.stderr_slope = f.stderr_slope;
  r.ci = f.ci;
  r.n_points = static_cast<int>(lx.size());
  return r;
}

SmoothingKernel::SmoothingKernel(const NumberField& F, double X, double lambda) : F_(&F), X_(X), lambda_(lambda) {
  if (!(X >= 2.0)) throw Error("twistsums", "smoothing kernel needs X >= 2");
  if (!(lambda > 0.0)) throw Error("twistsums", "ramp width must be positive");
  // no integer strictly inside the ramp, so g is 0/1 on the lattice
  if (lambda > std::floor(X / 2.0) + 1.0 - X / 2.0 + 1e-12)
    throw Error("twistsums", "ramp (X/2, X/2 + lambda) contains an integer");
  A_ = (X + lambda) / 2.0;
  const auto& E = F.real_embedding();
  const int N = F.degree();
  std::vector<double> I(N, 1.0);
  for (int v = 0; v < F.r2(); ++v) {
    I[F.r1() + 2 * v] = 2.0;
    I[F.r1() + 2 * v + 1] = -2.0;
  }
  M_.assign(N, std::vector<double>(N));
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k) M_[j][k] = E[k][j] * I[k];
  C_ = std::abs(det(E)) * std::pow(4.0, F.r2());
}

double SmoothingKernel::g(double t) const {
  const double a = std::abs(t);
  if (a <= X_ / 2.0) return 1.0;
  return std::max(0.0, 1.0 - (a - X_ / 2.0) / lambda_);
}

double SmoothingKernel::ghat(double xi) const {
  return 2.0 * A_ * sinc(kTwoPi * A_ * xi) * sinc(kPi * lambda_ * xi);
}

double SmoothingKernel::ghat_quad(double xi) const {
  const double a = X_ / 2.0, b = a + lambda_;
  auto f = [&](double t) { return cplx(g(t) * std::cos(kTwoPi * t * xi), 0.0); };
  const int p1 = static_cast<int>(std::ceil(2.0 * std::abs(xi) * a)) + 2;
  const int p2 = static_cast<int>(std::ceil(2.0 * std::abs(xi) * lambda_)) + 2;
  return 2.0 * (integrate_gl(f, 0.0, a, p1, 20) + integrate_gl(f, a, b, p2, 20)).real();
}

double SmoothingKernel::h(const std::vector<double>& flat) const {
  const int N = F_->degree();
  if (static_cast<int>(flat.size()) != N) throw Error("twistsums", "point has the wrong dimension");
  double out = C_;
  for (int j = 0; j < N; ++j) {
    double xi = 0.0;
    for (int k = 0; k < N; ++k) xi += M_[j][k] * flat[k];
    out *= ghat(xi);
  }
  return out;
}

double SmoothingKernel::dual(const std::vector<long long>& c) const {
  std::vector<double> y = F_->coordinates(F_->embed_ints(c));
  double out = 1.0;
  for (double t : y) out *= g(t);
  return out;
}

double SmoothingKernel::ghat_l1(double* err) const {
  // between consecutive zeros of either sine factor |ghat| is smooth
  const double L = 2000.0;
  const double s1 = 1.0 / (2.0 * A_), s2 = 1.0 / lambda_;
  std::vector<double> br;
  for (long long k = 0; k * s1 < L; ++k) br.push_back(k * s1);
  for (long long k = 1; k * s2 < L; ++k) br.push_back(k * s2);
  br.push_back(L);
  std::sort(br.begin(), br.end());
  br.erase(std::unique(br.begin(), br.end(), [](double a, double b) { return b - a < 1e-12; }), br.end());
  const GaussRule& r = gauss_legendre(16);
  std::vector<double> parts(br.size() - 1);
  parallel_for(parts.size(), [&](size_t i) {
    const double a = br[i], b = br[i + 1], m = 0.5 * (a + b), hw = 0.5 * (b - a);
    double s = 0.0;
    for (size_t j = 0; j < r.x.size(); ++j) s += r.w[j] * std::abs(ghat(m + hw * r.x[j]));
    parts[i] = s * hw;
  });
  if (err) *err = 2.0 / (lambda_ * kPi * kPi * L);
  return 2.0 * pairwise_sum(parts);
}

double SmoothingKernel::l1(double* err) const {
  double e1 = 0.0;
  const double g1 = ghat_l1(&e1);
  const int N = F_->degree();
  if (err) *err = N * std::pow(g1 + e1, N - 1) * e1;
  return std::pow(g1, N);
}

DualCheck dual_property_check(const SmoothingKernel& k, long long box) {
  DualCheck out;
  const int N = k.field().degree();
  std::vector<long long> b(N, box);
  const double half = k.X() / 2.0;
  for_box(b, 100'000'000, [&](const std::vector<long long>& c) {
    bool inside = std::all_of(c.begin(), c.end(), [&](long long v) { return std::abs(static_cast<double>(v)) <= half; });
    const double err = std::abs(k.dual(c) - (inside ? 1.0 : 0.0));
    out.max_err = std::max(out.max_err, err);
    if (err > 1e-12) ++out.violations;
    ++out.points;
  });
  return out;
}

ParsevalReport parseval_check(const CoefficientProvider& p, double T, int threads) {
  ParsevalReport r;
  const int M = static_cast<int>(std::llround(4.0 * T));
  if (M < 1) throw Error("twistsums", "T must be positive");
  std::vector<double> sq(M);
  parallel_for(
      static_cast<size_t>(M),
      [&](size_t k) { sq[k] = std::norm(sharp_sum_q(p, static_cast<double>(k) / M, T)); }, threads);
  r.mean_sq = pairwise_sum(sq) / M;
  const long long h = static_cast<long long>(std::floor(T / 2.0 + 1e-12));
  std::vector<double> c;
  for (long long n = 1; n <= h; ++n) c.push_back(2.0 * std::pow(p.a(static_cast<uint64_t>(n)), 2));
  r.coeff_sq = pairwise_sum(c);
  r.rel_diff = std::abs(r.mean_sq - r.coeff_sq) / r.coeff_sq;
  r.samples = M;
  return r;
}

AnnulusComparison annulus_comparison(const CoefficientProvider& p, double theta, double T, double margin) {
  if (!(margin > 0.0 && margin < T)) throw Error("twistsums", "margin must lie in (0, T)");
  AnnulusComparison r;
  WeightSpec w = annulus_weight(T, margin);
  r.sharp = annulus_sum_q(p, theta, T);
  r.smooth = smooth_sum_q(p, theta, w);
  r.diff = std::abs(r.sharp - r.smooth);
  const long long lo = static_cast<long long>(std::ceil(T)), hi = static_cast<long long>(std::floor(2.0 * T));
  for (long long n = 1; n <= static_cast<long long>(2.0 * T + margin) + 1; ++n)
    if ((n < lo || n > hi) && weight_real(w, static_cast<double>(n)) != 0.0) r.outside += 2;
  return r;
}

AssemblyReport sharp_from_smooth(const CoefficientProvider& p, double theta, long long T) {
  if (T < 2) throw Error("twistsums", "assembly needs T >= 2");
  // 1_{T <= |n| <= 2T} = g_{4T}(n) - g_{2T-2}(n) on the support of w
  const NumberField Qf = NumberField::rationals();
  SmoothingKernel outer(Qf, 4.0 * T), inner(Qf, 2.0 * T - 2.0);
  const WeightSpec w = annulus_weight(static_cast<double>(T), T / 2.0);
  const long long M = 8 * T + 8;
  std::vector<cplx> prod(M);
  std::vector<double> mags(M);
  parallel_for(static_cast<size_t>(M), [&](size_t i) {
    const double x = static_cast<double>(i) / M;
    cplx P = 0.0;  // sum_k (ghat_outer - ghat_inner)(x + k) via Poisson
    for (long long m = T; m <= 2 * T; ++m) P += 2.0 * std::cos(kTwoPi * m * x);
    const cplx S = smooth_sum_q(p, theta + x, w);
    prod[i] = S * P;
    mags[i] = std::abs(S);
  });
  AssemblyReport r;
  r.sharp = annulus_sum_q(p, theta, static_cast<double>(T));
  r.assembled = pairwise_sum(prod) / static_cast<double>(M);
  r.diff = std::abs(r.assembled - r.sharp);
  r.envelope = (outer.l1() + inner.l1()) * *std::max_element(mags.begin(), mags.end());
  r.within = r.diff <= 1e-9 * (1.0 + std::abs(r.sharp)) && std::abs(r.sharp) <= r.envelope;
  return r;
}

PipelineReport pipeline_bound_check(std::shared_ptr<const CoefficientProvider> p, double theta, double T) {
  if (!p) throw Error("twistsums", "pipeline needs a coefficient provider");
  if (!(T > 4.0)) throw Error("twistsums", "pipeline needs T > 4");
  auto t0 = std::chrono::steady_clock::now();
  PipelineReport r;
  r.rank = p->rank();
  r.theta = theta;
  r.T = T;
  r.Q = std::sqrt(T);
  NumberField Qf = NumberField::rationals();
  EmbeddedPoint th;
  th.real.push_back(theta);
  Approximation ap = dirichlet_approx(Qf, th, r.Q);
  r.a_breve = ap.alpha.to_ints()[0];
  r.b_breve = ap.beta.to_ints()[0];
  r.approx_residual = ap.residual[0];
  r.approx_ok = ap.bounds_ok;
  CoprimeSplit cs = make_coprime(Qf, ap.alpha, ap.beta);
  r.alpha = cs.alpha.to_ints()[0];
  r.beta = cs.beta.to_ints()[0];
  r.delta = cs.delta.to_ints()[0];
  if (r.beta < 0) {
    r.alpha = -r.alpha;
    r.beta = -r.beta;
    r.delta = -r.delta;
  }
  r.eta = theta - static_cast<double>(r.alpha) / static_cast<double>(r.beta);

  VoronoiInstance inst = r.rank == 2 ? make_gl2_instance(r.alpha, r.beta, T, -r.eta)
                                     : make_gl3_instance(r.alpha, r.beta, T, -r.eta);
  inst.provider = p;
  r.lhs = lhs_sum(inst);
  const double abs_tol = inst.tol * std::max(std::abs(r.lhs), 1e-300);
  RealKernel k(inst.kernel);
  HankelPlan plan(k, inst.f);
  RhsResult rhs = r.rank == 2 ? rhs_sum_gl2(inst, plan, abs_tol) : rhs_sum_gl3(inst, plan, abs_tol);
  r.rhs = rhs.value;
  r.rel_residual = std::abs(r.lhs - r.rhs) / std::max(std::abs(r.lhs), 1e-300);
  r.rhs_terms = rhs.terms;
  r.window_lo = rhs.window_lo;
  r.window_hi = rhs.window_hi;
  r.window_abs = rhs.window_abs;
  for (const auto& d : rhs.blocks) {
    r.window_terms += d.window_terms;
    r.tail_abs += d.abs_sum - d.window_abs;
    r.predicted.push_back(std::pow(static_cast<double>(r.beta), 1.5) / static_cast<double>(std::llabs(d.d)));
  }
  r.divisors = rhs.blocks;
  r.dominant_abs = std::max(r.window_abs, r.tail_abs);
  r.scale = r.dominant_abs / std::pow(T, r.rank == 2 ? 0.5 : 0.75);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

}  // namespace vsum
