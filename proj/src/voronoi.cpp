#include "vsum/voronoi.hpp"

#include <chrono>
#include <cmath>
#include <numeric>

#include "vsum/kloosterman.hpp"
#include "vsum/parallel.hpp"

namespace vsum {

namespace {

void normalize(long long& alpha, long long& beta) {
  if (beta == 0) throw Error("voronoi", "beta must be nonzero");
  long long g = std::gcd(alpha, beta);
  alpha /= g;
  beta /= g;
  if (beta < 0) {
    alpha = -alpha;
    beta = -beta;
  }
}

long long mod_pos(long long a, long long m) { return ((a % m) + m) % m; }

// Dual sum over n != 0 of coef(|n|) * chi(n) * f~(n * scale), in doubling blocks.
struct BlockSum {
  cplx value{0.0, 0.0};
  double tail = 0.0;
  long long terms = 0;
  double abs_sum = 0.0;
  cplx window_value{0.0, 0.0};
  double window_abs = 0.0;
  long long window_terms = 0;
};

template <class Coef, class Chi>
BlockSum dual_blocks(const HankelPlan& plan, double scale, double y_floor, long long max_terms, long long min_terms,
                     double abs_tol, const Coef& coef, const Chi& chi, double win_lo, double win_hi) {
  BlockSum out;
  const double y_stop = plan.y_cut();
  long long lo = 1, hi = 256;
  cplx last = 0.0;
  double last_abs = 0.0;
  for (;;) {
    hi = std::min(hi, max_terms);
    const size_t cnt = static_cast<size_t>(hi - lo + 1);
    std::vector<cplx> terms(cnt);
    std::vector<double> mags(cnt);
    std::vector<cplx> wterms(cnt);
    std::vector<double> wmags(cnt);
    parallel_for(cnt, [&](size_t i) {
      const long long n = lo + static_cast<long long>(i);
      const double y = n * scale;
      const double a = coef(n);
      cplx t = 0.0;
      if (y <= y_stop) t = a * (chi(n) * plan(y) + chi(-n) * plan(-y));
      terms[i] = t;
      mags[i] = std::abs(t);
      if (y >= win_lo && y <= win_hi) {
        wterms[i] = t;
        wmags[i] = mags[i];
      }
    });
    out.window_value += pairwise_sum(wterms);
    out.window_abs += pairwise_sum(wmags);
    for (size_t i = 0; i < cnt; ++i) {
      const double y = (lo + static_cast<long long>(i)) * scale;
      if (y >= win_lo && y <= win_hi) ++out.window_terms;
    }
    last = pairwise_sum(terms);
    last_abs = pairwise_sum(mags);
    out.value += last;
    out.abs_sum += last_abs;
    out.terms = hi;
    const double y_hi = hi * scale;
    const bool past = y_hi >= y_floor && hi >= min_terms;
    if (past && std::abs(last) < 0.1 * abs_tol && last_abs < abs_tol) break;
    if (y_hi > y_stop && past) break;
    if (hi >= max_terms) {
      out.tail += last_abs;
      break;
    }
    lo = hi + 1;
    hi *= 2;
  }
  out.tail += std::abs(last);
  return out;
}

// Smallest dual argument at which the bulk of f~ has been passed: above the
// small-argument regime and the stationary window of the modulation.
double dual_floor(const TestFunction& f, int r) {
  const double T = f.w.T, D = f.w.Delta;
  const double tr = T * std::abs(f.rho.real());
  double y = 100.0 / T;
  if (tr > 0.0) y = std::max(y, std::pow(tr, r) * std::pow(D, r * (r - 1)) / T);
  return y;
}

}  // namespace

std::pair<double, double> stationary_window(const TestFunction& f, int r) {
  const double T = f.w.T, D = f.w.Delta;
  const double rho = std::abs(f.rho.real());
  const double small = 1.0 / T;
  const double lo = std::pow(rho, r) * std::pow(T, r - 1) / 2.0;
  const double hi = 2.0 * std::pow(rho, r) * std::pow(D * T, r - 1);
  if (hi <= small) return {0.0, 2.0 * small};
  return {lo > small ? lo : 0.0, hi};
}

VoronoiInstance make_gl2_instance(long long alpha, long long beta, double T, double rho, double tol) {
  VoronoiInstance in;
  in.rank = 2;
  in.provider = std::make_shared<DeltaProvider>();
  in.kernel = delta_params();
  in.alpha = alpha;
  in.beta = beta;
  in.f.w.T = T;
  in.f.rho = rho;
  in.tol = tol;
  return in;
}

VoronoiInstance make_gl3_instance(long long alpha, long long beta, double T, double rho, double tol) {
  VoronoiInstance in = make_gl2_instance(alpha, beta, T, rho, tol);
  in.rank = 3;
  in.provider = std::make_shared<Sym2DeltaProvider>();
  in.kernel = sym2_delta_params();
  return in;
}

cplx lhs_sum(const VoronoiInstance& inst, long long* terms) {
  long long alpha = inst.alpha, beta = inst.beta;
  normalize(alpha, beta);
  if (inst.f.zero()) {
    if (terms) *terms = 0;
    return 0.0;
  }
  const long long lo = static_cast<long long>(std::ceil(inst.f.support_lo()));
  const long long hi = static_cast<long long>(std::floor(inst.f.support_hi()));
  inst.provider->reserve(static_cast<uint64_t>(std::max(1LL, hi)));
  std::vector<cplx> v;
  for (long long n = -hi; n <= hi; ++n) {
    const long long an = std::llabs(n);
    if (an < lo || an == 0) continue;
    cplx fv = inst.f.real_value(static_cast<double>(n));
    if (fv == 0.0) continue;
    cplx ch = e(static_cast<double>(mod_pos(alpha * n, beta)) / static_cast<double>(beta));
    v.push_back(inst.provider->a(static_cast<uint64_t>(an)) * ch * fv);
  }
  if (terms) *terms = static_cast<long long>(v.size());
  return pairwise_sum(v);
}

RhsResult rhs_sum_gl2(const VoronoiInstance& inst, const HankelPlan& plan, double abs_tol) {
  long long alpha = inst.alpha, beta = inst.beta;
  normalize(alpha, beta);
  const long long abar = beta == 1 ? 0 : inverse_mod(alpha, beta);
  const double b = static_cast<double>(beta);
  const long long max_terms = std::min<long long>(inst.max_terms, static_cast<long long>(shared_tau_table().cap()));
  inst.provider->reserve(static_cast<uint64_t>(std::min<long long>(max_terms, 4096)));
  auto coef = [&](long long n) { return inst.provider->a(static_cast<uint64_t>(n)); };
  auto chi = [&](long long n) { return e(-static_cast<double>(mod_pos(abar * n, beta)) / b); };
  const double floor_y = dual_floor(inst.f, 2);
  long long need = static_cast<long long>(std::min<double>(max_terms, std::ceil(plan.y_cut() * b * b)));
  inst.provider->reserve(static_cast<uint64_t>(std::max(1LL, need)));
  const auto [wl, wh] = stationary_window(inst.f, 2);
  BlockSum bs = dual_blocks(plan, 1.0 / (b * b), floor_y, max_terms, inst.min_terms, abs_tol * b, coef, chi, wl, wh);
  RhsResult out;
  out.value = bs.value / b;
  out.tail = bs.tail / b;
  out.terms = bs.terms;
  out.window_lo = wl;
  out.window_hi = wh;
  DivisorTerm t;
  t.value = out.value;
  t.terms = bs.terms;
  t.abs_sum = bs.abs_sum / b;
  t.window_value = bs.window_value / b;
  t.window_abs = bs.window_abs / b;
  t.window_terms = bs.window_terms;
  out.window_abs = t.window_abs;
  out.blocks.push_back(t);
  return out;
}

RhsResult rhs_sum_gl3(const VoronoiInstance& inst, const HankelPlan& plan, double abs_tol) {
  long long alpha = inst.alpha, beta = inst.beta;
  normalize(alpha, beta);
  const long long abar = beta == 1 ? 0 : inverse_mod(alpha, beta);
  const double b3 = std::pow(static_cast<double>(beta), 3);
  const long long max_terms = std::min<long long>(inst.max_terms, static_cast<long long>(shared_tau_table().cap()));
  const double floor_y = dual_floor(inst.f, 3);
  RhsResult out;
  const auto [wl, wh] = stationary_window(inst.f, 3);
  out.window_lo = wl;
  out.window_hi = wh;
  std::vector<long long> divs;
  for (long long d = 1; d <= beta; ++d)
    if (beta % d == 0) divs.push_back(d);
  for (long long d0 : divs) {
    const long long d = inst.gammap_sign < 0 ? -d0 : d0;
    const long long c = beta / d0;  // |beta / d|
    const std::vector<double> row = kloosterman_row(1, c);
    const double weight = static_cast<double>(std::llabs(d)) / (static_cast<double>(beta) * beta);
    const double scale = static_cast<double>(d) * d / b3;
    long long need = static_cast<long long>(std::min<double>(max_terms, std::ceil(plan.y_cut() / scale)));
    inst.provider->reserve(static_cast<uint64_t>(std::max(1LL, need)));
    auto coef = [&](long long n) { return inst.provider->a2(static_cast<uint64_t>(d0), static_cast<uint64_t>(n)); };
    auto chi = [&](long long n) { return cplx(row[static_cast<size_t>(mod_pos(abar * n, c))], 0.0); };
    BlockSum bs = dual_blocks(plan, scale, floor_y, max_terms, inst.min_terms, abs_tol / (weight * divs.size()), coef, chi, wl, wh);
    DivisorTerm t;
    t.d = d;
    t.value = weight * bs.value;
    t.terms = bs.terms;
    t.abs_sum = weight * bs.abs_sum;
    t.window_value = weight * bs.window_value;
    t.window_abs = weight * bs.window_abs;
    t.window_terms = bs.window_terms;
    out.window_abs += t.window_abs;
    out.value += t.value;
    out.tail += weight * bs.tail;
    out.terms += bs.terms;
    out.blocks.push_back(t);
  }
  return out;
}

VoronoiReport verify_identity(const VoronoiInstance& inst) {
  if (!inst.provider) throw Error("voronoi", "instance has no coefficient provider");
  if (inst.rank != inst.provider->rank() || inst.rank != inst.kernel.rank)
    throw Error("voronoi", "rank mismatch between instance, provider and kernel");
  auto t0 = std::chrono::steady_clock::now();
  VoronoiReport rep;
  rep.alpha = inst.alpha;
  rep.beta = inst.beta;
  normalize(rep.alpha, rep.beta);
  rep.abar = rep.beta == 1 ? 0 : inverse_mod(rep.alpha, rep.beta);
  rep.lhs = lhs_sum(inst, &rep.lhs_terms);
  const double scale = std::abs(rep.lhs) > 0.0 ? std::abs(rep.lhs) : 1.0;
  const double abs_tol = inst.tol * scale;
  RealKernel k(inst.kernel);
  HankelPlan plan(k, inst.f);
  RhsResult r = inst.rank == 2 ? rhs_sum_gl2(inst, plan, abs_tol) : rhs_sum_gl3(inst, plan, abs_tol);
  rep.rhs = r.value;
  rep.tail = r.tail;
  rep.rhs_terms = r.terms;
  rep.blocks = r.blocks;
  rep.abs_residual = std::abs(rep.lhs - rep.rhs);
  rep.rel_residual = rep.abs_residual / scale;
  rep.pass = rep.abs_residual <= abs_tol + rep.tail;
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

namespace {

double frac_trace(const NumberField& F, const FieldElement& x) {
  mpq_class t = F.trace(x);
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), t.get_num_mpz_t(), t.get_den_mpz_t());
  return mpq_class(t - mpq_class(fl)).get_d();
}

void check_field_instance(const FieldVoronoiInstance& inst) {
  if (!inst.field) throw Error("voronoi", "field instance without a field");
  if (!inst.provider) throw Error("voronoi", "field instance without a provider");
  if (inst.field->r2() != 0) throw UnsupportedField("structural Voronoi mode supports totally real fields only");
  if (static_cast<int>(inst.f.size()) != inst.field->places())
    throw Error("voronoi", "need one test function per place");
}

}  // namespace

cplx lhs_sum_field(const FieldVoronoiInstance& inst, long long* terms) {
  check_field_instance(inst);
  const NumberField& F = *inst.field;
  std::vector<double> pb;
  for (const auto& f : inst.f) pb.push_back(f.support_hi());
  std::vector<double> cb = coordinate_bounds(F, pb);
  double box = 0.0;
  for (double c : cb) box = std::max(box, c);
  const FieldElement binv = F.inverse(inst.beta);
  const FieldElement ab = F.mul(inst.alpha, binv);
  std::vector<cplx> v;
  for (const auto& c : enumerate_lattice(F, 2.0 * std::floor(box) + 1e-9, true)) {
    EmbeddedPoint x = F.embed_ints(c);
    cplx fv = 1.0;
    for (int p = 0; p < F.places() && fv != 0.0; ++p) fv *= inst.f[p].real_value(x.real[p]);
    if (fv == 0.0) continue;
    FieldElement g = FieldElement::from_ints(c);
    v.push_back(inst.provider->at(F, g) * e(frac_trace(F, F.mul(ab, g))) * fv);
  }
  if (terms) *terms = static_cast<long long>(v.size());
  return pairwise_sum(v);
}

cplx rhs_sum_field_gl2(const FieldVoronoiInstance& inst, long long* terms) {
  check_field_instance(inst);
  const NumberField& F = *inst.field;
  RealKernel k(inst.kernel);
  std::vector<std::unique_ptr<HankelPlan>> plans;
  for (const auto& f : inst.f) plans.push_back(std::make_unique<HankelPlan>(k, f));
  const FieldInteger abar = mod_inverse(F, inst.alpha, inst.beta);
  const FieldElement binv = F.inverse(inst.beta);
  const double nb = std::abs(F.norm(inst.beta).get_d());
  EmbeddedPoint eb = F.embed(inst.beta);
  std::vector<cplx> v;
  for (const auto& c : enumerate_lattice(F, 2.0 * inst.dual_box, true)) {
    EmbeddedPoint x = F.embed_ints(c);
    cplx ft = 1.0;
    for (int p = 0; p < F.places() && ft != 0.0; ++p) {
      double y = x.real[p] / (eb.real[p] * eb.real[p]);
      if (std::abs(y) > plans[p]->y_cut()) ft = 0.0;
      else ft *= (*plans[p])(y);
    }
    if (ft == 0.0) continue;
    FieldElement g = FieldElement::from_ints(c);
    double ch = -frac_trace(F, F.mul(F.mul(abar, g), binv));
    v.push_back(inst.provider->at(F, g) * e(ch) * ft);
  }
  if (terms) *terms = static_cast<long long>(v.size());
  return pairwise_sum(v) / nb;
}

}  // namespace vsum
