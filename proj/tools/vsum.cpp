#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "vsum/parallel.hpp"
#include "vsum/runner.hpp"

using namespace vsum;

namespace {

// exit codes
constexpr int kPass = 0, kFail = 1, kUsage = 2;

std::string out_path;
json invocation = json::array();  // argv minus the output and thread options


void emit(const std::string& text) {
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw Error("cli", "cannot write " + out_path);
  f << text;
}

void emit(json j) {
  if (j.contains("module") && !j.contains("config_hash")) j["config_hash"] = config_hash(invocation, 0);
  emit(j.dump(2) + "\n");
}

std::vector<double> parse_grid(const std::string& spec) {
  // "a:b:n" uniform, or a comma list
  std::vector<double> out;
  if (spec.find(':') != std::string::npos) {
    double a, b;
    int n;
    char c1, c2;
    std::istringstream is(spec);
    if (!(is >> a >> c1 >> b >> c2 >> n) || n < 1) throw CLI::ValidationError("grid", "expected a:b:n");
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return out;
  }
  std::istringstream is(spec);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

std::vector<long long> parse_ints(const std::string& s) {
  std::vector<long long> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) out.push_back(std::stoll(tok));
  return out;
}

NumberField field_from(const std::string& path) {
  return path.empty() || path == "Q" ? NumberField::rationals() : NumberField::load(path);
}

EmbeddedPoint point_from_coords(const NumberField& F, const std::vector<double>& y) {
  if (static_cast<int>(y.size()) != F.degree()) throw Error("cli", "theta needs one coordinate per basis element");
  EmbeddedPoint p;
  for (int v = 0; v < F.places(); ++v) {
    cplx s = 0.0;
    for (int j = 0; j < F.degree(); ++j) s += y[j] * F.embedding(v, j);
    if (v < F.r1()) p.real.push_back(s.real());
    else p.cpx.push_back(s);
  }
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vsum: Voronoi summation and twisted coefficient sums"};
  app.require_subcommand(1);
  app.fallthrough();
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--threads" || a == "-o" || a == "--output") ++i;
    else if (a.rfind("--threads=", 0) && a.rfind("--output=", 0)) invocation.push_back(a);
  }
  int threads = 0;
  app.add_option("--threads", threads, "worker threads (0: hardware)");
  app.add_option("-o,--output", out_path, "write the report here instead of stdout");

  int rc = kPass;
  auto prep = [&] {
    if (threads > 0) set_default_threads(threads);
  };

  // nf
  auto* nf = app.add_subcommand("nf", "number field data, Dirichlet approximation, lattice enumeration");
  nf->require_subcommand(1);
  std::string nf_field;
  nf->add_option("--field", nf_field, "field config JSON (default Q)");

  auto* nfe = nf->add_subcommand("embed", "field invariants and the embedding of an element");
  std::string nfe_x;
  nfe->add_option("--x", nfe_x, "element as integer basis coordinates, comma separated");
  nfe->callback([&] {
    prep();
    NumberField F = field_from(nf_field);
    json j = provenance("numberfield", "embed", 0.0);
    j["name"] = F.name();
    j["degree"] = F.degree();
    j["r1"] = F.r1();
    j["r2"] = F.r2();
    j["c_f"] = F.c_f();
    j["torsion"] = F.torsion_order();
    j["root_residual"] = F.root_residual();
    if (!nfe_x.empty()) {
      FieldElement a = FieldElement::from_ints(parse_ints(nfe_x));
      EmbeddedPoint e = F.embed(a);
      j["x"] = to_json(a);
      j["real"] = e.real;
      json c = json::array();
      for (cplx z : e.cpx) c.push_back(to_json(z));
      j["complex"] = c;
      j["norm"] = F.norm(a).get_str();
    }
    emit(j);
  });

  auto* nfa = nf->add_subcommand("approx", "Dirichlet approximation of theta, or a random sweep of the bound");
  std::string nfa_theta;
  double nfa_Q = 10.0;
  int nfa_sweep = 0;
  uint64_t nfa_seed = 1;
  nfa->add_option("--theta", nfa_theta, "theta as basis coordinates, comma separated");
  nfa->add_option("--Q", nfa_Q, "approximation parameter");
  nfa->add_option("--sweep", nfa_sweep, "random theta trials for the bound check");
  nfa->add_option("--seed", nfa_seed);
  nfa->callback([&] {
    prep();
    NumberField F = field_from(nf_field);
    if (nfa_theta.empty() && nfa_sweep <= 0) throw CLI::ValidationError("approx", "give --theta or --sweep");
    json j = provenance("numberfield", nfa_sweep > 0 ? "dirichlet_sweep" : "dirichlet_approx", 0.0);
    if (!nfa_theta.empty()) {
      Approximation a = dirichlet_approx(F, point_from_coords(F, parse_grid(nfa_theta)), nfa_Q);
      j["approximation"] = to_json(a);
      if (!a.bounds_ok) rc = kFail;
    }
    if (nfa_sweep > 0) {
      DirichletSweep s = dirichlet_sweep(F, nfa_Q, nfa_sweep, nfa_seed);
      j["sweep"] = to_json(s);
      if (s.violations) rc = kFail;
    }
    emit(j);
  });

  auto* nfn = nf->add_subcommand("enum", "lattice points in the box max|c_j| <= T/2, or the unit orbit of gamma");
  double nfn_T = 5.0;
  std::string nfn_gamma, nfn_place_T;
  bool nfn_zero = false;
  nfn->add_option("--T", nfn_T);
  nfn->add_flag("--with-zero", nfn_zero);
  nfn->add_option("--gamma", nfn_gamma, "count unit multiples of gamma with |sigma_v| <= T_v instead");
  nfn->add_option("--place-T", nfn_place_T, "per-place bounds T_v for --gamma, comma separated");
  nfn->callback([&] {
    prep();
    NumberField F = field_from(nf_field);
    if (!nfn_gamma.empty()) {
      std::vector<double> T = nfn_place_T.empty() ? std::vector<double>(F.places(), nfn_T) : parse_grid(nfn_place_T);
      json j = provenance("numberfield", "unit_orbit_count", 0.0);
      j["count"] = unit_orbit_count(F, FieldElement::from_ints(parse_ints(nfn_gamma)), T);
      emit(j);
      return;
    }
    auto pts = enumerate_lattice(F, nfn_T, !nfn_zero);
    json j = provenance("numberfield", "enumerate_lattice", 0.0);
    j["count"] = pts.size();
    j["points"] = pts;
    emit(j);
  });

  auto* nfc = nf->add_subcommand("coprime", "alpha / beta with alpha, beta coprime");
  std::string nfc_a, nfc_b;
  nfc->add_option("--alpha", nfc_a, "numerator coordinates")->required();
  nfc->add_option("--beta", nfc_b, "denominator coordinates")->required();
  nfc->callback([&] {
    prep();
    NumberField F = field_from(nf_field);
    CoprimeSplit c = make_coprime(F, FieldElement::from_ints(parse_ints(nfc_a)), FieldElement::from_ints(parse_ints(nfc_b)));
    json j = provenance("numberfield", "make_coprime", 0.0);
    j.update({{"alpha", to_json(c.alpha)}, {"beta", to_json(c.beta)}, {"delta", to_json(c.delta)}});
    emit(j);
  });

  // coeffs
  auto* co = app.add_subcommand("coeffs", "Fourier coefficients");
  co->require_subcommand(1);

  auto* cot = co->add_subcommand("tau", "exact tau(n) for n <= N as CSV");
  uint64_t cot_n = 0;
  std::string cot_cache;
  cot->add_option("N", cot_n)->required();
  cot->add_option("--cache", cot_cache, "also persist the table here (binary, with a .json sidecar)");
  cot->callback([&] {
    prep();
    TauTable t(std::max<uint64_t>(cot_n, 1));
    t.ensure(cot_n);
    if (!cot_cache.empty()) t.save(cot_cache);
    std::ostringstream os;
    os << "n,tau\n";
    for (uint64_t n = 1; n <= cot_n; ++n) os << n << ',' << to_string(t.tau(n)) << '\n';
    emit(os.str());
  });

  auto* cos = co->add_subcommand("sym2", "A(m, n) of the symmetric square for m <= M, n <= N as CSV");
  uint64_t cos_m = 0, cos_n = 0;
  cos->add_option("M", cos_m)->required();
  cos->add_option("N", cos_n)->required();
  cos->callback([&] {
    prep();
    auto p = provider_by_name("sym2delta");
    p->reserve(cos_m * cos_n);
    std::ostringstream os;
    os << "m,n,a\n";
    for (uint64_t m = 1; m <= cos_m; ++m)
      for (uint64_t n = 1; n <= cos_n; ++n) os << m << ',' << n << ',' << fmt(p->a2(m, n)) << '\n';
    emit(os.str());
  });

  auto* cov = co->add_subcommand("values", "A(n) of a provider for n <= N as CSV");
  std::string cov_provider = "delta";
  uint64_t cov_n = 0, cov_seed = 1;
  cov->add_option("N", cov_n)->required();
  cov->add_option("--provider", cov_provider, "delta, sym2delta, constant, constant3, synthetic2, synthetic3");
  cov->add_option("--seed", cov_seed);
  cov->callback([&] {
    prep();
    auto p = provider_by_name(cov_provider, cov_seed);
    p->reserve(cov_n);
    std::ostringstream os;
    os << "n,a\n";
    for (uint64_t n = 1; n <= cov_n; ++n) os << n << ',' << fmt(p->a(n)) << '\n';
    emit(os.str());
  });

  auto* coh = co->add_subcommand("hecke", "exact Hecke relation for tau over m, n <= M");
  uint64_t coh_m = 0;
  coh->add_option("M", coh_m)->required();
  coh->callback([&] {
    prep();
    HeckeReport r = hecke_check(coh_m);
    json j = provenance("coeffs", "hecke_check", 0.0);
    j.update(to_json(r));
    if (r.violations) rc = kFail;
    emit(j);
  });

  // bessel
  auto* be = app.add_subcommand("bessel", "Bessel kernel values");
  be->require_subcommand(1);
  std::string be_kernel, be_mu, be_mu_im, be_delta;
  int be_rank = 0;
  double be_tol = 1e-12;
  be->add_option("--kernel", be_kernel, "preset: delta or sym2delta");
  be->add_option("--rank", be_rank);
  be->add_option("--mu", be_mu, "real parts of mu, comma separated");
  be->add_option("--mu-im", be_mu_im, "imaginary parts of mu, comma separated");
  be->add_option("--delta", be_delta, "delta entries (0 or 1), comma separated");
  be->add_option("--tol", be_tol);
  auto be_params = [&] {
    if (!be_kernel.empty()) return kernel_by_name(be_kernel);
    if (be_mu.empty()) return kernel_by_name("delta");
    BesselParamsReal p;
    std::vector<double> re = parse_grid(be_mu), im = be_mu_im.empty() ? std::vector<double>(re.size(), 0.0) : parse_grid(be_mu_im);
    if (im.size() != re.size()) throw Error("cli", "--mu and --mu-im lengths differ");
    for (size_t i = 0; i < re.size(); ++i) p.mu.push_back(cplx(re[i], im[i]));
    for (long long d : parse_ints(be_delta)) p.delta.push_back(static_cast<int>(d));
    p.rank = be_rank > 0 ? be_rank : static_cast<int>(p.mu.size());
    validate(p);
    return p;
  };

  auto* bee = be->add_subcommand("eval", "J(x): JSON for one x, CSV for a grid");
  std::string bee_x = "1";
  bee->add_option("--x", bee_x, "value, grid a:b:n or comma list");
  bee->callback([&] {
    prep();
    RealKernel k(be_params());
    std::vector<double> xs = parse_grid(bee_x);
    if (xs.size() == 1) {
      KernelValue v = bessel_kernel_real(k, xs[0], be_tol);
      json j = provenance("bessel", "bessel_kernel_real", be_tol);
      j.update({{"x", xs[0]}, {"value_re", v.value.real()}, {"value_im", v.value.imag()}, {"err_est", v.err}});
      emit(j);
      return;
    }
    std::ostringstream os;
    os << "x,re,im,err\n";
    for (double x : xs) {
      KernelValue v = bessel_kernel_real(k, x, be_tol);
      os << fmt(x) << ',' << fmt(v.value.real()) << ',' << fmt(v.value.imag()) << ',' << fmt(v.err) << '\n';
    }
    emit(os.str());
  });

  auto* bea = be->add_subcommand("asymptotic", "oscillation frequency and envelope of J(+-x^r) over a uniform grid");
  std::string bea_x = "5:50:400";
  bea->add_option("--x", bea_x, "uniform grid a:b:n");
  bea->callback([&] {
    prep();
    json j = provenance("bessel", "asymptotic_check", be_tol);
    j.update(to_json(asymptotic_check_real(be_params(), parse_grid(bea_x), std::max(be_tol, 1e-10))));
    emit(j);
  });

  // hankel
  auto* ha = app.add_subcommand("hankel", "Hankel transform of the bump test function");
  ha->require_subcommand(1);
  std::string ha_kernel = "delta";
  double ha_T = 20.0, ha_D = 2.0, ha_rho = 0.0;
  ha->add_option("--kernel", ha_kernel, "delta or sym2delta");
  ha->add_option("--T", ha_T);
  ha->add_option("--Delta", ha_D);
  ha->add_option("--rho", ha_rho);
  auto ha_f = [&] {
    TestFunction f;
    f.w.T = ha_T;
    f.w.Delta = ha_D;
    f.rho = ha_rho;
    return f;
  };

  auto* hae = ha->add_subcommand("eval", "f~(y): JSON for one y, CSV for a grid");
  std::string hae_y = "0.1";
  double hae_tol = 1e-10;
  bool hae_direct = false;
  hae->add_option("--y", hae_y, "value, grid a:b:n or comma list");
  hae->add_option("--tol", hae_tol, "direct quadrature tolerance");
  hae->add_flag("--direct", hae_direct, "direct quadrature instead of the batch plan");
  hae->callback([&] {
    prep();
    RealKernel k(kernel_by_name(ha_kernel));
    TestFunction f = ha_f();
    std::vector<double> ys = parse_grid(hae_y);
    std::unique_ptr<HankelPlan> plan;
    if (!hae_direct) plan = std::make_unique<HankelPlan>(k, f);
    auto one = [&](double y) { return hae_direct ? hankel_real(k, f, y, hae_tol) : plan->eval(y); };
    if (ys.size() == 1) {
      HankelValue v = one(ys[0]);
      json j = provenance("hankel", hae_direct ? "hankel_real" : "hankel_plan", hae_direct ? hae_tol : PlanOptions{}.eps);
      j.update({{"y", ys[0]}, {"value_re", v.value.real()}, {"value_im", v.value.imag()}, {"err_est", v.err}});
      emit(j);
      return;
    }
    std::ostringstream os;
    os << "y,re,im,err\n";
    for (double y : ys) {
      HankelValue v = one(y);
      os << fmt(y) << ',' << fmt(v.value.real()) << ',' << fmt(v.value.imag()) << ',' << fmt(v.err) << '\n';
    }
    emit(os.str());
  });

  auto* has = ha->add_subcommand("scan", "regime-labelled decay scan as CSV");
  std::string has_y = "1e-4:1e3:60", has_summary;
  double has_order = 2.0, has_tail = 1e3, has_end = 1e5;
  bool has_log = true;
  has->add_option("--y", has_y, "grid a:b:n (log spaced unless --linear) or comma list");
  has->add_flag("!--linear", has_log, "uniform instead of log spacing for a:b:n");
  has->add_option("--order", has_order, "requested tail decay order");
  has->add_option("--tail-start", has_tail, "T|y| where the tail regime begins");
  has->add_option("--tail-end", has_end);
  has->add_option("--summary", has_summary, "also write the regime slopes here as JSON");
  has->callback([&] {
    prep();
    RealKernel k(kernel_by_name(ha_kernel));
    std::vector<double> ys;
    if (has_log && has_y.find(':') != std::string::npos) {
      std::vector<double> u = parse_grid(has_y);
      ys = log_grid(u.front(), u.back(), static_cast<int>(u.size()));
    } else {
      ys = parse_grid(has_y);
    }
    DecayReport r = decay_scan(k, ha_f(), ys, has_order, has_tail, has_end);
    if (!has_summary.empty()) {
      json j = provenance("hankel", "decay_scan", 0.0);
      j.update(to_json(r));
      j.erase("points");
      j["config_hash"] = config_hash(invocation, 0);
      std::ofstream f(has_summary, std::ios::binary);
      if (!f) throw Error("cli", "cannot write " + has_summary);
      f << j.dump(2) << '\n';
    }
    std::ostringstream os;
    os << "y,re,im,abs,regime\n";
    for (const auto& p : r.points)
      os << fmt(p.y) << ',' << fmt(p.value.real()) << ',' << fmt(p.value.imag()) << ',' << fmt(std::abs(p.value)) << ','
         << p.regime << '\n';
    emit(os.str());
  });

  // kloos
  auto* kl = app.add_subcommand("kloos", "Kloosterman sums and the Weil bound");
  kl->require_subcommand(1);

  auto* klr = kl->add_subcommand("rational", "S(a, b; c)");
  long long klr_a = 0, klr_b = 0, klr_c = 0;
  klr->add_option("a", klr_a)->required();
  klr->add_option("b", klr_b)->required();
  klr->add_option("c", klr_c)->required()->check(CLI::PositiveNumber);
  klr->callback([&] {
    prep();
    json j = provenance("kloosterman", "kloosterman_rational", 0.0);
    j.update({{"a", klr_a}, {"b", klr_b}, {"c", klr_c}, {"value", kloosterman_rational(klr_a, klr_b, klr_c)}});
    emit(j);
  });

  auto* klf = kl->add_subcommand("field", "S(gamma, gamma'; beta) over the ring of integers");
  std::string klf_field, klf_beta, klf_g, klf_gp;
  klf->add_option("--field", klf_field, "field config JSON (default Q)");
  klf->add_option("--beta", klf_beta, "modulus coordinates")->required();
  klf->add_option("--gamma", klf_g, "coordinates")->required();
  klf->add_option("--gammap", klf_gp, "coordinates")->required();
  klf->callback([&] {
    prep();
    NumberField F = field_from(klf_field);
    cplx v = kloosterman_field(F, FieldElement::from_ints(parse_ints(klf_beta)), FieldElement::from_ints(parse_ints(klf_g)),
                               FieldElement::from_ints(parse_ints(klf_gp)));
    json j = provenance("kloosterman", "kloosterman_field", 0.0);
    j["value"] = to_json(v);
    emit(j);
  });

  auto* klw = kl->add_subcommand("weil", "exhaustive Weil bound check for c <= C as CSV");
  long long klw_c = 0;
  std::string klw_summary;
  klw->add_option("C", klw_c)->required()->check(CLI::PositiveNumber);
  klw->add_option("--summary", klw_summary, "also write the totals here as JSON");
  klw->callback([&] {
    prep();
    WeilReport r = weil_check(klw_c);
    if (r.violations) rc = kFail;
    if (!klw_summary.empty()) {
      json j = provenance("kloosterman", "weil_check", 0.0);
      j.update(to_json(r));
      j["config_hash"] = config_hash(invocation, 0);
      std::ofstream f(klw_summary, std::ios::binary);
      if (!f) throw Error("cli", "cannot write " + klw_summary);
      f << j.dump(2) << '\n';
    }
    emit(weil_csv(r));
  });

  // voronoi
  auto* vo = app.add_subcommand("voronoi", "check the Voronoi identity over Q");
  int vo_rank = 2;
  long long vo_alpha = 0, vo_beta = 1;
  double vo_T = 20.0, vo_rho = 0.0, vo_tol = -1.0;
  vo->add_option("--rank", vo_rank)->check(CLI::IsMember({2, 3}));
  vo->add_option("--alpha", vo_alpha);
  vo->add_option("--beta", vo_beta);
  vo->add_option("--T", vo_T);
  vo->add_option("--rho", vo_rho);
  vo->add_option("--tol", vo_tol, "relative tolerance (default 1e-4 for rank 2, 1e-2 for rank 3)");
  vo->callback([&] {
    prep();
    const double tol = vo_tol > 0 ? vo_tol : (vo_rank == 2 ? 1e-4 : 1e-2);
    VoronoiInstance in = vo_rank == 2 ? make_gl2_instance(vo_alpha, vo_beta, vo_T, vo_rho, tol)
                                      : make_gl3_instance(vo_alpha, vo_beta, vo_T, vo_rho, tol);
    VoronoiReport r = verify_identity(in);
    json j = provenance("voronoi", "verify_identity", tol);
    j.update(to_json(r));
    j["seconds"] = r.seconds;
    if (!r.pass) rc = kFail;
    emit(j);
  });

  // twist
  auto* tw = app.add_subcommand("twist", "additively twisted sums");
  tw->require_subcommand(1);
  std::string tw_provider = "delta", tw_field;
  uint64_t tw_seed = 1;
  tw->add_option("--provider", tw_provider);
  tw->add_option("--seed", tw_seed);

  auto* tws = tw->add_subcommand("sharp", "S_theta(T) over the box max|c_j| <= T/2");
  std::string tws_theta = "0";
  double tws_T = 100.0;
  tws->add_option("--field", tw_field, "field config JSON (default Q)");
  tws->add_option("--theta", tws_theta, "theta as basis coordinates");
  tws->add_option("--T", tws_T);
  tws->callback([&] {
    prep();
    NumberField F = field_from(tw_field);
    auto p = provider_by_name(tw_provider, tw_seed);
    TwistQuery q;
    q.field = &F;
    q.provider = p.get();
    q.theta = point_from_coords(F, parse_grid(tws_theta));
    q.T = tws_T;
    json j = provenance("twistsums", "sharp_sum", 0.0);
    j["value"] = to_json(sharp_sum(q));
    emit(j);
  });

  auto* twm = tw->add_subcommand("smooth", "weighted sum over the shell T <= |x| <= Delta T at every place");
  std::string twm_theta = "0";
  double twm_T = 100.0, twm_D = 2.0;
  twm->add_option("--field", tw_field, "field config JSON (default Q)");
  twm->add_option("--theta", twm_theta, "theta as basis coordinates");
  twm->add_option("--T", twm_T);
  twm->add_option("--Delta", twm_D);
  twm->callback([&] {
    prep();
    NumberField F = field_from(tw_field);
    auto p = provider_by_name(tw_provider, tw_seed);
    TwistQuery q;
    q.field = &F;
    q.provider = p.get();
    q.theta = point_from_coords(F, parse_grid(twm_theta));
    q.smooth = true;
    for (int v = 0; v < F.places(); ++v) {
      WeightSpec w;
      w.complex_place = v >= F.r1();
      w.T = twm_T;
      w.Delta = twm_D;
      q.w.push_back(w);
    }
    json j = provenance("twistsums", "smooth_sum", 0.0);
    j["value"] = to_json(smooth_sum(q));
    emit(j);
  });

  auto* twc = tw->add_subcommand("scan", "max over a theta grid of |S_theta(T)| and the log-log slope");
  int twc_lo = 8, twc_hi = 14, twc_irr = 48;
  std::string twc_csv;
  twc->add_option("--T-lo", twc_lo, "log2 of the smallest T");
  twc->add_option("--T-hi", twc_hi, "log2 of the largest T");
  twc->add_option("--irrationals", twc_irr);
  twc->add_option("--csv", twc_csv, "also write the full grid here");
  twc->callback([&] {
    prep();
    auto p = provider_by_name(tw_provider, tw_seed);
    ScanReport r = exponent_scan(*p, default_theta_grid(twc_irr), dyadic_grid(twc_lo, twc_hi));
    if (!twc_csv.empty()) {
      std::ofstream f(twc_csv, std::ios::binary);
      if (!f) throw Error("cli", "cannot write " + twc_csv);
      f << scan_csv(r);
    }
    json j = provenance("twistsums", "exponent_scan", 0.0);
    j["provider"] = p->name();
    j.update(to_json(r));
    emit(j);
  });

  auto* twp = tw->add_subcommand("pipeline", "approximation, coprime reduction and the dual sum over Q");
  double twp_theta = 0.41421356237309503, twp_T = 1e4;
  twp->add_option("--theta", twp_theta);
  twp->add_option("--T", twp_T);
  twp->callback([&] {
    prep();
    auto p = provider_by_name(tw_provider, tw_seed);
    json j = provenance("twistsums", "pipeline_bound_check", p->rank() == 2 ? 1e-4 : 1e-2);
    j.update(to_json(pipeline_bound_check(p, twp_theta, twp_T)));
    emit(j);
  });

  // run
  auto* ru = app.add_subcommand("run", "run every experiment in a config");
  std::string ru_config, ru_out;
  std::optional<uint64_t> ru_seed;
  ru->add_option("config", ru_config, "run config JSON")->required();
  ru->add_option("--seed", ru_seed);
  ru->add_option("--out-dir", ru_out, "artifact directory (overrides output_dir)");
  ru->callback([&] {
    prep();
    json cfg = load_config(ru_config);
    RunOptions o;
    o.seed = ru_seed;
    if (!ru_out.empty()) o.out_dir = ru_out;
    if (threads > 0) o.threads = threads;
    o.base_dir = std::filesystem::path(ru_config).parent_path().string();
    if (o.base_dir.empty()) o.base_dir = ".";
    RunResult r = run_config(cfg, o);
    if (!r.pass) rc = kFail;
    emit(r.manifest);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    app.exit(e);
    return kUsage;
  } catch (const vsum::Error& e) {
    std::cerr << json{{"error", e.what()}, {"module", e.module()}}.dump() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", e.what()}, {"module", "cli"}}.dump() << "\n";
    return kUsage;
  }
  return rc;
}
