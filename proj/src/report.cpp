#include "vsum/report.hpp"

#include <cinttypes>
#include <cstdio>
#include <sstream>

namespace vsum {

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string config_hash(const json& cfg, uint64_t seed) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, fnv1a(cfg.dump() + "#" + std::to_string(seed)));
  return buf;
}

json provenance(const std::string& module, const std::string& operation, double tolerance) {
  return {{"module", module}, {"operation", operation}, {"tolerance", tolerance}};
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const FieldElement& a) {
  json out = json::array();
  for (const auto& q : a.c) {
    if (q.get_den() == 1 && q.get_num().fits_slong_p()) out.push_back(q.get_num().get_si());
    else out.push_back(q.get_str());
  }
  return out;
}

static json divisors_json(const std::vector<DivisorTerm>& v) {
  json out = json::array();
  for (const auto& d : v)
    out.push_back({{"d", d.d},
                   {"value", to_json(d.value)},
                   {"terms", d.terms},
                   {"abs_sum", d.abs_sum},
                   {"window_abs", d.window_abs},
                   {"window_terms", d.window_terms}});
  return out;
}

json to_json(const VoronoiReport& r) {
  return {{"alpha", r.alpha},
          {"beta", r.beta},
          {"abar", r.abar},
          {"lhs", to_json(r.lhs)},
          {"rhs", to_json(r.rhs)},
          {"tail", r.tail},
          {"abs_residual", r.abs_residual},
          {"rel_residual", r.rel_residual},
          {"lhs_terms", r.lhs_terms},
          {"rhs_terms", r.rhs_terms},
          {"blocks", divisors_json(r.blocks)},
          {"pass", r.pass}};
}

json to_json(const ScanReport& r) {
  json m = json::array();
  for (size_t i = 0; i < r.T.size(); ++i)
    m.push_back({{"T", r.T[i]}, {"max_abs", r.max_abs[i]}, {"theta_index", r.argmax[i]}});
  return {{"slope", r.slope},       {"ci", r.ci},     {"stderr", r.stderr_slope}, {"intercept", r.intercept},
          {"n_points", r.n_points}, {"maxima", m},    {"n_theta", r.theta.size()}};
}

json to_json(const PipelineReport& r) {
  return {{"rank", r.rank},
          {"theta", r.theta},
          {"T", r.T},
          {"Q", r.Q},
          {"approximation", {{"alpha", r.a_breve}, {"beta", r.b_breve}, {"residual", r.approx_residual},
                             {"bounds_ok", r.approx_ok}}},
          {"coprime", {{"alpha", r.alpha}, {"beta", r.beta}, {"delta", r.delta}}},
          {"eta", r.eta},
          {"lhs", to_json(r.lhs)},
          {"rhs", to_json(r.rhs)},
          {"rel_residual", r.rel_residual},
          {"rhs_terms", r.rhs_terms},
          {"window", {r.window_lo, r.window_hi}},
          {"window_terms", r.window_terms},
          {"window_abs", r.window_abs},
          {"tail_abs", r.tail_abs},
          {"dominant_abs", r.dominant_abs},
          {"scale", r.scale},
          {"divisors", divisors_json(r.divisors)},
          {"predicted_weights", r.predicted}};
}

json to_json(const WeilReport& r) {
  json worst = json::array();
  for (const auto& row : r.rows)
    if (row.violations > 0) worst.push_back({{"c", row.c}, {"violations", row.violations}});
  return {{"pairs", r.pairs}, {"violations", r.violations}, {"max_ratio", r.max_ratio},
          {"moduli", r.rows.size()}, {"violating_moduli", worst}};
}

json to_json(const HeckeReport& r) {
  json out = {{"pairs", r.pairs}, {"violations", r.violations}};
  if (r.violations) out["first"] = {r.first_m, r.first_n};
  return out;
}

json to_json(const DirichletSweep& r) {
  return {{"trials", r.trials}, {"violations", r.violations}, {"max_quality", r.max_quality},
          {"max_beta_ratio", r.max_beta_ratio}};
}

json to_json(const Approximation& a) {
  return {{"alpha", to_json(a.alpha)}, {"beta", to_json(a.beta)}, {"residual", a.residual},
          {"beta_abs", a.beta_abs},    {"quality", a.quality},    {"c_f", a.c_f},
          {"bounds_ok", a.bounds_ok}};
}

json to_json(const ParsevalReport& r) {
  return {{"mean_sq", r.mean_sq}, {"coeff_sq", r.coeff_sq}, {"rel_diff", r.rel_diff}, {"samples", r.samples}};
}

json to_json(const DualCheck& r) {
  return {{"points", r.points}, {"violations", r.violations}, {"max_err", r.max_err}};
}

json to_json(const DecayReport& r) {
  json pts = json::array();
  for (const auto& p : r.points) pts.push_back({{"y", p.y}, {"value", to_json(p.value)}, {"err", p.err}, {"regime", p.regime}});
  return {{"slope_small", r.slope_small},   {"slope_window", r.slope_window}, {"slope_tail", r.slope_tail},
          {"window_sup", r.window_sup},     {"small_sup", r.small_sup},       {"tail_points", r.tail_points},
          {"window_reached", r.window_reached}, {"tail_ok", r.tail_ok},      {"points", pts}};
}

json to_json(const AsymptoticReport& r) {
  json out = {{"frequency_pos", r.frequency_pos},
              {"envelope_sup", r.envelope_sup},
              {"envelope_inf", r.envelope_inf},
              {"neg_exponential_ok", r.neg_exponential_ok}};
  out["frequency_neg"] = std::isnan(r.frequency_neg) ? json(nullptr) : json(r.frequency_neg);
  return out;
}

json to_json(const AssemblyReport& r) {
  return {{"sharp", to_json(r.sharp)}, {"assembled", to_json(r.assembled)}, {"diff", r.diff},
          {"envelope", r.envelope},    {"within", r.within}};
}

json to_json(const AnnulusComparison& r) {
  return {{"sharp", to_json(r.sharp)}, {"smooth", to_json(r.smooth)}, {"diff", r.diff}, {"outside", r.outside}};
}

std::string scan_csv(const ScanReport& r) {
  std::ostringstream os;
  os << "T,theta_index,re,im,abs\n";
  for (size_t i = 0; i < r.T.size(); ++i)
    for (size_t k = 0; k < r.theta.size(); ++k) {
      const cplx v = r.at(i, k);
      os << fmt(r.T[i]) << ',' << k << ',' << fmt(v.real()) << ',' << fmt(v.imag()) << ',' << fmt(std::abs(v))
         << '\n';
    }
  return os.str();
}

std::string weil_csv(const WeilReport& r) {
  std::ostringstream os;
  os << "c,max_abs,bound,ratio\n";
  for (const auto& w : r.rows) os << w.c << ',' << fmt(w.max_abs) << ',' << fmt(w.bound) << ',' << fmt(w.ratio) << '\n';
  return os.str();
}

std::shared_ptr<const CoefficientProvider> provider_by_name(const std::string& name, uint64_t seed) {
  return std::shared_ptr<const CoefficientProvider>(make_provider(name, seed));
}

BesselParamsReal kernel_by_name(const std::string& name) {
  if (name == "delta") return delta_params();
  if (name == "sym2delta") return sym2_delta_params();
  throw Error("bessel", "unknown kernel '" + name + "'");
}

}  // namespace vsum
