#include "vsum/runner.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "vsum/parallel.hpp"

namespace vsum {

namespace fs = std::filesystem;

namespace {

using Keys = std::set<std::string>;

const std::map<std::string, Keys>& schema() {
  static const std::map<std::string, Keys> s = {
      {"voronoi", {"rank", "tol", "instances"}},
      {"scan", {"provider", "T_log2", "irrationals", "slope_min", "slope_max"}},
      {"parseval", {"provider", "T", "rel_tol"}},
      {"weil", {"c_max"}},
      {"hecke", {"M"}},
      {"dirichlet", {"fields", "Q", "trials"}},
      {"smoothing", {"field", "X", "box_factor", "l1_factor"}},
      {"pipeline", {"provider", "theta", "T"}},
      {"bessel", {"kernel", "x", "tol"}},
  };
  return s;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cli", "cannot write " + p.string());
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

struct Ctx {
  fs::path out;
  fs::path base;
  uint64_t seed = 1;
  std::string hash;
};

struct Outcome {
  std::vector<std::string> files;
  bool pass = true;
};

json stamp(const Ctx& c, const std::string& module, const std::string& op, double tol) {
  json j = provenance(module, op, tol);
  j["config_hash"] = c.hash;
  return j;
}

Outcome run_voronoi(const Ctx& c, const json& x, const std::string& name) {
  const int rank = x.value("rank", 2);
  require(rank == 2 || rank == 3, "voronoi: rank must be 2 or 3");
  const double tol = x.value("tol", rank == 2 ? 1e-4 : 1e-2);
  json out = stamp(c, "voronoi", "verify_identity", tol);
  out["rank"] = rank;
  json inst = json::array();
  bool pass = true;
  for (const auto& i : x.at("instances")) {
    const long long a = i.at("alpha"), b = i.at("beta");
    const double T = i.at("T"), rho = i.value("rho", 0.0);
    VoronoiInstance v = rank == 2 ? make_gl2_instance(a, b, T, rho, tol) : make_gl3_instance(a, b, T, rho, tol);
    VoronoiReport r = verify_identity(v);
    json j = to_json(r);
    j["T"] = T;
    j["rho"] = rho;
    inst.push_back(j);
    pass = pass && r.pass;
  }
  out["instances"] = inst;
  out["pass"] = pass;
  write_file(c.out / name, dump(out));
  return {{name}, pass};
}

Outcome run_scan(const Ctx& c, const json& x, const std::string& stem) {
  auto p = provider_by_name(x.at("provider"), c.seed);
  const auto t = x.at("T_log2").get<std::vector<int>>();
  require(t.size() == 2 && t[0] < t[1], "scan: T_log2 must be [lo, hi] with lo < hi");
  ScanReport r = exponent_scan(*p, default_theta_grid(x.value("irrationals", 48)), dyadic_grid(t[0], t[1]));
  json s = stamp(c, "twistsums", "exponent_scan", 0.0);
  s["provider"] = p->name();
  s.update(to_json(r));
  bool pass = true;
  if (x.contains("slope_min")) pass = pass && r.slope >= x["slope_min"].get<double>();
  if (x.contains("slope_max")) pass = pass && r.slope <= x["slope_max"].get<double>();
  s["pass"] = pass;
  write_file(c.out / (stem + ".csv"), scan_csv(r));
  write_file(c.out / (stem + ".json"), dump(s));
  return {{stem + ".csv", stem + ".json"}, pass};
}

Outcome run_parseval(const Ctx& c, const json& x, const std::string& name) {
  auto p = provider_by_name(x.value("provider", "delta"), c.seed);
  const double tol = x.value("rel_tol", 0.02);
  ParsevalReport r = parseval_check(*p, x.value("T", 1024.0));
  json j = stamp(c, "twistsums", "parseval_check", tol);
  j.update(to_json(r));
  j["pass"] = r.rel_diff <= tol;
  write_file(c.out / name, dump(j));
  return {{name}, r.rel_diff <= tol};
}

Outcome run_weil(const Ctx& c, const json& x, const std::string& name) {
  WeilReport r = weil_check(x.value("c_max", 500));
  json j = stamp(c, "kloosterman", "weil_check", 0.0);
  j.update(to_json(r));
  j["pass"] = r.violations == 0;
  write_file(c.out / name, dump(j));
  const std::string csv = std::filesystem::path(name).replace_extension(".csv").string();
  write_file(c.out / csv, weil_csv(r));
  return {{name, csv}, r.violations == 0};
}

Outcome run_hecke(const Ctx& c, const json& x, const std::string& name) {
  HeckeReport r = hecke_check(x.value("M", 200));
  json j = stamp(c, "coeffs", "hecke_check", 0.0);
  j.update(to_json(r));
  j["pass"] = r.violations == 0;
  write_file(c.out / name, dump(j));
  return {{name}, r.violations == 0};
}

Outcome run_dirichlet(const Ctx& c, const json& x, const std::string& name) {
  json j = stamp(c, "numberfield", "dirichlet_approx", 0.0);
  j["seed"] = c.seed;
  json rows = json::array();
  bool pass = true;
  const int trials = x.value("trials", 1000);
  for (const auto& f : x.at("fields")) {
    NumberField F = NumberField::load((c.base / f.get<std::string>()).string());
    for (double Q : x.at("Q").get<std::vector<double>>()) {
      DirichletSweep s = dirichlet_sweep(F, Q, trials, c.seed);
      json r = to_json(s);
      r["field"] = F.name();
      r["Q"] = Q;
      r["c_f"] = F.c_f();
      rows.push_back(r);
      pass = pass && s.violations == 0;
    }
  }
  j["sweeps"] = rows;
  j["pass"] = pass;
  write_file(c.out / name, dump(j));
  return {{name}, pass};
}

Outcome run_smoothing(const Ctx& c, const json& x, const std::string& name) {
  NumberField F = x.contains("field") ? NumberField::load((c.base / x["field"].get<std::string>()).string())
                                      : NumberField::rationals();
  const double factor = x.value("l1_factor", 3.0);
  const int box = x.value("box_factor", 4);
  json j = stamp(c, "twistsums", "smoothing_kernel", 1e-12);
  json rows = json::array();
  bool pass = true;
  double lo = 1e300, hi = 0.0;
  for (double X : x.at("X").get<std::vector<double>>()) {
    SmoothingKernel k(F, X);
    double err = 0.0;
    const double l1 = k.l1(&err);
    const double ratio = l1 / std::pow(std::log(X), F.degree());
    lo = std::min(lo, ratio);
    hi = std::max(hi, ratio);
    json r = {{"X", X}, {"l1", l1}, {"l1_err", err}, {"ratio", ratio}};
    if (X <= 64) {
      DualCheck d = dual_property_check(k, static_cast<long long>(box * X));
      r["dual"] = to_json(d);
      pass = pass && d.violations == 0;
    }
    rows.push_back(r);
  }
  j["field"] = F.name();
  j["kernels"] = rows;
  j["ratio_spread"] = hi / lo;
  pass = pass && hi / lo <= factor;
  j["pass"] = pass;
  write_file(c.out / name, dump(j));
  return {{name}, pass};
}

Outcome run_pipeline(const Ctx& c, const json& x, const std::string& name) {
  auto p = provider_by_name(x.value("provider", "delta"), c.seed);
  json j = stamp(c, "twistsums", "pipeline_bound_check", p->rank() == 2 ? 1e-4 : 1e-2);
  json rows = json::array();
  for (double T : x.at("T").get<std::vector<double>>()) {
    json r = to_json(pipeline_bound_check(p, x.at("theta").get<double>(), T));
    rows.push_back(r);
  }
  j["runs"] = rows;
  j["pass"] = true;
  write_file(c.out / name, dump(j));
  return {{name}, true};
}

Outcome run_bessel(const Ctx& c, const json& x, const std::string& name) {
  RealKernel k(kernel_by_name(x.value("kernel", "delta")));
  const double tol = x.value("tol", 1e-12);
  std::ostringstream os;
  os << "x,re,im,err\n";
  for (double v : x.at("x").get<std::vector<double>>()) {
    KernelValue r = bessel_kernel_real(k, v, tol);
    os << fmt(v) << ',' << fmt(r.value.real()) << ',' << fmt(r.value.imag()) << ',' << fmt(r.err) << '\n';
  }
  write_file(c.out / name, os.str());
  return {{name}, true};
}

std::string default_output(const std::string& type) {
  if (type == "voronoi") return "voronoi_report.json";
  if (type == "scan") return "scan";
  if (type == "bessel") return "bessel.csv";
  return type + ".json";
}

}  // namespace

void validate_config(const json& cfg) {
  require(cfg.is_object(), "config must be a JSON object");
  static const Keys top = {"name", "seed", "threads", "output_dir", "experiments"};
  for (auto it = cfg.begin(); it != cfg.end(); ++it) require(top.count(it.key()), "unknown config key '" + it.key() + "'");
  if (cfg.contains("seed")) require(cfg["seed"].is_number_unsigned(), "seed must be a non-negative integer");
  if (cfg.contains("threads")) require(cfg["threads"].is_number_integer(), "threads must be an integer");
  if (!cfg.contains("experiments")) return;
  require(cfg["experiments"].is_array(), "experiments must be an array");
  for (const auto& x : cfg["experiments"]) {
    require(x.is_object() && x.contains("type") && x["type"].is_string(), "each experiment needs a string 'type'");
    const std::string type = x["type"];
    auto s = schema().find(type);
    require(s != schema().end(), "unknown experiment type '" + type + "'");
    for (auto it = x.begin(); it != x.end(); ++it)
      require(it.key() == "type" || it.key() == "output" || s->second.count(it.key()),
              type + ": unknown key '" + it.key() + "'");
  }
}

json load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  json cfg;
  try {
    cfg = json::parse(ss.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  validate_config(cfg);
  return cfg;
}

RunResult run_config(const json& cfg, const RunOptions& opt) {
  validate_config(cfg);
  Ctx c;
  c.seed = opt.seed ? *opt.seed : cfg.value("seed", uint64_t{1});
  c.hash = config_hash(cfg, c.seed);
  c.base = opt.base_dir;
  const std::string name = cfg.value("name", std::string("run"));
  c.out = opt.out_dir ? fs::path(*opt.out_dir) : fs::path(cfg.value("output_dir", "out/" + name));
  fs::create_directories(c.out);
  const int threads = opt.threads ? *opt.threads : cfg.value("threads", 0);
  const int saved = default_threads();
  if (threads > 0) set_default_threads(threads);

  RunResult res;
  res.out_dir = c.out.string();
  json arts = json::array();
  try {
    for (const auto& x : cfg.value("experiments", json::array())) {
      const std::string type = x["type"];
      const std::string out = x.value("output", default_output(type));
      Outcome o;
      if (type == "voronoi") o = run_voronoi(c, x, out);
      else if (type == "scan") o = run_scan(c, x, out);
      else if (type == "parseval") o = run_parseval(c, x, out);
      else if (type == "weil") o = run_weil(c, x, out);
      else if (type == "hecke") o = run_hecke(c, x, out);
      else if (type == "dirichlet") o = run_dirichlet(c, x, out);
      else if (type == "smoothing") o = run_smoothing(c, x, out);
      else if (type == "pipeline") o = run_pipeline(c, x, out);
      else if (type == "bessel") o = run_bessel(c, x, out);
      for (const auto& f : o.files) arts.push_back({{"file", f}, {"type", type}, {"pass", o.pass}});
      res.pass = res.pass && o.pass;
    }
  } catch (const json::exception& e) {
    set_default_threads(saved);
    throw ConfigError(std::string("config field has the wrong shape: ") + e.what());
  } catch (...) {
    set_default_threads(saved);
    throw;
  }
  set_default_threads(saved);
  res.manifest = {{"name", name}, {"seed", c.seed}, {"config_hash", c.hash}, {"artifacts", arts}, {"pass", res.pass}};
  write_file(c.out / "manifest.json", dump(res.manifest));
  return res;
}

}  // namespace vsum
