#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kBin = VSUM_BINARY;
const std::string kSrc = VSUM_SOURCE_DIR;

fs::path scratch(const std::string& name) {
  fs::path p = fs::temp_directory_path() / ("vsum_cli_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run(const std::string& args) {
  int st = std::system((kBin + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("empty config") {
  fs::path out = scratch("empty");
  CHECK(run("run " + kSrc + "/configs/empty.json --out-dir " + out.string()) == 0);
  json m = json::parse(slurp(out / "manifest.json"));
  CHECK(m["pass"] == true);
  CHECK(m["config_hash"].get<std::string>().size() == 16);
}

TEST_CASE("GL2 Voronoi config passes") {
  fs::path out = scratch("gl2");
  CHECK(run("run " + kSrc + "/configs/voronoi_gl2.json --threads 2 --out-dir " + out.string()) == 0);
  json r = json::parse(slurp(out / "voronoi_report.json"));
  CHECK(r["instances"].size() == 20);
  for (const auto& i : r["instances"]) CHECK(i["pass"] == true);
}

TEST_CASE("runs are deterministic") {
  fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::string cfg = kSrc + "/configs/arithmetic.json";
  REQUIRE(run("run " + cfg + " --threads 3 --out-dir " + a.string()) == 0);
  REQUIRE(run("run " + cfg + " --threads 1 --out-dir " + b.string()) == 0);
  int files = 0;
  for (const auto& f : fs::directory_iterator(a)) {
    ++files;
    CHECK(slurp(f.path()) == slurp(b / f.path().filename()));
  }
  CHECK(files > 1);
}

TEST_CASE("bad input exits with 2") {
  fs::path d = scratch("bad");
  std::ofstream(d / "unknown_key.json") << R"({"name": "x", "experiments": [], "bogus": 1})";
  std::ofstream(d / "bad_type.json") << R"({"name": "x", "experiments": [{"type": "nope"}]})";
  std::ofstream(d / "not_json.json") << "{ nope";
  for (const char* f : {"unknown_key.json", "bad_type.json", "not_json.json"})
    CHECK(run("run " + (d / f).string() + " --out-dir " + (d / "out").string()) == 2);
  CHECK(run("run " + (d / "missing.json").string()) == 2);
  CHECK(run("voronoi --rank 4") == 2);
  CHECK(run("kloos rational 1 1 0") == 2);
}

TEST_CASE("one-shot commands") {
  fs::path d = scratch("oneshot");
  fs::path o = d / "k.json";
  REQUIRE(run("-o " + o.string() + " kloos rational 1 1 3") == 0);
  json k = json::parse(slurp(o));
  CHECK(k["module"] == "kloosterman");
  CHECK(k.contains("config_hash"));
  CHECK(k.contains("tolerance"));
  REQUIRE(run("-o " + o.string() + " twist --provider delta sharp --theta 0.5 --T 5") == 0);
  json s = json::parse(slurp(o));
  CHECK(s["module"] == "twistsums");
  CHECK(s["value"][0].get<double>() == doctest::Approx(-3.060660172).epsilon(1e-9));

  REQUIRE(run("-o " + o.string() + " bessel --kernel delta eval --x 2") == 0);
  json b = json::parse(slurp(o));
  for (const char* k : {"value_re", "value_im", "err_est", "module", "operation", "tolerance", "config_hash"})
    CHECK(b.contains(k));

  fs::path csv = d / "scan.csv";
  REQUIRE(run("-o " + csv.string() + " hankel --T 20 scan --y 1e-3:10:5") == 0);
  CHECK(slurp(csv).rfind("y,re,im,abs,regime\n", 0) == 0);
  REQUIRE(run("-o " + csv.string() + " kloos weil 30") == 0);
  CHECK(slurp(csv).rfind("c,max_abs,bound,ratio\n", 0) == 0);
  REQUIRE(run("-o " + csv.string() + " coeffs tau 6") == 0);
  CHECK(slurp(csv).find("6,-6048\n") != std::string::npos);
}
