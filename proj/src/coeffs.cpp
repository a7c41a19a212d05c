#include "vsum/coeffs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <cstring>
#include <fstream>
#include <mutex>

#include "json.hpp"

namespace vsum {

namespace {

struct NttPrime {
  uint32_t p;
  uint32_t g;
};

// p - 1 divisible by 2^21 for all of these
constexpr NttPrime kPrimes[5] = {
    {998244353u, 3u}, {167772161u, 3u}, {469762049u, 3u}, {754974721u, 11u}, {1004535809u, 3u}};

uint64_t pow_mod(uint64_t b, uint64_t e, uint64_t m) {
  uint64_t r = 1;
  b %= m;
  while (e) {
    if (e & 1) r = r * b % m;
    b = b * b % m;
    e >>= 1;
  }
  return r;
}

void ntt(std::vector<uint32_t>& a, bool invert, const NttPrime& P) {
  const size_t n = a.size();
  const uint64_t p = P.p;
  for (size_t i = 1, j = 0; i < n; ++i) {
    size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  std::vector<uint32_t> w(n / 2);
  for (size_t len = 2; len <= n; len <<= 1) {
    uint64_t wl = pow_mod(P.g, (p - 1) / len, p);
    if (invert) wl = pow_mod(wl, p - 2, p);
    const size_t half = len / 2;
    w[0] = 1;
    for (size_t k = 1; k < half; ++k) w[k] = static_cast<uint32_t>(w[k - 1] * wl % p);
    for (size_t i = 0; i < n; i += len) {
      for (size_t k = 0; k < half; ++k) {
        uint64_t u = a[i + k];
        uint64_t v = a[i + k + half] * static_cast<uint64_t>(w[k]) % p;
        uint64_t s = u + v;
        a[i + k] = static_cast<uint32_t>(s >= p ? s - p : s);
        a[i + k + half] = static_cast<uint32_t>(u >= v ? u - v : u + p - v);
      }
    }
  }
  if (invert) {
    uint64_t ninv = pow_mod(n, p - 2, p);
    for (auto& x : a) x = static_cast<uint32_t>(x * ninv % p);
  }
}

// a <- a^2 truncated to the first n coefficients, modulo P.p
void square_trunc(std::vector<uint32_t>& a, size_t n, const NttPrime& P) {
  size_t sz = 1;
  while (sz < 2 * n) sz <<= 1;
  std::vector<uint32_t> f(sz, 0);
  std::copy(a.begin(), a.begin() + n, f.begin());
  ntt(f, false, P);
  for (auto& x : f) x = static_cast<uint32_t>(static_cast<uint64_t>(x) * x % P.p);
  ntt(f, true, P);
  std::copy(f.begin(), f.begin() + n, a.begin());
}

}  // namespace

std::string to_string(i128 v) {
  if (v == 0) return "0";
  bool neg = v < 0;
  unsigned __int128 u = neg ? static_cast<unsigned __int128>(-(v + 1)) + 1 : static_cast<unsigned __int128>(v);
  std::string s;
  while (u) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

uint64_t TauTable::size() const {
  std::shared_lock lock(mu_);
  return t_.empty() ? 0 : t_.size() - 1;
}

void TauTable::ensure(uint64_t n) const {
  {
    std::shared_lock lock(mu_);
    if (n < t_.size()) return;
  }
  if (n > cap_) throw CapError("coeffs", "tau requested at n = " + std::to_string(n) + " beyond cap " + std::to_string(cap_));
  std::unique_lock lock(mu_);
  if (n < t_.size()) return;
  uint64_t N = 1024;
  while (N < n + 1) N <<= 1;
  N = std::min<uint64_t>(N, cap_ + 1);
  // coefficients of J^8 up to q^{N-1}; tau(k) = [q^{k-1}] J^8
  const size_t len = N;
  std::vector<std::vector<uint32_t>> res(5);
  for (int pi = 0; pi < 5; ++pi) {
    const NttPrime& P = kPrimes[pi];
    std::vector<uint32_t> a(len, 0);
    for (uint64_t j = 0;; ++j) {
      uint64_t e = j * (j + 1) / 2;
      if (e >= len) break;
      int64_t c = static_cast<int64_t>(2 * j + 1) * ((j & 1) ? -1 : 1);
      int64_t m = c % static_cast<int64_t>(P.p);
      if (m < 0) m += P.p;
      a[e] = static_cast<uint32_t>(m);
    }
    for (int k = 0; k < 3; ++k) square_trunc(a, len, P);
    res[pi] = std::move(a);
  }
  // Garner reconstruction of tau + 2^126, which lies in [0, 2^127)
  const unsigned __int128 B = static_cast<unsigned __int128>(1) << 126;
  uint64_t m[5], inv[5][5], boff[5];
  for (int i = 0; i < 5; ++i) {
    m[i] = kPrimes[i].p;
    unsigned __int128 b = B % m[i];
    boff[i] = static_cast<uint64_t>(b);
  }
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < i; ++j) inv[j][i] = pow_mod(m[j] % m[i], m[i] - 2, m[i]);
  std::vector<i128> out(N);
  out[0] = 0;
  for (uint64_t k = 1; k < N; ++k) {
    uint64_t v[5];
    for (int i = 0; i < 5; ++i) {
      uint64_t x = (res[i][k - 1] + boff[i]) % m[i];
      for (int j = 0; j < i; ++j) {
        x = (x + m[i] - v[j] % m[i]) % m[i];
        x = x * inv[j][i] % m[i];
      }
      v[i] = x;
    }
    unsigned __int128 acc = v[4];
    for (int i = 3; i >= 0; --i) acc = acc * m[i] + v[i];
    out[k] = static_cast<i128>(acc - B);
  }
  t_ = std::move(out);
}

i128 TauTable::tau(uint64_t n) const {
  if (n == 0) throw Error("coeffs", "tau needs n >= 1");
  ensure(n);
  std::shared_lock lock(mu_);
  return t_[n];
}

void TauTable::save(const std::string& path) const {
  std::shared_lock lock(mu_);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("coeffs", "cannot write " + path);
  for (size_t n = 1; n < t_.size(); ++n) {
    unsigned __int128 u = static_cast<unsigned __int128>(t_[n]);
    uint64_t words[2] = {static_cast<uint64_t>(u), static_cast<uint64_t>(u >> 64)};
    unsigned char buf[16];
    for (int w = 0; w < 2; ++w)
      for (int b = 0; b < 8; ++b) buf[8 * w + b] = static_cast<unsigned char>(words[w] >> (8 * b));
    out.write(reinterpret_cast<const char*>(buf), 16);
  }
  nlohmann::json h = {{"format", "tau-int128-le"},
                      {"words_per_entry", 2},
                      {"word", "int64 little-endian, low word first"},
                      {"first_index", 1},
                      {"count", t_.empty() ? 0 : t_.size() - 1}};
  std::ofstream side(path + ".json");
  side << h.dump(2) << "\n";
}

void TauTable::load(const std::string& path) {
  std::ifstream side(path + ".json");
  if (!side) throw Error("coeffs", "missing sidecar " + path + ".json");
  nlohmann::json h = nlohmann::json::parse(side);
  if (h.value("format", "") != "tau-int128-le") throw Error("coeffs", "unknown cache format");
  uint64_t count = h.at("count").get<uint64_t>();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("coeffs", "cannot read " + path);
  std::vector<i128> t(count + 1, 0);
  for (uint64_t n = 1; n <= count; ++n) {
    unsigned char buf[16];
    if (!in.read(reinterpret_cast<char*>(buf), 16)) throw Error("coeffs", "truncated cache file");
    uint64_t words[2] = {0, 0};
    for (int w = 0; w < 2; ++w)
      for (int b = 0; b < 8; ++b) words[w] |= static_cast<uint64_t>(buf[8 * w + b]) << (8 * b);
    unsigned __int128 u = (static_cast<unsigned __int128>(words[1]) << 64) | words[0];
    t[n] = static_cast<i128>(u);
  }
  std::unique_lock lock(mu_);
  t_ = std::move(t);
}

TauTable& shared_tau_table() {
  static TauTable table;
  return table;
}

i128 tau(uint64_t n) { return shared_tau_table().tau(n); }

double gl2_lambda(uint64_t n) {
  long double t = static_cast<long double>(tau(n));
  return static_cast<double>(t / std::pow(static_cast<long double>(n), 5.5L));
}

namespace {
std::shared_mutex g_sieve_mu;
std::vector<uint32_t> g_spf;
}  // namespace

void ensure_sieve(uint64_t n) {
  {
    std::shared_lock lock(g_sieve_mu);
    if (n < g_spf.size()) return;
  }
  std::unique_lock lock(g_sieve_mu);
  if (n < g_spf.size()) return;
  std::vector<uint32_t> spf(n + 1, 0);
  for (uint64_t i = 2; i <= n; ++i) {
    if (spf[i]) continue;
    for (uint64_t j = i; j <= n; j += i)
      if (!spf[j]) spf[j] = static_cast<uint32_t>(i);
  }
  g_spf = std::move(spf);
}

std::vector<std::pair<uint64_t, int>> factorize(uint64_t n) {
  std::vector<std::pair<uint64_t, int>> f;
  if (n == 0) throw Error("coeffs", "cannot factor 0");
  {
    std::shared_lock lock(g_sieve_mu);
    if (n < g_spf.size()) {
      while (n > 1) {
        uint64_t p = g_spf[n];
        int e = 0;
        while (n % p == 0) {
          n /= p;
          ++e;
        }
        f.emplace_back(p, e);
      }
      return f;
    }
  }
  for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    if (n % p) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    f.emplace_back(p, e);
  }
  if (n > 1) f.emplace_back(n, 1);
  return f;
}

double sym2_local(double L, int a, int b) {
  const int l1 = a + b, l2 = a;
  const double e1 = L * L - 1.0;
  std::vector<double> h(l1 + 2, 0.0);
  h[0] = 1.0;
  for (int k = 1; k <= l1 + 1; ++k) {
    double v = e1 * h[k - 1];
    if (k >= 2) v -= e1 * h[k - 2];
    if (k >= 3) v += h[k - 3];
    h[k] = v;
  }
  double hm = l2 >= 1 ? h[l2 - 1] : 0.0;
  return h[l1] * h[l2] - h[l1 + 1] * hm;
}

double gl3_sym2(uint64_t m, uint64_t n) {
  static Sym2DeltaProvider p;
  return p.a2(m, n);
}

double CoefficientProvider::a2(uint64_t m, uint64_t n) const {
  if (m == 1) return a(n);
  if (n == 1) return a(m);
  throw Error("coeffs", "provider " + name() + " has no two-index coefficients");
}

double CoefficientProvider::at(const NumberField& F, const FieldInteger& g) const {
  mpq_class N = abs(F.norm(g));
  if (N == 0) throw Error("coeffs", "coefficient at zero");
  return a(N.get_num().get_ui());
}

double CoefficientProvider::at2(const NumberField& F, const FieldInteger& g1, const FieldInteger& g2) const {
  mpq_class N1 = abs(F.norm(g1)), N2 = abs(F.norm(g2));
  return a2(N1.get_num().get_ui(), N2.get_num().get_ui());
}

void DeltaProvider::reserve(uint64_t n) const {
  {
    std::shared_lock lock(mu_);
    if (n < lam_.size()) return;
  }
  shared_tau_table().ensure(n);
  uint64_t N = shared_tau_table().size();
  std::vector<double> lam(N + 1, 0.0);
  for (uint64_t k = 1; k <= N; ++k) {
    long double t = static_cast<long double>(shared_tau_table().tau(k));
    lam[k] = static_cast<double>(t / std::pow(static_cast<long double>(k), 5.5L));
  }
  std::unique_lock lock(mu_);
  if (lam.size() > lam_.size()) lam_ = std::move(lam);
}

double DeltaProvider::a(uint64_t n) const {
  if (n == 0) throw Error("coeffs", "coefficient index must be >= 1");
  {
    std::shared_lock lock(mu_);
    if (n < lam_.size()) return lam_[n];
  }
  reserve(n);
  std::shared_lock lock(mu_);
  return lam_[n];
}

void Sym2DeltaProvider::reserve(uint64_t n) const {
  {
    std::shared_lock lock(mu_);
    if (n < a1_.size()) return;
  }
  delta_.reserve(n);
  ensure_sieve(n);
  std::vector<double> a1(n + 1, 0.0);
  a1[1] = 1.0;
  for (uint64_t k = 2; k <= n; ++k) {
    auto f = factorize(k);
    uint64_t pe = 1;
    for (int i = 0; i < f[0].second; ++i) pe *= f[0].first;
    a1[k] = a1[k / pe] * sym2_local(delta_.a(f[0].first), 0, f[0].second);
  }
  std::unique_lock lock(mu_);
  if (a1.size() > a1_.size()) a1_ = std::move(a1);
}

double Sym2DeltaProvider::a(uint64_t n) const {
  {
    std::shared_lock lock(mu_);
    if (n >= 1 && n < a1_.size()) return a1_[n];
  }
  return a2(1, n);
}

double Sym2DeltaProvider::a2(uint64_t m, uint64_t n) const {
  if (m == 0 || n == 0) throw Error("coeffs", "coefficient index must be >= 1");
  auto fm = factorize(m), fn = factorize(n);
  double v = 1.0;
  size_t i = 0, j = 0;
  while (i < fm.size() || j < fn.size()) {
    uint64_t p;
    int a = 0, b = 0;
    if (j >= fn.size() || (i < fm.size() && fm[i].first < fn[j].first)) {
      p = fm[i].first;
      a = fm[i++].second;
    } else if (i >= fm.size() || fn[j].first < fm[i].first) {
      p = fn[j].first;
      b = fn[j++].second;
    } else {
      p = fm[i].first;
      a = fm[i++].second;
      b = fn[j++].second;
    }
    v *= sym2_local(delta_.a(p), a, b);
  }
  return v;
}

double SyntheticProvider::angle(uint64_t p) const {
  // splitmix64 of (seed, p) -> uniform angle in (0, pi)
  uint64_t z = seed_ * 0x9E3779B97F4A7C15ull + p;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  z ^= z >> 31;
  return kPi * ((static_cast<double>(z >> 11) + 0.5) / 9007199254740992.0);
}

double SyntheticProvider::local_product(uint64_t m, uint64_t n) const {
  if (m == 0 || n == 0) throw Error("coeffs", "coefficient index must be >= 1");
  if (rank_ == 2) {
    if (m != 1) throw Error("coeffs", "rank-2 provider has one index");
    double v = 1.0;
    for (auto [p, k] : factorize(n)) {
      double th = angle(p);
      v *= std::sin((k + 1) * th) / std::sin(th);
    }
    return v;
  }
  auto fm = factorize(m), fn = factorize(n);
  std::vector<std::pair<uint64_t, std::pair<int, int>>> loc;
  for (auto [p, k] : fm) loc.push_back({p, {k, 0}});
  for (auto [p, k] : fn) {
    auto it = std::find_if(loc.begin(), loc.end(), [p = p](const auto& x) { return x.first == p; });
    if (it == loc.end()) loc.push_back({p, {0, k}});
    else it->second.second = k;
  }
  double v = 1.0;
  for (auto& [p, ab] : loc) v *= sym2_local(2.0 * std::cos(angle(p)), ab.first, ab.second);
  return v;
}

std::unique_ptr<CoefficientProvider> make_provider(const std::string& name, uint64_t seed) {
  if (name == "delta") return std::make_unique<DeltaProvider>();
  if (name == "sym2delta") return std::make_unique<Sym2DeltaProvider>();
  if (name == "constant") return std::make_unique<ConstantProvider>(2);
  if (name == "constant3") return std::make_unique<ConstantProvider>(3);
  if (name == "synthetic2") return std::make_unique<SyntheticProvider>(2, seed);
  if (name == "synthetic3") return std::make_unique<SyntheticProvider>(3, seed);
  throw Error("coeffs", "unknown provider '" + name + "'");
}

RankinAverage rankin_average(const CoefficientProvider& p, uint64_t X) {
  if (X < 1) throw Error("coeffs", "X must be >= 1");
  p.reserve(X);
  RankinAverage r;
  for (uint64_t n = 1; n <= X; ++n) {
    double v = p.a(n);
    r.sum_sq += v * v;
    r.sum_abs += std::abs(v);
  }
  r.ratio_sq = r.sum_sq / static_cast<double>(X);
  r.ratio_abs = r.sum_abs / static_cast<double>(X);
  return r;
}

HeckeReport hecke_check(uint64_t M) {
  HeckeReport r;
  shared_tau_table().ensure(M * M);
  for (uint64_t m = 1; m <= M; ++m)
    for (uint64_t n = 1; n <= M; ++n) {
      const uint64_t g = std::gcd(m, n);
      i128 rhs = 0;
      for (uint64_t d = 1; d <= g; ++d) {
        if (g % d) continue;
        i128 p = 1;
        for (int k = 0; k < 11; ++k) p *= static_cast<i128>(d);
        rhs += p * tau(m * n / (d * d));
      }
      ++r.pairs;
      if (tau(m) * tau(n) != rhs) {
        if (r.violations == 0) {
          r.first_m = m;
          r.first_n = n;
        }
        ++r.violations;
      }
    }
  return r;
}

}  // namespace vsum
