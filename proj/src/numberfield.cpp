#include "vsum/numberfield.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "json.hpp"
#include "vsum/parallel.hpp"

namespace vsum {

namespace {

using Mat = std::vector<std::vector<mpq_class>>;
using cld = std::complex<long double>;

mpz_class floor_q(const mpq_class& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return r;
}

// Solves the exact linear system M x = b (M square, invertible).
std::vector<mpq_class> solve_exact(Mat M, std::vector<mpq_class> b) {
  const size_t n = M.size();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && M[piv][col] == 0) ++piv;
    if (piv == n) throw Error("numberfield", "singular matrix");
    std::swap(M[piv], M[col]);
    std::swap(b[piv], b[col]);
    for (size_t r = 0; r < n; ++r) {
      if (r == col || M[r][col] == 0) continue;
      mpq_class f = M[r][col] / M[col][col];
      for (size_t k = col; k < n; ++k) M[r][k] -= f * M[col][k];
      b[r] -= f * b[col];
    }
  }
  std::vector<mpq_class> x(n);
  for (size_t i = 0; i < n; ++i) x[i] = b[i] / M[i][i];
  return x;
}

mpq_class det_exact(Mat M) {
  const size_t n = M.size();
  mpq_class det = 1;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    while (piv < n && M[piv][col] == 0) ++piv;
    if (piv == n) return 0;
    if (piv != col) {
      std::swap(M[piv], M[col]);
      det = -det;
    }
    det *= M[col][col];
    for (size_t r = col + 1; r < n; ++r) {
      if (M[r][col] == 0) continue;
      mpq_class f = M[r][col] / M[col][col];
      for (size_t k = col; k < n; ++k) M[r][k] -= f * M[col][k];
    }
  }
  return det;
}

std::vector<std::vector<double>> invert_double(std::vector<std::vector<double>> A) {
  const size_t n = A.size();
  std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
  for (size_t col = 0; col < n; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < n; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    if (std::abs(A[piv][col]) < 1e-300) throw Error("numberfield", "singular embedding matrix");
    std::swap(A[piv], A[col]);
    std::swap(inv[piv], inv[col]);
    double d = A[col][col];
    for (size_t k = 0; k < n; ++k) {
      A[col][k] /= d;
      inv[col][k] /= d;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = A[r][col];
      if (f == 0.0) continue;
      for (size_t k = 0; k < n; ++k) {
        A[r][k] -= f * A[col][k];
        inv[r][k] -= f * inv[col][k];
      }
    }
  }
  return inv;
}

// Aberth iteration followed by Newton polishing in long double.
std::vector<cld> poly_roots(const std::vector<long long>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<cld> z(n);
  if (n == 1) {
    z[0] = cld(-static_cast<long double>(c[0]), 0.0L);
    return z;
  }
  auto eval = [&](cld x, cld& d) {
    cld p = 0.0L;
    d = 0.0L;
    for (int k = n; k >= 0; --k) {
      d = d * x + p;
      p = p * x + static_cast<long double>(c[k]);
    }
    return p;
  };
  long double bound = 0.0L;
  for (int k = 0; k < n; ++k) bound = std::max(bound, std::abs(static_cast<long double>(c[k])));
  bound += 1.0L;
  for (int k = 0; k < n; ++k) z[k] = std::polar(0.5L * bound, 2.0L * static_cast<long double>(kPi) * k / n + 0.4L);
  for (int it = 0; it < 500; ++it) {
    long double moved = 0.0L;
    for (int k = 0; k < n; ++k) {
      cld d;
      cld p = eval(z[k], d);
      if (p == cld(0.0L)) continue;
      cld ratio = p / d;
      cld s = 0.0L;
      for (int j = 0; j < n; ++j)
        if (j != k) s += 1.0L / (z[k] - z[j]);
      cld step = ratio / (1.0L - ratio * s);
      z[k] -= step;
      moved = std::max(moved, std::abs(step));
    }
    if (moved < 1e-18L) break;
  }
  for (auto& x : z)
    for (int it = 0; it < 5; ++it) {
      cld d;
      cld p = eval(x, d);
      if (d != cld(0.0L)) x -= p / d;
    }
  return z;
}

mpq_class parse_rational(const nlohmann::json& j) {
  if (j.is_number_integer()) return mpq_class(static_cast<long>(j.get<long long>()));
  if (j.is_string()) {
    mpq_class q(j.get<std::string>());
    q.canonicalize();
    return q;
  }
  throw Error("numberfield", "basis entries must be integers or rational strings");
}

bool lex_greater(const FieldElement& a, const FieldElement& b) {
  for (size_t i = 0; i < a.c.size(); ++i) {
    if (a.c[i] != b.c[i]) return a.c[i] > b.c[i];
  }
  return false;
}

}  // namespace

FieldElement FieldElement::from_ints(const std::vector<long long>& v) {
  FieldElement e;
  e.c.reserve(v.size());
  for (long long x : v) e.c.emplace_back(mpz_class(std::to_string(x)));
  return e;
}

bool FieldElement::is_zero() const {
  return std::all_of(c.begin(), c.end(), [](const mpq_class& q) { return q == 0; });
}

bool FieldElement::is_integral() const {
  return std::all_of(c.begin(), c.end(), [](const mpq_class& q) { return q.get_den() == 1; });
}

std::vector<long long> FieldElement::to_ints() const {
  std::vector<long long> out;
  for (const auto& q : c) {
    if (q.get_den() != 1) throw Error("numberfield", "element is not integral");
    if (!q.get_num().fits_slong_p()) throw Error("numberfield", "coordinate overflows 64 bits");
    out.push_back(q.get_num().get_si());
  }
  return out;
}

std::string FieldElement::str() const {
  std::string s = "[";
  for (size_t i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    s += c[i].get_str();
  }
  return s + "]";
}

double EmbeddedPoint::abs(int v) const {
  int nr = static_cast<int>(real.size());
  return v < nr ? std::abs(real[v]) : std::abs(cpx[v - nr]);
}

double EmbeddedPoint::module(int v) const {
  int nr = static_cast<int>(real.size());
  return v < nr ? std::abs(real[v]) : std::norm(cpx[v - nr]);
}

double EmbeddedPoint::trace() const {
  double t = 0.0;
  for (double x : real) t += x;
  for (cplx z : cpx) t += 2.0 * z.real();
  return t;
}

double EmbeddedPoint::norm() const {
  double p = 1.0;
  for (int v = 0; v < places(); ++v) p *= module(v);
  return p;
}

NumberField::NumberField(const FieldConfig& cfg) {
  name_ = cfg.name;
  poly_ = cfg.min_poly;
  if (poly_.size() < 2 || poly_.back() != 1) throw Error("numberfield", "min_poly must be monic of degree >= 1");
  n_ = static_cast<int>(poly_.size()) - 1;
  basis_ = cfg.basis;
  if (basis_.empty()) {
    basis_.assign(n_, std::vector<mpq_class>(n_, 0));
    for (int i = 0; i < n_; ++i) basis_[i][i] = 1;
  }
  if (static_cast<int>(basis_.size()) != n_) throw Error("numberfield", "basis size must equal the degree");
  for (auto& row : basis_)
    if (static_cast<int>(row.size()) != n_) throw Error("numberfield", "basis vectors must have N coordinates");
  torsion_ = cfg.torsion;
  norm_euclidean_ = cfg.norm_euclidean;
  build();
  for (const auto& u : cfg.units) {
    if (static_cast<int>(u.size()) != n_) throw Error("numberfield", "unit has wrong dimension");
    FieldElement e = FieldElement::from_ints(u);
    if (abs(norm(e)) != 1) throw Error("numberfield", "configured unit does not have norm +-1");
    units_.push_back(e);
  }
}

NumberField NumberField::rationals() {
  FieldConfig cfg;
  cfg.name = "Q";
  cfg.min_poly = {0, 1};
  cfg.torsion = 2;
  cfg.norm_euclidean = true;
  return NumberField(cfg);
}

NumberField NumberField::from_json_text(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  FieldConfig cfg;
  cfg.name = j.value("name", std::string("field"));
  cfg.min_poly = j.at("min_poly").get<std::vector<long long>>();
  if (j.contains("basis"))
    for (const auto& row : j["basis"]) {
      std::vector<mpq_class> v;
      for (const auto& x : row) v.push_back(parse_rational(x));
      cfg.basis.push_back(v);
    }
  if (j.contains("units")) cfg.units = j["units"].get<std::vector<std::vector<long long>>>();
  cfg.torsion = j.value("torsion", 2);
  cfg.norm_euclidean = j.value("norm_euclidean", false);
  return NumberField(cfg);
}

NumberField NumberField::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("numberfield", "cannot open field config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

void NumberField::build() {
  const int n = n_;
  // power coordinates -> basis coordinates: solve B^T c = p
  Mat bt(n, std::vector<mpq_class>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) bt[i][j] = basis_[j][i];
  if (det_exact(bt) == 0) throw Error("numberfield", "basis determinant is zero");
  basis_inv_.assign(n, std::vector<mpq_class>(n));
  for (int k = 0; k < n; ++k) {
    std::vector<mpq_class> e(n, 0);
    e[k] = 1;
    auto col = solve_exact(bt, e);
    for (int i = 0; i < n; ++i) basis_inv_[i][k] = col[i];
  }
  auto to_basis = [&](const std::vector<mpq_class>& p) {
    std::vector<mpq_class> c(n, 0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) c[i] += basis_inv_[i][k] * p[k];
    return c;
  };
  auto polymul = [&](const std::vector<mpq_class>& a, const std::vector<mpq_class>& b) {
    std::vector<mpq_class> prod(2 * n - 1, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) prod[i + j] += a[i] * b[j];
    for (int d = 2 * n - 2; d >= n; --d) {
      if (prod[d] == 0) continue;
      mpq_class lead = prod[d];
      prod[d] = 0;
      for (int k = 0; k < n; ++k) prod[d - n + k] -= lead * static_cast<long>(poly_[k]);
    }
    prod.resize(n);
    return prod;
  };
  mul_.assign(n, std::vector<std::vector<mpq_class>>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mul_[i][j] = to_basis(polymul(basis_[i], basis_[j]));
  std::vector<mpq_class> p1(n, 0);
  p1[0] = 1;
  one_ = FieldElement(to_basis(p1));

  auto roots = poly_roots(poly_);
  std::vector<long double> reals;
  std::vector<cld> cpxs;
  long double scale = 1.0L;
  for (auto r : roots) scale = std::max(scale, std::abs(r));
  for (auto r : roots) {
    if (std::abs(r.imag()) < 1e-9L * scale) reals.push_back(r.real());
    else if (r.imag() > 0) cpxs.push_back(r);
  }
  std::sort(reals.begin(), reals.end(), std::greater<>());
  std::sort(cpxs.begin(), cpxs.end(), [](cld a, cld b) {
    return a.real() != b.real() ? a.real() > b.real() : a.imag() < b.imag();
  });
  r1_ = static_cast<int>(reals.size());
  r2_ = static_cast<int>(cpxs.size());
  if (r1_ + 2 * r2_ != n) throw Error("numberfield", "root finder failed to separate real and complex roots");
  std::vector<cld> pts;
  for (auto x : reals) pts.emplace_back(x, 0.0L);
  for (auto z : cpxs) pts.push_back(z);
  root_residual_ = 0.0;
  emb_.assign(pts.size(), std::vector<cplx>(n));
  for (size_t v = 0; v < pts.size(); ++v) {
    cld z = pts[v];
    cld p = 0.0L;
    for (int k = n; k >= 0; --k) p = p * z + static_cast<long double>(poly_[k]);
    root_residual_ = std::max(root_residual_, static_cast<double>(std::abs(p)));
    for (int j = 0; j < n; ++j) {
      cld s = 0.0L, pw = 1.0L;
      for (int k = 0; k < n; ++k) {
        s += static_cast<long double>(basis_[j][k].get_d()) * pw;
        pw *= z;
      }
      emb_[v][j] = cplx(static_cast<double>(s.real()), static_cast<double>(s.imag()));
    }
  }
  if (root_residual_ > 1e-12 * std::pow(10.0, n)) throw Error("numberfield", "embedding residual too large");
  remb_.assign(n, std::vector<double>(n));
  for (int j = 0; j < n; ++j) {
    for (int v = 0; v < r1_; ++v) remb_[v][j] = emb_[v][j].real();
    for (int w = 0; w < r2_; ++w) {
      remb_[r1_ + 2 * w][j] = emb_[r1_ + w][j].real();
      remb_[r1_ + 2 * w + 1][j] = emb_[r1_ + w][j].imag();
    }
  }
  remb_inv_ = invert_double(remb_);
  c_f_ = 0.0;
  for (const auto& row : emb_) {
    double s = 0.0;
    for (auto x : row) s += std::abs(x);
    c_f_ = std::max(c_f_, s);
  }
  // roots of unity: small search, each has all embeddings on the unit circle
  torsion_units_.clear();
  std::vector<long long> q(n, -3);
  while (true) {
    FieldElement e = FieldElement::from_ints(q);
    if (!e.is_zero()) {
      EmbeddedPoint x = embed(e);
      bool on_circle = true;
      for (int v = 0; v < places(); ++v) on_circle = on_circle && std::abs(x.abs(v) - 1.0) < 1e-9;
      if (on_circle) torsion_units_.push_back(e);
    }
    int k = 0;
    while (k < n && q[k] == 3) q[k++] = -3;
    if (k == n) break;
    ++q[k];
  }
  if (static_cast<int>(torsion_units_.size()) != torsion_)
    throw Error("numberfield", "torsion order mismatch: config says " + std::to_string(torsion_) + ", found " +
                                   std::to_string(torsion_units_.size()));
}

void NumberField::check(const FieldElement& a) const {
  if (static_cast<int>(a.c.size()) != n_)
    throw Error("numberfield", "dimension mismatch: element has " + std::to_string(a.c.size()) +
                                   " coordinates, field degree is " + std::to_string(n_));
}

FieldElement NumberField::zero() const { return FieldElement(std::vector<mpq_class>(n_, 0)); }

FieldElement NumberField::from_rational(const mpq_class& q) const {
  FieldElement e = one_;
  for (auto& x : e.c) x *= q;
  return e;
}

FieldElement NumberField::add(const FieldElement& a, const FieldElement& b) const {
  check(a);
  check(b);
  FieldElement r = a;
  for (int i = 0; i < n_; ++i) r.c[i] += b.c[i];
  return r;
}

FieldElement NumberField::sub(const FieldElement& a, const FieldElement& b) const {
  check(a);
  check(b);
  FieldElement r = a;
  for (int i = 0; i < n_; ++i) r.c[i] -= b.c[i];
  return r;
}

FieldElement NumberField::neg(const FieldElement& a) const {
  FieldElement r = a;
  for (auto& x : r.c) x = -x;
  return r;
}

FieldElement NumberField::mul(const FieldElement& a, const FieldElement& b) const {
  check(a);
  check(b);
  std::vector<mpq_class> r(n_, 0);
  for (int i = 0; i < n_; ++i) {
    if (a.c[i] == 0) continue;
    for (int j = 0; j < n_; ++j) {
      if (b.c[j] == 0) continue;
      mpq_class ab = a.c[i] * b.c[j];
      for (int k = 0; k < n_; ++k) r[k] += ab * mul_[i][j][k];
    }
  }
  return FieldElement(r);
}

std::vector<std::vector<mpq_class>> NumberField::mult_matrix(const FieldElement& a) const {
  check(a);
  Mat M(n_, std::vector<mpq_class>(n_, 0));
  for (int j = 0; j < n_; ++j)
    for (int i = 0; i < n_; ++i) {
      if (a.c[i] == 0) continue;
      for (int k = 0; k < n_; ++k) M[k][j] += a.c[i] * mul_[i][j][k];
    }
  return M;
}

std::pair<mpq_class, mpq_class> NumberField::norm_trace(const FieldElement& a) const {
  Mat M = mult_matrix(a);
  mpq_class tr = 0;
  for (int i = 0; i < n_; ++i) tr += M[i][i];
  return {det_exact(M), tr};
}

FieldElement NumberField::inverse(const FieldElement& a) const {
  if (a.is_zero()) throw Error("numberfield", "division by zero");
  return FieldElement(solve_exact(mult_matrix(a), one_.c));
}

FieldElement NumberField::div(const FieldElement& a, const FieldElement& b) const { return mul(a, inverse(b)); }

EmbeddedPoint NumberField::embed(const FieldElement& a) const {
  check(a);
  std::vector<double> c(n_);
  for (int j = 0; j < n_; ++j) c[j] = a.c[j].get_d();
  EmbeddedPoint x;
  for (int v = 0; v < r1_; ++v) {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += c[j] * emb_[v][j].real();
    x.real.push_back(s);
  }
  for (int w = 0; w < r2_; ++w) {
    cplx s = 0.0;
    for (int j = 0; j < n_; ++j) s += c[j] * emb_[r1_ + w][j];
    x.cpx.push_back(s);
  }
  return x;
}

EmbeddedPoint NumberField::embed_ints(const std::vector<long long>& c) const {
  EmbeddedPoint x;
  for (int v = 0; v < r1_; ++v) {
    double s = 0.0;
    for (int j = 0; j < n_; ++j) s += static_cast<double>(c[j]) * emb_[v][j].real();
    x.real.push_back(s);
  }
  for (int w = 0; w < r2_; ++w) {
    cplx s = 0.0;
    for (int j = 0; j < n_; ++j) s += static_cast<double>(c[j]) * emb_[r1_ + w][j];
    x.cpx.push_back(s);
  }
  return x;
}

std::vector<double> NumberField::coordinates(const EmbeddedPoint& x) const {
  std::vector<double> flat;
  for (double r : x.real) flat.push_back(r);
  for (cplx z : x.cpx) {
    flat.push_back(z.real());
    flat.push_back(z.imag());
  }
  if (static_cast<int>(flat.size()) != n_) throw Error("numberfield", "point has wrong signature");
  std::vector<double> y(n_, 0.0);
  for (int i = 0; i < n_; ++i)
    for (int k = 0; k < n_; ++k) y[i] += remb_inv_[i][k] * flat[k];
  return y;
}

EmbeddedPoint NumberField::make_point(const std::vector<double>& flat) const {
  if (static_cast<int>(flat.size()) != n_) throw Error("numberfield", "point has wrong dimension");
  EmbeddedPoint x;
  for (int v = 0; v < r1_; ++v) x.real.push_back(flat[v]);
  for (int w = 0; w < r2_; ++w) x.cpx.emplace_back(flat[r1_ + 2 * w], flat[r1_ + 2 * w + 1]);
  return x;
}

std::vector<std::vector<long long>> enumerate_lattice(const NumberField& F, double T, bool exclude_zero, size_t cap) {
  if (!(T > 0.0)) throw Error("numberfield", "T must be positive");
  const int n = F.degree();
  long long h = static_cast<long long>(std::floor(T / 2.0 + 1e-12));
  double count = std::pow(2.0 * h + 1.0, n);
  if (count > static_cast<double>(cap))
    throw CapError("numberfield", "lattice enumeration needs " + std::to_string(count) + " points (cap " +
                                      std::to_string(cap) + ")");
  std::vector<std::vector<long long>> out;
  out.reserve(static_cast<size_t>(count));
  std::vector<long long> c(n, -h);
  while (true) {
    bool zero = std::all_of(c.begin(), c.end(), [](long long v) { return v == 0; });
    if (!(zero && exclude_zero)) out.push_back(c);
    int k = n - 1;
    while (k >= 0 && c[k] == h) c[k--] = -h;
    if (k < 0) break;
    ++c[k];
  }
  return out;
}

std::vector<double> coordinate_bounds(const NumberField& F, const std::vector<double>& place_bounds) {
  if (static_cast<int>(place_bounds.size()) != F.places()) throw Error("numberfield", "need one bound per place");
  const int N = F.degree();
  std::vector<double> flat;
  for (int v = 0; v < F.r1(); ++v) flat.push_back(place_bounds[v]);
  for (int v = F.r1(); v < F.places(); ++v) {
    flat.push_back(place_bounds[v]);
    flat.push_back(place_bounds[v]);
  }
  std::vector<double> out(N, 0.0), unit(N);
  for (int k = 0; k < N; ++k) {
    std::fill(unit.begin(), unit.end(), 0.0);
    unit[k] = 1.0;
    std::vector<double> c = F.coordinates(F.make_point(unit));
    for (int j = 0; j < N; ++j) out[j] += std::abs(c[j]) * flat[k];
  }
  return out;
}

Approximation dirichlet_approx(const NumberField& F, const EmbeddedPoint& theta, double Q, size_t cap) {
  if (!(Q > 1.0)) throw Error("numberfield", "Q must exceed 1");
  const int n = F.degree(), P = F.places(), r1 = F.r1();
  const long long qmax = static_cast<long long>(std::floor(Q));
  double count = std::pow(2.0 * qmax + 1.0, n) / 2.0;
  if (count > static_cast<double>(cap))
    throw CapError("numberfield", "Dirichlet search needs " + std::to_string(count) + " candidates (cap " +
                                      std::to_string(cap) + ")");
  std::vector<cplx> th(P);
  for (int v = 0; v < P; ++v) th[v] = v < r1 ? cplx(theta.real[v], 0.0) : theta.cpx[v - r1];

  std::vector<long long> q(n, -qmax), best_q, best_a;
  double best_quality = 1e300, best_size = 1e300;
  std::vector<cplx> beta(P), prod(P);
  std::vector<double> flat(n), y(n);
  std::vector<long long> a(n);
  while (true) {
    // first nonzero coordinate positive
    int first = 0;
    while (first < n && q[first] == 0) ++first;
    if (first < n && q[first] > 0) {
      for (int v = 0; v < P; ++v) {
        cplx s = 0.0;
        for (int j = 0; j < n; ++j) s += static_cast<double>(q[j]) * F.embedding(v, j);
        beta[v] = s;
        prod[v] = s * th[v];
      }
      EmbeddedPoint pt;
      for (int v = 0; v < r1; ++v) pt.real.push_back(prod[v].real());
      for (int v = r1; v < P; ++v) pt.cpx.push_back(prod[v]);
      y = F.coordinates(pt);
      for (int j = 0; j < n; ++j) a[j] = std::llround(y[j]);
      double quality = 0.0, size = 0.0;
      for (int v = 0; v < P; ++v) {
        cplx av = 0.0;
        for (int j = 0; j < n; ++j) av += static_cast<double>(a[j]) * F.embedding(v, j);
        if (v < r1) av = av.real();
        quality = std::max(quality, Q * std::abs(prod[v] - av));
        size = std::max(size, std::abs(beta[v]));
      }
      const double eps = 1e-12;
      bool better = quality < best_quality - eps;
      if (!better && std::abs(quality - best_quality) <= eps) {
        if (size < best_size - eps) better = true;
        else if (std::abs(size - best_size) <= eps && q > best_q) better = true;
      }
      if (better) {
        best_quality = quality;
        best_size = size;
        best_q = q;
        best_a = a;
      }
    }
    int k = n - 1;
    while (k >= 0 && q[k] == qmax) q[k--] = -qmax;
    if (k < 0) break;
    ++q[k];
  }
  Approximation out;
  out.alpha = FieldElement::from_ints(best_a);
  out.beta = FieldElement::from_ints(best_q);
  out.c_f = F.c_f();
  out.quality = best_quality;
  EmbeddedPoint b = F.embed_ints(best_q), al = F.embed_ints(best_a);
  out.bounds_ok = true;
  for (int v = 0; v < P; ++v) {
    cplx bv = v < r1 ? cplx(b.real[v], 0.0) : b.cpx[v - r1];
    cplx av = v < r1 ? cplx(al.real[v], 0.0) : al.cpx[v - r1];
    double res = std::abs(bv * th[v] - av);
    out.residual.push_back(res);
    out.beta_abs.push_back(std::abs(bv));
    const double slack = 1.0 + 1e-10;
    if (std::abs(bv) > out.c_f * Q * slack || res > out.c_f / Q * slack) out.bounds_ok = false;
  }
  return out;
}

namespace {

FieldInteger euclid_remainder(const NumberField& F, const FieldInteger& a, const FieldInteger& b) {
  FieldElement q = F.div(a, b);
  const int n = F.degree();
  std::vector<mpz_class> base(n);
  for (int i = 0; i < n; ++i) base[i] = floor_q(q.c[i]);
  // nearby lattice points of the exact quotient; keep the one with the least |N(r)|
  FieldInteger best;
  mpq_class best_norm = -1;
  std::vector<int> off(n, -1);
  while (true) {
    FieldElement cand{std::vector<mpq_class>(n)};
    for (int i = 0; i < n; ++i) cand.c[i] = base[i] + off[i];
    FieldInteger r = F.sub(a, F.mul(cand, b));
    mpq_class nr = abs(F.norm(r));
    if (best_norm < 0 || nr < best_norm) {
      best_norm = nr;
      best = r;
    }
    int k = 0;
    while (k < n && off[k] == 2) off[k++] = -1;
    if (k == n) break;
    ++off[k];
  }
  if (best_norm >= abs(F.norm(b))) throw UnsupportedField("Euclidean step failed; field is not norm-Euclidean here");
  return best;
}

FieldInteger normalize_associate(const NumberField& F, const FieldInteger& d) {
  FieldInteger best = d;
  for (const auto& u : F.torsion_units()) {
    FieldInteger cand = F.mul(d, u);
    if (lex_greater(cand, best)) best = cand;
  }
  return best;
}

void require_euclidean(const NumberField& F) {
  if (!F.norm_euclidean()) throw UnsupportedField("field " + F.name() + " is not flagged norm-Euclidean");
}

}  // namespace

DirichletSweep dirichlet_sweep(const NumberField& F, double Q, int trials, uint64_t seed, int threads) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<EmbeddedPoint> th(trials);
  for (auto& t : th) {
    std::vector<double> y(F.degree());
    for (double& v : y) v = U(rng);
    EmbeddedPoint p;
    for (int v = 0; v < F.places(); ++v) {
      cplx s = 0.0;
      for (int j = 0; j < F.degree(); ++j) s += y[j] * F.embedding(v, j);
      if (v < F.r1()) p.real.push_back(s.real());
      else p.cpx.push_back(s);
    }
    t = p;
  }
  std::vector<Approximation> res(trials);
  parallel_for(static_cast<size_t>(trials), [&](size_t i) { res[i] = dirichlet_approx(F, th[i], Q); }, threads);
  DirichletSweep out;
  out.trials = trials;
  for (const auto& a : res) {
    if (!a.bounds_ok) ++out.violations;
    out.max_quality = std::max(out.max_quality, a.quality);
    for (double b : a.beta_abs) out.max_beta_ratio = std::max(out.max_beta_ratio, b / (a.c_f * Q));
  }
  return out;
}

FieldInteger field_gcd(const NumberField& F, const FieldInteger& a0, const FieldInteger& b0) {
  require_euclidean(F);
  if (!a0.is_integral() || !b0.is_integral()) throw Error("numberfield", "gcd needs integral arguments");
  FieldInteger a = a0, b = b0;
  if (a.is_zero() && b.is_zero()) throw Error("numberfield", "gcd(0, 0) is undefined");
  while (!b.is_zero()) {
    FieldInteger r = euclid_remainder(F, a, b);
    a = b;
    b = r;
  }
  return normalize_associate(F, a);
}

CoprimeSplit make_coprime(const NumberField& F, const FieldInteger& a, const FieldInteger& b) {
  if (b.is_zero()) throw Error("numberfield", "make_coprime needs beta != 0");
  FieldInteger d = field_gcd(F, a, b);
  return {F.div(a, d), F.div(b, d), d};
}

bool is_unit(const NumberField& F, const FieldInteger& a) {
  return a.is_integral() && !a.is_zero() && abs(F.norm(a)) == 1;
}

bool divides(const NumberField& F, const FieldInteger& d, const FieldInteger& a) {
  if (d.is_zero()) return a.is_zero();
  return F.div(a, d).is_integral();
}

ResidueRing::ResidueRing(const NumberField& F, const FieldInteger& m) : F_(&F), m_(m) {
  if (m.is_zero() || !m.is_integral()) throw Error("numberfield", "modulus must be a nonzero integer");
  const int n = F.degree();
  std::vector<std::vector<mpz_class>> rows(n, std::vector<mpz_class>(n));
  for (int j = 0; j < n; ++j) {
    FieldElement bj(std::vector<mpq_class>(n, 0));
    bj.c[j] = 1;
    FieldElement p = F.mul(m, bj);
    for (int k = 0; k < n; ++k) rows[j][k] = p.c[k].get_num();
  }
  // row-style Hermite normal form, upper triangular
  for (int col = 0; col < n; ++col) {
    while (true) {
      int piv = -1;
      for (int r = col; r < n; ++r)
        if (rows[r][col] != 0 && (piv < 0 || abs(rows[r][col]) < abs(rows[piv][col]))) piv = r;
      if (piv < 0) throw Error("numberfield", "degenerate ideal lattice");
      std::swap(rows[piv], rows[col]);
      bool done = true;
      for (int r = col + 1; r < n; ++r) {
        if (rows[r][col] == 0) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), rows[r][col].get_mpz_t(), rows[col][col].get_mpz_t());
        for (int k = col; k < n; ++k) rows[r][k] -= q * rows[col][k];
        if (rows[r][col] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[col][col] < 0)
      for (int k = col; k < n; ++k) rows[col][k] = -rows[col][k];
    for (int r = 0; r < col; ++r) {
      mpz_class q;
      mpz_fdiv_q(q.get_mpz_t(), rows[r][col].get_mpz_t(), rows[col][col].get_mpz_t());
      for (int k = col; k < n; ++k) rows[r][k] -= q * rows[col][k];
    }
  }
  h_ = rows;
}

mpz_class ResidueRing::size() const {
  mpz_class s = 1;
  for (size_t i = 0; i < h_.size(); ++i) s *= h_[i][i];
  return s;
}

FieldInteger ResidueRing::reduce(const FieldInteger& a) const {
  if (!a.is_integral()) throw Error("numberfield", "cannot reduce a non-integral element");
  const size_t n = h_.size();
  std::vector<mpz_class> c(n);
  for (size_t i = 0; i < n; ++i) c[i] = a.c[i].get_num();
  for (size_t i = 0; i < n; ++i) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), c[i].get_mpz_t(), h_[i][i].get_mpz_t());
    if (q != 0)
      for (size_t k = i; k < n; ++k) c[k] -= q * h_[i][k];
  }
  FieldInteger r{std::vector<mpq_class>(n)};
  for (size_t i = 0; i < n; ++i) r.c[i] = c[i];
  return r;
}

bool ResidueRing::divides(const FieldInteger& a) const { return reduce(a).is_zero(); }

std::vector<FieldInteger> ResidueRing::elements() const {
  const size_t n = h_.size();
  if (size() > 10'000'000) throw CapError("numberfield", "residue ring too large to enumerate");
  std::vector<long> lim(n);
  for (size_t i = 0; i < n; ++i) lim[i] = h_[i][i].get_si();
  std::vector<FieldInteger> out;
  std::vector<long> c(n, 0);
  while (true) {
    FieldInteger e{std::vector<mpq_class>(n)};
    for (size_t i = 0; i < n; ++i) e.c[i] = mpq_class(c[i]);
    out.push_back(e);
    int k = static_cast<int>(n) - 1;
    while (k >= 0 && c[k] == lim[k] - 1) c[k--] = 0;
    if (k < 0) break;
    ++c[k];
  }
  return out;
}

FieldInteger mod_inverse(const NumberField& F, const FieldInteger& a, const FieldInteger& m) {
  require_euclidean(F);
  if (!a.is_integral() || !m.is_integral() || m.is_zero()) throw Error("numberfield", "mod_inverse needs integers, m != 0");
  ResidueRing R(F, m);
  if (is_unit(F, m)) return F.zero();
  FieldInteger r0 = m, r1 = a, s0 = F.zero(), s1 = F.one();
  while (!r1.is_zero()) {
    FieldInteger r2 = euclid_remainder(F, r0, r1);
    // r2 = r0 - q r1, recover q exactly
    FieldElement q = F.div(F.sub(r0, r2), r1);
    FieldInteger s2 = F.sub(s0, F.mul(q, s1));
    r0 = r1;
    r1 = r2;
    s0 = s1;
    s1 = s2;
  }
  if (!is_unit(F, r0))
    throw NotCoprime("arguments share the common divisor " + normalize_associate(F, r0).str());
  return R.reduce(F.mul(s0, F.inverse(r0)));
}

long long unit_orbit_count(const NumberField& F, const FieldInteger& gamma, const std::vector<double>& T) {
  if (gamma.is_zero()) throw Error("numberfield", "gamma must be nonzero");
  const int P = F.places();
  if (static_cast<int>(T.size()) != P) throw Error("numberfield", "one bound per place expected");
  const int rank = P - 1;
  const auto& units = F.units();
  if (static_cast<int>(units.size()) < rank) throw Error("numberfield", "missing unit data for " + F.name());
  EmbeddedPoint g = F.embed(gamma);
  std::vector<double> lg(P), lt(P);
  for (int v = 0; v < P; ++v) {
    lg[v] = std::log(g.abs(v));
    lt[v] = std::log(T[v]) + 1e-12;
  }
  const int k = rank;
  if (k == 0) {
    for (int v = 0; v < P; ++v)
      if (lg[v] > lt[v]) return 0;
    return F.torsion_order();
  }
  std::vector<std::vector<double>> le(k, std::vector<double>(P));
  double min_step = 1e300, spread = 0.0;
  for (int i = 0; i < k; ++i) {
    EmbeddedPoint u = F.embed(units[i]);
    double mx = 0.0;
    for (int v = 0; v < P; ++v) {
      le[i][v] = std::log(u.abs(v));
      mx = std::max(mx, std::abs(le[i][v]));
    }
    min_step = std::min(min_step, mx);
  }
  for (int v = 0; v < P; ++v) spread += std::abs(lt[v]) + std::abs(lg[v]);
  long long E = static_cast<long long>(std::ceil(2.0 * spread / min_step)) + 2;
  double total = std::pow(2.0 * E + 1.0, k);
  if (total > 1e7) throw CapError("numberfield", "unit exponent search too large");
  long long count = 0;
  std::vector<long long> e(k, -E);
  while (true) {
    bool ok = true;
    for (int v = 0; v < P && ok; ++v) {
      double s = lg[v];
      for (int i = 0; i < k; ++i) s += static_cast<double>(e[i]) * le[i][v];
      ok = s <= lt[v];
    }
    if (ok) ++count;
    int j = k - 1;
    while (j >= 0 && e[j] == E) e[j--] = -E;
    if (j < 0) break;
    ++e[j];
  }
  return count * F.torsion_order();
}

}  // namespace vsum
