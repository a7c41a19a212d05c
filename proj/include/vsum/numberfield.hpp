#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "vsum/common.hpp"

namespace vsum {

// Coordinates over the integral basis; a field integer has integral coordinates.
struct FieldElement {
  std::vector<mpq_class> c;

  FieldElement() = default;
  explicit FieldElement(std::vector<mpq_class> coords) : c(std::move(coords)) {}
  static FieldElement from_ints(const std::vector<long long>& v);

  size_t dim() const { return c.size(); }
  bool is_zero() const;
  bool is_integral() const;
  std::vector<long long> to_ints() const;  // requires integral coordinates that fit
  std::string str() const;
  bool operator==(const FieldElement& o) const { return c == o.c; }
};

using FieldInteger = FieldElement;

struct EmbeddedPoint {
  std::vector<double> real;  // one per real place
  std::vector<cplx> cpx;     // one per complex place (Im > 0 representative)

  int places() const { return static_cast<int>(real.size() + cpx.size()); }
  double module(int v) const;     // |x| at real places, |x|^2 at complex places
  double abs(int v) const;        // |x| at any place
  double trace() const;           // sum of local traces
  double norm() const;            // product of modules
};

struct FieldConfig {
  std::string name;
  std::vector<long long> min_poly;          // c0..cN, monic
  std::vector<std::vector<mpq_class>> basis;  // power-basis coordinates of each basis element
  std::vector<std::vector<long long>> units;  // fundamental units over the basis
  int torsion = 2;
  bool norm_euclidean = false;
};

class NumberField {
 public:
  explicit NumberField(const FieldConfig& cfg);
  static NumberField rationals();
  static NumberField load(const std::string& json_path);
  static NumberField from_json_text(const std::string& text);

  const std::string& name() const { return name_; }
  int degree() const { return n_; }
  int r1() const { return r1_; }
  int r2() const { return r2_; }
  int places() const { return r1_ + r2_; }
  bool norm_euclidean() const { return norm_euclidean_; }
  int torsion_order() const { return torsion_; }
  const std::vector<FieldElement>& units() const { return units_; }
  const std::vector<FieldElement>& torsion_units() const { return torsion_units_; }
  const std::vector<long long>& min_poly() const { return poly_; }

  // sigma_v(beta_j)
  cplx embedding(int v, int j) const { return emb_[v][j]; }
  // Real N x N matrix: rows are the real coordinates of F_inf (Re, Im at complex places).
  const std::vector<std::vector<double>>& real_embedding() const { return remb_; }
  double root_residual() const { return root_residual_; }
  // max_v sum_j |sigma_v(beta_j)|
  double c_f() const { return c_f_; }

  FieldElement zero() const;
  FieldElement one() const { return one_; }
  FieldElement from_rational(const mpq_class& q) const;
  FieldElement add(const FieldElement& a, const FieldElement& b) const;
  FieldElement sub(const FieldElement& a, const FieldElement& b) const;
  FieldElement neg(const FieldElement& a) const;
  FieldElement mul(const FieldElement& a, const FieldElement& b) const;
  FieldElement inverse(const FieldElement& a) const;
  FieldElement div(const FieldElement& a, const FieldElement& b) const;

  // Column j holds the coordinates of a * beta_j.
  std::vector<std::vector<mpq_class>> mult_matrix(const FieldElement& a) const;
  std::pair<mpq_class, mpq_class> norm_trace(const FieldElement& a) const;
  mpq_class norm(const FieldElement& a) const { return norm_trace(a).first; }
  mpq_class trace(const FieldElement& a) const { return norm_trace(a).second; }

  EmbeddedPoint embed(const FieldElement& a) const;
  EmbeddedPoint embed_ints(const std::vector<long long>& c) const;
  // Real coordinates y of a point of F_inf in the basis (x = sum y_j sigma(beta_j)).
  std::vector<double> coordinates(const EmbeddedPoint& x) const;
  EmbeddedPoint make_point(const std::vector<double>& flat) const;  // r1 reals then (re, im) pairs

  void check(const FieldElement& a) const;

 private:
  void build();

  std::string name_;
  int n_ = 1, r1_ = 1, r2_ = 0;
  std::vector<long long> poly_;
  std::vector<std::vector<mpq_class>> basis_, basis_inv_;  // basis_inv_: power coords -> basis coords
  std::vector<std::vector<std::vector<mpq_class>>> mul_;   // mul_[i][j] = coords of beta_i beta_j
  std::vector<std::vector<cplx>> emb_;
  std::vector<std::vector<double>> remb_, remb_inv_;
  FieldElement one_;
  std::vector<FieldElement> units_, torsion_units_;
  int torsion_ = 2;
  bool norm_euclidean_ = false;
  double root_residual_ = 0.0;
  double c_f_ = 1.0;
};

// Lattice points with max_j |c_j| <= T/2, lexicographic order.
std::vector<std::vector<long long>> enumerate_lattice(const NumberField& F, double T, bool exclude_zero,
                                                      size_t cap = 50'000'000);

// Bounds on |c_j| for points of F_inf with |x_v| <= place_bounds[v].
std::vector<double> coordinate_bounds(const NumberField& F, const std::vector<double>& place_bounds);

struct Approximation {
  FieldInteger alpha, beta;
  std::vector<double> residual;   // |beta_v theta_v - alpha_v| per place
  std::vector<double> beta_abs;   // |beta|_v per place
  double quality = 0.0;           // max_v Q * residual_v
  double c_f = 0.0;
  bool bounds_ok = false;         // |beta|_v <= C_F Q and residual_v <= C_F / Q
};

Approximation dirichlet_approx(const NumberField& F, const EmbeddedPoint& theta, double Q,
                               size_t cap = 10'000'000);

struct DirichletSweep {
  long long trials = 0;
  long long violations = 0;
  double max_quality = 0.0;     // max over trials of max_v Q |beta theta - alpha|_v
  double max_beta_ratio = 0.0;  // max |beta|_v / (C_F Q)
};

// theta with basis coordinates uniform in [0, 1), drawn from mt19937_64(seed).
DirichletSweep dirichlet_sweep(const NumberField& F, double Q, int trials, uint64_t seed, int threads = 0);

struct CoprimeSplit {
  FieldInteger alpha, beta, delta;
};

FieldInteger field_gcd(const NumberField& F, const FieldInteger& a, const FieldInteger& b);
CoprimeSplit make_coprime(const NumberField& F, const FieldInteger& a, const FieldInteger& b);

// Residues modulo the ideal (m): Hermite normal form of the lattice m*O.
class ResidueRing {
 public:
  ResidueRing(const NumberField& F, const FieldInteger& m);
  mpz_class size() const;                               // |N(m)|
  FieldInteger reduce(const FieldInteger& a) const;     // canonical representative
  bool divides(const FieldInteger& a) const;            // m | a
  std::vector<FieldInteger> elements() const;           // lexicographic order of representatives
  const std::vector<std::vector<mpz_class>>& hnf() const { return h_; }

 private:
  const NumberField* F_;
  FieldInteger m_;
  std::vector<std::vector<mpz_class>> h_;  // upper triangular rows
};

bool divides(const NumberField& F, const FieldInteger& d, const FieldInteger& a);
bool is_unit(const NumberField& F, const FieldInteger& a);
FieldInteger mod_inverse(const NumberField& F, const FieldInteger& a, const FieldInteger& m);

// #{gamma * eps : eps unit} with |sigma_v(gamma eps)| <= T_v for every place.
long long unit_orbit_count(const NumberField& F, const FieldInteger& gamma, const std::vector<double>& T);

}  // namespace vsum
