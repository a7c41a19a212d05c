#pragma once

#include <cstdint>
#include <memory>
#include <shared_mutex>
#include <string>
#include <vector>

#include "vsum/common.hpp"
#include "vsum/numberfield.hpp"

namespace vsum {

using i128 = __int128;

std::string to_string(i128 v);

// tau(n) from q prod (1 - q^k)^24 = q * J(q)^8, J = sum (-1)^j (2j+1) q^{j(j+1)/2}.
class TauTable {
 public:
  explicit TauTable(uint64_t cap = 1'000'000) : cap_(cap) {}
  i128 tau(uint64_t n) const;
  void ensure(uint64_t n) const;
  uint64_t size() const;
  uint64_t cap() const { return cap_; }
  void set_cap(uint64_t cap) { cap_ = cap; }

  // Flat binary cache: two little-endian int64 words (low, high) per n >= 1, plus a JSON sidecar.
  void save(const std::string& path) const;
  void load(const std::string& path);

 private:
  uint64_t cap_;
  mutable std::shared_mutex mu_;
  mutable std::vector<i128> t_;  // t_[n], t_[0] unused
};

TauTable& shared_tau_table();

i128 tau(uint64_t n);
double gl2_lambda(uint64_t n);
double gl3_sym2(uint64_t m, uint64_t n);

// Schur value s_{(a+b, a, 0)} at {x, 1, 1/x} from e1 = e2 = L^2 - 1; used for A(p^a, p^b).
double sym2_local(double lambda_p, int a, int b);

class CoefficientProvider {
 public:
  virtual ~CoefficientProvider() = default;
  virtual int rank() const = 0;
  virtual bool self_dual() const { return true; }
  virtual std::string name() const = 0;
  // A(n) for rank 2, A(1, n) for rank 3 (n >= 1)
  virtual double a(uint64_t n) const = 0;
  virtual double a2(uint64_t m, uint64_t n) const;
  virtual void reserve(uint64_t) const {}
  // Value at a field integer: depends only on |N(gamma)|.
  double at(const NumberField& F, const FieldInteger& g) const;
  double at2(const NumberField& F, const FieldInteger& g1, const FieldInteger& g2) const;
};

class DeltaProvider : public CoefficientProvider {
 public:
  int rank() const override { return 2; }
  std::string name() const override { return "delta"; }
  double a(uint64_t n) const override;
  void reserve(uint64_t n) const override;

 private:
  mutable std::shared_mutex mu_;
  mutable std::vector<double> lam_;
};

class Sym2DeltaProvider : public CoefficientProvider {
 public:
  int rank() const override { return 3; }
  std::string name() const override { return "sym2delta"; }
  double a(uint64_t n) const override;
  double a2(uint64_t m, uint64_t n) const override;
  void reserve(uint64_t n) const override;

 private:
  DeltaProvider delta_;
  mutable std::shared_mutex mu_;
  mutable std::vector<double> a1_;  // A(1, n)
};

// Hecke-multiplicative coefficients from seeded unitary Satake angles per rational prime.
class SyntheticProvider : public CoefficientProvider {
 public:
  SyntheticProvider(int rank, uint64_t seed) : rank_(rank), seed_(seed) {}
  int rank() const override { return rank_; }
  std::string name() const override { return "synthetic"; }
  double a(uint64_t n) const override { return rank_ == 2 ? local_product(1, n) : local_product(1, n); }
  double a2(uint64_t m, uint64_t n) const override { return local_product(m, n); }
  double angle(uint64_t p) const;

 private:
  double local_product(uint64_t m, uint64_t n) const;
  int rank_;
  uint64_t seed_;
};

class ConstantProvider : public CoefficientProvider {
 public:
  explicit ConstantProvider(int rank = 2) : rank_(rank) {}
  int rank() const override { return rank_; }
  std::string name() const override { return "constant"; }
  double a(uint64_t) const override { return 1.0; }
  double a2(uint64_t, uint64_t) const override { return 1.0; }

 private:
  int rank_;
};

std::unique_ptr<CoefficientProvider> make_provider(const std::string& name, uint64_t seed = 1);

struct RankinAverage {
  double sum_sq = 0.0;
  double sum_abs = 0.0;
  double ratio_sq = 0.0;   // sum_sq / X
  double ratio_abs = 0.0;  // sum_abs / X
};

RankinAverage rankin_average(const CoefficientProvider& p, uint64_t X);

struct HeckeReport {
  long long pairs = 0;
  long long violations = 0;
  uint64_t first_m = 0, first_n = 0;  // first violating pair
};

// tau(m) tau(n) = sum over d | (m, n) of d^11 tau(mn / d^2), all m, n <= M, exact.
HeckeReport hecke_check(uint64_t M);

// integer factorisation; uses a smallest-prime-factor sieve below its current size
std::vector<std::pair<uint64_t, int>> factorize(uint64_t n);
void ensure_sieve(uint64_t n);

}  // namespace vsum
