#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vsum/bessel.hpp"
#include "vsum/coeffs.hpp"
#include "vsum/hankel.hpp"
#include "vsum/numberfield.hpp"

namespace vsum {

// Voronoi instance over Q. alpha/beta is reduced to lowest terms with beta > 0.
struct VoronoiInstance {
  int rank = 2;
  std::shared_ptr<const CoefficientProvider> provider;
  BesselParamsReal kernel;
  long long alpha = 0, beta = 1;
  TestFunction f;
  double tol = 1e-4;                 // relative
  long long max_terms = 1'000'000;   // per divisor block on the dual side
  long long min_terms = 0;           // force at least this many dual terms
  int gammap_sign = 1;               // GL3: divisor generators d or -d
};

VoronoiInstance make_gl2_instance(long long alpha, long long beta, double T, double rho, double tol = 1e-4);
VoronoiInstance make_gl3_instance(long long alpha, long long beta, double T, double rho, double tol = 1e-2);

struct DivisorTerm {
  long long d = 1;
  cplx value{0.0, 0.0};
  long long terms = 0;
  double abs_sum = 0.0;
  cplx window_value{0.0, 0.0};  // terms with dual argument inside the stationary window
  double window_abs = 0.0;
  long long window_terms = 0;
};

struct RhsResult {
  cplx value{0.0, 0.0};
  double tail = 0.0;
  long long terms = 0;
  std::vector<DivisorTerm> blocks;  // GL2: a single block with d = 1
  double window_lo = 0.0, window_hi = 0.0;
  double window_abs = 0.0;
};

// Dual arguments y where f~ is largest: around |rho|^r x^{r-1} for x in the
// support, or y <~ 1/T when the modulation is negligible.
std::pair<double, double> stationary_window(const TestFunction& f, int r);

struct VoronoiReport {
  cplx lhs{0.0, 0.0};
  cplx rhs{0.0, 0.0};
  double tail = 0.0;
  double abs_residual = 0.0;
  double rel_residual = 0.0;
  long long lhs_terms = 0;
  long long rhs_terms = 0;
  double seconds = 0.0;
  bool pass = false;
  long long alpha = 0, beta = 1, abar = 0;
  std::vector<DivisorTerm> blocks;
};

// sum over n != 0 of A(|n|) e(alpha n / beta) f(n)
cplx lhs_sum(const VoronoiInstance& inst, long long* terms = nullptr);

// (1/beta) sum_{n != 0} A(|n|) e(-abar n / beta) f~(n / beta^2)
RhsResult rhs_sum_gl2(const VoronoiInstance& inst, const HankelPlan& plan, double abs_tol);
// sum_{d | beta} (d / beta^2) sum_{n != 0} A(d, |n|) S(1, abar n; beta / d) f~(n d^2 / beta^3)
RhsResult rhs_sum_gl3(const VoronoiInstance& inst, const HankelPlan& plan, double abs_tol);

VoronoiReport verify_identity(const VoronoiInstance& inst);

// Structural mode over a number field with only real places: product test
// function over the places, dual side over gamma = c / beta^2, c in a box.
struct FieldVoronoiInstance {
  const NumberField* field = nullptr;
  std::shared_ptr<const CoefficientProvider> provider;
  BesselParamsReal kernel;  // same at every real place
  FieldInteger alpha, beta;
  std::vector<TestFunction> f;  // one per place
  int dual_box = 40;            // |coordinates| of c
};

cplx lhs_sum_field(const FieldVoronoiInstance& inst, long long* terms = nullptr);
cplx rhs_sum_field_gl2(const FieldVoronoiInstance& inst, long long* terms = nullptr);

}  // namespace vsum
