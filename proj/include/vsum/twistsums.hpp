#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vsum/coeffs.hpp"
#include "vsum/hankel.hpp"
#include "vsum/numberfield.hpp"
#include "vsum/voronoi.hpp"

namespace vsum {

// Sharp mode sums over O \ {0} inside the closed box max|c_j| <= T/2 of the
// integral basis; smooth mode sums over supp w with one WeightSpec per place.
struct TwistQuery {
  const NumberField* field = nullptr;
  const CoefficientProvider* provider = nullptr;
  EmbeddedPoint theta;
  double T = 1.0;
  bool smooth = false;
  std::vector<WeightSpec> w;
  size_t cap = 50'000'000;
};

cplx sharp_sum(const TwistQuery& q);
cplx smooth_sum(const TwistQuery& q);

// Over Q the sums take a plain theta.
cplx sharp_sum_q(const CoefficientProvider& p, double theta, double T);
cplx smooth_sum_q(const CoefficientProvider& p, double theta, const WeightSpec& w);

// Sum over T <= |n| <= 2T of A(|n|) e(theta n).
cplx annulus_sum_q(const CoefficientProvider& p, double theta, double T);

struct ScanReport {
  std::vector<double> T;
  std::vector<double> theta;
  std::vector<cplx> values;    // values[i * theta.size() + k] = S_{theta_k}(T_i)
  std::vector<double> max_abs; // per T, over theta
  std::vector<size_t> argmax;
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double ci = 0.0;             // half-width of the 95% interval
  int n_points = 0;

  cplx at(size_t i, size_t k) const { return values[i * theta.size() + k]; }
};

// 16 rationals of small denominator followed by `irrationals` golden-ratio steps.
std::vector<double> default_theta_grid(int irrationals = 48);
std::vector<double> dyadic_grid(int lo_log2, int hi_log2);

ScanReport exponent_scan(const CoefficientProvider& p, const std::vector<double>& theta_grid,
                         const std::vector<double>& T_grid, int threads = 0);

struct LinearFit {
  double slope = 0.0, intercept = 0.0, stderr_slope = 0.0, ci = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

// g(t) = 1 for |t| <= X/2, linear down to 0 at |t| = X/2 + lambda.
class SmoothingKernel {
 public:
  SmoothingKernel(const NumberField& F, double X, double lambda = 1.0);

  const NumberField& field() const { return *F_; }
  double X() const { return X_; }
  double lambda() const { return lambda_; }
  double g(double t) const;
  double ghat(double xi) const;     // int g(t) e(-t xi) dt, closed form
  double ghat_quad(double xi) const;  // the same by Gauss-Legendre on the support
  // h_X(x) = |det E| |det I| prod_j ghat((E^t I x)_j), x given by its flat real coordinates
  double h(const std::vector<double>& flat) const;
  // int h_X(x) e(Tr(x gamma)) dx for a lattice point gamma, read off from its embedding
  double dual(const std::vector<long long>& c) const;
  // ||ghat||_1 with a bound on the truncation error
  double ghat_l1(double* err = nullptr) const;
  double l1(double* err = nullptr) const;  // ||h_X||_1 = ||ghat||_1^N

 private:
  const NumberField* F_;
  double X_, lambda_, A_;
  std::vector<std::vector<double>> M_;  // E^t I
  double C_ = 1.0;
};

struct DualCheck {
  long long points = 0;
  long long violations = 0;
  double max_err = 0.0;
};

// Compares dual() with the indicator of X Pi over all lattice points with |c_j| <= box.
DualCheck dual_property_check(const SmoothingKernel& k, long long box);

struct ParsevalReport {
  double mean_sq = 0.0;   // average of |S_theta(T)|^2 over theta = k / 4T
  double coeff_sq = 0.0;  // sum over 0 < |n| <= T/2 of A(|n|)^2
  double rel_diff = 0.0;
  int samples = 0;
};

ParsevalReport parseval_check(const CoefficientProvider& p, double T, int threads = 0);

struct AnnulusComparison {
  cplx sharp{0.0, 0.0};    // annulus-restricted sharp sum
  cplx smooth{0.0, 0.0};   // w-weighted full sum
  double diff = 0.0;
  long long outside = 0;   // lattice points outside the annulus where w != 0
};

// w has support [T - margin, 2T + margin] and is 1 on [T, 2T].
AnnulusComparison annulus_comparison(const CoefficientProvider& p, double theta, double T, double margin = 0.5);

// Annulus sum over T <= |n| <= 2T rebuilt from smooth sums at shifted theta,
// weighted by the difference of two smoothing kernels (X = 4T and 2T - 2).
struct AssemblyReport {
  cplx sharp{0.0, 0.0};
  cplx assembled{0.0, 0.0};
  double diff = 0.0;
  double envelope = 0.0;
  bool within = false;
};

AssemblyReport sharp_from_smooth(const CoefficientProvider& p, double theta, long long T);

struct PipelineReport {
  int rank = 2;
  double theta = 0.0, T = 0.0, Q = 0.0;
  long long a_breve = 0, b_breve = 1;  // Dirichlet approximation
  double approx_residual = 0.0;        // |b_breve theta - a_breve|
  bool approx_ok = false;
  long long alpha = 0, beta = 1, delta = 1;
  double eta = 0.0;                    // theta - alpha / beta
  cplx lhs{0.0, 0.0}, rhs{0.0, 0.0};
  double rel_residual = 0.0;
  long long rhs_terms = 0, window_terms = 0;
  double window_lo = 0.0, window_hi = 0.0;
  double window_abs = 0.0;             // sum of |term| over the stationary window
  double tail_abs = 0.0;               // sum of |term| elsewhere
  double dominant_abs = 0.0;           // the larger of the two
  double scale = 0.0;                  // dominant_abs / T^{1/2} (r = 2) or T^{3/4} (r = 3)
  std::vector<DivisorTerm> divisors;
  std::vector<double> predicted;       // beta^{3/2} / d per divisor (r = 3)
  double seconds = 0.0;
};

// Smoothed sum over [T, 2T] traced through approximation at Q = sqrt T,
// coprime reduction and the dual side of the Voronoi formula.
PipelineReport pipeline_bound_check(std::shared_ptr<const CoefficientProvider> p, double theta, double T);

}  // namespace vsum
