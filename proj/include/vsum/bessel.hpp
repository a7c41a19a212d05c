#pragma once

#include <functional>
#include <limits>
#include <vector>

#include "vsum/common.hpp"

namespace vsum {

struct BesselParamsReal {
  int rank = 2;
  std::vector<cplx> mu;
  std::vector<int> delta;
};

struct BesselParamsComplex {
  int rank = 2;
  std::vector<cplx> mu;
  std::vector<int> m;
  int m_max = 60;
};

// Ramanujan Delta (weight 12) and its symmetric square.
BesselParamsReal delta_params();
BesselParamsReal sym2_delta_params();

struct ContourSpec {
  double sigma0 = std::numeric_limits<double>::quiet_NaN();  // NaN: automatic
  double sigma1 = -1.0;
  double bend = std::numeric_limits<double>::quiet_NaN();  // half height of the vertical piece
  double tail_angle = 0.75 * kPi;
};

struct KernelValue {
  cplx value{0.0, 0.0};
  double err = 0.0;
  long evals = 0;
};

cplx gamma_factor_real(cplx s, int delta);
cplx gamma_factor_complex(cplx s, int m);

// Mellin symbol of J_{(mu,delta)}: J(+-x) = (1/2 pi i) int K_{+-}(s) x^{-s} ds, x > 0,
// with K_{+-} = (G_delta +- G_{delta+e}) / 2.
class RealKernel {
 public:
  enum class Form { Gl2Discrete, Gl2Principal, PairTimesGl1, Generic };

  explicit RealKernel(BesselParamsReal p);

  // K_sign(s) * x^{-s}, with logx = log x.
  cplx integrand(cplx s, int sign, double logx) const;
  cplx symbol(cplx s, int sign) const { return integrand(s, sign, 0.0); }

  double pole_max() const { return pole_max_; }
  bool negative_vanishes() const { return form_ == Form::Gl2Discrete; }
  Form form() const { return form_; }
  const BesselParamsReal& params() const { return p_; }
  double max_imag_mu() const;

 private:
  BesselParamsReal p_;
  Form form_ = Form::Generic;
  double pole_max_ = 0.0;
  // discrete pair data
  int pair_m_ = 0;
  cplx pair_center_ = 0.0;
  int single_ = -1;  // index of the GL1 factor next to a pair
};

void validate(const BesselParamsReal& p);
void validate(const BesselParamsComplex& p);

// Generic Mellin-Barnes integral (1/2 pi i) int F(s) ds along the bent contour.
// `rate_rank` and `logx` only steer the panel layout and bend height.
KernelValue contour_integral(const std::function<cplx(cplx)>& F, double sigma0, double sigma1,
                             double t_bend, double tail_angle, double tol, int rank, double logx);

KernelValue bessel_kernel_real(const RealKernel& k, double x, double tol, const ContourSpec& c = {});
KernelValue bessel_kernel_real(const BesselParamsReal& p, double x, double tol, const ContourSpec& c = {});

// j_{(mu,m)}(x) = (1/2 pi i) int G_{(mu,m)}(s) x^{-2s} ds for x > 0.
KernelValue bessel_j_complex(const std::vector<cplx>& mu, const std::vector<int>& m, double x, double tol,
                             const ContourSpec& c = {});

struct ComplexKernelValue {
  cplx value{0.0, 0.0};
  double err = 0.0;
  int terms = 0;  // highest |k| used in the Fourier series
};

ComplexKernelValue bessel_kernel_complex(const BesselParamsComplex& p, cplx z, double tol, int m_max = -1);

struct AsymptoticReport {
  double frequency_pos = 0.0;        // dominant frequency of J(+x^r), cycles per unit x
  double frequency_neg = 0.0;        // same for J(-x^r), NaN when it vanishes
  double envelope_sup = 0.0;         // sup |J(x^r)| x^{r-1}
  double envelope_inf = 0.0;         // inf of the local maxima of |J(x^r)| x^{r-1}
  std::vector<double> neg_decay;     // |J(-x^r)| on the grid (r = 2 only)
  bool neg_exponential_ok = true;
};

// Grid must be uniform; samples J(+-x^r) and locates the spectral peak.
AsymptoticReport asymptotic_check_real(const BesselParamsReal& p, const std::vector<double>& x_grid,
                                       double tol = 1e-10);

// Peak frequency (cycles per unit) of samples g on a uniform grid, refined on the continuous DTFT.
double dominant_frequency(const std::vector<double>& x, const std::vector<cplx>& g, double fmin, double fmax);

}  // namespace vsum
