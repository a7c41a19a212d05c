#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vsum/bessel.hpp"
#include "vsum/common.hpp"

namespace vsum {

// Smooth bump on the dyadic shell T <= |x| <= Delta T. The profile is 1 on the
// middle `plateau` fraction and ramps through a mollifier-based smooth step.
struct WeightSpec {
  bool complex_place = false;
  double T = 1.0;
  double Delta = 2.0;
  double plateau = 1.0 / 3.0;
  double amplitude = 1.0;
  // complex places: angular factor 1 + angular_amp * cos(angular_mode * (phi - angular_phase))
  int angular_mode = 0;
  double angular_amp = 0.0;
  double angular_phase = 0.0;
};

// 0 for v <= 0, 1 for v >= 1, C-infinity in between.
double smooth_step(double v);
// eta on [0, 1]
double bump_profile(double u, double plateau);

double weight_real(const WeightSpec& w, double x);
double weight_complex(const WeightSpec& w, cplx z);

// f(x) = w(x) e(-rho x) at real places, f(z) = w(z) e(-rho z - conj(rho z)) at complex places.
struct TestFunction {
  WeightSpec w;
  cplx rho{0.0, 0.0};

  cplx real_value(double x) const;
  cplx complex_value(cplx z) const;
  double support_lo() const { return w.T; }
  double support_hi() const { return w.Delta * w.T; }
  bool zero() const { return w.amplitude == 0.0; }
};

struct HankelValue {
  cplx value{0.0, 0.0};
  double err = 0.0;
  long nodes = 0;
};

// Direct transform: composite Gauss-Legendre over supp f with the kernel evaluated
// by contour integration. Panel count is ceil(panel_density * phase turns) + base.
HankelValue hankel_real(const RealKernel& k, const TestFunction& f, double y, double tol,
                        double panel_density = 8.0);

// Complex place, f~(u) = int J(z u) f(z) |dz ^ dzbar| (twice Lebesgue measure),
// via the angular Fourier expansion of f against the j_k series of the kernel.
HankelValue hankel_complex(const BesselParamsComplex& p, const TestFunction& f, cplx u, double tol,
                           double panel_density = 8.0);

struct PlanOptions {
  double h = 0.05;          // step in t = Im s
  double eps = 1e-13;       // spectral cut-off, relative
  int oversample = 8;       // output samples per shortest period
  int max_log2 = 24;
};

// Batch evaluator of f~ at many arguments. With F(s) = int f(x) |x|^{-s} dx, the
// transform is a Fourier integral along Re s = sigma0:
//   f~(y) |y|^{sigma0} = (1/2 pi) int [K_+ F_+ + K_- F_-](sigma0 + it) e^{-it log|y|} dt,
// so both F and the outer integral are done by FFT, then interpolated in log|y|.
class HankelPlan {
 public:
  HankelPlan(const RealKernel& k, const TestFunction& f, const PlanOptions& opt = {});

  cplx operator()(double y) const { return eval(y).value; }
  HankelValue eval(double y) const;
  // Beyond this |y| the transform sits at the FFT noise floor.
  double y_cut() const { return y_cut_; }
  double noise(double y) const;
  double sigma0() const { return sigma0_; }
  double t_max() const { return t_max_; }
  size_t samples() const { return gp_.size(); }

 private:
  cplx interp(const std::vector<cplx>& g, double v, int order) const;

  double sigma0_ = 0.5;
  double v0_ = 0.0, dv_ = 0.0;
  double t_max_ = 0.0;
  double noise_ = 0.0;
  double y_cut_ = 0.0;
  std::vector<cplx> gp_, gn_;  // samples of f~(+-e^v) e^{sigma0 v}
};

struct DecayPoint {
  double y = 0.0;
  cplx value{0.0, 0.0};
  double err = 0.0;
  std::string regime;
};

struct DecayReport {
  std::vector<DecayPoint> points;
  double slope_small = 0.0;   // log|f~| vs log T|y| per regime
  double slope_window = 0.0;
  double slope_tail = 0.0;
  double window_sup = 0.0;    // sup |f~(y)| (|y|/T)^{1/2} over the stationary window
  double small_sup = 0.0;     // same quantity over the small-argument regime
  int tail_points = 0;
  bool window_reached = false;
  bool tail_ok = false;       // tail slope <= -requested order
};

// Regimes: "small" (T|y| <= 1), "window" (rho != 0 stationary window), "tail"
// (T|y| >= tail_start, or above the window), else "mid".
DecayReport decay_scan(const RealKernel& k, const TestFunction& f, const std::vector<double>& y_grid,
                       double tail_order = 2.0, double tail_start = 1e3, double tail_end = 1e5);

std::vector<double> log_grid(double a, double b, int n);

}  // namespace vsum
