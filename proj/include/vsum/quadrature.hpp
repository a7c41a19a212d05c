#pragma once

#include <functional>
#include <vector>

#include "vsum/common.hpp"

namespace vsum {

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1]
  std::vector<double> w;
};

// Cached n-point Gauss-Legendre rule (Newton on P_n, Tricomi initial guesses).
const GaussRule& gauss_legendre(int n);

struct QuadResult {
  cplx value{0.0, 0.0};
  double err = 0.0;
  long evals = 0;
};

struct AdaptiveOptions {
  double abstol = 1e-12;
  double reltol = 0.0;
  int max_intervals = 20000;
  int initial_panels = 1;
};

// Globally adaptive Gauss-Kronrod (7/15) on [a, b]; the interval with the
// largest error estimate is bisected first.
QuadResult integrate_gk(const std::function<cplx(double)>& f, double a, double b,
                        const AdaptiveOptions& opt = {});

// Fixed composite Gauss-Legendre with `panels` equal panels of `order` nodes.
cplx integrate_gl(const std::function<cplx(double)>& f, double a, double b, int panels, int order);

}  // namespace vsum
