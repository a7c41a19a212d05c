#include "vsum/gamma.hpp"

#include <cmath>

namespace vsum {

namespace {

// B_{2k} / (2k (2k-1)) for k = 1..10
constexpr double kStirling[10] = {
    1.0 / 12.0,           -1.0 / 360.0,         1.0 / 1260.0,        -1.0 / 1680.0,
    1.0 / 1188.0,         -691.0 / 360360.0,    1.0 / 156.0,         -3617.0 / 122400.0,
    43867.0 / 244188.0,   -174611.0 / 125400.0,
};

cplx expm1c(cplx z) {
  double a = z.real(), b = z.imag();
  double sb2 = std::sin(0.5 * b);
  return {std::expm1(a) * std::cos(b) - 2.0 * sb2 * sb2, std::exp(a) * std::sin(b)};
}

cplx log_gamma_right(cplx z) {
  cplx shift = 0.0;
  while (std::abs(z) < 17.0) {
    shift += std::log(z);
    z += 1.0;
  }
  cplx inv = 1.0 / z, inv2 = inv * inv;
  cplx series = 0.0, p = inv;
  for (double c : kStirling) {
    series += c * p;
    p *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(kTwoPi) + series - shift;
}

}  // namespace

bool near_gamma_pole(cplx z, double tol) {
  if (z.real() > 0.5) return false;
  double n = std::round(z.real());
  return std::abs(z - cplx(n, 0.0)) < tol;
}

cplx log_sin_pi(cplx z) {
  if (z.imag() < 0.0) return std::conj(log_sin_pi(std::conj(z)));
  // sin(w) = -e^{-iw} (1 - e^{2iw}) / (2i)
  double n = std::round(z.real());
  cplx zr = z - n;  // sin(pi z) = (-1)^n sin(pi zr)
  cplx v = -expm1c(kTwoPi * kI * zr);
  cplx out = -kI * kPi * zr + std::log(v) + std::log(cplx(0.0, 0.5));
  if (static_cast<long long>(n) % 2 != 0) out += cplx(0.0, kPi);
  return out;
}

cplx log_cos_pi(cplx z) { return log_sin_pi(z + 0.5); }

cplx log_gamma(cplx z) {
  if (near_gamma_pole(z)) throw PoleError("Gamma pole near z = " + std::to_string(z.real()));
  if (z.real() < 0.5) {
    return std::log(kPi) - log_sin_pi(z) - log_gamma_right(1.0 - z);
  }
  return log_gamma_right(z);
}

}  // namespace vsum
