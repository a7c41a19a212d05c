#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace vsum {

using cplx = std::complex<double>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

// Errors carry the module that raised them so the CLI can report provenance.
class Error : public std::runtime_error {
 public:
  Error(std::string module, const std::string& what)
      : std::runtime_error(module + ": " + what), module_(std::move(module)) {}
  const std::string& module() const { return module_; }

 private:
  std::string module_;
};

class PoleError : public Error {
 public:
  explicit PoleError(const std::string& what) : Error("bessel", what) {}
};

class CapError : public Error {
 public:
  CapError(std::string module, const std::string& what) : Error(std::move(module), what) {}
};

class UnsupportedField : public Error {
 public:
  explicit UnsupportedField(const std::string& what) : Error("numberfield", what) {}
};

class NotCoprime : public Error {
 public:
  explicit NotCoprime(const std::string& what) : Error("numberfield", what) {}
};

class ToleranceError : public Error {
 public:
  ToleranceError(std::string module, const std::string& what) : Error(std::move(module), what) {}
};

// e(x) = exp(2 pi i x)
inline cplx e(double x) {
  double r = x - std::floor(x);
  return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

}  // namespace vsum
