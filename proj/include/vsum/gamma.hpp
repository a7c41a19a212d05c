#pragma once

#include "vsum/common.hpp"

namespace vsum {

// log Gamma(z) on the principal sheet; throws PoleError within 1e-8 of a pole.
cplx log_gamma(cplx z);

// True when z is within `tol` of 0, -1, -2, ...
bool near_gamma_pole(cplx z, double tol = 1e-8);

// log sin(pi z), stable for large |Im z|.
cplx log_sin_pi(cplx z);
cplx log_cos_pi(cplx z);

}  // namespace vsum
