// expm.hpp — dense matrix exponential by scaling and squaring of a Taylor series

#pragma once

#include "wormdec/fock.hpp"

namespace wormdec {

// exp(a). The argument is scaled by 2^-s until its 1-norm is at most 1/2, the
// Taylor series is summed until the next term falls below `tail_tol` relative
// to the partial sum, and the result is squared s times.
Matrix expm_scaling_squaring(const Matrix& a, double tail_tol = 1e-13);

}  // namespace wormdec
