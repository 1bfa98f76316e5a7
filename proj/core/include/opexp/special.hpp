// special.hpp: modified Bessel functions of the first kind, integer order.

#pragma once

namespace opexp {

// Arguments above this bound overflow double precision.
inline constexpr double kBesselMaxArgument = 700.0;

// I_k(x) = sum_n (x/2)^{k+2n} / (n! Gamma(k+n+1)), summed until the relative
// term drops below 1e-16. Throws RangeError for x > kBesselMaxArgument and
// OutOfRange for k < 0 or x < 0.
double bessel_i(int k, double x);

// log I_k(x); finite wherever I_k(x) > 0, -inf for I_k(0), k >= 1.
// Has no upper argument bound.
double log_bessel_i(int k, double x);

} // namespace opexp
