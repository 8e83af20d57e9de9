#pragma once

#include <complex>

namespace decoh {

// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
// Rational (Weideman, N = 40) expansion for |z| < 10, Laplace continued fraction beyond;
// the lower half plane is reached through w(z) = 2 exp(-z^2) - w(-z).
std::complex<double> faddeeva_w(std::complex<double> z);

}  // namespace decoh
