#pragma once

namespace lamina {

// Gamma function for x > 0. Lanczos approximation, relative accuracy around
// 1e-13 on the positive axis. Throws config_error for x <= 0.
double gamma_fn(double x);

// Bessel function of the first kind J1. Ascending series below |x| = 12,
// Hankel asymptotic expansion beyond; absolute accuracy better than 1e-10 on
// [0, 10].
double bessel_j1(double x);

}  // namespace lamina
