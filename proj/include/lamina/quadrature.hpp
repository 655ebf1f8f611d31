#pragma once

#include <functional>

namespace lamina {

struct QuadratureSpec {
  double rel_tol = 1e-10;
  int max_subdivisions = 4000;
};

struct QuadResult {
  double value = 0.0;
  double abs_error = 0.0;
  int subdivisions = 0;
  bool converged = false;
};

// Globally adaptive Gauss-Kronrod 7/15 on a finite interval. Integrands with
// endpoint singularities must be transformed analytically by the caller
// before this is applied; this routine assumes the integrand is finite on
// [a, b].
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec = {});

// Same, but throws numerical_error when the error target is not met.
double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, const QuadratureSpec& spec = {});

}  // namespace lamina
