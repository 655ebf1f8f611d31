#pragma once

#include <cstdint>
#include <vector>

#include "lamina/rng.hpp"

namespace lamina {

// Discretized normalized Brownian excursion on the uniform grid {0,1/n,...,1}.
// values has n+1 entries with values[0] == values[n] == 0 and strictly
// positive interior. Interior ties are not perturbed; downstream comparisons
// break them lexicographically by index.
struct ExcursionPath {
  std::int64_t n = 0;
  std::vector<double> values;
  std::int64_t rotation = 0;  // bridge argmin index used by the rotation
};

// Gaussian Brownian bridge on {0,...,n}, scaled so B_k ~ B(k/n) with B(1)=0.
// Returned vector has n+1 entries, first and last exactly zero.
std::vector<double> brownian_bridge(std::int64_t n, Rng& rng);

// Bridge plus cyclic rotation at the bridge argmin (smallest index on the
// zero-probability event of a tie), yielding a nonnegative path with zero
// endpoints. Throws config_error for n < 2.
ExcursionPath sample_brownian_excursion(std::int64_t n, RandomStream stream);

// Trapezoid integral of the path over [0,1].
double path_integral(const ExcursionPath& path);

}  // namespace lamina
