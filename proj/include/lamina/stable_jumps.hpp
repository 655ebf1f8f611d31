#pragma once

#include <cstdint>
#include <vector>

#include "lamina/rng.hpp"

namespace lamina {

// Jumps of a beta-stable subordinator on [0,1] above the cutoff delta,
// generated in descending order, plus the compensating mean of the neglected
// small jumps. T1 truncates the subordinator value at time 1; Delta1 is the
// largest jump (0 on the vanishing-probability event of no jump above delta).
struct StableJumpSample {
  double beta = 0.0;
  double delta = 0.0;
  std::vector<double> jumps;  // descending, all > delta
  double small_mass = 0.0;    // C_beta * delta^(1-1/beta) / (1-1/beta)
  double T1 = 0.0;
  double Delta1 = 0.0;
};

// Levy intensity constant C_beta = 1 / (beta * Gamma(1 - 1/beta)).
double stable_levy_constant(double beta);

// Poisson point process with intensity C_beta dr / r^(1+1/beta) on (delta, oo),
// sampled by inverting the tail of the intensity at unit-rate arrival times,
// which yields the jumps already sorted. Requires beta in (1,2) and
// delta in (0,1); throws config_error otherwise.
StableJumpSample sample_stable_jumps(double beta, double delta,
                                     RandomStream stream);

// In-place variant reusing an Rng mid-stream (Monte Carlo loops).
StableJumpSample sample_stable_jumps(double beta, double delta, Rng& rng);

}  // namespace lamina
