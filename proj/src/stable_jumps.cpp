#include "lamina/stable_jumps.hpp"

#include <cmath>
#include <string>

#include "lamina/errors.hpp"
#include "lamina/special.hpp"

namespace lamina {

double stable_levy_constant(double beta) {
  return 1.0 / (beta * gamma_fn(1.0 - 1.0 / beta));
}

StableJumpSample sample_stable_jumps(double beta, double delta, Rng& rng) {
  if (!(beta > 1.0 && beta < 2.0)) {
    throw config_error("stable index must lie in (1,2), got beta=" +
                       std::to_string(beta));
  }
  if (!(delta > 0.0 && delta < 1.0)) {
    throw config_error("jump cutoff must lie in (0,1), got delta=" +
                       std::to_string(delta));
  }

  const double inv_beta = 1.0 / beta;
  const double gamma_tail = gamma_fn(1.0 - inv_beta);
  const double c_beta = 1.0 / (beta * gamma_tail);

  StableJumpSample sample;
  sample.beta = beta;
  sample.delta = delta;
  sample.small_mass = c_beta * std::pow(delta, 1.0 - inv_beta) / (1.0 - inv_beta);

  // Tail of the intensity: Lambda(r) = r^(-1/beta) / Gamma(1-1/beta). Mapping
  // unit-rate arrival times through Lambda^{-1} gives the atoms in descending
  // order; stop at the first one at or below delta.
  double arrival = 0.0;
  for (;;) {
    arrival += rng.exponential(1.0);
    const double r = std::pow(gamma_tail * arrival, -beta);
    if (r <= delta) break;
    sample.jumps.push_back(r);
  }

  double sum = 0.0;
  for (auto it = sample.jumps.rbegin(); it != sample.jumps.rend(); ++it) {
    sum += *it;  // ascending accumulation keeps the summation error small
  }
  sample.T1 = sum + sample.small_mass;
  sample.Delta1 = sample.jumps.empty() ? 0.0 : sample.jumps.front();
  return sample;
}

StableJumpSample sample_stable_jumps(double beta, double delta,
                                     RandomStream stream) {
  Rng rng(stream);
  return sample_stable_jumps(beta, delta, rng);
}

}  // namespace lamina
