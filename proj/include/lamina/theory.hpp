#pragma once

#include <cstdint>
#include <functional>

#include "lamina/quadrature.hpp"
#include "lamina/rng.hpp"

namespace lamina {

// Limit constants of the scaled large-triangle counts for the Brownian
// triangulation, all reproducible from gamma_fn / bessel_j1.
struct TheoryConstants {
  double log_mass_drift;           // 2 sqrt(2 pi)
  double edge_count_limit;         // 2
  double area_count_mean_limit;    // (sqrt(2) pi / 2) J1(pi/2)
  double small_child_count_limit;  // 1 / pi
  static TheoryConstants compute();
};

// Laplace exponent of the tagged-fragment subordinator of the Brownian
// excursion fragmentation: 2 sqrt(2) Gamma(p + 1/2) / Gamma(p), p > 0.
double laplace_exponent_brownian(double p);
// Same quantity from the splitting density by quadrature (the integrand's
// endpoint singularity is removed by the substitution s1 = 1 - v^2).
double laplace_exponent_brownian_quadrature(double p,
                                            const QuadratureSpec& spec = {});

// Mean log-mass drift of the tagged fragment: closed form 2 sqrt(2 pi) and
// the quadrature route through the splitting density.
double log_mass_drift_brownian();
double log_mass_drift_brownian_quadrature(const QuadratureSpec& spec = {});

// Tail of the Brownian splitting density at split fraction u = 1 - s1:
// 2 sqrt(2/pi) u^(-1/2) (1 - 2u) / sqrt(1 - u) for u < 1/2, else 0.
double brownian_split_tail(double u);
double brownian_split_tail_integral(const QuadratureSpec& spec = {});

// Tail function nubar of a dislocation measure, with the metadata the
// renewal-limit quadrature needs: the supremum of its support and the power
// q >= 0 with nubar(u) ~ u^(-q) at 0 (0 for bounded tails).
struct TailFunction {
  std::function<double(double)> value;
  double support_sup = 0.5;
  double singular_exponent = 0.0;
};

TailFunction brownian_tail_function();
// total * 1{u < support}
TailFunction indicator_tail_function(double total, double support);
// 2 kappa (u^(-1/2) - sqrt(2)) on (0, 1/2)
TailFunction power_tail_function(double kappa);

// Sub-critical limit of the scaled dislocation count:
// (1/drift) * integral over (0, oo) of nubar(u^b) du.  A drift of +infinity
// returns 0. Throws numerical_error when the integrand is not integrable
// (singular_exponent * b >= 1).
double renewal_count_limit(const TailFunction& tail, double b, double drift,
                           const QuadratureSpec& spec = {});

// Densities of the potential measure of the tagged-fragment subordinator.
double potential_density_brownian(double x);
double potential_density_stable(double beta, double x);
// Laplace transforms of those densities by quadrature; they must equal
// 1 / laplace_exponent_*(p).
double potential_laplace_brownian(double p, const QuadratureSpec& spec = {});
double potential_laplace_stable(double beta, double p,
                                const QuadratureSpec& spec = {});

// beta Gamma(p + 1 - 1/beta) / Gamma(p), the stable-lamination counterpart.
double laplace_exponent_stable(double beta, double p);

// D_beta = beta^2 Gamma(2 - 1/beta) / Gamma(2 - beta), the normalizer of the
// stable dislocation measure.
double stable_dislocation_normalizer(double beta);

// P(largest jump <= y) = exp(-y^(-1/beta) / Gamma(1 - 1/beta)).
double stable_largest_jump_cdf(double beta, double y);

// E[T1^(1-1/beta)] = Gamma(2 - beta) / Gamma(1/beta).
double stable_t1_moment_target(double beta);

// Closed-form law of the longest-chord arc fraction of the Brownian
// triangulation, zero below 1/3, clamped into [0,1]. Throws config_error
// outside (0, 1/2).
double longest_chord_cdf_brownian(double a);

struct MonteCarloEstimate {
  double value = 0.0;
  double std_error = 0.0;
  double ci_low = 0.0;   // 95% normal interval
  double ci_high = 0.0;
  std::int64_t samples = 0;
};

// E[T1^(1-1/beta)] estimated with the largest jump as a control variate:
// E[Delta1^(1-1/beta)] is known in closed form and the remainder
// T1^q - Delta1^q has finite variance, unlike T1^q itself.
MonteCarloEstimate stable_t1_moment(double beta, std::int64_t samples,
                                    double delta, RandomStream stream);

// D_beta E[T1 (1 - sum_i (Delta_i/T1)^(p+1))], which must match
// laplace_exponent_stable(beta, p).
MonteCarloEstimate stable_phi_identity(double beta, double p,
                                       std::int64_t samples, double delta,
                                       RandomStream stream);

// Limit of eps * (number of eps-large faces) in the beta-stable lamination:
// 2 pi (beta-1) / Gamma(2-beta) * E[min(T1 - Delta1, Delta1)].
MonteCarloEstimate stable_large_face_rate(double beta, std::int64_t samples,
                                          double delta, RandomStream stream);

// Longest-chord CDF of the beta-stable lamination at arc fraction a:
// D_beta C_beta E[T1 * integral], the inner integral evaluated per sample
// after the substitution u = 1 - 1/x. Value and interval clamped to [0,1].
MonteCarloEstimate stable_longest_chord_cdf(double beta, double a,
                                            std::int64_t samples, double delta,
                                            RandomStream stream,
                                            const QuadratureSpec& spec = {});

}  // namespace lamina
