#include "lamina/theory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lamina/errors.hpp"
#include "lamina/special.hpp"
#include "lamina/stable_jumps.hpp"
#include "lamina/stats.hpp"

namespace lamina {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kTwoSqrtTwoPi = 5.0132565492620014;    // 2 sqrt(2 pi)
constexpr double kSqrt2OverSqrtPi = 1.5957691216057307;  // 2 sqrt(2/pi)

MonteCarloEstimate finish(const RunningMoments& moments, double scale,
                          double shift = 0.0) {
  const EstimateWithCI est = with_normal_ci(moments);
  MonteCarloEstimate out;
  out.samples = est.m;
  out.value = shift + scale * est.mean;
  out.std_error =
      std::fabs(scale) *
      std::sqrt(est.variance / static_cast<double>(std::max<std::int64_t>(est.m, 1)));
  out.ci_low = shift + scale * est.ci_low;
  out.ci_high = shift + scale * est.ci_high;
  if (out.ci_low > out.ci_high) std::swap(out.ci_low, out.ci_high);
  return out;
}

}  // namespace

TheoryConstants TheoryConstants::compute() {
  TheoryConstants c;
  c.log_mass_drift = 2.0 * std::sqrt(2.0 * kPi);
  c.edge_count_limit = 2.0;
  c.area_count_mean_limit = 0.5 * std::sqrt(2.0) * kPi * bessel_j1(0.5 * kPi);
  c.small_child_count_limit = 1.0 / kPi;
  return c;
}

double laplace_exponent_brownian(double p) {
  if (!(p > 0.0)) {
    throw config_error("laplace exponent needs p > 0, got " + std::to_string(p));
  }
  return 2.0 * std::sqrt(2.0) * gamma_fn(p + 0.5) / gamma_fn(p);
}

double laplace_exponent_brownian_quadrature(double p,
                                            const QuadratureSpec& spec) {
  if (!(p > 0.0)) throw config_error("laplace exponent needs p > 0");
  // s1 = 1 - v^2 removes the (1-s1)^(-3/2) endpoint; the conservative factor
  // 1 - s1^(p+1) - (1-s1)^(p+1) vanishes quadratically at v = 0.
  const double q = p + 1.0;
  const auto integrand = [q](double v) {
    const double v2 = v * v;
    if (v2 <= 0.0) return (4.0 / std::sqrt(2.0 * kPi)) * q;  // v -> 0 limit
    const double s1 = 1.0 - v2;
    const double conservative =
        -std::expm1(q * std::log1p(-v2)) - std::pow(v2, q);
    return (4.0 / std::sqrt(2.0 * kPi)) * conservative /
           (std::pow(s1, 1.5) * v2);
  };
  return integrate_or_throw(integrand, 0.0, 1.0 / std::sqrt(2.0), spec);
}

double log_mass_drift_brownian() { return kTwoSqrtTwoPi; }

double log_mass_drift_brownian_quadrature(const QuadratureSpec& spec) {
  // Two substitutions: s1 = 1 - v^2 kills the power singularity, v = w^2
  // flattens the remaining logarithmic one.
  const auto integrand = [](double w) {
    if (w <= 0.0) return 0.0;
    const double v = w * w;
    const double v2 = v * v;
    const double s1 = 1.0 - v2;
    const double bracket = -s1 * std::log1p(-v2) - 2.0 * v2 * std::log(v);
    const double f_v =
        (4.0 / std::sqrt(2.0 * kPi)) * bracket / (std::pow(s1, 1.5) * v2);
    return f_v * 2.0 * w;
  };
  const double upper = std::pow(0.5, 0.25);
  return integrate_or_throw(integrand, 0.0, upper, spec);
}

double brownian_split_tail(double u) {
  if (!(u > 0.0)) throw config_error("split tail needs u > 0");
  if (u >= 0.5) return 0.0;
  return kSqrt2OverSqrtPi * (1.0 - 2.0 * u) / (std::sqrt(u) * std::sqrt(1.0 - u));
}

double brownian_split_tail_integral(const QuadratureSpec& spec) {
  // u = v^2: integrand 2 sqrt(2/pi) * 2 (1 - 2 v^2) / sqrt(1 - v^2).
  const auto integrand = [](double v) {
    return 2.0 * kSqrt2OverSqrtPi * (1.0 - 2.0 * v * v) /
           std::sqrt(1.0 - v * v);
  };
  return integrate_or_throw(integrand, 0.0, 1.0 / std::sqrt(2.0), spec);
}

TailFunction brownian_tail_function() {
  TailFunction tail;
  tail.value = [](double u) { return brownian_split_tail(u); };
  tail.support_sup = 0.5;
  tail.singular_exponent = 0.5;
  return tail;
}

TailFunction indicator_tail_function(double total, double support) {
  TailFunction tail;
  tail.value = [total, support](double u) { return u < support ? total : 0.0; };
  tail.support_sup = support;
  tail.singular_exponent = 0.0;
  return tail;
}

TailFunction power_tail_function(double kappa) {
  TailFunction tail;
  tail.value = [kappa](double u) {
    if (u >= 0.5) return 0.0;
    return 2.0 * kappa * (1.0 / std::sqrt(u) - std::sqrt(2.0));
  };
  tail.support_sup = 0.5;
  tail.singular_exponent = 0.5;
  return tail;
}

double renewal_count_limit(const TailFunction& tail, double b, double drift,
                           const QuadratureSpec& spec) {
  if (!(b > 0.0)) throw config_error("renewal limit needs b > 0");
  if (std::isinf(drift)) return 0.0;  // dissipative convention 1/inf = 0
  if (!(drift > 0.0)) throw config_error("renewal limit needs drift > 0");

  const double qb = tail.singular_exponent * b;
  if (qb >= 1.0) {
    throw numerical_error(
        "renewal integrand u^(-qb) with qb >= 1 is not integrable; the "
        "sub-critical hypothesis fails for this tail");
  }
  const double u_sup = std::pow(tail.support_sup, 1.0 / b);
  double integral;
  if (qb == 0.0) {
    integral = integrate_or_throw(
        [&tail, b](double u) { return u > 0.0 ? tail.value(std::pow(u, b)) : 0.0; },
        0.0, u_sup, spec);
  } else {
    // u = v^(1/(1-qb)) turns the u^(-qb) endpoint into a bounded integrand.
    const double k = 1.0 / (1.0 - qb);
    integral = integrate_or_throw(
        [&tail, b, k, qb](double v) {
          if (v <= 0.0) return 0.0;
          const double u = std::pow(v, k);
          return tail.value(std::pow(u, b)) * k * std::pow(v, k * qb);
        },
        0.0, std::pow(u_sup, 1.0 - qb), spec);
  }
  return integral / drift;
}

double potential_density_brownian(double x) {
  if (!(x >= 0.0)) throw config_error("potential density needs x >= 0");
  return (1.0 / kTwoSqrtTwoPi) / std::sqrt(-std::expm1(-x));
}

double potential_density_stable(double beta, double x) {
  if (!(beta > 1.0 && beta < 2.0)) throw config_error("beta must lie in (1,2)");
  if (!(x >= 0.0)) throw config_error("potential density needs x >= 0");
  return stable_levy_constant(beta) *
         std::pow(-std::expm1(-x), -1.0 / beta);
}

double potential_laplace_brownian(double p, const QuadratureSpec& spec) {
  if (!(p > 0.0)) throw config_error("laplace transform needs p > 0");
  // x = v^2 removes the x^(-1/2) endpoint; truncation error beyond
  // x = 45/p is ~1e-20 relative.
  const double x_max = 45.0 / p;
  const auto integrand = [p](double v) {
    if (v <= 0.0) return 2.0;  // 2v / sqrt(1 - e^(-v^2)) -> 2
    const double x = v * v;
    return 2.0 * v * std::exp(-p * x) / std::sqrt(-std::expm1(-x));
  };
  return (1.0 / kTwoSqrtTwoPi) *
         integrate_or_throw(integrand, 0.0, std::sqrt(x_max), spec);
}

double potential_laplace_stable(double beta, double p,
                                const QuadratureSpec& spec) {
  if (!(beta > 1.0 && beta < 2.0)) throw config_error("beta must lie in (1,2)");
  if (!(p > 0.0)) throw config_error("laplace transform needs p > 0");
  const double q = 1.0 / beta;
  const double k = 1.0 / (1.0 - q);  // x = v^k
  const double x_max = 45.0 / p;
  const auto integrand = [p, q, k](double v) {
    if (v <= 0.0) return k;  // limit of the transformed integrand at 0
    const double x = std::pow(v, k);
    return k * std::pow(v, k * q) * std::exp(-p * x) *
           std::pow(-std::expm1(-x), -q);
  };
  return stable_levy_constant(beta) *
         integrate_or_throw(integrand, 0.0, std::pow(x_max, 1.0 - q), spec);
}

double laplace_exponent_stable(double beta, double p) {
  if (!(beta > 1.0 && beta < 2.0)) throw config_error("beta must lie in (1,2)");
  if (!(p > 0.0)) throw config_error("laplace exponent needs p > 0");
  return beta * gamma_fn(p + 1.0 - 1.0 / beta) / gamma_fn(p);
}

double stable_dislocation_normalizer(double beta) {
  if (!(beta > 1.0 && beta < 2.0)) throw config_error("beta must lie in (1,2)");
  return beta * beta * gamma_fn(2.0 - 1.0 / beta) / gamma_fn(2.0 - beta);
}

double stable_largest_jump_cdf(double beta, double y) {
  if (!(beta > 1.0 && beta < 2.0)) throw config_error("beta must lie in (1,2)");
  if (y <= 0.0) return 0.0;
  return std::exp(-std::pow(y, -1.0 / beta) / gamma_fn(1.0 - 1.0 / beta));
}

double stable_t1_moment_target(double beta) {
  if (!(beta > 1.0 && beta < 2.0)) throw config_error("beta must lie in (1,2)");
  return gamma_fn(2.0 - beta) / gamma_fn(1.0 / beta);
}

double longest_chord_cdf_brownian(double a) {
  if (!(a > 0.0 && a < 0.5)) {
    throw config_error("chord fraction must lie in (0, 1/2), got " +
                       std::to_string(a));
  }
  if (a <= 1.0 / 3.0) return 0.0;
  const double root = std::sqrt(1.0 - 2.0 * a);
  const double value =
      (6.0 / kPi) * (std::atan(1.0 / std::sqrt(3.0)) - std::atan(root)) -
      (3.0 * a - 1.0) * root / (kPi * a * (1.0 - a));
  return std::clamp(value, 0.0, 1.0);
}

MonteCarloEstimate stable_t1_moment(double beta, std::int64_t samples,
                                    double delta, RandomStream stream) {
  if (samples < 2) throw config_error("need at least 2 samples");
  Rng rng(stream);
  const double q = 1.0 - 1.0 / beta;
  // E[Delta1^q] = Gamma(2-beta) / Gamma(1-1/beta)^(beta-1); the Monte Carlo
  // part only carries the light-tailed remainder T1^q - Delta1^q.
  const double control_mean =
      gamma_fn(2.0 - beta) / std::pow(gamma_fn(1.0 - 1.0 / beta), beta - 1.0);
  RunningMoments moments;
  for (std::int64_t i = 0; i < samples; ++i) {
    const StableJumpSample s = sample_stable_jumps(beta, delta, rng);
    const double z = std::pow(s.T1, q) -
                     (s.Delta1 > 0.0 ? std::pow(s.Delta1, q) : 0.0);
    moments.add(z);
  }
  return finish(moments, 1.0, control_mean);
}

MonteCarloEstimate stable_phi_identity(double beta, double p,
                                       std::int64_t samples, double delta,
                                       RandomStream stream) {
  if (samples < 2) throw config_error("need at least 2 samples");
  if (!(p > 0.0)) throw config_error("needs p > 0");
  Rng rng(stream);
  const double d_beta = stable_dislocation_normalizer(beta);
  const double power = p + 1.0;
  RunningMoments moments;
  for (std::int64_t i = 0; i < samples; ++i) {
    const StableJumpSample s = sample_stable_jumps(beta, delta, rng);
    const double inv_t1 = 1.0 / s.T1;
    double fraction_power_sum = 0.0;
    if (power == 2.0) {
      for (const double j : s.jumps) {
        const double f = j * inv_t1;
        fraction_power_sum += f * f;
      }
    } else if (power == 3.0) {
      for (const double j : s.jumps) {
        const double f = j * inv_t1;
        fraction_power_sum += f * f * f;
      }
    } else {
      for (const double j : s.jumps) {
        fraction_power_sum += std::pow(j * inv_t1, power);
      }
    }
    moments.add(s.T1 * (1.0 - fraction_power_sum));
  }
  return finish(moments, d_beta);
}

MonteCarloEstimate stable_large_face_rate(double beta, std::int64_t samples,
                                          double delta, RandomStream stream) {
  if (samples < 2) throw config_error("need at least 2 samples");
  Rng rng(stream);
  const double prefactor = 2.0 * kPi * (beta - 1.0) / gamma_fn(2.0 - beta);
  RunningMoments moments;
  for (std::int64_t i = 0; i < samples; ++i) {
    const StableJumpSample s = sample_stable_jumps(beta, delta, rng);
    moments.add(std::min(s.T1 - s.Delta1, s.Delta1));
  }
  return finish(moments, prefactor);
}

MonteCarloEstimate stable_longest_chord_cdf(double beta, double a,
                                            std::int64_t samples, double delta,
                                            RandomStream stream,
                                            const QuadratureSpec& spec) {
  if (!(a > 0.0 && a < 0.5)) {
    throw config_error("chord fraction must lie in (0, 1/2)");
  }
  if (samples < 2) throw config_error("need at least 2 samples");
  Rng rng(stream);
  const double scale =
      stable_dislocation_normalizer(beta) * stable_levy_constant(beta);
  const double r = 1.0 - 1.0 / beta;   // u = v^(1/r) flattens u^(-1/beta)
  const double inv_r = 1.0 / r;
  const double v_hi = std::pow(a, r);
  std::int64_t failures = 0;
  RunningMoments moments;
  for (std::int64_t i = 0; i < samples; ++i) {
    const StableJumpSample s = sample_stable_jumps(beta, delta, rng);
    const double x_lo = std::max(s.Delta1 / (a * s.T1), 1.0);
    double contribution = 0.0;
    const double u_lo = 1.0 - 1.0 / x_lo;  // 0 on the clamped branch
    if (u_lo < a) {
      const auto integrand = [inv_r](double v) {
        const double u = std::pow(v, inv_r);
        return inv_r / ((1.0 - u) * (1.0 - u));
      };
      const double v_lo = u_lo > 0.0 ? std::pow(u_lo, r) : 0.0;
      const QuadResult qr = integrate(integrand, v_lo, v_hi, spec);
      if (!qr.converged) {
        ++failures;
        continue;
      }
      contribution = s.T1 * qr.value;
    }
    moments.add(contribution);
  }
  if (failures > 0) {
    throw numerical_error("inner quadrature failed for " +
                          std::to_string(failures) + " of " +
                          std::to_string(samples) + " samples");
  }
  MonteCarloEstimate est = finish(moments, scale);
  est.value = std::clamp(est.value, 0.0, 1.0);
  est.ci_low = std::clamp(est.ci_low, 0.0, 1.0);
  est.ci_high = std::clamp(est.ci_high, 0.0, 1.0);
  return est;
}

}  // namespace lamina
