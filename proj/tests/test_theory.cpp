#include <doctest.h>

#include <cmath>
#include <limits>

#include "lamina/errors.hpp"
#include "lamina/quadrature.hpp"
#include "lamina/special.hpp"
#include "lamina/theory.hpp"

using namespace lamina;

namespace {
constexpr double kPi = 3.141592653589793238462643383279;
}

TEST_CASE("brownian laplace exponent closed form") {
  CHECK(laplace_exponent_brownian(1.0) ==
        doctest::Approx(std::sqrt(2.0 * kPi)).epsilon(1e-12));
  CHECK(laplace_exponent_brownian(0.5) ==
        doctest::Approx(2.0 * std::sqrt(2.0) / std::sqrt(kPi)).epsilon(1e-12));
  CHECK(laplace_exponent_brownian(0.5) == doctest::Approx(1.5957691).epsilon(1e-7));
  // conservative measure: the exponent vanishes at p -> 0+
  CHECK(laplace_exponent_brownian(1e-8) < 1e-6);
  CHECK_THROWS_AS(laplace_exponent_brownian(0.0), config_error);
}

TEST_CASE("laplace exponent by quadrature cross-validates the closed form") {
  for (double p : {0.1, 0.5, 1.0, 2.0, 5.0}) {
    const double closed = laplace_exponent_brownian(p);
    const double quad = laplace_exponent_brownian_quadrature(p);
    CHECK(std::fabs(quad - closed) / closed < 1e-8);
  }
}

TEST_CASE("log-mass drift by quadrature hits 2 sqrt(2 pi)") {
  const double target = 2.0 * std::sqrt(2.0 * kPi);
  const double quad = log_mass_drift_brownian_quadrature();
  CHECK(std::fabs(quad - target) / target < 1e-7);
  CHECK(quad == doctest::Approx(5.0132565).epsilon(1e-7));
  CHECK(log_mass_drift_brownian() == doctest::Approx(target).epsilon(1e-15));
}

TEST_CASE("split tail values and integral") {
  // direct evaluation: (4/sqrt(2 pi)) * 0.5 / sqrt(3/16)
  const double direct =
      (4.0 / std::sqrt(2.0 * kPi)) * 0.5 / std::sqrt(3.0 / 16.0);
  CHECK(brownian_split_tail(0.25) == doctest::Approx(direct).epsilon(1e-13));
  CHECK(brownian_split_tail(0.25) == doctest::Approx(1.8426355).epsilon(1e-6));
  CHECK(brownian_split_tail(0.5) == 0.0);
  CHECK(brownian_split_tail(0.7) == 0.0);
  CHECK_THROWS_AS(brownian_split_tail(0.0), config_error);

  const double target = 2.0 * std::sqrt(2.0) / std::sqrt(kPi);
  CHECK(std::fabs(brownian_split_tail_integral() - target) / target < 1e-8);
  // interior smoothness at the midpoint of the split density domain
  const double mid = brownian_split_tail(0.25);
  CHECK(std::isfinite(mid));
}

TEST_CASE("renewal count limits") {
  // Brownian tail with b=1 against the known 1/pi.
  const double value =
      renewal_count_limit(brownian_tail_function(), 1.0, log_mass_drift_brownian());
  CHECK(std::fabs(value - 1.0 / kPi) / (1.0 / kPi) < 1e-10);

  // Finite measure: indicator tail integrates to 1.
  const double m_det = (2.0 / 3.0) * std::log(1.5) + (1.0 / 3.0) * std::log(3.0);
  const double finite =
      renewal_count_limit(indicator_tail_function(1.0, 1.0), 1.0, m_det);
  CHECK(std::fabs(finite - 1.0 / m_det) / (1.0 / m_det) < 1e-10);
  CHECK(finite == doctest::Approx(1.5711).epsilon(1e-3));

  // dissipative convention
  CHECK(renewal_count_limit(brownian_tail_function(), 1.0,
                            std::numeric_limits<double>::infinity()) == 0.0);

  // integrability violation reported as a numerical failure
  TailFunction bad = brownian_tail_function();
  CHECK_THROWS_AS(renewal_count_limit(bad, 2.0, 1.0), numerical_error);
}

TEST_CASE("potential densities and their laplace transforms") {
  // x -> infinity limit of the brownian density
  CHECK(potential_density_brownian(40.0) ==
        doctest::Approx(1.0 / (2.0 * std::sqrt(2.0 * kPi))).epsilon(1e-12));

  for (double p : {0.5, 1.0, 2.0}) {
    const double lhs = potential_laplace_brownian(p);
    const double rhs = 1.0 / laplace_exponent_brownian(p);
    CHECK(std::fabs(lhs - rhs) < 1e-6);
  }
  CHECK(potential_laplace_brownian(1.0) ==
        doctest::Approx(0.3989423).epsilon(1e-6));

  for (double p : {0.5, 1.0, 2.0}) {
    const double lhs = potential_laplace_stable(1.5, p);
    const double rhs = 1.0 / laplace_exponent_stable(1.5, p);
    CHECK(std::fabs(lhs - rhs) < 1e-6);
  }
  CHECK(potential_laplace_stable(1.5, 1.0) ==
        doctest::Approx(1.0 / (1.5 * gamma_fn(4.0 / 3.0))).epsilon(1e-6));
  CHECK(potential_laplace_stable(1.5, 1.0) ==
        doctest::Approx(0.7465650).epsilon(1e-5));
}

TEST_CASE("longest chord law of the Brownian triangulation") {
  CHECK_THROWS_AS(longest_chord_cdf_brownian(0.0), config_error);
  CHECK_THROWS_AS(longest_chord_cdf_brownian(0.5), config_error);
  CHECK_THROWS_AS(longest_chord_cdf_brownian(0.7), config_error);

  CHECK(longest_chord_cdf_brownian(0.30) == 0.0);
  CHECK(longest_chord_cdf_brownian(1.0 / 3.0) == 0.0);
  // approaches 1 like sqrt(1-2a)
  CHECK(longest_chord_cdf_brownian(0.5 - 1e-12) > 0.99999);
  CHECK(longest_chord_cdf_brownian(0.499999) > 0.99);

  // monotone on a grid
  double prev = 0.0;
  for (double a = 0.34; a < 0.50; a += 0.01) {
    const double value = longest_chord_cdf_brownian(a);
    CHECK(value >= prev);
    prev = value;
  }

  // quadrature oracle for the closed form:
  // (1/(a pi)) * integral over (1/2, a/(1-a)) of (2y-1)/sqrt((1-y)(y-a)).
  const double a = 0.4;
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  const double oracle =
      integrate_or_throw(
          [a](double y) {
            return (2.0 * y - 1.0) / std::sqrt((1.0 - y) * (y - a));
          },
          0.5, a / (1.0 - a), spec) /
      (a * kPi);
  CHECK(std::fabs(longest_chord_cdf_brownian(a) - oracle) < 1e-6);
  CHECK(longest_chord_cdf_brownian(a) == doctest::Approx(0.07821).epsilon(5e-4));
}

TEST_CASE("stable constants") {
  // 2 pi (beta-1) / Gamma(2-beta) at beta = 3/2 equals sqrt(pi)
  const double prefactor = 2.0 * kPi * 0.5 / gamma_fn(0.5);
  CHECK(prefactor == doctest::Approx(std::sqrt(kPi)).epsilon(1e-12));
  CHECK(prefactor == doctest::Approx(1.7724539).epsilon(1e-7));

  CHECK(stable_t1_moment_target(1.5) ==
        doctest::Approx(gamma_fn(0.5) / gamma_fn(2.0 / 3.0)).epsilon(1e-13));

  // D_beta C_beta collapses to beta / Gamma(2-beta) * Gamma(2-1/beta)/Gamma(1-1/beta)
  const double beta = 1.5;
  const double d = stable_dislocation_normalizer(beta);
  CHECK(d == doctest::Approx(beta * beta * gamma_fn(2.0 - 1.0 / beta) /
                             gamma_fn(2.0 - beta))
                 .epsilon(1e-13));
}

TEST_CASE("theory constants reproduce their defining expressions") {
  const TheoryConstants c = TheoryConstants::compute();
  CHECK(c.log_mass_drift ==
        doctest::Approx(2.0 * std::sqrt(2.0 * kPi)).epsilon(1e-12));
  CHECK(c.edge_count_limit == 2.0);
  CHECK(c.small_child_count_limit == doctest::Approx(1.0 / kPi).epsilon(1e-12));
  CHECK(c.area_count_mean_limit ==
        doctest::Approx(0.5 * std::sqrt(2.0) * kPi * bessel_j1(0.5 * kPi))
            .epsilon(1e-12));
  // the paper-level numeric value
  CHECK(c.area_count_mean_limit == doctest::Approx(1.2591).epsilon(2e-4));
}

TEST_CASE("stable estimators: smoke level") {
  // phi identity at p=1
  const MonteCarloEstimate id1 =
      stable_phi_identity(1.5, 1.0, 20000, 1e-4, derive_stream(400, 0));
  const double target1 = laplace_exponent_stable(1.5, 1.0);
  CHECK(std::fabs(id1.value - target1) / target1 < 0.05);

  // two-seed agreement of the large-face rate
  const MonteCarloEstimate r1 =
      stable_large_face_rate(1.5, 20000, 1e-5, derive_stream(500, 0));
  const MonteCarloEstimate r2 =
      stable_large_face_rate(1.5, 20000, 1e-5, derive_stream(501, 0));
  const double joint =
      std::sqrt(r1.std_error * r1.std_error + r2.std_error * r2.std_error);
  CHECK(std::fabs(r1.value - r2.value) < 3.0 * joint);
  CHECK(r1.value > 0.0);

  // chord CDF: monotone on a small grid, clamp branch reachable
  double prev = -1.0;
  for (double a : {0.35, 0.40, 0.45}) {
    const MonteCarloEstimate est =
        stable_longest_chord_cdf(1.5, a, 5000, 1e-4, derive_stream(600, 0));
    CHECK(est.value >= 0.0);
    CHECK(est.value <= 1.0);
    CHECK(est.value >= prev - 0.01);
    prev = est.value;
  }

  // continuity towards the Brownian law as beta -> 2 (loose at this sample
  // size; the estimator tail index approaches 1 with beta)
  const MonteCarloEstimate near2 =
      stable_longest_chord_cdf(1.99, 0.40, 8000, 1e-4, derive_stream(700, 0));
  CHECK(std::fabs(near2.value - longest_chord_cdf_brownian(0.40)) < 0.08);
}

TEST_CASE("stable chord inner integral: substitution route vs raw route") {
  // The production path integrates u^(-1/beta) (1-u)^(-2) after the
  // u = v^(1/(1-1/beta)) substitution. Away from u = 0 the raw integrand is
  // regular, so plain adaptive quadrature is an independent second route.
  const double beta = 1.7;
  const double r = 1.0 - 1.0 / beta;
  QuadratureSpec spec;
  spec.rel_tol = 1e-12;
  for (const double u_lo : {0.05, 0.2, 0.34}) {
    for (const double a : {0.4, 0.45}) {
      if (u_lo >= a) continue;
      const double via_substitution = integrate_or_throw(
          [r, beta](double v) {
            const double u = std::pow(v, 1.0 / r);
            return (1.0 / r) / ((1.0 - u) * (1.0 - u));
          },
          std::pow(u_lo, r), std::pow(a, r), spec);
      const double raw = integrate_or_throw(
          [beta](double u) {
            return std::pow(u, -1.0 / beta) / ((1.0 - u) * (1.0 - u));
          },
          u_lo, a, spec);
      CHECK(via_substitution == doctest::Approx(raw).epsilon(1e-9));
    }
  }
}
