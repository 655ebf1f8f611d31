#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "lamina/rng.hpp"

namespace lamina {

// Binary conservative dislocation law with the small-dislocation truncation
// 1-s1 > delta_prime. Infinite laws (brownian, power_tail) must be truncated;
// the point mass ignores delta_prime.
class DislocationLaw {
 public:
  enum class Kind { point_mass, brownian, power_tail };

  static DislocationLaw point_mass(double s1);
  // Splitting law of the interval fragmentation encoded by a Brownian
  // excursion: density 2 / sqrt(2 pi s1^3 (1-s1)^3) on [1/2, 1).
  static DislocationLaw brownian(double delta_prime);
  // Synthetic power-tail law: density kappa * u^(-3/2) du for u = 1-s1 in
  // (0, 1/2), tail ~ 2*kappa*u^(-1/2).
  static DislocationLaw power_tail(double kappa, double delta_prime);

  Kind kind() const { return kind_; }
  double delta_prime() const { return delta_prime_; }
  // nu(1 - s1 > delta_prime): the per-fragment splitting rate on the
  // homogeneous clock.
  double total_rate() const { return total_rate_; }
  // nubar(u) = nu(1 - s1 > u) for the untruncated measure.
  double tail(double u) const;
  bool truncated() const { return kind_ != Kind::point_mass; }
  // Upper bound of log(1/s1) mass dropped by the truncation,
  // integral over (0, delta_prime] of log(1/(1-u)) nu(du).
  double truncation_drift_bias() const;
  // True when log(s1)/log(s2) is (numerically) a small rational, which breaks
  // the renewal-theorem hypothesis for point masses.
  bool maybe_lattice() const;

  // Draw s1 conditioned on 1 - s1 > delta_prime. Exact inverse-CDF samplers.
  double sample_s1(Rng& rng) const;

  double point_s1() const { return s1_point_; }
  double kappa() const { return kappa_; }

 private:
  DislocationLaw() = default;
  Kind kind_ = Kind::point_mass;
  double s1_point_ = 0.5;
  double kappa_ = 1.0;
  double delta_prime_ = 0.0;
  double total_rate_ = 1.0;
};

// Size functional psi(x, s) evaluated at dislocations of the generic engine.
struct PsiSpec {
  enum class Kind { parent_mass, child_mass_power, shortest_edge, area };
  Kind kind = Kind::parent_mass;
  double b = 1.0;  // exponent for child_mass_power: psi = (1-s1) x^b

  double operator()(double x, double s1) const;
  // Largest threshold u0 such that psi(x,s) > eps forces 1-s1 > u0, used for
  // the truncation-safety check. Negative when no such bound exists
  // (parent_mass), in which case the law must be finite.
  double required_split_fraction(double eps) const;
  static PsiSpec parse(const std::string& kind_name, double b);
  std::string name() const;
};

struct FragConfig {
  double alpha = 0.0;  // index of self-similarity
  DislocationLaw law = DislocationLaw::point_mass(2.0 / 3.0);
  double mass_cutoff = 1e-4;  // fragments below it are frozen
  PsiSpec psi;
  std::vector<double> eps_grid;  // ascending thresholds for event counting
  std::int64_t max_events = 50'000'000;

  void validate() const;  // throws config_error
};

struct FragEvent {
  double t_homog = 0.0;       // death time of the parent, homogeneous clock
  double t_selfsim = 0.0;     // death time on the self-similar clock
  double parent_mass = 0.0;
  double s1 = 0.0;
  double psi_value = 0.0;
  double lifetime_homog = 0.0;
  double lifetime_selfsim = 0.0;  // = lifetime_homog * mass^(-alpha)
};

struct SimResult {
  std::vector<FragEvent> events;  // ordered by t_homog
  std::vector<double> frozen_masses;
  std::vector<std::int64_t> counts;  // psi_value > eps per grid entry
  double total_rate = 0.0;
  double truncation_drift_bias = 0.0;
  bool aborted = false;  // max_events exhausted
};

// Event-driven simulation of the binary self-similar fragmentation started
// from unit mass. Lifetimes are drawn once on the homogeneous clock; the
// self-similar clock is derived by the per-fragment time change, so the two
// clocks are coupled pathwise. Fragments below mass_cutoff freeze.
SimResult simulate(const FragConfig& config, RandomStream stream);

// Count of events with psi_value > eps. Checks that the law truncation cannot
// have dropped qualifying events; throws config_error when it could.
std::int64_t count_large_events(const SimResult& result, const FragConfig& config,
                                double eps);

// sum over split fragments of mass^p * homogeneous lifetime, plus each frozen
// fragment's expected residual mass^p / total_rate. Requires p > 1.
double sigma_p(const SimResult& result, double p);

// Pathwise index-change identity:
//   sum f(mass) * lifetime_homog == sum mass^alpha f(mass) * lifetime_selfsim
// over the simulated events, exact up to rounding. Returns the relative gap.
double index_change_gap(const SimResult& result, double alpha,
                        const std::function<double(double)>& f);
bool index_change_check(const SimResult& result, double alpha,
                        const std::function<double(double)>& f,
                        double rel_tol = 1e-12);

// Events CSV: t_homog,t_selfsim,parent_mass,s1,psi_value
void write_events_csv(const SimResult& result, std::ostream& os);

// Structured JSON config document; unknown keys are rejected. Schema:
//   {"alpha": 0.0,
//    "law": {"kind": "point_mass"|"brownian"|"power_tail",
//            "params": {"s1": ...} | {"kappa": ...},
//            "delta_prime": 1e-6},
//    "mass_cutoff": 1e-4,
//    "psi": {"kind": "parent_mass"|"child_mass_power"|"edge"|"area", "b": 1.0},
//    "eps_grid": [...],
//    "max_events": 50000000}
FragConfig parse_frag_config(const std::string& json_text);
std::string frag_config_to_json(const FragConfig& config);

}  // namespace lamina
