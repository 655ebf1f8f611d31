#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace lamina {

// Welford accumulator. Merging two accumulators first orders them by a
// deterministic key, so merge(a,b) and merge(b,a) are bitwise identical.
struct RunningMoments {
  std::int64_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double value);
  double variance() const;  // sample variance, count >= 2
  static RunningMoments merged(const RunningMoments& a, const RunningMoments& b);
};

struct EstimateWithCI {
  double mean = 0.0;
  double variance = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  std::int64_t m = 0;
};

// Normal-approximation 95% interval; intended for m >= 30.
EstimateWithCI with_normal_ci(const RunningMoments& moments);

// Per-replicate counts of large dislocations over an ascending eps grid,
// scaled by eps^lambda when aggregated.
class EpsilonSweep {
 public:
  EpsilonSweep(std::vector<double> eps_grid, double scaling_exponent);

  // Row must be non-increasing along the grid; throws config_error otherwise.
  void add_replicate(std::span<const std::int64_t> counts);

  const std::vector<double>& eps_grid() const { return eps_grid_; }
  double scaling_exponent() const { return lambda_; }
  std::int64_t replicates() const {
    return static_cast<std::int64_t>(rows_.size());
  }
  const std::vector<std::vector<std::int64_t>>& rows() const { return rows_; }

 private:
  std::vector<double> eps_grid_;
  double lambda_;
  std::vector<std::vector<std::int64_t>> rows_;
};

// Per-eps estimates of eps^lambda * N(eps). Throws config_error when fewer
// than two replicates are present.
std::vector<EstimateWithCI> aggregate(const EpsilonSweep& sweep);

// Two-sided Kolmogorov-Smirnov distance between the sample and a target CDF.
double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf);

struct RatioRow {
  double eps = 0.0;
  double mean_ratio = 0.0;
  double corr = 0.0;       // Pearson correlation, meaningful only if defined
  bool corr_defined = false;
  std::int64_t m_effective = 0;  // replicates with a nonzero target
};

// Scaled counts against a deterministic limit (single target) or a
// per-replicate random limit. Replicates whose target is zero are excluded
// and reported through m_effective.
std::vector<RatioRow> ratio_diagnostic(const EpsilonSweep& sweep, double target);
std::vector<RatioRow> ratio_diagnostic(const EpsilonSweep& sweep,
                                       std::span<const double> targets);

// eps,mean_scaled,var_scaled,ci_low,ci_high,M
void write_sweep_csv(const EpsilonSweep& sweep, std::ostream& os);
// eps,mean_ratio,corr,M_effective
void write_ratio_csv(std::span<const RatioRow> rows, std::ostream& os);

}  // namespace lamina
