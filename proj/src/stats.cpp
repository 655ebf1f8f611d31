#include "lamina/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "lamina/errors.hpp"

namespace lamina {

namespace {
constexpr double kZ95 = 1.959963984540054;
}

void RunningMoments::add(double value) {
  ++count;
  const double delta = value - mean;
  mean += delta / static_cast<double>(count);
  m2 += delta * (value - mean);
}

double RunningMoments::variance() const {
  return count >= 2 ? m2 / static_cast<double>(count - 1) : 0.0;
}

RunningMoments RunningMoments::merged(const RunningMoments& a,
                                      const RunningMoments& b) {
  if (a.count == 0) return b;
  if (b.count == 0) return a;
  // Canonical operand order makes the merge symmetric bit for bit.
  const bool swap = (a.count > b.count) ||
                    (a.count == b.count &&
                     (a.mean > b.mean || (a.mean == b.mean && a.m2 > b.m2)));
  const RunningMoments& lo = swap ? b : a;
  const RunningMoments& hi = swap ? a : b;
  RunningMoments out;
  out.count = lo.count + hi.count;
  const double delta = hi.mean - lo.mean;
  const double nl = static_cast<double>(lo.count);
  const double nh = static_cast<double>(hi.count);
  const double n = nl + nh;
  out.mean = lo.mean + delta * (nh / n);
  out.m2 = lo.m2 + hi.m2 + delta * delta * (nl * nh / n);
  return out;
}

EstimateWithCI with_normal_ci(const RunningMoments& moments) {
  EstimateWithCI est;
  est.m = moments.count;
  est.mean = moments.mean;
  est.variance = moments.variance();
  const double half =
      moments.count >= 2
          ? kZ95 * std::sqrt(est.variance / static_cast<double>(moments.count))
          : 0.0;
  est.ci_low = est.mean - half;
  est.ci_high = est.mean + half;
  return est;
}

EpsilonSweep::EpsilonSweep(std::vector<double> eps_grid,
                           double scaling_exponent)
    : eps_grid_(std::move(eps_grid)), lambda_(scaling_exponent) {
  for (std::size_t i = 0; i < eps_grid_.size(); ++i) {
    if (!(eps_grid_[i] > 0.0)) {
      throw config_error("eps grid must be positive");
    }
    if (i > 0 && !(eps_grid_[i] > eps_grid_[i - 1])) {
      throw config_error("eps grid must be strictly ascending");
    }
  }
  if (eps_grid_.empty()) throw config_error("eps grid must be non-empty");
}

void EpsilonSweep::add_replicate(std::span<const std::int64_t> counts) {
  if (counts.size() != eps_grid_.size()) {
    throw config_error("replicate row length does not match the eps grid");
  }
  for (std::size_t i = 1; i < counts.size(); ++i) {
    if (counts[i] > counts[i - 1]) {
      throw config_error("counts must be non-increasing along the eps grid");
    }
  }
  rows_.emplace_back(counts.begin(), counts.end());
}

std::vector<EstimateWithCI> aggregate(const EpsilonSweep& sweep) {
  if (sweep.replicates() < 2) {
    throw config_error("aggregate needs at least two replicates");
  }
  std::vector<EstimateWithCI> out;
  out.reserve(sweep.eps_grid().size());
  for (std::size_t i = 0; i < sweep.eps_grid().size(); ++i) {
    const double scale = std::pow(sweep.eps_grid()[i], sweep.scaling_exponent());
    RunningMoments moments;
    for (const auto& row : sweep.rows()) {
      moments.add(scale * static_cast<double>(row[i]));
    }
    out.push_back(with_normal_ci(moments));
  }
  return out;
}

double ks_distance(std::vector<double> samples,
                   const std::function<double(double)>& cdf) {
  if (samples.empty()) throw config_error("ks_distance needs samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double upper = static_cast<double>(i + 1) / n - f;
    const double lower = f - static_cast<double>(i) / n;
    dist = std::max({dist, upper, lower});
  }
  return dist;
}

namespace {

std::vector<RatioRow> ratio_rows(const EpsilonSweep& sweep,
                                 const std::vector<double>& targets,
                                 bool per_replicate) {
  std::vector<RatioRow> out;
  out.reserve(sweep.eps_grid().size());
  const auto& rows = sweep.rows();
  for (std::size_t i = 0; i < sweep.eps_grid().size(); ++i) {
    const double scale = std::pow(sweep.eps_grid()[i], sweep.scaling_exponent());
    RatioRow row;
    row.eps = sweep.eps_grid()[i];

    RunningMoments ratio_m;
    RunningMoments x_m, y_m;
    double cross = 0.0;
    std::vector<double> xs, ys;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      const double target = per_replicate ? targets[r] : targets[0];
      if (target == 0.0) continue;
      const double scaled = scale * static_cast<double>(rows[r][i]);
      ratio_m.add(scaled / target);
      xs.push_back(scaled);
      ys.push_back(target);
    }
    row.m_effective = ratio_m.count;
    row.mean_ratio = ratio_m.mean;

    if (per_replicate && xs.size() >= 2) {
      for (double x : xs) x_m.add(x);
      for (double y : ys) y_m.add(y);
      for (std::size_t r = 0; r < xs.size(); ++r) {
        cross += (xs[r] - x_m.mean) * (ys[r] - y_m.mean);
      }
      const double denom = std::sqrt(x_m.m2 * y_m.m2);
      if (denom > 0.0) {
        row.corr = cross / denom;
        row.corr_defined = true;
      }
    }
    out.push_back(row);
  }
  return out;
}

}  // namespace

std::vector<RatioRow> ratio_diagnostic(const EpsilonSweep& sweep,
                                       double target) {
  return ratio_rows(sweep, {target}, false);
}

std::vector<RatioRow> ratio_diagnostic(const EpsilonSweep& sweep,
                                       std::span<const double> targets) {
  if (static_cast<std::int64_t>(targets.size()) != sweep.replicates()) {
    throw config_error("ratio targets must match the replicate count");
  }
  return ratio_rows(sweep, std::vector<double>(targets.begin(), targets.end()),
                    true);
}

void write_sweep_csv(const EpsilonSweep& sweep, std::ostream& os) {
  os << "eps,mean_scaled,var_scaled,ci_low,ci_high,M\n";
  const std::vector<EstimateWithCI> estimates = aggregate(sweep);
  char buf[192];
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const EstimateWithCI& est = estimates[i];
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%lld\n",
                  sweep.eps_grid()[i], est.mean, est.variance, est.ci_low,
                  est.ci_high, static_cast<long long>(est.m));
    os << buf;
  }
}

void write_ratio_csv(std::span<const RatioRow> rows, std::ostream& os) {
  os << "eps,mean_ratio,corr,M_effective\n";
  char buf[160];
  for (const RatioRow& row : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%lld\n", row.eps,
                  row.mean_ratio, row.corr_defined ? row.corr : std::nan(""),
                  static_cast<long long>(row.m_effective));
    os << buf;
  }
}

}  // namespace lamina
