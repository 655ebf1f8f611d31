#include "lamina/excursion.hpp"

#include <cmath>
#include <string>

#include "lamina/errors.hpp"

namespace lamina {

std::vector<double> brownian_bridge(std::int64_t n, Rng& rng) {
  std::vector<double> walk(static_cast<std::size_t>(n) + 1);
  const double step = 1.0 / std::sqrt(static_cast<double>(n));
  walk[0] = 0.0;
  for (std::int64_t k = 1; k <= n; ++k) {
    walk[static_cast<std::size_t>(k)] =
        walk[static_cast<std::size_t>(k - 1)] + step * rng.normal();
  }
  const double endpoint = walk[static_cast<std::size_t>(n)];
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::int64_t k = 1; k <= n; ++k) {
    walk[static_cast<std::size_t>(k)] -=
        static_cast<double>(k) * inv_n * endpoint;
  }
  walk[static_cast<std::size_t>(n)] = 0.0;  // k=n subtraction is exact; pin it anyway
  return walk;
}

ExcursionPath sample_brownian_excursion(std::int64_t n, RandomStream stream) {
  if (n < 2) {
    throw config_error("excursion grid needs n >= 2, got n=" + std::to_string(n));
  }
  Rng rng(stream);
  const std::vector<double> bridge = brownian_bridge(n, rng);

  std::int64_t argmin = 0;
  double min_value = bridge[0];
  for (std::int64_t k = 1; k < n; ++k) {
    const double v = bridge[static_cast<std::size_t>(k)];
    if (v < min_value) {
      min_value = v;
      argmin = k;
    }
  }

  ExcursionPath path;
  path.n = n;
  path.rotation = argmin;
  path.values.resize(static_cast<std::size_t>(n) + 1);
  for (std::int64_t k = 0; k <= n; ++k) {
    std::int64_t src = argmin + k;
    if (src >= n) src -= n;
    path.values[static_cast<std::size_t>(k)] =
        bridge[static_cast<std::size_t>(src)] - min_value;
  }
  path.values[0] = 0.0;
  path.values[static_cast<std::size_t>(n)] = 0.0;
  return path;
}

double path_integral(const ExcursionPath& path) {
  double sum = 0.0;
  for (std::int64_t k = 0; k < path.n; ++k) {
    sum += path.values[static_cast<std::size_t>(k)] +
           path.values[static_cast<std::size_t>(k + 1)];
  }
  return 0.5 * sum / static_cast<double>(path.n);
}

}  // namespace lamina
