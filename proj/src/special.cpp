#include "lamina/special.hpp"

#include <cmath>
#include <string>

#include "lamina/errors.hpp"

namespace lamina {

namespace {

// Lanczos g = 7, 9-term coefficients (Godfrey).
constexpr double kLanczosG = 7.0;
constexpr double kLanczos[9] = {
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
};

constexpr double kPi = 3.141592653589793238462643383279;

double gamma_lanczos(double x) {
  // Valid for x >= 0.5.
  const double z = x - 1.0;
  double acc = kLanczos[0];
  for (int i = 1; i < 9; ++i) {
    acc += kLanczos[i] / (z + static_cast<double>(i));
  }
  const double t = z + kLanczosG + 0.5;
  return std::sqrt(2.0 * kPi) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

}  // namespace

double gamma_fn(double x) {
  if (!(x > 0.0)) {
    throw config_error("gamma_fn requires x > 0, got x=" + std::to_string(x));
  }
  if (x < 0.5) {
    return gamma_fn(x + 1.0) / x;
  }
  return gamma_lanczos(x);
}

double bessel_j1(double x) {
  const double ax = std::fabs(x);
  double result;
  if (ax <= 16.0) {
    // J1(x) = (x/2) sum_k (-1)^k (x^2/4)^k / (k! (k+1)!)
    const double q = 0.25 * ax * ax;
    double term = 0.5 * ax;
    double sum = term;
    for (int k = 1; k <= 64; ++k) {
      term *= -q / (static_cast<double>(k) * static_cast<double>(k + 1));
      sum += term;
      if (std::fabs(term) < 1e-18 * (std::fabs(sum) + 1e-30)) break;
    }
    result = sum;
  } else {
    // Hankel expansion: J1(x) ~ sqrt(2/(pi x)) (P cos(chi) - Q sin(chi)),
    // chi = x - 3 pi / 4. Truncation error ~1e-8 absolute at x = 16.
    const double inv = 1.0 / ax;
    const double inv2 = inv * inv;
    const double p =
        1.0 + inv2 * (15.0 / 128.0 - inv2 * (14175.0 / 98304.0));
    const double q =
        inv * (3.0 / 8.0 +
               inv2 * (-315.0 / 3072.0 + inv2 * (1091475.0 / 3932160.0)));
    const double chi = ax - 2.356194490192344928846982537460;
    result = std::sqrt(2.0 / (kPi * ax)) * (p * std::cos(chi) - q * std::sin(chi));
  }
  return x < 0.0 ? -result : result;
}

}  // namespace lamina
