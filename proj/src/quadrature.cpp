#include "lamina/quadrature.hpp"

#include <cmath>
#include <queue>
#include <vector>

#include "lamina/errors.hpp"

namespace lamina {

namespace {

// Gauss 7 / Kronrod 15 nodes and weights on [-1, 1].
constexpr double kKronrodNodes[8] = {
    0.000000000000000000000000000000000e+00,
    2.077849550078984676006894037732449e-01,
    4.058451513773971669066064120769615e-01,
    5.860872354676911302941448382587296e-01,
    7.415311855993944398638647732807884e-01,
    8.648644233597690727897127886409262e-01,
    9.491079123427585245261896840478513e-01,
    9.914553711208126392068546975263285e-01,
};
constexpr double kKronrodWeights[8] = {
    2.094821410847278280129991748917143e-01,
    2.044329400752988924141619992346491e-01,
    1.903505780647854099132564024210137e-01,
    1.690047266392679028265834265985503e-01,
    1.406532597155259187451895905102379e-01,
    1.047900103222501838398763225415180e-01,
    6.309209262997855329070066318920429e-02,
    2.293532201052922496373200805896959e-02,
};
constexpr double kGaussWeights[4] = {
    4.179591836734693877551020408163265e-01,
    3.818300505051189449503697754889751e-01,
    2.797053914892766679014677714237796e-01,
    1.294849661688696932706114326790820e-01,
};

struct Panel {
  double a, b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);

  const double f_center = f(center);
  double kronrod = kKronrodWeights[0] * f_center;
  double gauss = kGaussWeights[0] * f_center;
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double pair = f(center + dx) + f(center - dx);
    kronrod += kKronrodWeights[i] * pair;
    if (i % 2 == 0) gauss += kGaussWeights[i / 2] * pair;
  }
  kronrod *= half;
  gauss *= half;

  // The raw Gauss/Kronrod gap overestimates the Kronrod error; keeping it
  // conservative makes the global stopping rule trustworthy.
  return Panel{a, b, kronrod, std::fabs(kronrod - gauss)};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadratureSpec& spec) {
  QuadResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }

  std::priority_queue<Panel> queue;
  queue.push(evaluate_panel(f, a, b));
  double total = queue.top().value;
  double total_err = queue.top().error;
  int panels = 1;

  while (total_err > spec.rel_tol * std::fabs(total) + 1e-300 &&
         panels < spec.max_subdivisions) {
    const Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // Interval exhausted at double precision; accept its estimate as final.
      total_err -= worst.error;
      queue.push(Panel{worst.a, worst.b, worst.value, 0.0});
      continue;
    }
    const Panel left = evaluate_panel(f, worst.a, mid);
    const Panel right = evaluate_panel(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push(left);
    queue.push(right);
    ++panels;
  }

  out.value = total;
  out.abs_error = total_err;
  out.subdivisions = panels;
  out.converged = total_err <= spec.rel_tol * std::fabs(total) + 1e-300;
  return out;
}

double integrate_or_throw(const std::function<double(double)>& f, double a,
                          double b, const QuadratureSpec& spec) {
  const QuadResult r = integrate(f, a, b, spec);
  if (!r.converged) {
    throw numerical_error("quadrature failed to converge: error " +
                          std::to_string(r.abs_error) + " after " +
                          std::to_string(r.subdivisions) + " panels");
  }
  return r.value;
}

}  // namespace lamina
