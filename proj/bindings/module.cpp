#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>

#include "lamina/errors.hpp"
#include "lamina/excursion.hpp"
#include "lamina/fragmentation.hpp"
#include "lamina/lamination.hpp"
#include "lamina/rng.hpp"
#include "lamina/special.hpp"
#include "lamina/stable_jumps.hpp"
#include "lamina/stats.hpp"
#include "lamina/theory.hpp"
#include "lamina/version.hpp"

namespace py = pybind11;

namespace {

py::array_t<double> to_array(const std::vector<double>& values) {
  py::array_t<double> out(static_cast<py::ssize_t>(values.size()));
  auto buf = out.mutable_unchecked<1>();
  for (py::ssize_t i = 0; i < buf.shape(0); ++i) {
    buf(i) = values[static_cast<std::size_t>(i)];
  }
  return out;
}

lamina::DislocationTree tree_for(std::int64_t n, std::uint64_t seed,
                                 std::uint64_t stream) {
  return lamina::extract_dislocations(
      lamina::sample_brownian_excursion(n, lamina::derive_stream(seed, stream)));
}

}  // namespace

PYBIND11_MODULE(_lamina, m) {
  m.doc() = "Monte Carlo laboratory for large faces of random laminations and "
            "self-similar fragmentations";
  m.attr("__version__") = lamina::kVersion;

  py::register_exception<lamina::config_error>(m, "ConfigError");
  py::register_exception<lamina::numerical_error>(m, "NumericalError");

  m.def(
      "sample_excursion",
      [](std::int64_t n, std::uint64_t seed, std::uint64_t stream) {
        return to_array(
            lamina::sample_brownian_excursion(n, lamina::derive_stream(seed, stream))
                .values);
      },
      py::arg("n"), py::arg("seed") = 42, py::arg("stream") = 0,
      "Discretized normalized Brownian excursion on n cells (n+1 values).");

  m.def(
      "dislocation_records",
      [](std::int64_t n, std::uint64_t seed, std::uint64_t stream) {
        const lamina::DislocationTree tree = tree_for(n, seed, stream);
        const auto records = tree.records();
        const std::size_t count = records.size();
        std::vector<double> x(count), s1(count), s2(count), level(count),
            birth(count), shortest(count), area(count);
        for (std::size_t i = 0; i < count; ++i) {
          const lamina::DislocationRecord& rec = records[i];
          x[i] = rec.x;
          s1[i] = rec.s1;
          s2[i] = rec.s2;
          level[i] = rec.level;
          birth[i] = rec.birth_level;
          const lamina::TriangleMetrics metrics = lamina::triangle_metrics(rec);
          shortest[i] = metrics.shortest;
          area[i] = metrics.area;
        }
        py::dict out;
        out["x"] = to_array(x);
        out["s1"] = to_array(s1);
        out["s2"] = to_array(s2);
        out["level"] = to_array(level);
        out["birth_level"] = to_array(birth);
        out["shortest_edge"] = to_array(shortest);
        out["area"] = to_array(area);
        return out;
      },
      py::arg("n"), py::arg("seed") = 42, py::arg("stream") = 0,
      "Pre-order dislocation records of one sampled excursion.");

  m.def(
      "count_large",
      [](std::int64_t n, std::uint64_t seed, std::uint64_t stream,
         const std::string& kind, std::vector<double> eps_grid) {
        const lamina::DislocationTree tree = tree_for(n, seed, stream);
        return lamina::count_large_sweep(tree, lamina::parse_size_kind(kind),
                                         eps_grid);
      },
      py::arg("n"), py::arg("seed"), py::arg("stream"), py::arg("kind"),
      py::arg("eps_grid"),
      "Counts of records whose size functional exceeds each ascending eps.");

  m.def(
      "longest_chord",
      [](std::int64_t n, std::uint64_t seed, std::uint64_t stream) {
        const lamina::DislocationTree tree = tree_for(n, seed, stream);
        const lamina::CentroidResult centroid = lamina::find_centroid(tree);
        const lamina::LongestChord chord =
            lamina::longest_chord_fraction(tree, centroid.record_id);
        return py::make_tuple(chord.fraction, chord.length, centroid.degenerate);
      },
      py::arg("n"), py::arg("seed") = 42, py::arg("stream") = 0,
      "(arc fraction L, chord length, degenerate flag) of the centroid face.");

  m.def(
      "sample_stable_jumps",
      [](double beta, double delta, std::uint64_t seed, std::uint64_t stream) {
        const lamina::StableJumpSample s = lamina::sample_stable_jumps(
            beta, delta, lamina::derive_stream(seed, stream));
        py::dict out;
        out["T1"] = s.T1;
        out["Delta1"] = s.Delta1;
        out["small_mass"] = s.small_mass;
        out["jump_count"] = s.jumps.size();
        out["jumps"] = to_array(s.jumps);
        return out;
      },
      py::arg("beta"), py::arg("delta") = 1e-6, py::arg("seed") = 42,
      py::arg("stream") = 0,
      "Jumps of a beta-stable subordinator above delta, descending.");

  m.def("gamma_fn", &lamina::gamma_fn, py::arg("x"));
  m.def("bessel_j1", &lamina::bessel_j1, py::arg("x"));
  m.def("laplace_exponent_brownian", &lamina::laplace_exponent_brownian,
        py::arg("p"));
  m.def("longest_chord_cdf_brownian", &lamina::longest_chord_cdf_brownian,
        py::arg("a"));
  m.def("stable_largest_jump_cdf", &lamina::stable_largest_jump_cdf,
        py::arg("beta"), py::arg("y"));
  m.def("stable_t1_moment_target", &lamina::stable_t1_moment_target,
        py::arg("beta"));

  m.def(
      "simulate_fragmentation",
      [](const std::string& config_json, std::uint64_t seed,
         std::uint64_t stream) {
        const lamina::FragConfig config = lamina::parse_frag_config(config_json);
        const lamina::SimResult result =
            lamina::simulate(config, lamina::derive_stream(seed, stream));
        py::dict out;
        out["aborted"] = result.aborted;
        out["event_count"] = result.events.size();
        out["counts"] = result.counts;
        out["eps_grid"] = config.eps_grid;
        out["total_rate"] = result.total_rate;
        return out;
      },
      py::arg("config_json"), py::arg("seed") = 42, py::arg("stream") = 0,
      "Run one fragmentation replicate from a JSON config document.");
}
