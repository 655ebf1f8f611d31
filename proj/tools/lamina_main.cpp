#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lamina/errors.hpp"
#include "lamina/excursion.hpp"
#include "lamina/fragmentation.hpp"
#include "lamina/lamination.hpp"
#include "lamina/parallel.hpp"
#include "lamina/rng.hpp"
#include "lamina/special.hpp"
#include "lamina/stable_jumps.hpp"
#include "lamina/stats.hpp"
#include "lamina/theory.hpp"
#include "lamina/version.hpp"

namespace {

using nlohmann::json;

constexpr double kPi = 3.141592653589793238462643383279;

// eps lists are given largest-first, matching how the scaling studies walk
// eps down to 0. Accepts "0.4,0.2,0.1" or "geom(start,stop,k)".
std::vector<double> parse_eps_descending(const std::string& text) {
  std::vector<double> eps;
  if (text.rfind("geom(", 0) == 0 && text.back() == ')') {
    const std::string body = text.substr(5, text.size() - 6);
    double start = 0.0, stop = 0.0;
    long count = 0;
    char extra = 0;
    if (std::sscanf(body.c_str(), "%lf,%lf,%ld%c", &start, &stop, &count,
                    &extra) != 3 ||
        count < 2 || !(start > stop) || !(stop > 0.0)) {
      throw lamina::config_error("bad geometric eps spec '" + text +
                                 "', expected geom(start,stop,k) with start > "
                                 "stop > 0 and k >= 2");
    }
    const double ratio = std::pow(stop / start, 1.0 / static_cast<double>(count - 1));
    double value = start;
    for (long i = 0; i < count; ++i) {
      eps.push_back(i + 1 == count ? stop : value);
      value *= ratio;
    }
  } else {
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        eps.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw lamina::config_error("bad eps value '" + item + "'");
      }
    }
  }
  if (eps.empty()) throw lamina::config_error("empty eps list");
  for (std::size_t i = 0; i < eps.size(); ++i) {
    if (!(eps[i] > 0.0)) throw lamina::config_error("eps values must be positive");
    if (i > 0 && !(eps[i] < eps[i - 1])) {
      throw lamina::config_error(
          "eps list must be strictly descending (largest threshold first)");
    }
  }
  return eps;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw lamina::config_error("cannot open output file '" + path + "'");
  return os;
}

void write_manifest(const std::string& out_path, const std::string& command,
                    json args, const std::vector<std::string>& outputs) {
  json manifest = {
      {"schema_version", lamina::kSchemaVersion},
      {"tool_version", lamina::kVersion},
      {"command", command},
      {"config", std::move(args)},
      {"outputs", outputs},
  };
  std::ofstream os = open_output(out_path);
  os << manifest.dump(2) << "\n";
}

std::string manifest_path_for(const std::string& out) {
  return out + ".manifest.json";
}

struct CommonOpts {
  std::uint64_t seed = 42;
  int threads = lamina::default_thread_count();
};

int cmd_triangulate(std::int64_t n, const CommonOpts& opts,
                    std::uint64_t stream_id, const std::string& records_out,
                    const std::string& dump_path) {
  const lamina::ExcursionPath path = lamina::sample_brownian_excursion(
      n, lamina::derive_stream(opts.seed, stream_id));
  std::vector<std::string> outputs;
  if (!dump_path.empty()) {
    std::ofstream os = open_output(dump_path);
    os << "index,value\n";
    char buf[64];
    for (std::int64_t k = 0; k <= path.n; ++k) {
      std::snprintf(buf, sizeof(buf), "%lld,%.17g\n", static_cast<long long>(k),
                    path.values[static_cast<std::size_t>(k)]);
      os << buf;
    }
    outputs.push_back(dump_path);
  }
  const lamina::DislocationTree tree = lamina::extract_dislocations(path);
  {
    std::ofstream os = open_output(records_out);
    lamina::write_records_csv(tree, os);
    outputs.push_back(records_out);
  }
  write_manifest(manifest_path_for(records_out), "triangulate",
                 json{{"n", n}, {"seed", opts.seed}, {"stream", stream_id}},
                 outputs);
  return 0;
}

int cmd_count_large(std::int64_t n, std::int64_t replicates,
                    const std::string& kind_name, const std::string& eps_text,
                    const CommonOpts& opts, const std::string& out) {
  const lamina::SizeKind kind = lamina::parse_size_kind(kind_name);
  const std::vector<double> eps_desc = parse_eps_descending(eps_text);
  std::vector<double> grid(eps_desc.rbegin(), eps_desc.rend());
  if (replicates < 2) throw lamina::config_error("need at least 2 replicates");

  const double lambda = kind == lamina::SizeKind::area ? 0.5 : 1.0;
  std::vector<std::vector<std::int64_t>> rows(
      static_cast<std::size_t>(replicates));
  lamina::parallel_for_replicates(replicates, opts.threads, [&](std::int64_t r) {
    const lamina::ExcursionPath path = lamina::sample_brownian_excursion(
        n, lamina::derive_stream(opts.seed, static_cast<std::uint64_t>(r)));
    const lamina::DislocationTree tree = lamina::extract_dislocations(path);
    rows[static_cast<std::size_t>(r)] =
        lamina::count_large_sweep(tree, kind, grid);
  });

  lamina::EpsilonSweep sweep(grid, lambda);
  for (const auto& row : rows) sweep.add_replicate(row);
  {
    std::ofstream os = open_output(out);
    lamina::write_sweep_csv(sweep, os);
  }
  write_manifest(manifest_path_for(out), "count-large",
                 json{{"n", n},
                      {"replicates", replicates},
                      {"kind", kind_name},
                      {"eps", eps_desc},
                      {"scaling_exponent", lambda},
                      {"seed", opts.seed},
                      {"threads", opts.threads}},
                 {out});
  return 0;
}

int cmd_longest_chord(std::int64_t n, std::int64_t replicates,
                      const CommonOpts& opts, const std::string& out) {
  if (replicates < 1) throw lamina::config_error("need at least 1 replicate");
  std::vector<double> fractions(static_cast<std::size_t>(replicates));
  std::vector<double> lengths(static_cast<std::size_t>(replicates));
  std::vector<unsigned char> degenerate(static_cast<std::size_t>(replicates), 0);
  lamina::parallel_for_replicates(replicates, opts.threads, [&](std::int64_t r) {
    const lamina::ExcursionPath path = lamina::sample_brownian_excursion(
        n, lamina::derive_stream(opts.seed, static_cast<std::uint64_t>(r)));
    const lamina::DislocationTree tree = lamina::extract_dislocations(path);
    const lamina::CentroidResult centroid = lamina::find_centroid(tree);
    const lamina::LongestChord chord =
        lamina::longest_chord_fraction(tree, centroid.record_id);
    fractions[static_cast<std::size_t>(r)] = chord.fraction;
    lengths[static_cast<std::size_t>(r)] = chord.length;
    degenerate[static_cast<std::size_t>(r)] = centroid.degenerate ? 1 : 0;
  });

  {
    std::ofstream os = open_output(out);
    os << "replicate,L,chord\n";
    char buf[96];
    for (std::int64_t r = 0; r < replicates; ++r) {
      std::snprintf(buf, sizeof(buf), "%lld,%.17g,%.17g\n",
                    static_cast<long long>(r),
                    fractions[static_cast<std::size_t>(r)],
                    lengths[static_cast<std::size_t>(r)]);
      os << buf;
    }
  }

  const double ks = lamina::ks_distance(fractions, [](double a) {
    if (a <= 1.0 / 3.0) return 0.0;
    if (a >= 0.5) return 1.0;
    return lamina::longest_chord_cdf_brownian(a);
  });
  const double l_min = *std::min_element(fractions.begin(), fractions.end());
  std::int64_t degenerate_count = 0;
  for (unsigned char d : degenerate) degenerate_count += d;

  write_manifest(manifest_path_for(out), "longest-chord",
                 json{{"n", n},
                      {"replicates", replicates},
                      {"seed", opts.seed},
                      {"threads", opts.threads}},
                 {out});
  json summary = {{"ks_distance", ks},
                  {"l_min", l_min},
                  {"degenerate_count", degenerate_count},
                  {"replicates", replicates}};
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_fragment(const std::string& config_path, std::int64_t replicates,
                 const CommonOpts& opts, const std::string& out,
                 const std::string& events_out, double scale_exp,
                 double sigma_p_order) {
  std::ifstream in(config_path);
  if (!in) throw lamina::config_error("cannot read config '" + config_path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const lamina::FragConfig config = lamina::parse_frag_config(buffer.str());
  if (config.eps_grid.empty()) {
    throw lamina::config_error("config needs a non-empty eps_grid");
  }
  if (replicates < 2) throw lamina::config_error("need at least 2 replicates");
  if (config.law.maybe_lattice()) {
    std::cerr << "warning: point-mass law looks lattice supported; the "
                 "renewal limit does not apply\n";
  }
  const double lambda = scale_exp > 0.0 ? scale_exp : 1.0 / config.psi.b;

  std::vector<std::vector<std::int64_t>> rows(
      static_cast<std::size_t>(replicates));
  std::vector<unsigned char> aborted(static_cast<std::size_t>(replicates), 0);
  std::vector<double> sigma_values(static_cast<std::size_t>(replicates), 0.0);
  std::mutex events_mutex;
  std::string events_written;
  lamina::parallel_for_replicates(replicates, opts.threads, [&](std::int64_t r) {
    const lamina::SimResult result = lamina::simulate(
        config, lamina::derive_stream(opts.seed, static_cast<std::uint64_t>(r)));
    if (result.aborted) {
      aborted[static_cast<std::size_t>(r)] = 1;
      return;
    }
    rows[static_cast<std::size_t>(r)] = result.counts;
    if (sigma_p_order > 1.0) {
      sigma_values[static_cast<std::size_t>(r)] =
          lamina::sigma_p(result, sigma_p_order);
    }
    if (r == 0 && !events_out.empty()) {
      std::lock_guard<std::mutex> lock(events_mutex);
      std::ofstream os = open_output(events_out);
      lamina::write_events_csv(result, os);
      events_written = events_out;
    }
  });

  lamina::EpsilonSweep sweep(config.eps_grid, lambda);
  std::int64_t aborted_count = 0;
  lamina::RunningMoments sigma_moments;
  for (std::int64_t r = 0; r < replicates; ++r) {
    if (aborted[static_cast<std::size_t>(r)]) {
      ++aborted_count;
      continue;
    }
    sweep.add_replicate(rows[static_cast<std::size_t>(r)]);
    if (sigma_p_order > 1.0) {
      sigma_moments.add(sigma_values[static_cast<std::size_t>(r)]);
    }
  }
  if (sweep.replicates() < 2) {
    throw lamina::numerical_error(
        "fewer than two replicates survived (aborted: " +
        std::to_string(aborted_count) + ")");
  }
  {
    std::ofstream os = open_output(out);
    lamina::write_sweep_csv(sweep, os);
  }
  std::vector<std::string> outputs{out};
  if (!events_written.empty()) outputs.push_back(events_written);
  json args = {{"config", json::parse(lamina::frag_config_to_json(config))},
               {"replicates", replicates},
               {"seed", opts.seed},
               {"threads", opts.threads},
               {"scaling_exponent", lambda},
               {"aborted_replicates", aborted_count},
               {"truncation_drift_bias_bound",
                config.law.truncation_drift_bias()}};
  if (sigma_p_order > 1.0) {
    const lamina::EstimateWithCI est = lamina::with_normal_ci(sigma_moments);
    args["sigma_p"] = {{"p", sigma_p_order},
                       {"mean", est.mean},
                       {"ci_low", est.ci_low},
                       {"ci_high", est.ci_high}};
  }
  write_manifest(manifest_path_for(out), "fragment", args, outputs);
  return 0;
}

int cmd_stable(double beta, double delta, std::int64_t samples,
               const CommonOpts& opts, const std::string& out,
               const std::string& samples_out) {
  if (samples < 2) throw lamina::config_error("need at least 2 samples");

  // Pass 1: streaming pass for the largest-jump law and the optional dump.
  std::vector<double> delta1(static_cast<std::size_t>(samples));
  {
    lamina::Rng rng(lamina::derive_stream(opts.seed, 0));
    std::ofstream dump;
    if (!samples_out.empty()) {
      dump = open_output(samples_out);
      dump << "T1,Delta1,jump_count\n";
    }
    char buf[96];
    for (std::int64_t i = 0; i < samples; ++i) {
      const lamina::StableJumpSample s =
          lamina::sample_stable_jumps(beta, delta, rng);
      delta1[static_cast<std::size_t>(i)] = s.Delta1;
      if (dump.is_open()) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%zu\n", s.T1, s.Delta1,
                      s.jumps.size());
        dump << buf;
      }
    }
  }
  const double ks = lamina::ks_distance(delta1, [beta](double y) {
    return lamina::stable_largest_jump_cdf(beta, y);
  });

  const lamina::MonteCarloEstimate moment = lamina::stable_t1_moment(
      beta, samples, delta, lamina::derive_stream(opts.seed, 1));
  const double moment_target = lamina::stable_t1_moment_target(beta);

  json identities = json::array();
  std::uint64_t stream_id = 2;
  for (const double p : {1.0, 2.0}) {
    const lamina::MonteCarloEstimate est = lamina::stable_phi_identity(
        beta, p, samples, delta, lamina::derive_stream(opts.seed, stream_id++));
    const double target = lamina::laplace_exponent_stable(beta, p);
    identities.push_back({{"p", p},
                          {"value", est.value},
                          {"ci_low", est.ci_low},
                          {"ci_high", est.ci_high},
                          {"target", target},
                          {"rel_err", std::fabs(est.value - target) / target}});
  }

  json summary = {
      {"beta", beta},
      {"delta", delta},
      {"samples", samples},
      {"seed", opts.seed},
      {"delta1_ks", ks},
      {"t1_moment",
       {{"value", moment.value},
        {"ci_low", moment.ci_low},
        {"ci_high", moment.ci_high},
        {"target", moment_target},
        {"rel_err", std::fabs(moment.value - moment_target) / moment_target}}},
      {"phi_identity", identities},
  };
  if (!out.empty()) {
    std::ofstream os = open_output(out);
    os << summary.dump(2) << "\n";
    std::vector<std::string> outputs{out};
    if (!samples_out.empty()) outputs.push_back(samples_out);
    write_manifest(manifest_path_for(out), "stable",
                   json{{"beta", beta},
                        {"delta", delta},
                        {"samples", samples},
                        {"seed", opts.seed}},
                   outputs);
  }
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_sweep(std::int64_t n, std::int64_t replicates,
              const std::string& kind_name, const std::string& eps_text,
              const CommonOpts& opts, const std::string& prefix) {
  const lamina::SizeKind kind = lamina::parse_size_kind(kind_name);
  const std::vector<double> eps_desc = parse_eps_descending(eps_text);
  std::vector<double> grid(eps_desc.rbegin(), eps_desc.rend());
  if (replicates < 2) throw lamina::config_error("need at least 2 replicates");

  const bool per_path_target = kind == lamina::SizeKind::area;
  const double lambda = per_path_target ? 0.5 : 1.0;
  std::vector<std::vector<std::int64_t>> rows(
      static_cast<std::size_t>(replicates));
  std::vector<double> targets(static_cast<std::size_t>(replicates), 0.0);
  lamina::parallel_for_replicates(replicates, opts.threads, [&](std::int64_t r) {
    const lamina::ExcursionPath path = lamina::sample_brownian_excursion(
        n, lamina::derive_stream(opts.seed, static_cast<std::uint64_t>(r)));
    const lamina::DislocationTree tree = lamina::extract_dislocations(path);
    rows[static_cast<std::size_t>(r)] =
        lamina::count_large_sweep(tree, kind, grid);
    if (per_path_target) {
      targets[static_cast<std::size_t>(r)] =
          4.0 * lamina::level_functional(
                    tree, [](double x) { return std::sin(kPi * x); });
    }
  });

  lamina::EpsilonSweep sweep(grid, lambda);
  for (const auto& row : rows) sweep.add_replicate(row);

  const lamina::TheoryConstants constants = lamina::TheoryConstants::compute();
  std::vector<lamina::RatioRow> ratios;
  if (per_path_target) {
    ratios = lamina::ratio_diagnostic(sweep, targets);
  } else {
    const double target = kind == lamina::SizeKind::shortest_edge
                              ? constants.edge_count_limit
                              : constants.small_child_count_limit;
    ratios = lamina::ratio_diagnostic(sweep, target);
  }

  const std::string sweep_path = prefix + "_sweep.csv";
  const std::string ratio_path = prefix + "_ratio.csv";
  {
    std::ofstream os = open_output(sweep_path);
    lamina::write_sweep_csv(sweep, os);
  }
  {
    std::ofstream os = open_output(ratio_path);
    lamina::write_ratio_csv(ratios, os);
  }
  write_manifest(prefix + "_manifest.json", "sweep",
                 json{{"n", n},
                      {"replicates", replicates},
                      {"kind", kind_name},
                      {"eps", eps_desc},
                      {"scaling_exponent", lambda},
                      {"seed", opts.seed},
                      {"threads", opts.threads}},
                 {sweep_path, ratio_path});
  return 0;
}

json mc_record(const std::string& name, json inputs,
               const lamina::MonteCarloEstimate& est) {
  return json{{"name", name},
              {"inputs", std::move(inputs)},
              {"value", est.value},
              {"ci_low", est.ci_low},
              {"ci_high", est.ci_high},
              {"rel_tol", nullptr}};
}

json exact_record(const std::string& name, json inputs, double value,
                  double rel_tol) {
  return json{{"name", name},
              {"inputs", std::move(inputs)},
              {"value", value},
              {"ci_low", nullptr},
              {"ci_high", nullptr},
              {"rel_tol", rel_tol}};
}

int cmd_theory(const std::string& eval, double p, double u, double a,
               double beta, std::int64_t samples, double delta,
               double rel_tol, const CommonOpts& opts) {
  lamina::QuadratureSpec spec;
  spec.rel_tol = rel_tol;
  json record;
  if (eval == "phi") {
    record = exact_record("phi", {{"p", p}},
                          lamina::laplace_exponent_brownian(p), 1e-12);
  } else if (eval == "m") {
    record = exact_record("m", json::object(),
                          lamina::log_mass_drift_brownian_quadrature(spec),
                          rel_tol);
  } else if (eval == "g1") {
    record = exact_record("g1", {{"u", u}}, lamina::brownian_split_tail(u),
                          1e-12);
  } else if (eval == "chord-cdf") {
    record = exact_record("chord-cdf", {{"a", a}},
                          lamina::longest_chord_cdf_brownian(a), 1e-12);
  } else if (eval == "stable-chord-cdf") {
    const lamina::MonteCarloEstimate est = lamina::stable_longest_chord_cdf(
        beta, a, samples, delta, lamina::derive_stream(opts.seed, 0), spec);
    record = mc_record("stable-chord-cdf",
                       {{"beta", beta},
                        {"a", a},
                        {"samples", samples},
                        {"delta", delta},
                        {"seed", opts.seed}},
                       est);
  } else if (eval == "stable-face-rate") {
    const lamina::MonteCarloEstimate est = lamina::stable_large_face_rate(
        beta, samples, delta, lamina::derive_stream(opts.seed, 0));
    record = mc_record("stable-face-rate",
                       {{"beta", beta},
                        {"samples", samples},
                        {"delta", delta},
                        {"seed", opts.seed}},
                       est);
  } else if (eval == "constants") {
    const lamina::TheoryConstants c = lamina::TheoryConstants::compute();
    record = json::array(
        {exact_record("log_mass_drift", json::object(), c.log_mass_drift, 1e-12),
         exact_record("edge_count_limit", json::object(), c.edge_count_limit,
                      1e-12),
         exact_record("area_count_mean_limit", json::object(),
                      c.area_count_mean_limit, 1e-12),
         exact_record("small_child_count_limit", json::object(),
                      c.small_child_count_limit, 1e-12)});
  } else {
    throw lamina::config_error(
        "unknown --eval '" + eval +
        "' (expected phi|m|g1|chord-cdf|stable-chord-cdf|stable-face-rate|"
        "constants)");
  }
  std::cout << record.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo laboratory for large faces of random laminations "
               "and self-similar fragmentations"};
  app.set_version_flag("--version", std::string("lamina ") + lamina::kVersion +
                                        " (schema " +
                                        std::to_string(lamina::kSchemaVersion) +
                                        ")");
  app.require_subcommand(1);

  CommonOpts opts;

  // triangulate
  auto* tri = app.add_subcommand("triangulate",
                                 "Sample one excursion and dump its records");
  std::int64_t tri_n = 1 << 10;
  std::uint64_t tri_stream = 0;
  std::string tri_records = "records.csv";
  std::string tri_dump;
  tri->add_option("--n", tri_n, "grid resolution (cells)");
  tri->add_option("--seed", opts.seed, "random seed");
  tri->add_option("--stream", tri_stream, "stream (replicate) id");
  tri->add_option("--records-out", tri_records, "records CSV path");
  tri->add_option("--dump-path", tri_dump, "optional path CSV (index,value)");

  // count-large
  auto* cl = app.add_subcommand("count-large",
                                "Scaled counts of large triangles over an eps "
                                "grid, aggregated over replicates");
  std::int64_t cl_n = 1 << 16;
  std::int64_t cl_reps = 100;
  std::string cl_kind = "edge";
  std::string cl_eps = "0.4,0.2,0.1,0.05";
  std::string cl_out = "sweep.csv";
  cl->add_option("--n", cl_n, "grid resolution (cells)");
  cl->add_option("--replicates", cl_reps, "number of replicates");
  cl->add_option("--kind", cl_kind, "size functional: edge|area|psi1");
  cl->add_option("--eps", cl_eps, "descending eps list or geom(start,stop,k)");
  cl->add_option("--seed", opts.seed, "random seed");
  cl->add_option("--threads", opts.threads, "worker threads");
  cl->add_option("--out", cl_out, "sweep CSV path");

  // longest-chord
  auto* lc = app.add_subcommand("longest-chord",
                                "Longest-chord arc fraction per replicate");
  std::int64_t lc_n = 1 << 16;
  std::int64_t lc_reps = 1000;
  std::string lc_out = "chords.csv";
  lc->add_option("--n", lc_n, "grid resolution (cells)");
  lc->add_option("--replicates", lc_reps, "number of replicates");
  lc->add_option("--seed", opts.seed, "random seed");
  lc->add_option("--threads", opts.threads, "worker threads");
  lc->add_option("--out", lc_out, "per-replicate CSV path");

  // fragment
  auto* fr = app.add_subcommand("fragment",
                                "Generic fragmentation runs from a JSON config");
  std::string fr_config;
  std::int64_t fr_reps = 100;
  std::string fr_out = "frag_sweep.csv";
  std::string fr_events;
  double fr_scale_exp = 0.0;
  double fr_sigma_p = 0.0;
  fr->add_option("--config", fr_config, "JSON config path")->required();
  fr->add_option("--replicates", fr_reps, "number of replicates");
  fr->add_option("--seed", opts.seed, "random seed");
  fr->add_option("--threads", opts.threads, "worker threads");
  fr->add_option("--out", fr_out, "sweep CSV path");
  fr->add_option("--events-out", fr_events, "events CSV of replicate 0");
  fr->add_option("--scale-exp", fr_scale_exp,
                 "scaling exponent for eps^lambda N(eps); default 1/b");
  fr->add_option("--sigma-p", fr_sigma_p,
                 "additionally report the mean mass-power integral of this order");

  // stable
  auto* st = app.add_subcommand("stable",
                                "Stable subordinator jump laws and identities");
  double st_beta = 1.5;
  double st_delta = 1e-6;
  std::int64_t st_samples = 20000;
  std::string st_out;
  std::string st_samples_out;
  st->add_option("--beta", st_beta, "stable index in (1,2)");
  st->add_option("--delta", st_delta, "small-jump cutoff");
  st->add_option("--samples", st_samples, "Monte Carlo samples");
  st->add_option("--seed", opts.seed, "random seed");
  st->add_option("--out", st_out, "summary JSON path (also printed)");
  st->add_option("--samples-out", st_samples_out, "per-sample CSV path");

  // theory
  auto* th = app.add_subcommand("theory", "Closed forms and quadrature");
  std::string th_eval = "constants";
  double th_p = 1.0, th_u = 0.25, th_a = 0.4, th_beta = 1.5;
  double th_rel_tol = 1e-10, th_delta = 1e-6;
  std::int64_t th_samples = 100000;
  th->add_option("--eval", th_eval,
                 "phi|m|g1|chord-cdf|stable-chord-cdf|stable-face-rate|constants");
  th->add_option("--p", th_p, "Laplace exponent argument");
  th->add_option("--u", th_u, "tail argument");
  th->add_option("--a", th_a, "chord arc fraction in (0, 1/2)");
  th->add_option("--beta", th_beta, "stable index in (1,2)");
  th->add_option("--samples", th_samples, "Monte Carlo samples");
  th->add_option("--delta", th_delta, "small-jump cutoff");
  th->add_option("--seed", opts.seed, "random seed");
  th->add_option("--rel-tol", th_rel_tol, "quadrature relative tolerance");

  // sweep
  auto* sw = app.add_subcommand("sweep",
                                "Scaling study with ratio diagnostics against "
                                "the limit targets");
  std::int64_t sw_n = 1 << 16;
  std::int64_t sw_reps = 200;
  std::string sw_kind = "edge";
  std::string sw_eps = "0.4,0.2,0.1,0.05";
  std::string sw_prefix = "study";
  sw->add_option("--n", sw_n, "grid resolution (cells)");
  sw->add_option("--replicates", sw_reps, "number of replicates");
  sw->add_option("--kind", sw_kind, "size functional: edge|area|psi1");
  sw->add_option("--eps", sw_eps, "descending eps list or geom(start,stop,k)");
  sw->add_option("--seed", opts.seed, "random seed");
  sw->add_option("--threads", opts.threads, "worker threads");
  sw->add_option("--out", sw_prefix, "output prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
    app.exit(e);
    return 2;
  }

  try {
    if (tri->parsed()) {
      return cmd_triangulate(tri_n, opts, tri_stream, tri_records, tri_dump);
    }
    if (cl->parsed()) {
      return cmd_count_large(cl_n, cl_reps, cl_kind, cl_eps, opts, cl_out);
    }
    if (lc->parsed()) {
      return cmd_longest_chord(lc_n, lc_reps, opts, lc_out);
    }
    if (fr->parsed()) {
      return cmd_fragment(fr_config, fr_reps, opts, fr_out, fr_events,
                          fr_scale_exp, fr_sigma_p);
    }
    if (st->parsed()) {
      return cmd_stable(st_beta, st_delta, st_samples, opts, st_out,
                        st_samples_out);
    }
    if (th->parsed()) {
      return cmd_theory(th_eval, th_p, th_u, th_a, th_beta, th_samples,
                        th_delta, th_rel_tol, opts);
    }
    if (sw->parsed()) {
      return cmd_sweep(sw_n, sw_reps, sw_kind, sw_eps, opts, sw_prefix);
    }
  } catch (const lamina::config_error& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const lamina::numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
