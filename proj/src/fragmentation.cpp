#include "lamina/fragmentation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <queue>

#include <json.hpp>

#include "lamina/errors.hpp"
#include "lamina/lamination.hpp"

namespace lamina {

namespace {

constexpr double kPi = 3.141592653589793238462643383279;
constexpr double kSqrt2OverSqrtPi = 1.5957691216057307117597842397375;  // 2*sqrt(2/pi)

double brownian_tail(double u) {
  if (u >= 0.5) return 0.0;
  return kSqrt2OverSqrtPi * (1.0 - 2.0 * u) / std::sqrt(u * (1.0 - u));
}

}  // namespace

DislocationLaw DislocationLaw::point_mass(double s1) {
  if (!(s1 >= 0.5 && s1 < 1.0)) {
    throw config_error("point-mass law needs s1 in [1/2, 1), got " +
                       std::to_string(s1));
  }
  DislocationLaw law;
  law.kind_ = Kind::point_mass;
  law.s1_point_ = s1;
  law.delta_prime_ = 0.0;
  law.total_rate_ = 1.0;
  return law;
}

DislocationLaw DislocationLaw::brownian(double delta_prime) {
  if (!(delta_prime > 0.0 && delta_prime < 0.5)) {
    throw config_error("brownian law truncation must lie in (0, 1/2)");
  }
  DislocationLaw law;
  law.kind_ = Kind::brownian;
  law.delta_prime_ = delta_prime;
  law.total_rate_ = brownian_tail(delta_prime);
  return law;
}

DislocationLaw DislocationLaw::power_tail(double kappa, double delta_prime) {
  if (!(kappa > 0.0)) {
    throw config_error("power-tail law needs kappa > 0");
  }
  if (!(delta_prime > 0.0 && delta_prime < 0.5)) {
    throw config_error("power-tail law truncation must lie in (0, 1/2)");
  }
  DislocationLaw law;
  law.kind_ = Kind::power_tail;
  law.kappa_ = kappa;
  law.delta_prime_ = delta_prime;
  law.total_rate_ = law.tail(delta_prime);
  return law;
}

double DislocationLaw::tail(double u) const {
  if (!(u > 0.0)) throw config_error("tail argument must be positive");
  switch (kind_) {
    case Kind::point_mass:
      return (1.0 - s1_point_) > u ? 1.0 : 0.0;
    case Kind::brownian:
      return brownian_tail(u);
    case Kind::power_tail:
      if (u >= 0.5) return 0.0;
      return 2.0 * kappa_ * (1.0 / std::sqrt(u) - std::sqrt(2.0));
  }
  return 0.0;
}

double DislocationLaw::truncation_drift_bias() const {
  // log(1/(1-u)) <= u / (1-delta') on (0, delta'], so the dropped drift is
  // bounded by that factor times the first moment of the truncated part.
  const double d = delta_prime_;
  if (d <= 0.0) return 0.0;
  const double factor = 1.0 / (1.0 - d);
  switch (kind_) {
    case Kind::point_mass:
      return 0.0;
    case Kind::brownian:
      // integral of u^(1/2-1) (1-u)^(-3/2) du over (0,d] = 2 sqrt(d/(1-d))
      return factor * (kSqrt2OverSqrtPi / 2.0) * 2.0 * std::sqrt(d / (1.0 - d));
    case Kind::power_tail:
      return factor * kappa_ * 2.0 * std::sqrt(d);
  }
  return 0.0;
}

bool DislocationLaw::maybe_lattice() const {
  if (kind_ != Kind::point_mass) return false;  // continuous laws
  const double s1 = s1_point_;
  const double s2 = 1.0 - s1;
  if (s2 <= 0.0) return true;  // degenerate
  const double ratio = std::log(s1) / std::log(s2);
  // Probe small rationals p/q; a near-exact hit means the tagged subordinator
  // lives on an arithmetic grid.
  for (int q = 1; q <= 64; ++q) {
    const double p = std::round(ratio * q);
    if (std::fabs(ratio - p / q) < 1e-9) return true;
  }
  return false;
}

double DislocationLaw::sample_s1(Rng& rng) const {
  switch (kind_) {
    case Kind::point_mass:
      return s1_point_;
    case Kind::brownian: {
      // Invert nubar(u) = V * nubar(delta'): with t(u) = (1-2u)/sqrt(u(1-u)),
      // t is the tail up to the constant factor and inverts in closed form.
      const double t_cut = (1.0 - 2.0 * delta_prime_) /
                           std::sqrt(delta_prime_ * (1.0 - delta_prime_));
      const double t = rng.uniform() * t_cut;
      const double u = 0.5 * (1.0 - t / std::sqrt(4.0 + t * t));
      return 1.0 - u;
    }
    case Kind::power_tail: {
      const double v = rng.uniform();
      const double root =
          v * (1.0 / std::sqrt(delta_prime_) - std::sqrt(2.0)) + std::sqrt(2.0);
      return 1.0 - 1.0 / (root * root);
    }
  }
  return s1_point_;
}

double PsiSpec::operator()(double x, double s1) const {
  switch (kind) {
    case Kind::parent_mass:
      return x;
    case Kind::child_mass_power:
      return (1.0 - s1) * std::pow(x, b);
    case Kind::shortest_edge:
      return shortest_edge_functional(x, s1, 1.0 - s1);
    case Kind::area:
      return area_functional(x, s1, 1.0 - s1);
  }
  return 0.0;
}

double PsiSpec::required_split_fraction(double eps) const {
  switch (kind) {
    case Kind::parent_mass:
      return -1.0;
    case Kind::child_mass_power:
      // (1-s1) x^b > eps with x <= 1 forces 1-s1 > eps.
      return eps;
    case Kind::shortest_edge:
    case Kind::area:
      // Both are dominated by 2 sin(pi x s2) with x s2 <= 1/2.
      if (eps >= 2.0) return 0.5;
      return std::asin(0.5 * eps) / kPi;
  }
  return -1.0;
}

PsiSpec PsiSpec::parse(const std::string& kind_name, double b) {
  PsiSpec psi;
  psi.b = b;
  if (kind_name == "parent_mass") {
    psi.kind = Kind::parent_mass;
  } else if (kind_name == "child_mass_power") {
    psi.kind = Kind::child_mass_power;
    if (!(b > 0.0)) throw config_error("child_mass_power needs b > 0");
  } else if (kind_name == "edge") {
    psi.kind = Kind::shortest_edge;
  } else if (kind_name == "area") {
    psi.kind = Kind::area;
  } else {
    throw config_error("unknown psi kind '" + kind_name + "'");
  }
  return psi;
}

std::string PsiSpec::name() const {
  switch (kind) {
    case Kind::parent_mass:
      return "parent_mass";
    case Kind::child_mass_power:
      return "child_mass_power";
    case Kind::shortest_edge:
      return "edge";
    case Kind::area:
      return "area";
  }
  return "?";
}

void FragConfig::validate() const {
  if (!(mass_cutoff > 0.0 && mass_cutoff < 1.0)) {
    throw config_error("mass_cutoff must lie in (0,1)");
  }
  if (max_events <= 0) throw config_error("max_events must be positive");
  if (!(law.total_rate() > 0.0) || !std::isfinite(law.total_rate())) {
    throw config_error("law splitting rate must be finite and positive");
  }
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0)) throw config_error("eps grid must be positive");
    if (i > 0 && !(eps_grid[i] > eps_grid[i - 1])) {
      throw config_error("eps grid must be strictly ascending");
    }
  }
  if (!eps_grid.empty()) {
    const double u0 = psi.required_split_fraction(eps_grid.front());
    if (u0 < 0.0) {
      if (law.truncated()) {
        throw config_error(
            "psi kind parent_mass counts every split, which is infinite under "
            "a truncated law; use a finite law");
      }
    } else if (law.truncated() && law.delta_prime() > u0) {
      throw config_error(
          "truncation delta_prime=" + std::to_string(law.delta_prime()) +
          " may drop (psi,eps)-large events; need delta_prime <= " +
          std::to_string(u0));
    }
  }
}

SimResult simulate(const FragConfig& config, RandomStream stream) {
  config.validate();
  Rng rng(stream);

  const double rate = config.law.total_rate();
  const double alpha = config.alpha;
  const bool homogeneous = (alpha == 0.0);

  struct Pending {
    double death_h;
    std::int64_t id;
    double mass;
    double birth_ss;
    double lifetime_h;
    double s1;
    bool operator>(const Pending& o) const {
      return death_h > o.death_h || (death_h == o.death_h && id > o.id);
    }
  };
  std::priority_queue<Pending, std::vector<Pending>, std::greater<Pending>> live;

  std::int64_t next_id = 0;
  const auto spawn = [&](double mass, double birth_h, double birth_ss) {
    const double lifetime_h = rng.exponential(rate);
    const double s1 = config.law.sample_s1(rng);
    live.push(Pending{birth_h + lifetime_h, next_id++, mass, birth_ss,
                      lifetime_h, s1});
  };

  SimResult result;
  result.total_rate = rate;
  result.truncation_drift_bias = config.law.truncation_drift_bias();
  result.counts.assign(config.eps_grid.size(), 0);

  spawn(1.0, 0.0, 0.0);
  while (!live.empty()) {
    if (static_cast<std::int64_t>(result.events.size()) >= config.max_events) {
      result.aborted = true;
      break;
    }
    const Pending frag = live.top();
    live.pop();

    const double mass = frag.mass;
    const double lifetime_ss =
        homogeneous ? frag.lifetime_h
                    : frag.lifetime_h * std::pow(mass, -alpha);

    FragEvent ev;
    ev.t_homog = frag.death_h;
    ev.t_selfsim = frag.birth_ss + lifetime_ss;
    ev.parent_mass = mass;
    ev.s1 = frag.s1;
    ev.psi_value = config.psi(mass, frag.s1);
    ev.lifetime_homog = frag.lifetime_h;
    ev.lifetime_selfsim = lifetime_ss;
    result.events.push_back(ev);

    for (std::size_t i = 0; i < config.eps_grid.size(); ++i) {
      if (ev.psi_value > config.eps_grid[i]) {
        ++result.counts[i];
      } else {
        break;
      }
    }

    const double child1 = mass * frag.s1;
    const double child2 = mass - child1;  // exact conservation
    if (child1 >= config.mass_cutoff) {
      spawn(child1, frag.death_h, ev.t_selfsim);
    } else {
      result.frozen_masses.push_back(child1);
    }
    if (child2 >= config.mass_cutoff) {
      spawn(child2, frag.death_h, ev.t_selfsim);
    } else {
      result.frozen_masses.push_back(child2);
    }
  }
  return result;
}

std::int64_t count_large_events(const SimResult& result,
                                const FragConfig& config, double eps) {
  if (!(eps > 0.0)) throw config_error("eps must be positive");
  const double u0 = config.psi.required_split_fraction(eps);
  if (u0 < 0.0) {
    if (config.law.truncated()) {
      throw config_error(
          "cannot count parent_mass-large events under a truncated law");
    }
  } else if (config.law.truncated() && config.law.delta_prime() > u0) {
    throw config_error("truncation may have dropped large events at eps=" +
                       std::to_string(eps));
  }
  std::int64_t count = 0;
  for (const FragEvent& ev : result.events) {
    if (ev.psi_value > eps) ++count;
  }
  return count;
}

double sigma_p(const SimResult& result, double p) {
  if (!(p > 1.0)) throw config_error("sigma_p requires p > 1");
  double sum = 0.0;
  for (const FragEvent& ev : result.events) {
    sum += std::pow(ev.parent_mass, p) * ev.lifetime_homog;
  }
  // Frozen fragments keep their expected residual first lifetime.
  const double inv_rate = 1.0 / result.total_rate;
  for (const double mass : result.frozen_masses) {
    sum += std::pow(mass, p) * inv_rate;
  }
  return sum;
}

double index_change_gap(const SimResult& result, double alpha,
                        const std::function<double(double)>& f) {
  double lhs = 0.0;
  double rhs = 0.0;
  for (const FragEvent& ev : result.events) {
    const double fx = f(ev.parent_mass);
    lhs += fx * ev.lifetime_homog;
    rhs += std::pow(ev.parent_mass, alpha) * fx * ev.lifetime_selfsim;
  }
  const double scale = std::max({std::fabs(lhs), std::fabs(rhs), 1e-300});
  return std::fabs(lhs - rhs) / scale;
}

bool index_change_check(const SimResult& result, double alpha,
                        const std::function<double(double)>& f,
                        double rel_tol) {
  return index_change_gap(result, alpha, f) <= rel_tol;
}

void write_events_csv(const SimResult& result, std::ostream& os) {
  os << "t_homog,t_selfsim,parent_mass,s1,psi_value\n";
  char buf[192];
  for (const FragEvent& ev : result.events) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  ev.t_homog, ev.t_selfsim, ev.parent_mass, ev.s1,
                  ev.psi_value);
    os << buf;
  }
}

namespace {

void reject_unknown_keys(const nlohmann::json& obj,
                         std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        ok = true;
        break;
      }
    }
    if (!ok) {
      throw config_error("unknown key '" + item.key() + "' in " + where);
    }
  }
}

}  // namespace

FragConfig parse_frag_config(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("bad JSON config: ") + e.what());
  }
  try {
    reject_unknown_keys(
        doc, {"alpha", "law", "mass_cutoff", "psi", "eps_grid", "max_events"},
        "config");
    FragConfig config;
    config.alpha = doc.at("alpha").get<double>();

    const nlohmann::json& law = doc.at("law");
    reject_unknown_keys(law, {"kind", "params", "delta_prime"}, "law");
    const std::string kind = law.at("kind").get<std::string>();
    const double delta_prime = law.value("delta_prime", 1e-6);
    if (kind == "point_mass") {
      const nlohmann::json& params = law.at("params");
      reject_unknown_keys(params, {"s1"}, "law.params");
      config.law = DislocationLaw::point_mass(params.at("s1").get<double>());
    } else if (kind == "brownian") {
      if (law.contains("params")) {
        reject_unknown_keys(law.at("params"), {}, "law.params");
      }
      config.law = DislocationLaw::brownian(delta_prime);
    } else if (kind == "power_tail") {
      double kappa = 1.0;
      if (law.contains("params")) {
        reject_unknown_keys(law.at("params"), {"kappa"}, "law.params");
        kappa = law.at("params").value("kappa", 1.0);
      }
      config.law = DislocationLaw::power_tail(kappa, delta_prime);
    } else {
      throw config_error("unknown law kind '" + kind + "'");
    }

    config.mass_cutoff = doc.value("mass_cutoff", 1e-4);

    if (doc.contains("psi")) {
      const nlohmann::json& psi = doc.at("psi");
      reject_unknown_keys(psi, {"kind", "b"}, "psi");
      config.psi =
          PsiSpec::parse(psi.at("kind").get<std::string>(), psi.value("b", 1.0));
    }

    if (doc.contains("eps_grid")) {
      config.eps_grid = doc.at("eps_grid").get<std::vector<double>>();
    }
    config.max_events = doc.value("max_events", std::int64_t{50'000'000});
    config.validate();
    return config;
  } catch (const nlohmann::json::exception& e) {
    throw config_error(std::string("bad config value: ") + e.what());
  }
}

std::string frag_config_to_json(const FragConfig& config) {
  nlohmann::json law;
  switch (config.law.kind()) {
    case DislocationLaw::Kind::point_mass:
      law = {{"kind", "point_mass"}, {"params", {{"s1", config.law.point_s1()}}}};
      break;
    case DislocationLaw::Kind::brownian:
      law = {{"kind", "brownian"}, {"delta_prime", config.law.delta_prime()}};
      break;
    case DislocationLaw::Kind::power_tail:
      law = {{"kind", "power_tail"},
             {"params", {{"kappa", config.law.kappa()}}},
             {"delta_prime", config.law.delta_prime()}};
      break;
  }
  nlohmann::json doc = {
      {"alpha", config.alpha},
      {"law", law},
      {"mass_cutoff", config.mass_cutoff},
      {"psi", {{"kind", config.psi.name()}, {"b", config.psi.b}}},
      {"eps_grid", config.eps_grid},
      {"max_events", config.max_events},
  };
  return doc.dump(2);
}

}  // namespace lamina
