#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "confgas/error.hpp"
#include "confgas/ginibre.hpp"
#include "confgas/orthopoly.hpp"
#include "confgas/potential.hpp"
#include "confgas/profiles.hpp"
#include "confgas/sampler.hpp"
#include "confgas/specfun.hpp"
#include "confgas/ward.hpp"

namespace confgas::cli {
namespace {

const json kGinibre = {{"family", "ginibre"}};

const std::map<std::string, json>& defaults() {
  static const std::map<std::string, json> d = {
      {"profile", {{"c", "1,10,inf"}, {"x", "-4:4:0.05"}, {"tail_column", false}}},
      {"kernel",
       {{"n", "256,1024,4096"}, {"c", "0.5,1,2"}, {"x", "-3,-2,-1,0,1,2"}, {"path", "ginibre"},
        {"potential", kGinibre}}},
      {"maxmod",
       {{"n", 10000}, {"c", 1.0}, {"samples", 20000}, {"crosscheck", false}, {"path", "ginibre"},
        {"potential", kGinibre}}},
      {"ward", {{"c", "0.1,1,10"}, {"x", "-2,-1,0,1,2"}, {"xi", "-4,-1,0,1,4"}, {"perturb", ""}, {"c0", 0.0}}},
      {"quasipoly",
       {{"mode", "w2"}, {"n", "500"}, {"c", "1,0.05,50"}, {"j", "100:500:20"}, {"x", "-1,0,1"},
        {"points", 241}, {"r_max", 1.2}, {"potential", kGinibre}}},
      {"growth", {{"tau", "0.25,0.5,0.75,0.99"}, {"step", 1e-3}, {"potential", kGinibre}}},
  };
  return d;
}

const std::map<std::string, std::map<std::string, double>>& default_tolerances() {
  static const std::map<std::string, std::map<std::string, double>> t = {
      {"profile", {{"left_limit", 5e-3}}},
      {"kernel", {{"limit_is_phi", 1e-10}, {"noise_floor", 1e-9}}},
      {"maxmod", {{"ks", 0.08}, {"crosscheck_se", 3.0}}},
      {"ward", {{"gaussian", 1e-8}, {"mass_one", 1e-8}, {"ward", 1e-6}, {"detector", 1e-2}}},
      {"quasipoly", {}},
      {"growth", {{"mass_condition", 1e-12}}},
  };
  return t;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) {
    cur.erase(0, cur.find_first_not_of(" \t"));
    cur.erase(cur.find_last_not_of(" \t") + 1);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

double to_double(const std::string& s, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("'" + key + "': cannot parse number '" + s + "'");
  }
}

// Accepts a JSON array of numbers, a comma list, or a range "a:b:step".
std::vector<double> real_list(const json& v, const std::string& key) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array()) {
    for (const auto& e : v) {
      if (!e.is_number()) throw ValidationError("'" + key + "' must contain numbers");
      out.push_back(e.get<double>());
    }
  } else if (v.is_string()) {
    const std::string s = v.get<std::string>();
    const auto parts = split(s, ':');
    if (parts.size() == 3 && s.find(',') == std::string::npos) {
      const double a = to_double(parts[0], key), b = to_double(parts[1], key), h = to_double(parts[2], key);
      if (!(h > 0.0) || b < a) throw ValidationError("'" + key + "': range needs a <= b and step > 0");
      const auto count = static_cast<long>(std::floor((b - a) / h + 1e-9)) + 1;
      for (long i = 0; i < count; ++i) out.push_back(a + i * h);
    } else {
      for (const auto& p : split(s, ',')) out.push_back(to_double(p, key));
    }
  } else {
    throw ValidationError("'" + key + "' must be a number, list or range");
  }
  if (out.empty()) throw ValidationError("'" + key + "' is empty");
  for (double d : out)
    if (!std::isfinite(d)) throw ValidationError("'" + key + "' contains a non-finite value");
  return out;
}

std::vector<int> int_list(const json& v, const std::string& key) {
  std::vector<int> out;
  for (double d : real_list(v, key)) {
    if (d != std::floor(d) || d < 1 || d > 2e7) throw ValidationError("'" + key + "' must hold positive integers");
    out.push_back(static_cast<int>(d));
  }
  return out;
}

std::vector<ConfinementParam> c_list(const json& v) {
  std::vector<ConfinementParam> out;
  if (v.is_number()) {
    out.push_back(ConfinementParam::parse(fmt(v.get<double>())));
  } else if (v.is_array()) {
    for (const auto& e : v)
      out.push_back(ConfinementParam::parse(e.is_string() ? e.get<std::string>() : fmt(e.get<double>())));
  } else if (v.is_string()) {
    for (const auto& p : split(v.get<std::string>(), ',')) out.push_back(ConfinementParam::parse(p));
  } else {
    throw ValidationError("'c' must be a number, list or comma string");
  }
  if (out.empty()) throw ValidationError("'c' is empty");
  return out;
}

std::vector<double> finite_c_list(const json& v) {
  std::vector<double> out;
  for (const auto& c : c_list(v)) {
    if (!c.is_finite()) throw ValidationError("this command needs finite positive c values");
    out.push_back(c.value);
  }
  return out;
}

RadialPotential potential_from(const json& v) {
  if (!v.is_object() || !v.contains("family") || !v["family"].is_string())
    throw ValidationError("'potential' must be an object with a string 'family'");
  const std::string fam = v["family"];
  if (fam == "ginibre") {
    if (v.size() != 1) throw ValidationError("'potential': ginibre takes no parameters");
    return RadialPotential::ginibre();
  }
  if (fam == "monomial") {
    for (const auto& [k, _] : v.items())
      if (k != "family" && k != "p" && k != "alpha") throw ValidationError("'potential': unknown key '" + k + "'");
    const double p = v.value("p", 2.0), alpha = v.value("alpha", 1.0);
    RadialPotential pot = RadialPotential::monomial(p, alpha);
    pot.validate();
    return pot;
  }
  throw ValidationError("'potential': unknown family '" + fam + "'");
}

bool is_ginibre(const json& pot) { return pot.value("family", "") == "ginibre"; }

struct Csv {
  std::ostringstream os;
  explicit Csv(const std::vector<std::string>& header) {
    for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
    os << '\n';
  }
  template <class... T>
  void row(const T&... cells) {
    bool first = true;
    ((os << (first ? "" : ",") << cell(cells), first = false), ...);
    os << '\n';
  }
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
};

Outcome cmd_profile(const ExperimentConfig& cfg) {
  const auto cs = c_list(cfg.params["c"]);
  const auto xs = real_list(cfg.params["x"], "x");
  const bool tail = cfg.params["tail_column"].get<bool>();
  Outcome out;
  Csv csv(tail ? std::vector<std::string>{"c", "x", "R", "four_x2_R"} : std::vector<std::string>{"c", "x", "R"});
  const double xmin = *std::min_element(xs.begin(), xs.end());
  for (const auto& c : cs) {
    double r_left = 0.0;
    for (double x : xs) {
      double r;
      try {
        r = density(cplx(x, 0.0), c);
      } catch (const ToleranceError& e) {
        throw ToleranceError("profile failed at c=" + c.str() + ", x=" + fmt(x) + ": " + e.what());
      }
      if (x == xmin) r_left = r;
      if (tail)
        csv.row(c.str(), x, r, 4.0 * x * x * r);
      else
        csv.row(c.str(), x, r);
    }
    if (xmin <= -5.0) {
      const double tol = cfg.tolerances.at("left_limit");
      out.checks.push_back({"left_limit[c=" + c.str() + "]", std::abs(r_left - 1.0) <= tol,
                            "|R(" + fmt(xmin) + ") - 1| = " + fmt(std::abs(r_left - 1.0))});
    }
  }
  out.primary = csv.os.str();
  return out;
}

Outcome cmd_kernel(const ExperimentConfig& cfg) {
  auto ns = int_list(cfg.params["n"], "n");
  std::sort(ns.begin(), ns.end());
  const auto cs = finite_c_list(cfg.params["c"]);
  const auto xs = real_list(cfg.params["x"], "x");
  const std::string path = cfg.params["path"];
  if (path != "ginibre" && path != "radial") throw ValidationError("'path' must be ginibre or radial");
  if (path == "ginibre" && !is_ginibre(cfg.params["potential"]))
    throw ValidationError("path 'ginibre' requires the ginibre potential");
  const RadialPotential pot = potential_from(cfg.params["potential"]);
  const double floor = cfg.tolerances.at("noise_floor");
  Outcome out;
  Csv csv({"n", "c", "x", "R_n", "R_limit", "abs_diff"});
  for (double c : cs) {
    const auto cp = ConfinementParam::finite(c);
    std::vector<double> limit;
    for (double x : xs) limit.push_back(density(cplx(x, 0.0), cp));
    if (c == 1.0) {
      double worst = 0.0;
      for (std::size_t i = 0; i < xs.size(); ++i) worst = std::max(worst, std::abs(limit[i] - phi(2.0 * xs[i])));
      out.checks.push_back({"limit_is_phi", worst <= cfg.tolerances.at("limit_is_phi"),
                            "max |R_limit - phi(2x)| = " + fmt(worst)});
    }
    std::vector<double> prev;
    for (int n : ns) {
      std::vector<double> diff;
      if (path == "ginibre") {
        const GinibreModel m = build_model(n, c);
        for (std::size_t i = 0; i < xs.size(); ++i) {
          const double rn = rescaled_density(cplx(xs[i], 0.0), m);
          diff.push_back(std::abs(rn - limit[i]));
          csv.row(n, fmt(c), xs[i], rn, limit[i], diff.back());
        }
      } else {
        const EnsembleModel m = build_ensemble(n, c, pot);
        for (std::size_t i = 0; i < xs.size(); ++i) {
          const double rn = rescaled_one_point(xs[i], m);
          diff.push_back(std::abs(rn - limit[i]));
          csv.row(n, fmt(c), xs[i], rn, limit[i], diff.back());
        }
      }
      if (!prev.empty()) {
        bool ok = true;
        for (std::size_t i = 0; i < xs.size(); ++i) ok = ok && (diff[i] < prev[i] || diff[i] < floor);
        out.checks.push_back({"decreasing_in_n[c=" + fmt(c) + ",n=" + std::to_string(n) + "]", ok, ""});
      }
      prev = diff;
    }
  }
  out.primary = csv.os.str();
  return out;
}

EnsembleModel ensemble_for(const json& params, int n, double c) {
  const std::string path = params["path"];
  if (path == "ginibre") {
    if (!is_ginibre(params["potential"])) throw ValidationError("path 'ginibre' requires the ginibre potential");
    return ensemble_from_ginibre(build_model(n, c));
  }
  if (path != "radial") throw ValidationError("'path' must be ginibre or radial");
  return build_ensemble(n, c, potential_from(params["potential"]));
}

Outcome cmd_maxmod(const ExperimentConfig& cfg) {
  const int n = int_list(cfg.params["n"], "n").at(0);
  const double c = finite_c_list(cfg.params["c"]).at(0);
  const int samples = int_list(cfg.params["samples"], "samples").at(0);
  if (n < 16) throw ValidationError("maxmod needs n >= 16");
  const ModulusLaws laws(ensemble_for(cfg.params, n, c));
  const MaxModulusBatch batch = sample_max_modulus(laws, samples, cfg.seed);
  Outcome out;
  Csv csv({"replicate", "omega"});
  for (std::size_t i = 0; i < batch.omegas.size(); ++i) csv.row(i, batch.omegas[i]);
  out.primary = csv.os.str();
  const double ks = ks_distance_gumbel(batch.omegas);
  double mean = 0.0;
  for (double w : batch.omegas) mean += w;
  mean /= batch.omegas.size();
  json q = json::object();
  for (double p : {0.05, 0.25, 0.5, 0.75, 0.95}) q[fmt(p)] = empirical_quantile(batch.omegas, p);
  out.summary = {{"n", n}, {"c", c}, {"seed", cfg.seed}, {"samples", samples}, {"gamma_n", batch.gamma},
                 {"ks_distance", ks}, {"mean", mean}, {"quantiles", q}};
  out.checks.push_back({"ks", ks <= cfg.tolerances.at("ks"), "KS = " + fmt(ks)});
  if (cfg.params["crosscheck"].get<bool>()) {
    json rows = json::array();
    bool ok = true;
    for (double x : {-1.0, 0.0, 2.0}) {
      const double p = gap_probability(laws, radius_from_omega(x, laws.model(), batch.gamma));
      double emp = 0.0;
      for (double w : batch.omegas) emp += (w <= x);
      emp /= batch.omegas.size();
      const double se = std::sqrt(std::max(p * (1.0 - p), 1e-300) / batch.omegas.size());
      const double z = (emp - p) / se;
      ok = ok && std::abs(z) <= cfg.tolerances.at("crosscheck_se");
      rows.push_back({{"x", x}, {"exact", p}, {"empirical", emp}, {"se", se}, {"z", z}});
    }
    out.summary["crosscheck"] = rows;
    out.checks.push_back({"crosscheck", ok, "simulation vs exact product CDF"});
  }
  return out;
}

Outcome cmd_ward(const ExperimentConfig& cfg) {
  const auto cs = finite_c_list(cfg.params["c"]);
  const auto xs = real_list(cfg.params["x"], "x");
  const auto xis = real_list(cfg.params["xi"], "xi");
  const std::string perturb = cfg.params["perturb"];
  const double c0 = cfg.params["c0"].get<double>();
  const double inf = std::numeric_limits<double>::infinity();
  double gmax = 0.0, mmax = 0.0, wmax = 0.0;
  json grid = json::array();
  for (double c : cs) {
    for (double xi : xis) gmax = std::max(gmax, gaussian_identity_residual(xi, c));
    EdgeProfileSpec spec = EdgeProfileSpec::standard(c, c0);
    if (perturb.rfind("scale=", 0) == 0) {
      spec = EdgeProfileSpec::indicator_over_phi(c, {{-inf, c0}}, to_double(perturb.substr(6), "perturb"));
    } else if (perturb == "union") {
      spec = EdgeProfileSpec::indicator_over_phi(c, {{-inf, -0.5}, {-0.2, 0.0}});
    } else if (perturb == "plain") {
      spec = EdgeProfileSpec::plain_indicator(c, {{-inf, c0}});
    } else if (!perturb.empty()) {
      throw ValidationError("'perturb' must be empty, scale=<v>, union or plain");
    }
    for (double x : xs) {
      const double m = mass_one_residual(x, spec), w = ward_residual(x, spec, c0);
      mmax = std::max(mmax, m);
      wmax = std::max(wmax, w);
      grid.push_back({{"c", c}, {"x", x}, {"mass_one", m}, {"ward", w}});
    }
  }
  Outcome out;
  json report = {{"perturb", perturb}, {"c0", c0}, {"gaussian_identity_max", gmax},
                 {"mass_one_max", mmax}, {"ward_max", wmax}, {"grid", grid}};
  out.checks.push_back({"gaussian_identity", gmax <= cfg.tolerances.at("gaussian"), fmt(gmax)});
  if (perturb.empty()) {
    out.checks.push_back({"mass_one", mmax <= cfg.tolerances.at("mass_one"), fmt(mmax)});
    out.checks.push_back({"ward", wmax <= cfg.tolerances.at("ward"), fmt(wmax)});
    report["status"] = out.ok() ? "pass" : "fail";
  } else {
    const bool detected = std::max(mmax, wmax) > cfg.tolerances.at("detector");
    out.checks.push_back({"violation_detected", detected, fmt(std::max(mmax, wmax))});
    report["status"] = detected ? "violation detected" : "no violation detected";
  }
  out.primary = report.dump(2) + "\n";
  return out;
}

Outcome cmd_quasipoly(const ExperimentConfig& cfg) {
  const std::string mode = cfg.params["mode"];
  auto ns = int_list(cfg.params["n"], "n");
  std::sort(ns.begin(), ns.end());
  const auto cs = finite_c_list(cfg.params["c"]);
  const RadialPotential pot = potential_from(cfg.params["potential"]);
  Outcome out;
  if (mode == "w2") {
    const auto js = int_list(cfg.params["j"], "j");
    const int points = int_list(cfg.params["points"], "points").at(0);
    const double r_max = cfg.params["r_max"].get<double>();
    if (points < 2 || !(r_max > 0.0)) throw ValidationError("'points' >= 2 and 'r_max' > 0 required");
    Csv csv({"n", "c", "j", "r", "w2"});
    for (int n : ns)
      for (double c : cs) {
        const EnsembleModel m = build_ensemble(n, c, pot);
        const double top = r_max * m.rho1();
        for (int j : js) {
          if (j >= n) continue;
          for (int k = 0; k < points; ++k) {
            const double r = top * k / (points - 1);
            csv.row(n, fmt(c), j, r, std::exp(log_partial_one_point(r, m, j, j + 1)));
          }
        }
      }
    out.primary = csv.os.str();
    return out;
  }
  if (mode != "p1" && mode != "pointwise" && mode != "p2")
    throw ValidationError("'mode' must be w2, p1, p2 or pointwise");
  const auto xs = real_list(cfg.params["x"], "x");
  Csv csv(mode == "p1"          ? std::vector<std::string>{"n", "c", "j", "error", "K"}
          : mode == "pointwise" ? std::vector<std::string>{"n", "c", "j", "x", "deviation"}
                                : std::vector<std::string>{"n", "c", "j", "ell", "relative"});
  for (double c : cs) {
    std::map<double, double> prev;
    for (int n : ns) {
      const EnsembleModel m = build_ensemble(n, c, pot);
      const int j = n - static_cast<int>(std::floor(std::sqrt(static_cast<double>(n))));
      std::map<double, double> cur;
      if (mode == "p1") {
        const double e = check_P1(j, m);
        csv.row(n, fmt(c), j, e, e * std::sqrt(static_cast<double>(n)) / std::pow(std::log(n), 2));
        cur[0.0] = e;
      } else if (mode == "pointwise") {
        const double win = std::sqrt(std::log(std::log(static_cast<double>(n))));
        for (double x : xs) {
          if (std::abs(x) > win) continue;
          const double d = check_pointwise(j, m, x);
          csv.row(n, fmt(c), j, x, d);
          cur[x] = d;
        }
      } else {
        const int ell = std::max(0, j - static_cast<int>(std::floor(std::sqrt(static_cast<double>(n)))));
        const double rel = check_P2(j, ell, m).relative();
        csv.row(n, fmt(c), j, ell, rel);
        cur[0.0] = rel;
      }
      if (!prev.empty()) {
        bool ok = true;
        for (const auto& [k, v] : cur)
          if (prev.count(k)) ok = ok && v < prev[k];
        out.checks.push_back({mode + "_decreasing[c=" + fmt(c) + ",n=" + std::to_string(n) + "]", ok, ""});
      }
      prev = cur;
    }
  }
  out.primary = csv.os.str();
  return out;
}

Outcome cmd_growth(const ExperimentConfig& cfg) {
  const RadialPotential pot = potential_from(cfg.params["potential"]);
  const auto taus = real_list(cfg.params["tau"], "tau");
  const double h = cfg.params["step"].get<double>();
  Outcome out;
  Csv csv({"tau", "rho_tau", "mass_residual", "growth_residual", "rtau_residual"});
  double worst = 0.0;
  for (double tau : taus) {
    if (!(tau > h)) throw ValidationError("'tau' values must exceed the difference step");
    const double rho = droplet_radius(tau, pot);
    const double mass = 0.5 * rho * pot.dQ(rho) - tau;
    worst = std::max(worst, std::abs(mass));
    csv.row(tau, rho, mass, growth_speed_check(pot, tau, h), rtau_residual(pot, tau));
  }
  out.checks.push_back({"mass_condition", worst <= cfg.tolerances.at("mass_condition"), fmt(worst)});
  out.primary = csv.os.str();
  return out;
}

}  // namespace

bool Outcome::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"profile", "kernel", "maxmod", "ward", "quasipoly", "growth"};
  return names;
}

ExperimentConfig make_config(const std::string& command, const json& file, const json& overrides) {
  const auto it = defaults().find(command);
  if (it == defaults().end()) throw ValidationError("unknown command '" + command + "'");
  ExperimentConfig cfg;
  cfg.command = command;
  cfg.params = it->second;
  cfg.tolerances = default_tolerances().at(command);
  auto apply = [&](const json& layer, const char* origin) {
    if (layer.is_null()) return;
    if (!layer.is_object()) throw ValidationError(std::string(origin) + " must be a JSON object");
    for (const auto& [key, value] : layer.items()) {
      if (key == "command") {
        if (!value.is_string() || value.get<std::string>() != command)
          throw ValidationError("config 'command' does not match '" + command + "'");
      } else if (key == "seed") {
        if (!value.is_number_unsigned()) throw ValidationError("'seed' must be a non-negative integer");
        cfg.seed = value.get<std::uint64_t>();
      } else if (key == "out") {
        if (!value.is_string()) throw ValidationError("'out' must be a string");
        cfg.out = value.get<std::string>();
      } else if (key == "summary") {
        if (!value.is_string()) throw ValidationError("'summary' must be a string");
        cfg.summary = value.get<std::string>();
      } else if (key == "tolerances") {
        if (!value.is_object()) throw ValidationError("'tolerances' must be an object");
        for (const auto& [tk, tv] : value.items()) {
          if (!cfg.tolerances.count(tk)) throw ValidationError("unknown tolerance '" + tk + "' for " + command);
          if (!tv.is_number()) throw ValidationError("tolerance '" + tk + "' must be a number");
          cfg.tolerances[tk] = tv.get<double>();
        }
      } else if (cfg.params.contains(key)) {
        const json& def = cfg.params[key];
        const bool same = (def.is_boolean() && value.is_boolean()) || (def.is_number() && value.is_number()) ||
                          (def.is_object() && value.is_object()) ||
                          ((def.is_string() || def.is_number()) && (value.is_string() || value.is_array()));
        if (!same) throw ValidationError("'" + key + "' has the wrong type");
        cfg.params[key] = value;
      } else {
        throw ValidationError("unknown key '" + key + "' for command " + command);
      }
    }
  };
  apply(file, "config file");
  apply(overrides, "flag overrides");
  return cfg;
}

Outcome run(const ExperimentConfig& cfg) {
  if (cfg.command == "profile") return cmd_profile(cfg);
  if (cfg.command == "kernel") return cmd_kernel(cfg);
  if (cfg.command == "maxmod") return cmd_maxmod(cfg);
  if (cfg.command == "ward") return cmd_ward(cfg);
  if (cfg.command == "quasipoly") return cmd_quasipoly(cfg);
  if (cfg.command == "growth") return cmd_growth(cfg);
  throw ValidationError("unknown command '" + cfg.command + "'");
}

}  // namespace confgas::cli
