#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "confgas/error.hpp"

namespace {

using confgas::cli::json;

enum Exit { kPass = 0, kCheckFailed = 1, kValidation = 2, kNumerical = 3 };

struct Flags {
  std::string config;
  std::vector<std::string> tol;
  json overrides = json::object();
};

json read_config(const std::string& path) {
  if (path.empty()) return nullptr;
  std::ifstream in(path);
  if (!in) throw confgas::ValidationError("cannot open config '" + path + "'");
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw confgas::ValidationError("config '" + path + "' is not valid JSON: " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write to '" + path + "' failed");
}

json tolerance_overrides(const std::vector<std::string>& items) {
  json t = json::object();
  for (const auto& kv : items) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw confgas::ValidationError("--tol-override expects KEY=VAL, got '" + kv + "'");
    try {
      std::size_t pos = 0;
      const std::string v = kv.substr(eq + 1);
      t[kv.substr(0, eq)] = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
    } catch (const std::logic_error&) {
      throw confgas::ValidationError("--tol-override value is not a number in '" + kv + "'");
    }
  }
  return t;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"confgas: edge statistics of confined planar Coulomb gases"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 0;
  std::string out;
  Flags flags;

  auto* seed_opt = app.add_option("--seed", seed, "random seed (U64)");
  auto* out_opt = app.add_option("--out", out, "output path (default stdout)");
  app.add_option("--config", flags.config, "JSON config file with a 'command' field");
  app.add_option("--tol-override", flags.tol, "KEY=VAL tolerance override (repeatable)");

  // Command-specific flags; every value is handed to the config layer as a string or number.
  struct Param {
    const char* name;
    const char* help;
  };
  const std::map<std::string, std::vector<Param>> params = {
      {"profile", {{"c", "confinement list, e.g. 1,10,inf"}, {"x", "grid a:b:step or list"}}},
      {"kernel", {{"n", "n list"}, {"c", "c list"}, {"x", "x list"}, {"path", "ginibre|radial"}, {"potential", "JSON potential"}}},
      {"maxmod", {{"n", "particle count"}, {"c", "confinement"}, {"samples", "replicates"}, {"path", "ginibre|radial"}, {"potential", "JSON potential"}}},
      {"ward", {{"c", "c list"}, {"x", "x list"}, {"xi", "xi list for the Gaussian identity"}, {"perturb", "scale=<v>|union|plain"}, {"c0", "edge offset"}}},
      {"quasipoly", {{"mode", "w2|p1|p2|pointwise"}, {"n", "n list"}, {"c", "c list"}, {"j", "degree list or range"}, {"x", "x list"}, {"points", "radial grid size"}, {"r_max", "grid top / rho_1"}, {"potential", "JSON potential"}}},
      {"growth", {{"tau", "tau list"}, {"step", "difference step h"}, {"potential", "JSON potential"}}},
  };
  std::map<std::string, std::map<std::string, std::string>> values;
  std::map<std::string, bool> bool_flags;
  std::map<std::string, CLI::App*> subs;
  for (const auto& name : confgas::cli::command_names()) {
    auto* sub = app.add_subcommand(name);
    subs[name] = sub;
    for (const auto& p : params.at(name)) sub->add_option(std::string("--") + p.name, values[name][p.name], p.help);
  }
  subs["profile"]->add_flag("--tail-column", bool_flags["tail_column"], "add the column 4 x^2 R");
  subs["maxmod"]->add_flag("--crosscheck", bool_flags["crosscheck"], "compare with the exact product CDF");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kPass : kValidation;
  }

  std::string command;
  for (const auto& [name, sub] : subs)
    if (sub->parsed()) command = name;

  try {
    const json file = read_config(flags.config);
    json ov = json::object();
    for (const auto& [k, v] : values[command]) {
      if (subs[command]->count("--" + k) == 0) continue;
      if (k == "potential") {
        try {
          ov[k] = json::parse(v);
        } catch (const json::parse_error&) {
          throw confgas::ValidationError("--potential must be a JSON object");
        }
      } else if (k == "perturb" || k == "path" || k == "mode") {
        ov[k] = v;
      } else if (k == "c0" || k == "step" || k == "r_max" || k == "samples" || k == "points") {
        try {
          std::size_t pos = 0;
          const double d = std::stod(v, &pos);
          if (pos != v.size()) throw std::invalid_argument(v);
          ov[k] = (k == "samples" || k == "points") ? json(static_cast<std::int64_t>(d)) : json(d);
          if ((k == "samples" || k == "points") && d != std::floor(d))
            throw confgas::ValidationError("--" + k + " must be an integer");
        } catch (const std::logic_error&) {
          throw confgas::ValidationError("--" + k + " expects a number");
        }
      } else {
        ov[k] = v;
      }
    }
    if (command == "profile" && bool_flags["tail_column"]) ov["tail_column"] = true;
    if (command == "maxmod" && bool_flags["crosscheck"]) ov["crosscheck"] = true;
    if (*seed_opt) ov["seed"] = seed;
    if (*out_opt) ov["out"] = out;
    if (!flags.tol.empty()) ov["tolerances"] = tolerance_overrides(flags.tol);

    const auto cfg = confgas::cli::make_config(command, file, ov);
    const auto outcome = confgas::cli::run(cfg);
    write_text(cfg.out, outcome.primary);
    if (!outcome.summary.is_null()) {
      const std::string dest = !cfg.summary.empty() ? cfg.summary : (!cfg.out.empty() ? cfg.out + ".json" : "");
      if (dest.empty())
        std::cerr << outcome.summary.dump(2) << "\n";
      else
        write_text(dest, outcome.summary.dump(2) + "\n");
    }
    int failed = 0;
    for (const auto& c : outcome.checks) {
      std::cerr << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << "\n";
      failed += !c.passed;
    }
    if (failed) {
      std::cerr << command << ": " << failed << " check(s) failed\n";
      return kCheckFailed;
    }
    return kPass;
  } catch (const confgas::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const confgas::PreconditionError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const confgas::DomainError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return kNumerical;
  }
}
