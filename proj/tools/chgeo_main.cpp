// Command-line front end: verification suite, per-point reports, mu sweeps
// and the a2-constancy exploration.  JSON/CSV on stdout or --out; exit codes
// 0 (pass), 1 (verification failure), 2 (usage or domain error).

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "chgeo/verify.hpp"

namespace {

using chgeo::cplx;

// Pulls --tol-<checkname> <value> pairs out of argv ahead of CLI11, keeping
// the flag grammar exactly as documented.
std::map<std::string, double> extract_tolerance_flags(std::vector<std::string>& args) {
  std::map<std::string, double> tols;
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a.rfind("--tol-", 0) == 0) {
      std::string name = a.substr(6);
      std::string value;
      const auto eq = name.find('=');
      if (eq != std::string::npos) {
        value = name.substr(eq + 1);
        name = name.substr(0, eq);
      } else {
        if (i + 1 >= args.size())
          throw std::invalid_argument("missing value for " + a);
        value = args[++i];
      }
      double v = 0.0;
      try {
        std::size_t pos = 0;
        v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument(value);
      } catch (const std::exception&) {
        throw std::invalid_argument("bad tolerance value for --tol-" + name + ": " + value);
      }
      tols[name] = v;
    } else {
      kept.push_back(a);
    }
  }
  args = std::move(kept);
  return tols;
}

std::vector<cplx> parse_point_pairs(const std::string& text) {
  std::vector<cplx> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string token =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const std::size_t colon = token.find(':');
    if (token.empty() || colon == std::string::npos)
      throw std::invalid_argument("point: expected re:im pairs separated by commas");
    double re = 0.0, im = 0.0;
    std::size_t used = 0;
    try {
      re = std::stod(token.substr(0, colon), &used);
      if (used != colon) throw std::invalid_argument(token);
      const std::string imtext = token.substr(colon + 1);
      im = std::stod(imtext, &used);
      if (used != imtext.size()) throw std::invalid_argument(token);
    } catch (const std::exception&) {
      throw std::invalid_argument("point: bad component '" + token + "'");
    }
    out.emplace_back(re, im);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

void emit(const std::string& payload, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw std::invalid_argument("cannot open output file: " + out_path);
  f << payload;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  std::map<std::string, double> tols;
  try {
    tols = extract_tolerance_flags(args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  CLI::App app{"Numerical geometry of Cartan-Hartogs domains"};
  app.require_subcommand(1);

  std::string domain_str, point_str, out_path, format;
  double mu = 1.0, mu_min = 0.0, mu_max = 0.0;
  int steps = 0, grid = 20;
  std::uint64_t seed = 12345;

  CLI::App* cmd_verify = app.add_subcommand("verify", "run the identity verification suite");
  cmd_verify->add_option("--domain", domain_str, "domain spec, ball:d=<n> or typeI:p=<p>,q=<q>")
      ->required();
  cmd_verify->add_option("--mu", mu, "Hartogs exponent, positive")->required();
  cmd_verify->add_option("--seed", seed, "seed for sample points");
  cmd_verify->add_option("--out", out_path, "write output to file instead of stdout");
  cmd_verify->add_option("--format", format, "output format (json)");

  CLI::App* cmd_report = app.add_subcommand("report", "all quantities at one point");
  cmd_report->add_option("--domain", domain_str, "domain spec")->required();
  cmd_report->add_option("--mu", mu, "Hartogs exponent")->required();
  cmd_report
      ->add_option("--point", point_str, "d+1 comma-separated complex pairs re:im (z then w)")
      ->required();
  cmd_report->add_option("--out", out_path, "write output to file");
  cmd_report->add_option("--format", format, "output format (json)");

  CLI::App* cmd_sweep = app.add_subcommand("sweep", "trace quantities across mu");
  cmd_sweep->add_option("--domain", domain_str, "domain spec")->required();
  cmd_sweep->add_option("--mu-min", mu_min, "lower end of the mu range")->required();
  cmd_sweep->add_option("--mu-max", mu_max, "upper end of the mu range")->required();
  cmd_sweep->add_option("--steps", steps, "number of rows, at least 2")->required();
  cmd_sweep->add_option("--out", out_path, "write output to file");
  cmd_sweep->add_option("--format", format, "output format (csv or json)");

  CLI::App* cmd_explore = app.add_subcommand("explore", "a2 scan at the Einstein exponent");
  cmd_explore->add_option("--domain", domain_str, "domain spec")->required();
  cmd_explore->add_option("--grid", grid, "number of sample points");
  cmd_explore->add_option("--seed", seed, "seed for sample points");
  cmd_explore->add_option("--out", out_path, "write output to file");
  cmd_explore->add_option("--format", format, "output format (json)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());  // CLI11 vector order
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    if (!tols.empty() && !cmd_verify->parsed())
      throw std::invalid_argument("--tol-<checkname> flags apply to verify only");

    if (cmd_verify->parsed()) {
      if (!format.empty() && format != "json")
        throw std::invalid_argument("verify output format must be json");
      const chgeo::CHSetup setup = chgeo::make_setup(domain_str, mu);
      const chgeo::VerificationReport rep = chgeo::run_verification(setup, seed, tols);
      emit(chgeo::to_json(rep), out_path);
      std::cerr << "verify: " << rep.passed << " passed, " << rep.failed << " failed ("
                << rep.wall_ms << " ms)\n";
      return rep.all_passed ? 0 : 1;
    }

    if (cmd_report->parsed()) {
      if (!format.empty() && format != "json")
        throw std::invalid_argument("report output format must be json");
      const chgeo::CHSetup setup = chgeo::make_setup(domain_str, mu);
      const std::vector<cplx> coords = parse_point_pairs(point_str);
      if (static_cast<int>(coords.size()) != setup.domain.dim + 1)
        throw std::invalid_argument("point: expected " +
                                    std::to_string(setup.domain.dim + 1) + " components");
      chgeo::Point pt{{coords.begin(), coords.end() - 1}, coords.back()};
      emit(chgeo::report_json(setup, pt), out_path);
      return 0;
    }

    if (cmd_sweep->parsed()) {
      if (!format.empty() && format != "csv" && format != "json")
        throw std::invalid_argument("sweep output format must be csv or json");
      const chgeo::DomainSpec domain = chgeo::make_domain(domain_str);
      const std::vector<chgeo::SweepRow> rows = chgeo::run_sweep(domain, mu_min, mu_max, steps);
      emit(format == "json" ? chgeo::sweep_json(domain, rows) : chgeo::sweep_csv(rows),
           out_path);
      return 0;
    }

    if (cmd_explore->parsed()) {
      if (!format.empty() && format != "json")
        throw std::invalid_argument("explore output format must be json");
      const chgeo::DomainSpec domain = chgeo::make_domain(domain_str);
      const chgeo::ExploreReport rep = chgeo::run_explore(domain, grid, seed);
      emit(chgeo::to_json(rep), out_path);
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
