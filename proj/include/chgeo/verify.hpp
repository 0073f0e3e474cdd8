#pragma once

// Verification battery, sweep and exploration drivers, and their JSON/CSV
// serialisation.  Output is byte-deterministic for a given input and seed:
// numbers are printed with 17 significant digits via std::to_chars, key order
// is fixed, and wall time goes to a side channel rather than the payload.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "chgeo/analysis.hpp"
#include "chgeo/domains.hpp"

namespace chgeo {

struct Check {
  std::string name;
  std::string anchor;  // stable identifier of the identity being checked
  double residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  int schema = 1;
  std::string domain;
  double mu = 0.0;
  std::uint64_t seed = 0;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> measurements;
  int passed = 0;
  int failed = 0;
  bool all_passed = false;
  double wall_ms = 0.0;  // diagnostic only; not serialised
};

VerificationReport run_verification(const CHSetup& setup, std::uint64_t seed,
                                    const std::map<std::string, double>& tol_overrides);

// Default tolerance per check name; throws on unknown names (used to validate
// --tol-<checkname> flags).
double default_tolerance(const std::string& check_name);

std::string to_json(const VerificationReport& report);

struct SweepRow {
  double mu = 0.0;
  double kappa_origin = 0.0;
  double extremal_residual = 0.0;
  double a2_defect = 0.0;
  double einstein_deviation = 0.0;
};

std::vector<SweepRow> run_sweep(const DomainSpec& domain, double mu_min, double mu_max,
                                int steps);
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_json(const DomainSpec& domain, const std::vector<SweepRow>& rows);

struct ExploreReport {
  int schema = 1;
  std::string domain;
  double mu = 0.0;  // genus / (d+1)
  int grid = 0;
  std::uint64_t seed = 0;
  std::vector<Point> points;
  ConjectureScan scan;
};

ExploreReport run_explore(const DomainSpec& domain, int grid, std::uint64_t seed);
std::string to_json(const ExploreReport& report);

// Full per-point report: metric, curvature, expansion coefficients, closed
// forms and their residuals.
std::string report_json(const CHSetup& setup, const Point& point);

// 17-significant-digit formatting, locale independent.
std::string fmt_double(double v);

}  // namespace chgeo
