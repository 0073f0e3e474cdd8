#pragma once

// Higher-level analyses built on the curvature pipeline: asymptotic expansion
// coefficients a0, a1, a2 of the Rawnsley epsilon-function, the degree-2 fit
// of a2 along the fiber and its constancy defect, the Einstein deviation, the
// Kahler-Einstein parameter search, and the exploratory a2-constancy scan.

#include <array>
#include <span>
#include <utility>
#include <vector>

#include "chgeo/curvature.hpp"
#include "chgeo/domains.hpp"

namespace chgeo {

struct EnglisCoefficients {
  double a0 = 1.0;
  double a1 = 0.0;  // kappa / 2
  double a2 = 0.0;  // lap(kappa)/3 + (|R|^2 - 4 |Ric|^2 + 3 kappa^2) / 24
};

EnglisCoefficients englis_coefficients_at(const CHSetup& setup, const Point& point);

struct FiberPolynomial {
  double const_term = 0.0;
  double c1 = 0.0;  // coefficient of |w|^2
  double c0 = 0.0;  // coefficient of |w|^4
  double fit_residual = 0.0;
};

// Least-squares fit of a2(0, sqrt(t)) by const + c1 t + c0 t^2; the residual
// certifies that a2 restricted to the fiber is a polynomial of degree <= 2.
FiberPolynomial fit_fiber_a2(const CHSetup& setup, std::span<const double> t_samples);

inline constexpr std::array<double, 9> kDefaultFiberSamples = {0.05, 0.15, 0.25, 0.35, 0.45,
                                                               0.55, 0.65, 0.75, 0.85};

// 2 c0 + c1 of the default fiber fit; vanishes exactly at the
// Kahler-Einstein exponent mu = genus / (d + 1).
double a2_defect(const CHSetup& setup);

struct DefectProportionality {
  std::array<double, 4> mus{};
  std::array<double, 4> ratios{};  // defect / (d + 1 - genus/mu)
  double ratio_mean = 0.0;
  double ratio_spread = 0.0;  // (max - min) / |mean|
};

// Measures defect/(d+1 - genus/mu) at mu = {0.6, 0.8, 1.2, 1.4} * mu_ke; the
// ratio is setup-independent of mu, which pins the defect's linear structure.
DefectProportionality defect_proportionality(const DomainSpec& domain);

// max over points of |Ric + (d+2) g|_F / |g|_F.
double einstein_deviation(const CHSetup& setup, std::span<const Point> points);

struct KEResult {
  double mu0 = 0.0;
  double deviation_at_mu0 = 0.0;
  std::pair<double, double> bracket{0.0, 0.0};
};

// Golden-section minimisation of the Einstein deviation over mu; the minimum
// sits at mu = genus / (d + 1) and the search recovers it to 1e-6 without
// using that formula.
KEResult find_ke_mu(const DomainSpec& domain, std::pair<double, double> bracket);

struct ConjectureScan {
  double a2_min = 0.0;
  double a2_max = 0.0;
  double spread = 0.0;  // (max - min) / (|mean| + 1)
  std::vector<double> a2_values;
};

// Evaluates a2 on a grid of general interior points; exploratory output only,
// no pass/fail semantics.
ConjectureScan conjecture_scan(const CHSetup& setup, std::span<const Point> grid);

inline double ke_mu(const DomainSpec& domain) { return domain.genus / (domain.dim + 1); }

}  // namespace chgeo
