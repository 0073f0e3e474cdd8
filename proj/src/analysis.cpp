#include "chgeo/analysis.hpp"

#include <algorithm>
#include <cmath>

namespace chgeo {

EnglisCoefficients englis_coefficients_at(const CHSetup& setup, const Point& point) {
  const CurvatureBundle cb = curvature_at(setup, point);
  EnglisCoefficients a;
  a.a0 = 1.0;
  a.a1 = 0.5 * cb.kappa;
  a.a2 = cb.lap_kappa / 3.0 +
         (cb.r_norm_sq - 4.0 * cb.ric_norm_sq + 3.0 * cb.kappa * cb.kappa) / 24.0;
  return a;
}

FiberPolynomial fit_fiber_a2(const CHSetup& setup, std::span<const double> t_samples) {
  if (t_samples.size() < 5)
    throw std::invalid_argument("fiber fit: at least 5 distinct t samples required");
  for (std::size_t i = 0; i < t_samples.size(); ++i) {
    if (!(t_samples[i] >= 0.0 && t_samples[i] < 1.0))
      throw std::invalid_argument("fiber fit: t samples must lie in [0,1)");
    for (std::size_t j = i + 1; j < t_samples.size(); ++j)
      if (t_samples[i] == t_samples[j])
        throw std::invalid_argument("fiber fit: t samples must be distinct");
  }

  const int d = setup.domain.dim;
  std::vector<double> a2(t_samples.size());
  for (std::size_t i = 0; i < t_samples.size(); ++i) {
    Point pt{std::vector<cplx>(d, cplx(0.0)), cplx(std::sqrt(t_samples[i]), 0.0)};
    a2[i] = englis_coefficients_at(setup, pt).a2;
  }

  // Normal equations for [1, t, t^2]; three unknowns, well conditioned on the
  // default sample grid.
  double s[5] = {0, 0, 0, 0, 0};
  double b[3] = {0, 0, 0};
  for (std::size_t i = 0; i < t_samples.size(); ++i) {
    const double t = t_samples[i];
    double tp = 1.0;
    for (int k = 0; k <= 4; ++k) {
      s[k] += tp;
      tp *= t;
    }
    b[0] += a2[i];
    b[1] += a2[i] * t;
    b[2] += a2[i] * t * t;
  }
  Mat<cplx> m(3, 3);
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = s[r + c];
  std::vector<cplx> rhs = {b[0], b[1], b[2]};
  const std::vector<cplx> x = lu_solve(lu_factor(m), rhs);

  FiberPolynomial fp;
  fp.const_term = x[0].real();
  fp.c1 = x[1].real();
  fp.c0 = x[2].real();
  for (std::size_t i = 0; i < t_samples.size(); ++i) {
    const double t = t_samples[i];
    fp.fit_residual = std::max(
        fp.fit_residual, std::abs(fp.const_term + fp.c1 * t + fp.c0 * t * t - a2[i]));
  }
  return fp;
}

double a2_defect(const CHSetup& setup) {
  const FiberPolynomial fp = fit_fiber_a2(setup, kDefaultFiberSamples);
  return 2.0 * fp.c0 + fp.c1;
}

DefectProportionality defect_proportionality(const DomainSpec& domain) {
  const double mu0 = ke_mu(domain);
  DefectProportionality dp;
  const std::array<double, 4> factors = {0.6, 0.8, 1.2, 1.4};
  for (std::size_t i = 0; i < factors.size(); ++i) {
    const double mu = factors[i] * mu0;
    dp.mus[i] = mu;
    const double defect = a2_defect(CHSetup{domain, mu});
    dp.ratios[i] = defect / (domain.dim + 1.0 - domain.genus / mu);
  }
  double lo = dp.ratios[0], hi = dp.ratios[0], sum = 0.0;
  for (double r : dp.ratios) {
    lo = std::min(lo, r);
    hi = std::max(hi, r);
    sum += r;
  }
  dp.ratio_mean = sum / 4.0;
  dp.ratio_spread = (hi - lo) / std::abs(dp.ratio_mean);
  return dp;
}

double einstein_deviation(const CHSetup& setup, std::span<const Point> points) {
  if (points.empty()) throw std::invalid_argument("einstein deviation: at least one point");
  const int n = setup.domain.dim + 1;
  double worst = 0.0;
  for (const Point& pt : points) {
    const RicciData rd = ricci_at(setup, pt);
    Mat<cplx> resid(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) resid(a, b) = rd.ric(a, b) + (n + 1.0) * rd.g(a, b);
    worst = std::max(worst, frobenius(resid) / frobenius(rd.g));
  }
  return worst;
}

namespace {

std::vector<Point> ke_probe_points(const DomainSpec& domain) {
  const int d = domain.dim;
  Point fiber{std::vector<cplx>(d, cplx(0.0)), cplx(0.3, 0.0)};
  Point generic;
  generic.z.resize(d);
  const double r = 0.2 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k) generic.z[k] = cplx(r * (1.0 + 0.05 * k), -0.3 * r);
  generic.w = cplx(0.15, 0.1);
  return {fiber, generic};
}

}  // namespace

KEResult find_ke_mu(const DomainSpec& domain, std::pair<double, double> bracket) {
  if (!(bracket.first > 0.0 && bracket.second > bracket.first))
    throw std::invalid_argument("ke search: bracket must satisfy 0 < lo < hi");
  const std::vector<Point> probes = ke_probe_points(domain);
  const auto deviation = [&](double mu) {
    return einstein_deviation(CHSetup{domain, mu}, probes);
  };

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = bracket.first, b = bracket.second;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = deviation(x1), f2 = deviation(x2);
  while (b - a > 1e-10) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = deviation(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = deviation(x2);
    }
  }
  KEResult res;
  res.mu0 = 0.5 * (a + b);
  res.deviation_at_mu0 = deviation(res.mu0);
  res.bracket = bracket;
  const double width = bracket.second - bracket.first;
  if (res.mu0 - bracket.first < 1e-3 * width || bracket.second - res.mu0 < 1e-3 * width)
    throw std::domain_error("ke search: no interior minimum in bracket");
  return res;
}

ConjectureScan conjecture_scan(const CHSetup& setup, std::span<const Point> grid) {
  if (grid.empty()) throw std::invalid_argument("conjecture scan: empty grid");
  ConjectureScan scan;
  scan.a2_values.reserve(grid.size());
  double sum = 0.0;
  for (const Point& pt : grid) {
    const double a2 = englis_coefficients_at(setup, pt).a2;
    scan.a2_values.push_back(a2);
    sum += a2;
  }
  scan.a2_min = *std::min_element(scan.a2_values.begin(), scan.a2_values.end());
  scan.a2_max = *std::max_element(scan.a2_values.begin(), scan.a2_values.end());
  const double mean = sum / static_cast<double>(grid.size());
  scan.spread = (scan.a2_max - scan.a2_min) / (std::abs(mean) + 1.0);
  return scan;
}

}  // namespace chgeo
