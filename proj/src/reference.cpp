#include "chgeo/reference.hpp"

#include <algorithm>
#include <cmath>

namespace chgeo {

namespace {

void require_interior(const CHSetup& setup, const Point& point) {
  if (!contains(setup, point))
    throw std::domain_error("point outside the domain: requires |w|^2 < N(z,z)^mu");
}

// Jet of N^mu at z over the base ring with caps (1,1); supplies the first and
// mixed second derivatives that enter the block formulas.
Jet nmu_jet(const CHSetup& setup, std::span<const cplx> z, int mh, int ma) {
  return exp(base_log_norm_jet(setup.domain, z, mh, ma) * setup.mu);
}

double prefactor_c(const CHSetup& setup) {
  return (setup.mu * (setup.domain.dim + 1) - setup.domain.genus) / setup.mu;
}

}  // namespace

double det_closed_at(const CHSetup& setup, const Point& point) {
  require_interior(setup, point);
  const double n = generic_norm_value(setup.domain, point.z);
  const double nmu = std::pow(n, setup.mu);
  const int d = setup.domain.dim;
  return std::pow(n, setup.mu * (d + 1) - setup.domain.genus) /
         std::pow(nmu - std::norm(point.w), d + 2);
}

Mat<cplx> metric_block_closed_at(const CHSetup& setup, const Point& point) {
  require_interior(setup, point);
  const int d = setup.domain.dim;
  const Jet nmu = nmu_jet(setup, point.z, 1, 1);
  const cplx v = nmu.constant_term();
  const cplx den = v - std::norm(point.w);
  const cplx den2 = den * den;
  Mat<cplx> g(d + 1, d + 1);
  for (int j = 0; j < d; ++j) {
    const cplx aj = nmu.wirtinger({j}, {});
    g(j, d) = -aj * point.w / den2;
    for (int k = 0; k < d; ++k) {
      const cplx bk = nmu.wirtinger({}, {k});
      g(j, k) = (aj * bk - nmu.wirtinger({j}, {k}) * den) / den2;
    }
  }
  for (int k = 0; k < d; ++k)
    g(d, k) = -nmu.wirtinger({}, {k}) * std::conj(point.w) / den2;
  g(d, d) = v / den2;
  return g;
}

double inverse_relation_check(const CHSetup& setup, const Point& point) {
  require_interior(setup, point);
  const int d = setup.domain.dim;
  const MetricData md = metric_at(setup, point);
  const Mat<cplx> gb = base_metric_at(setup.domain, point.z, setup.mu);
  const Mat<cplx> hb = lu_inverse(lu_factor(gb));
  const double nmu = std::pow(generic_norm_value(setup.domain, point.z), setup.mu);
  const double ratio = (nmu - std::norm(point.w)) / nmu;
  double r = 0.0;
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k)
      r = std::max(r, std::abs(md.g_inv(j, k) - ratio * hb(j, k)));
  return r;
}

double base_curvature_norm_sq(const DomainSpec& domain) {
  const std::vector<cplx> origin(domain.dim, cplx(0.0));
  return base_curvature_at(domain, origin, domain.genus).r_norm_sq;
}

FiberClosedForms fiber_closed_forms(const CHSetup& setup, const FiberPoint& fiber) {
  const double t = fiber.t();
  if (!(t < 1.0)) throw std::domain_error("fiber point: |w|^2 must be below one");
  const int d = setup.domain.dim;
  const double c = prefactor_c(setup);
  const double gm = setup.domain.genus / setup.mu;
  const double rho = gm * gm * base_curvature_norm_sq(setup.domain);
  const double kappa_base = -d * gm;
  const double s = 1.0 - t;

  FiberClosedForms f;
  f.kappa = d * c * s - (d + 2.0) * (d + 1.0);
  f.ric_norm_sq =
      d * c * c * s * s - 2.0 * d * (d + 2.0) * c * s + (d + 1.0) * (d + 2.0) * (d + 2.0);
  f.lap_kappa = -d * c * s * ((d - 1.0) * t + 1.0);
  f.r_norm_sq = s * s * rho - 4.0 * t * s * kappa_base + 2.0 * d * (d + 1.0) * t * t +
                4.0 * (d + 1.0);
  return f;
}

double FiberTensorResiduals::max_residual() const {
  return std::max(std::max(r_wjkl, r_wwwl), std::max(r_wwkl, r_wwww));
}

FiberTensorResiduals fiber_tensor_identities(const CHSetup& setup, const FiberPoint& fiber) {
  const double t = fiber.t();
  if (!(t < 1.0)) throw std::domain_error("fiber point: |w|^2 must be below one");
  const int d = setup.domain.dim;
  Point pt{std::vector<cplx>(d, cplx(0.0)), fiber.w};
  const CurvatureBundle cb = curvature_at(setup, pt);
  const Jet nmu = nmu_jet(setup, pt.z, 1, 1);
  const double s = 1.0 - t;

  FiberTensorResiduals res;
  const int w = d;
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      for (int l = 0; l < d; ++l) {
        res.r_wjkl = std::max(res.r_wjkl, std::abs(cb.riem_at(w, j, k, l)));
        res.r_wjkl = std::max(res.r_wjkl, std::abs(cb.riem_at(j, w, l, k)));
      }
      const cplx closed = nmu.wirtinger({j}, {k}) / (s * s * s);
      res.r_wwkl = std::max(res.r_wwkl, std::abs(cb.riem_at(w, w, j, k) - closed) /
                                            (1.0 + std::abs(closed)));
    }
    res.r_wwwl = std::max(res.r_wwwl, std::abs(cb.riem_at(w, w, w, j)));
    res.r_wwwl = std::max(res.r_wwwl, std::abs(cb.riem_at(w, w, j, w)));
  }
  const double wwww = -2.0 / (s * s * s * s);
  res.r_wwww = std::abs(cb.riem_at(w, w, w, w) - wwww) / (1.0 + std::abs(wwww));
  return res;
}

cplx extremal_w_closed(const CHSetup& setup, const Point& point) {
  require_interior(setup, point);
  const int d = setup.domain.dim;
  const double nmu = std::pow(generic_norm_value(setup.domain, point.z), setup.mu);
  const double den = nmu - std::norm(point.w);
  return -d * prefactor_c(setup) * point.w * den * den / (nmu * nmu);
}

}  // namespace chgeo
