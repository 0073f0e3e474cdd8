#pragma once

// Closed-form expressions for Cartan-Hartogs metrics, implemented directly as
// oracles against which the jet pipeline is verified: the metric block
// formula, the determinant identity, the inverse-block relation, the fiber
// (z = 0) curvature quantities, the fiber components of the curvature tensor
// and the w-component of the extremal field.

#include <span>

#include "chgeo/curvature.hpp"
#include "chgeo/domains.hpp"

namespace chgeo {

// A point (0, w) on the fiber over the base origin; t = |w|^2 < 1.
struct FiberPoint {
  cplx w;
  double t() const { return std::norm(w); }
};

// N^{mu(d+1) - genus} / (N^mu - |w|^2)^{d+2}; the pipeline determinant equals
// this up to one positive constant per setup.
double det_closed_at(const CHSetup& setup, const Point& point);

// The metric assembled from the block formula: entries
//   [ (N^mu)_j (N^mu)_kbar - (N^mu)_{j kbar} (N^mu - |w|^2) ] / (N^mu - |w|^2)^2,
// mixed column -(N^mu)_j w / (N^mu - |w|^2)^2 and corner N^mu / (N^mu - |w|^2)^2.
Mat<cplx> metric_block_closed_at(const CHSetup& setup, const Point& point);

// max_{j,k <= d} | g^{j kbar} - ((N^mu - |w|^2)/N^mu) g_base^{j kbar} | where
// g_base = -ddbar log N^mu at z.
double inverse_relation_check(const CHSetup& setup, const Point& point);

// |R|^2 of the base domain with potential -genus * log N, measured once per
// domain by the pipeline at z = 0 (constant over the domain by homogeneity).
double base_curvature_norm_sq(const DomainSpec& domain);

struct FiberClosedForms {
  double kappa = 0.0;
  double ric_norm_sq = 0.0;
  double lap_kappa = 0.0;
  double r_norm_sq = 0.0;
};

// The four fiber quantities at t = |w|^2, with c = (mu(d+1) - genus)/mu:
//   kappa   = d c (1-t) - (d+2)(d+1)
//   |Ric|^2 = d c^2 (1-t)^2 - 2d(d+2) c (1-t) + (d+1)(d+2)^2
//   lap     = -d c (1-t) ((d-1) t + 1)
//   |R|^2   = (1-t)^2 rho - 4 t (1-t) kappa_base + 2d(d+1) t^2 + 4(d+1)
// where rho = (genus/mu)^2 * base_curvature_norm_sq and kappa_base =
// -d * genus / mu are the base-domain constants at exponent mu.
FiberClosedForms fiber_closed_forms(const CHSetup& setup, const FiberPoint& fiber);

struct FiberTensorResiduals {
  double r_wjkl = 0.0;  // R_{w jbar k lbar} and R_{j wbar l kbar}: both vanish
  double r_wwwl = 0.0;  // R_{w wbar w lbar} and R_{w wbar l wbar}: both vanish
  double r_wwkl = 0.0;  // R_{w wbar k lbar} = (N^mu)_{k lbar}(0) / (1-t)^3
  double r_wwww = 0.0;  // R_{w wbar w wbar} = -2 / (1-t)^4
  double max_residual() const;
};

// Residuals of the pipeline curvature tensor at (0, w) against the closed
// fiber components, each normalised by 1 + |closed value|.
FiberTensorResiduals fiber_tensor_identities(const CHSetup& setup, const FiberPoint& fiber);

// w-component of the extremal field:
//   E^w = -(d (mu(d+1) - genus)/mu) * w * (N^mu - |w|^2)^2 / N^{2 mu}.
cplx extremal_w_closed(const CHSetup& setup, const Point& point);

}  // namespace chgeo
