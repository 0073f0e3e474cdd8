#pragma once

// Curvature pipeline: from jets of the Kahler potential to the metric, its
// inverse and determinant, the full curvature tensor, Ricci and scalar
// curvature, tensor norms, the Laplacian of the scalar curvature and the
// extremality residual.  Derivatives of derived quantities (log det g, kappa)
// are taken by running the same linear algebra over jet-valued scalars, never
// by symbolic manipulation or nested finite differences.
//
// Conventions, with G[a][b] = d^2 Phi / dz_a dzb_b and H = G^{-1}:
//
//   R_{a bbar c dbar} = -Phi_{a bbar c dbar}
//                       + sum_{s,t} H[s][t] Phi_{a sbar c} Phi_{t dbar bbar}
//   Ric_{a bbar}      = -d^2 log det G / dz_a dzb_b
//   kappa             = tr(H Ric)
//   |Ric|^2           = tr((H Ric)^2)
//   |R|^2             = full contraction of R against conj(R) with one H per slot
//   lap kappa         = sum_{a,b} H[a][b] d^2 kappa / dz_a dzb_b

#include <vector>

#include "chgeo/domains.hpp"
#include "chgeo/linalg.hpp"

namespace chgeo {

struct MetricData {
  int n = 0;  // ambient complex dimension
  Mat<cplx> g, g_inv;
  double det_g = 0.0;
  double cond = 0.0;
  // Third and fourth potential partials:
  //   d3a(a,b,c) = Phi_{a bbar c}   (two holomorphic, one antiholomorphic)
  //   d3b(a,b,c) = Phi_{a bbar cbar} (one holomorphic, two antiholomorphic)
  //   d4(a,b,c,d) = Phi_{a bbar c dbar}
  std::vector<cplx> d3a, d3b, d4;

  cplx d3a_at(int a, int b, int c) const { return d3a[(a * n + b) * n + c]; }
  cplx d3b_at(int a, int b, int c) const { return d3b[(a * n + b) * n + c]; }
  cplx d4_at(int a, int b, int c, int d) const { return d4[((a * n + b) * n + c) * n + d]; }
};

struct CurvatureBundle {
  int n = 0;
  std::vector<cplx> riem;  // R_{a bbar c dbar}, dense
  Mat<cplx> ric;
  double kappa = 0.0;
  double r_norm_sq = 0.0;
  double ric_norm_sq = 0.0;
  double lap_kappa = 0.0;
  // Largest imaginary residue seen among the real-expected scalars above.
  double max_imag_error = 0.0;

  cplx riem_at(int a, int b, int c, int d) const { return riem[((a * n + b) * n + c) * n + d]; }
};

struct ExtremalResidual {
  std::vector<cplx> field;  // E^a = sum_b H[b][a] dkappa/dzb_b
  Mat<cplx> dbar_field;     // dbar_e E^a
  double residual_norm = 0.0;
};

// Points too close to the boundary for double precision are rejected
// (condition number of g above this bound raises std::domain_error).
inline constexpr double kMaxMetricCondition = 1e10;

MetricData metric_at(const CHSetup& setup, const Point& point);
CurvatureBundle curvature_at(const CHSetup& setup, const Point& point);
double scalar_curvature_at(const CHSetup& setup, const Point& point);
ExtremalResidual extremal_residual_at(const CHSetup& setup, const Point& point);

// Ricci tensor and metric only (cheapest path; used by Einstein-deviation
// scans and parameter searches).
struct RicciData {
  int n = 0;
  Mat<cplx> g, g_inv, ric;
  double kappa = 0.0;
};
RicciData ricci_at(const CHSetup& setup, const Point& point);

// Same pipeline run on the base domain alone with potential -scale * log N.
CurvatureBundle base_curvature_at(const DomainSpec& domain, std::span<const cplx> z,
                                  double scale);

// Pipeline over an explicit potential jet (caps at least (3,3) for the full
// bundle, (2,2) for the metric).  Exposed for cross-checks against
// independently differentiated potentials.
MetricData metric_from_potential_jet(const Jet& phi);
CurvatureBundle curvature_from_potential_jet(const Jet& phi);

}  // namespace chgeo
