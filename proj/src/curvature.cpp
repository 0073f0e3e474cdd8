#include "chgeo/curvature.hpp"

#include <cmath>

namespace chgeo {

namespace {

int ambient_dim(const Jet& phi) { return phi.ring().num_holo_vars; }

// Metric entries as jets: G[a][b] = d_a dbar_b Phi with caps one lower than
// phi's on each sheet.
Mat<Jet> metric_jets(const Jet& phi) {
  const int n = ambient_dim(phi);
  Mat<Jet> g(n, n);
  for (int a = 0; a < n; ++a) {
    const Jet da = derivative(phi, a, /*anti=*/false);
    for (int b = 0; b < n; ++b) g(a, b) = derivative(da, b, /*anti=*/true);
  }
  return g;
}

struct MetricCore {
  Mat<cplx> g, h;
  double det = 0.0, cond = 0.0;
};

MetricCore metric_core(const Jet& phi) {
  const int n = ambient_dim(phi);
  MetricCore mc;
  mc.g = Mat<cplx>(n, n);
  std::vector<int> ia(1), ib(1);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      ia[0] = a;
      ib[0] = b;
      mc.g(a, b) = phi.wirtinger(ia, ib);
    }
  Lu<cplx> lu = lu_factor(mc.g);
  const cplx det = lu_det(lu);
  if (!(det.real() > 0.0))
    throw std::domain_error("metric: non-positive determinant at the point");
  mc.det = det.real();
  mc.h = lu_inverse(lu);
  mc.cond = norm1(mc.g) * norm1(mc.h);
  if (!(mc.cond < kMaxMetricCondition))
    throw std::domain_error("metric: ill-conditioned near the boundary");
  return mc;
}

// kappa as a jet with caps (kh, ka).  Requires phi caps >= (kh + 2, ka + 2).
// Optionally exposes the jet-valued inverse metric and Ricci tensor.
Jet kappa_jet(const Jet& phi, int kh, int ka, Mat<Jet>* h_jets_out, Mat<Jet>* ric_jets_out) {
  const int n = ambient_dim(phi);
  Mat<Jet> gj = metric_jets(phi);
  Lu<Jet> lu = lu_factor(gj);
  const Jet logdet = log(lu_det(lu));
  Mat<Jet> ric(n, n);
  for (int a = 0; a < n; ++a) {
    const Jet da = derivative(logdet, a, false);
    for (int b = 0; b < n; ++b) ric(a, b) = -derivative(da, b, true);
  }
  Mat<Jet> h = lu_inverse(lu);
  Jet kap = Jet::constant(JetRing(n, n, kh, ka), cplx(0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) kap += truncated(h(b, a), kh, ka) * truncated(ric(a, b), kh, ka);
  if (h_jets_out) *h_jets_out = std::move(h);
  if (ric_jets_out) *ric_jets_out = std::move(ric);
  return kap;
}

std::vector<cplx> assemble_riemann(const MetricData& md) {
  const int n = md.n;
  std::vector<cplx> r(static_cast<std::size_t>(n) * n * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          cplx acc = -md.d4_at(a, b, c, d);
          for (int s = 0; s < n; ++s)
            for (int t = 0; t < n; ++t)
              acc += md.g_inv(s, t) * md.d3a_at(a, s, c) * md.d3b_at(t, d, b);
          r[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d] = acc;
        }
  return r;
}

// |R|^2: contract each slot of R with the inverse metric, then pair with
// conj(R).
double riemann_norm_sq(const std::vector<cplx>& r, const Mat<cplx>& h, int n, double* imag_err) {
  const auto idx = [n](int a, int b, int c, int d) {
    return ((static_cast<std::size_t>(a) * n + b) * n + c) * n + d;
  };
  std::vector<cplx> t1(r.size()), t2(r.size());
  // slot 1: B[s,b,c,d] = sum_a H[s][a] R[a,b,c,d]
  for (int s = 0; s < n; ++s)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          cplx acc(0.0);
          for (int a = 0; a < n; ++a) acc += h(s, a) * r[idx(a, b, c, d)];
          t1[idx(s, b, c, d)] = acc;
        }
  // slot 2: B[s,v,c,d] = sum_b H[b][v] t1[s,b,c,d]
  for (int s = 0; s < n; ++s)
    for (int v = 0; v < n; ++v)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          cplx acc(0.0);
          for (int b = 0; b < n; ++b) acc += h(b, v) * t1[idx(s, b, c, d)];
          t2[idx(s, v, c, d)] = acc;
        }
  // slot 3: B[s,v,x,d] = sum_c H[x][c] t2[s,v,c,d]
  for (int s = 0; s < n; ++s)
    for (int v = 0; v < n; ++v)
      for (int x = 0; x < n; ++x)
        for (int d = 0; d < n; ++d) {
          cplx acc(0.0);
          for (int c = 0; c < n; ++c) acc += h(x, c) * t2[idx(s, v, c, d)];
          t1[idx(s, v, x, d)] = acc;
        }
  // slot 4: B[s,v,x,y] = sum_d H[d][y] t1[s,v,x,d]
  for (int s = 0; s < n; ++s)
    for (int v = 0; v < n; ++v)
      for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
          cplx acc(0.0);
          for (int d = 0; d < n; ++d) acc += h(d, y) * t1[idx(s, v, x, d)];
          t2[idx(s, v, x, y)] = acc;
        }
  cplx total(0.0);
  for (std::size_t i = 0; i < r.size(); ++i) total += t2[i] * std::conj(r[i]);
  if (imag_err) *imag_err = std::max(*imag_err, std::abs(total.imag()));
  return total.real();
}

MetricData metric_from_phi(const Jet& phi) {
  const int n = ambient_dim(phi);
  MetricData md;
  md.n = n;
  MetricCore mc = metric_core(phi);
  md.g = std::move(mc.g);
  md.g_inv = std::move(mc.h);
  md.det_g = mc.det;
  md.cond = mc.cond;
  md.d3a.resize(static_cast<std::size_t>(n) * n * n);
  md.d3b.resize(static_cast<std::size_t>(n) * n * n);
  md.d4.resize(static_cast<std::size_t>(n) * n * n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        md.d3a[(static_cast<std::size_t>(a) * n + b) * n + c] = phi.wirtinger({a, c}, {b});
        md.d3b[(static_cast<std::size_t>(a) * n + b) * n + c] = phi.wirtinger({a}, {b, c});
        for (int d = 0; d < n; ++d)
          md.d4[((static_cast<std::size_t>(a) * n + b) * n + c) * n + d] =
              phi.wirtinger({a, c}, {b, d});
      }
  return md;
}

CurvatureBundle curvature_from_phi(const Jet& phi) {
  const MetricData md = metric_from_phi(phi);
  const int n = md.n;
  CurvatureBundle cb;
  cb.n = n;
  cb.riem = assemble_riemann(md);

  Mat<Jet> ric_jets;
  const Jet kap = kappa_jet(phi, 1, 1, nullptr, &ric_jets);

  cb.ric = Mat<cplx>(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) cb.ric(a, b) = ric_jets(a, b).constant_term();

  const cplx kappa = kap.constant_term();
  cb.kappa = kappa.real();
  cb.max_imag_error = std::abs(kappa.imag());

  // lap kappa = sum H[a][b] kappa_{a bbar}
  cplx lap(0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) lap += md.g_inv(a, b) * kap.wirtinger({a}, {b});
  cb.lap_kappa = lap.real();
  cb.max_imag_error = std::max(cb.max_imag_error, std::abs(lap.imag()));

  // |Ric|^2 = tr((H Ric)^2)
  Mat<cplx> hr(n, n, cplx(0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      cplx acc(0.0);
      for (int k = 0; k < n; ++k) acc += md.g_inv(a, k) * cb.ric(k, b);
      hr(a, b) = acc;
    }
  cplx ric2(0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) ric2 += hr(a, b) * hr(b, a);
  cb.ric_norm_sq = ric2.real();
  cb.max_imag_error = std::max(cb.max_imag_error, std::abs(ric2.imag()));

  cb.r_norm_sq = riemann_norm_sq(cb.riem, md.g_inv, n, &cb.max_imag_error);
  return cb;
}

}  // namespace

MetricData metric_at(const CHSetup& setup, const Point& point) {
  return metric_from_phi(ch_potential_jet(setup, point, 2, 2));
}

MetricData metric_from_potential_jet(const Jet& phi) { return metric_from_phi(phi); }

CurvatureBundle curvature_at(const CHSetup& setup, const Point& point) {
  return curvature_from_phi(ch_potential_jet(setup, point, 3, 3));
}

CurvatureBundle curvature_from_potential_jet(const Jet& phi) { return curvature_from_phi(phi); }

double scalar_curvature_at(const CHSetup& setup, const Point& point) {
  return ricci_at(setup, point).kappa;
}

RicciData ricci_at(const CHSetup& setup, const Point& point) {
  const Jet phi = ch_potential_jet(setup, point, 2, 2);
  const int n = ambient_dim(phi);
  MetricCore mc = metric_core(phi);
  Mat<Jet> gj = metric_jets(phi);
  Lu<Jet> lu = lu_factor(gj);
  const Jet logdet = log(lu_det(lu));
  RicciData rd;
  rd.n = n;
  rd.ric = Mat<cplx>(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) rd.ric(a, b) = -logdet.wirtinger({a}, {b});
  rd.g = std::move(mc.g);
  rd.g_inv = std::move(mc.h);
  cplx kappa(0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) kappa += rd.g_inv(b, a) * rd.ric(a, b);
  rd.kappa = kappa.real();
  return rd;
}

ExtremalResidual extremal_residual_at(const CHSetup& setup, const Point& point) {
  const Jet phi = ch_potential_jet(setup, point, 2, 4);
  const int n = ambient_dim(phi);
  Mat<Jet> h_jets;
  const Jet kap = kappa_jet(phi, 0, 2, &h_jets, nullptr);

  ExtremalResidual er;
  er.field.resize(n);
  er.dbar_field = Mat<cplx>(n, n);
  double frob = 0.0;
  for (int a = 0; a < n; ++a) {
    Jet e = Jet::constant(JetRing(n, n, 0, 1), cplx(0.0));
    for (int b = 0; b < n; ++b)
      e += truncated(h_jets(b, a), 0, 1) * derivative(kap, b, /*anti=*/true);
    er.field[a] = e.constant_term();
    for (int c = 0; c < n; ++c) {
      const cplx v = e.wirtinger({}, {c});
      er.dbar_field(a, c) = v;
      frob += std::norm(v);
    }
  }
  er.residual_norm = std::sqrt(frob);
  return er;
}

CurvatureBundle base_curvature_at(const DomainSpec& domain, std::span<const cplx> z,
                                  double scale) {
  const Jet phi = base_log_norm_jet(domain, z, 3, 3) * (-scale);
  return curvature_from_phi(phi);
}

}  // namespace chgeo
