// Acceptance suite: one line per criterion, nonzero exit if any fails.
// Every tolerance is pinned here, in code.

#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "chgeo/analysis.hpp"
#include "chgeo/reference.hpp"
#include "chgeo/verify.hpp"

using namespace chgeo;

namespace {

int g_failures = 0;

void criterion(int number, const std::string& name, const std::function<bool(std::string&)>& fn) {
  std::string detail;
  bool ok = false;
  try {
    ok = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  std::printf("[%s] %02d %s%s%s\n", ok ? "PASS" : "FAIL", number, name.c_str(),
              detail.empty() ? "" : " -- ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

Point fiber_point(int d, double t) {
  return Point{std::vector<cplx>(d, cplx(0.0)), cplx(std::sqrt(t), 0.0)};
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

}  // namespace

int main() {
  // 1. Hyperbolic special case: ball(d), mu = 1 has kappa = -(d+1)(d+2) and
  //    |R|^2 = 2(d+1)(d+2) at random interior points.
  criterion(1, "hyperbolic-special-case", [](std::string& detail) {
    double worst_kappa = 0.0, worst_r2 = 0.0;
    for (int d : {1, 2, 3}) {
      const CHSetup setup = make_setup("ball:d=" + std::to_string(d), 1.0);
      const auto pts = sample_interior_points(setup, 10, 1000 + d);
      for (const Point& pt : pts) {
        const CurvatureBundle cb = curvature_at(setup, pt);
        worst_kappa = std::max(worst_kappa, std::abs(cb.kappa + (d + 1.0) * (d + 2.0)));
        worst_r2 = std::max(worst_r2, rel(cb.r_norm_sq, 2.0 * (d + 1.0) * (d + 2.0)));
      }
    }
    detail = "kappa residual " + fmt(worst_kappa) + " < 1e-8, |R|^2 rel " + fmt(worst_r2) +
             " < 1e-7";
    return worst_kappa < 1e-8 && worst_r2 < 1e-7;
  });

  // 2. Measured base constant: |R|^2 of the ball at exponent one is 2d(d+1).
  criterion(2, "ball-base-curvature-constant", [](std::string& detail) {
    double worst = 0.0;
    for (int d : {1, 2, 3}) {
      const DomainSpec dom = make_domain("ball:d=" + std::to_string(d));
      const std::vector<cplx> origin(d, cplx(0.0));
      const double r2 = base_curvature_at(dom, origin, 1.0).r_norm_sq;
      worst = std::max(worst, rel(r2, 2.0 * d * (d + 1.0)));
    }
    detail = "max rel " + fmt(worst) + " < 1e-7";
    return worst < 1e-7;
  });

  // 3. Determinant identity as ratio constancy over 30 random points.
  criterion(3, "determinant-identity", [](std::string& detail) {
    double worst = 0.0;
    const auto run = [&](const std::string& spec, double mu) {
      const CHSetup setup = make_setup(spec, mu);
      const auto pts = sample_interior_points(setup, 30, 2000);
      double lo = 1e300, hi = -1e300, sum = 0.0;
      for (const Point& pt : pts) {
        const double ratio = metric_at(setup, pt).det_g / det_closed_at(setup, pt);
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
        sum += ratio;
      }
      worst = std::max(worst, (hi - lo) / (sum / static_cast<double>(pts.size())));
    };
    for (int d : {1, 2, 3})
      for (double mu : {0.7, 1.0, 1.3}) run("ball:d=" + std::to_string(d), mu);
    for (double mu : {0.8, 1.1}) run("typeI:p=2,q=2", mu);
    detail = "max spread " + fmt(worst) + " < 1e-9";
    return worst < 1e-9;
  });

  // 4. Inverse-block relation and Ricci decomposition at 30 points per setup.
  criterion(4, "inverse-block-and-ricci-decomposition", [](std::string& detail) {
    double worst_inv = 0.0, worst_ric = 0.0;
    const auto run = [&](const std::string& spec, double mu) {
      const CHSetup setup = make_setup(spec, mu);
      const int d = setup.domain.dim;
      const double c = (mu * (d + 1) - setup.domain.genus) / mu;
      const auto pts = sample_interior_points(setup, 30, 3000);
      for (const Point& pt : pts) {
        worst_inv = std::max(worst_inv, inverse_relation_check(setup, pt));
        const RicciData rd = ricci_at(setup, pt);
        const Mat<cplx> gb = base_metric_at(setup.domain, pt.z, mu);
        for (int a = 0; a <= d; ++a)
          for (int b = 0; b <= d; ++b) {
            cplx resid = rd.ric(a, b) + (d + 2.0) * rd.g(a, b);
            if (a < d && b < d) resid -= c * gb(a, b);
            worst_ric = std::max(worst_ric, std::abs(resid) / (1.0 + max_abs(rd.g)));
          }
      }
    };
    for (int d : {1, 2, 3})
      for (double mu : {0.7, 1.0, 1.3}) run("ball:d=" + std::to_string(d), mu);
    for (double mu : {0.8, 1.1}) run("typeI:p=2,q=2", mu);
    detail = "inverse " + fmt(worst_inv) + ", ricci " + fmt(worst_ric) + " < 1e-9";
    return worst_inv < 1e-9 && worst_ric < 1e-9;
  });

  // 5. Fiber curvature: |R|^2 closed form across t, and the four tensor
  //    component identities.
  criterion(5, "fiber-curvature-closed-forms", [](std::string& detail) {
    double worst_r2 = 0.0, worst_tensor = 0.0;
    const std::vector<std::pair<std::string, double>> setups = {
        {"ball:d=1", 2.0}, {"ball:d=2", 0.7}, {"ball:d=3", 1.0}, {"typeI:p=2,q=2", 1.1}};
    for (const auto& [spec, mu] : setups) {
      const CHSetup setup = make_setup(spec, mu);
      const int d = setup.domain.dim;
      for (int i = 0; i < 10; ++i) {
        const double t = 0.1 * i;
        const CurvatureBundle cb = curvature_at(setup, fiber_point(d, t));
        const FiberPoint fp{cplx(std::sqrt(t), 0.0)};
        worst_r2 = std::max(worst_r2, rel(cb.r_norm_sq, fiber_closed_forms(setup, fp).r_norm_sq));
        worst_tensor = std::max(worst_tensor,
                                fiber_tensor_identities(setup, fp).max_residual());
      }
    }
    detail = "|R|^2 rel " + fmt(worst_r2) + " < 1e-7, tensors " + fmt(worst_tensor) + " < 1e-8";
    return worst_r2 < 1e-7 && worst_tensor < 1e-8;
  });

  // 6. Extremal exactly at the Einstein exponent: residual below 1e-8 there,
  //    above 1e-3 at mu0 +- 0.2, and the w-component matches its closed form.
  criterion(6, "extremal-iff-einstein", [](std::string& detail) {
    double worst_at_ke = 0.0, least_off_ke = 1e300, worst_w = 0.0;
    const std::vector<std::string> specs = {"ball:d=1", "ball:d=2", "typeI:p=2,q=2"};
    for (const std::string& spec : specs) {
      const DomainSpec dom = make_domain(spec);
      const double mu0 = ke_mu(dom);
      const Point probe = fiber_point(dom.dim, 0.09);  // w = 0.3
      const CHSetup at_ke{dom, mu0};
      worst_at_ke = std::max(worst_at_ke, extremal_residual_at(at_ke, probe).residual_norm);
      for (const Point& pt : sample_interior_points(at_ke, 3, 4000))
        worst_at_ke = std::max(worst_at_ke, extremal_residual_at(at_ke, pt).residual_norm);
      for (double delta : {-0.2, 0.2}) {
        const CHSetup off{dom, mu0 + delta};
        least_off_ke = std::min(least_off_ke, extremal_residual_at(off, probe).residual_norm);
      }
      // off-Einstein exponent so the closed form is nonzero
      const CHSetup generic{dom, mu0 * 0.6};
      const int d = dom.dim;
      for (const Point& pt : sample_interior_points(generic, 10, 4100)) {
        const cplx got = extremal_residual_at(generic, pt).field[d];
        const cplx want = extremal_w_closed(generic, pt);
        worst_w = std::max(worst_w, std::abs(got - want) / std::abs(want));
      }
    }
    detail = "at mu0 " + fmt(worst_at_ke) + " < 1e-8, off mu0 " + fmt(least_off_ke) +
             " > 1e-3, w-component rel " + fmt(worst_w) + " < 1e-8";
    return worst_at_ke < 1e-8 && least_off_ke > 1e-3 && worst_w < 1e-8;
  });

  // 7. a2 defect: zero at the Einstein exponent, nonzero at mu0 +- 0.2,
  //    proportional to (d + 1 - genus/mu), with a degree-2 fiber fit.
  criterion(7, "a2-defect-characterises-einstein", [](std::string& detail) {
    double worst_at_ke = 0.0, least_off_ke = 1e300, worst_ratio_spread = 0.0, worst_fit = 0.0;
    const std::vector<std::string> specs = {"ball:d=1", "ball:d=2", "ball:d=3",
                                            "typeI:p=2,q=2"};
    for (const std::string& spec : specs) {
      const DomainSpec dom = make_domain(spec);
      const double mu0 = ke_mu(dom);
      worst_at_ke = std::max(worst_at_ke, std::abs(a2_defect(CHSetup{dom, mu0})));
      for (double delta : {-0.2, 0.2})
        least_off_ke = std::min(least_off_ke, std::abs(a2_defect(CHSetup{dom, mu0 + delta})));
      worst_ratio_spread = std::max(worst_ratio_spread,
                                    defect_proportionality(dom).ratio_spread);
      for (double factor : {0.8, 1.0, 1.2})
        worst_fit = std::max(
            worst_fit,
            fit_fiber_a2(CHSetup{dom, factor * mu0}, kDefaultFiberSamples).fit_residual);
    }
    detail = "at mu0 " + fmt(worst_at_ke) + " < 1e-7, off mu0 " + fmt(least_off_ke) +
             " > 1e-3, ratio spread " + fmt(worst_ratio_spread) + " < 1e-5, fit " +
             fmt(worst_fit) + " < 1e-7";
    return worst_at_ke < 1e-7 && least_off_ke > 1e-3 && worst_ratio_spread < 1e-5 &&
           worst_fit < 1e-7;
  });

  // 8. The Einstein exponent recovered by minimising the deviation.
  criterion(8, "einstein-exponent-recovery", [](std::string& detail) {
    const KEResult ball2 = find_ke_mu(make_domain("ball:d=2"), {0.5, 1.5});
    const KEResult t22 = find_ke_mu(make_domain("typeI:p=2,q=2"), {0.5, 1.2});
    detail = "ball(2) mu0 = " + fmt(ball2.mu0) + ", typeI(2,2) mu0 = " + fmt(t22.mu0);
    return std::abs(ball2.mu0 - 1.0) < 1e-6 && std::abs(t22.mu0 - 0.8) < 1e-6 &&
           ball2.deviation_at_mu0 < 1e-8 && t22.deviation_at_mu0 < 1e-8;
  });

  // 9. Worked fiber example, ball d=1 mu=2: a2(0, w) = 1 + |w|^2, plus an
  //    independent finite-difference assembly of a2 at three fiber points.
  criterion(9, "worked-fiber-example", [](std::string& detail) {
    const CHSetup setup = make_setup("ball:d=1", 2.0);
    const FiberPolynomial fp = fit_fiber_a2(setup, kDefaultFiberSamples);
    const double e_fit = std::max({std::abs(fp.const_term - 1.0), std::abs(fp.c1 - 1.0),
                                   std::abs(fp.c0)});
    const double a2_origin = englis_coefficients_at(setup, fiber_point(1, 0.0)).a2;
    const double a2_quarter = englis_coefficients_at(setup, fiber_point(1, 0.25)).a2;

    // Brute-force assembly: the potential table comes from finite differences
    // only; Ricci from second differences of log det g; the Laplacian of
    // kappa from second differences of the scalar-curvature function.
    double worst_fd = 0.0;
    for (double t : {0.1, 0.3, 0.5}) {
      const Point pt = fiber_point(1, t);
      const std::vector<cplx> coords = {pt.z[0], pt.w};
      const auto phi_fn = [&](std::span<const cplx> p) {
        const cplx n = 1.0 - p[0] * std::conj(p[0]);
        return -std::log(std::pow(n, 2.0) - p[1] * std::conj(p[1]));
      };
      const auto fd = [&](std::span<const cplx> at, std::initializer_list<int> iv,
                          std::initializer_list<int> jv, double h) {
        std::vector<int> I(2, 0), J(2, 0);
        int order = 0;
        for (int v : iv) I[v] += 1, ++order;
        for (int v : jv) J[v] += 1, ++order;
        return fd_oracle(phi_fn, at, I, J, h);
      };
      const double h2 = 1e-4, h3 = 1.5e-3, h4 = 2e-3;
      Mat<cplx> g(2, 2);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) g(a, b) = fd(coords, {a}, {b}, h2);
      const Mat<cplx> h = lu_inverse(lu_factor(g));
      // curvature tensor from the finite-difference table
      double r2;
      {
        std::vector<cplx> riem(16);
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
              for (int e = 0; e < 2; ++e) {
                cplx acc = -fd(coords, {a, c}, {b, e}, h4);
                for (int s = 0; s < 2; ++s)
                  for (int u = 0; u < 2; ++u)
                    acc += h(s, u) * fd(coords, {a, c}, {s}, h3) * fd(coords, {u}, {b, e}, h3);
                riem[((a * 2 + b) * 2 + c) * 2 + e] = acc;
              }
        cplx total(0.0);
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c)
              for (int e = 0; e < 2; ++e) {
                cplx raised(0.0);
                for (int s = 0; s < 2; ++s)
                  for (int v = 0; v < 2; ++v)
                    for (int x = 0; x < 2; ++x)
                      for (int y = 0; y < 2; ++y)
                        raised += h(a, s) * h(v, b) * h(c, x) * h(y, e) *
                                  riem[((s * 2 + v) * 2 + x) * 2 + y];
                total += raised * std::conj(riem[((a * 2 + b) * 2 + c) * 2 + e]);
              }
        r2 = total.real();
      }
      // Ricci from second differences of log det g(.)
      const auto logdet_fn = [&](std::span<const cplx> p) {
        Mat<cplx> gp(2, 2);
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) gp(a, b) = fd(p, {a}, {b}, h2);
        return std::log(lu_det(lu_factor(gp)));
      };
      Mat<cplx> ric(2, 2);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          std::vector<int> I = {0, 0}, J = {0, 0};
          I[a] = 1;
          J[b] = 1;
          ric(a, b) = -fd_oracle(logdet_fn, coords, I, J, 5e-3);
        }
      cplx kappa(0.0), ric2(0.0);
      Mat<cplx> hr(2, 2, cplx(0.0));
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          for (int k = 0; k < 2; ++k) hr(a, b) += h(a, k) * ric(k, b);
        }
      for (int a = 0; a < 2; ++a) {
        kappa += hr(a, a);
        for (int b = 0; b < 2; ++b) ric2 += hr(a, b) * hr(b, a);
      }
      // Laplacian of kappa from second differences of the pipeline kappa
      const auto kappa_fn = [&](std::span<const cplx> p) {
        return cplx(scalar_curvature_at(setup, Point{{p[0]}, p[1]}));
      };
      cplx lap(0.0);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          std::vector<int> I = {0, 0}, J = {0, 0};
          I[a] = 1;
          J[b] = 1;
          lap += h(a, b) * fd_oracle(kappa_fn, coords, I, J, 1e-3);
        }
      const double a2_fd = lap.real() / 3.0 +
                           (r2 - 4.0 * ric2.real() + 3.0 * kappa.real() * kappa.real()) / 24.0;
      worst_fd = std::max(worst_fd, std::abs(a2_fd - (1.0 + t)));
    }

    detail = "fit residual " + fmt(e_fit) + " < 1e-7, a2(0) err " + fmt(std::abs(a2_origin - 1)) +
             ", a2(t=.25) err " + fmt(std::abs(a2_quarter - 1.25)) + ", fd assembly err " +
             fmt(worst_fd) + " < 5e-3";
    return e_fit < 1e-7 && std::abs(a2_origin - 1.0) < 1e-7 &&
           std::abs(a2_quarter - 1.25) < 1e-7 && worst_fd < 5e-3;
  });

  // 10. Jet partials against the finite-difference oracle on the potential,
  //     all order classes up to (2,2), 20 points per setup.
  criterion(10, "jet-vs-finite-difference", [](std::string& detail) {
    double worst = 0.0;
    const std::vector<std::pair<std::string, double>> setups = {
        {"ball:d=1", 1.0}, {"ball:d=2", 0.7}, {"ball:d=3", 1.3}, {"typeI:p=2,q=2", 0.8}};
    for (const auto& [spec, mu] : setups) {
      const CHSetup setup = make_setup(spec, mu);
      const int d = setup.domain.dim;
      const auto phi_fn = [&](std::span<const cplx> p) {
        std::vector<cplx> z(p.begin(), p.end() - 1), zb(z.size());
        for (std::size_t i = 0; i < z.size(); ++i) zb[i] = std::conj(z[i]);
        const cplx n = generic_norm_polarized<cplx>(setup.domain, z, zb);
        return -std::log(std::pow(n, setup.mu) - p.back() * std::conj(p.back()));
      };
      for (const Point& pt : sample_interior_points(setup, 20, 5000)) {
        std::vector<cplx> coords(pt.z.begin(), pt.z.end());
        coords.push_back(pt.w);
        const Jet phi = ch_potential_jet(setup, pt, 2, 2);
        std::vector<int> I(d + 1, 0), J(d + 1, 0);
        const auto probe = [&](std::initializer_list<int> iv, std::initializer_list<int> jv) {
          std::fill(I.begin(), I.end(), 0);
          std::fill(J.begin(), J.end(), 0);
          int order = 0;
          for (int v : iv) I[v] += 1, ++order;
          for (int v : jv) J[v] += 1, ++order;
          const double h = order <= 2 ? 1e-4 : (order == 3 ? 1.5e-3 : 2e-3);
          const cplx jet_val = phi.partial(I, J);
          const cplx fd_val = fd_oracle(phi_fn, coords, I, J, h);
          worst = std::max(worst,
                           std::abs(jet_val - fd_val) / std::max(1.0, std::abs(jet_val)));
        };
        probe({0}, {});
        probe({}, {d});
        probe({0}, {0});
        probe({0}, {d});
        probe({d}, {d});
        probe({0, d}, {0});
        probe({0}, {0, d});
        probe({0, 0}, {0, 0});
        probe({0, d}, {0, d});
        probe({d, d}, {d, d});
      }
    }
    detail = "max rel " + fmt(worst) + " < 1e-5";
    return worst < 1e-5;
  });

  // 11. Exploration at the Einstein exponent: tiny spread on the hyperbolic
  //     cases; the type-I spread is reported as evidence, not asserted.
  criterion(11, "a2-constancy-exploration", [](std::string& detail) {
    double worst_ball = 0.0;
    for (int d : {1, 2, 3}) {
      const ExploreReport rep = run_explore(make_domain("ball:d=" + std::to_string(d)), 20, 1);
      worst_ball = std::max(worst_ball, rep.scan.spread);
    }
    const ExploreReport t22 = run_explore(make_domain("typeI:p=2,q=2"), 20, 1);
    detail = "ball spread " + fmt(worst_ball) + " < 1e-8; typeI(2,2) spread " +
             fmt(t22.scan.spread) + " reported (a2 range [" + fmt(t22.scan.a2_min) + ", " +
             fmt(t22.scan.a2_max) + "], exploratory, not asserted)";
    return worst_ball < 1e-8;
  });

  std::printf("%s: %d %s failed\n", g_failures == 0 ? "OK" : "FAILURES", g_failures,
              g_failures == 1 ? "criterion" : "criteria");
  return g_failures == 0 ? 0 : 1;
}
