#include "chgeo/verify.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>

#include "chgeo/reference.hpp"

namespace chgeo {

std::string fmt_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("output: non-finite value");
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace {

// Minimal ordered JSON writer; enough for the fixed report schemas.
class JsonWriter {
 public:
  void begin_object() {
    sep();
    out_ += '{';
    fresh_ = true;
  }
  void end_object() {
    out_ += '}';
    fresh_ = false;
  }
  void begin_array() {
    sep();
    out_ += '[';
    fresh_ = true;
  }
  void end_array() {
    out_ += ']';
    fresh_ = false;
  }
  void key(const std::string& k) {
    sep();
    string_literal(k);
    out_ += ':';
    fresh_ = true;
  }
  void value(double v) {
    sep();
    out_ += fmt_double(v);
  }
  void value(int v) {
    sep();
    out_ += std::to_string(v);
  }
  void value(std::uint64_t v) {
    sep();
    out_ += std::to_string(v);
  }
  void value(bool v) {
    sep();
    out_ += v ? "true" : "false";
  }
  void value(const std::string& s) {
    sep();
    string_literal(s);
  }
  void value_complex(const cplx& c) {  // [re, im]
    begin_array();
    value(c.real());
    value(c.imag());
    end_array();
  }
  const std::string& str() const { return out_; }

 private:
  void sep() {
    if (!fresh_ && !out_.empty() && out_.back() != '{' && out_.back() != '[' &&
        out_.back() != ':')
      out_ += ',';
    fresh_ = false;
  }
  void string_literal(const std::string& s) {
    out_ += '"';
    for (char ch : s) {
      switch (ch) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default: out_ += ch;
      }
    }
    out_ += '"';
  }
  std::string out_;
  bool fresh_ = true;
};

struct CheckDef {
  const char* name;
  const char* anchor;
  double tolerance;
};

constexpr CheckDef kCheckDefs[] = {
    {"genus", "base-metric-determinant-power", 1e-8},
    {"metric_block", "metric-block-formula", 1e-9},
    {"det_ratio", "determinant-identity", 1e-9},
    {"inverse_relation", "inverse-block-relation", 1e-9},
    {"ricci_decomposition", "ricci-decomposition", 1e-9},
    {"kappa_closed", "scalar-curvature-closed-form", 1e-7},
    {"fiber_forms", "fiber-curvature-closed-forms", 1e-7},
    {"fiber_tensors", "fiber-curvature-tensor-components", 1e-8},
    {"extremal_w", "extremal-field-w-component", 1e-8},
    {"a1_half_kappa", "a1-equals-half-scalar-curvature", 1e-12},
    {"a2_fit_degree", "a2-fiber-polynomial-degree", 1e-7},
};

const CheckDef* find_check(const std::string& name) {
  for (const CheckDef& def : kCheckDefs)
    if (name == def.name) return &def;
  return nullptr;
}

double kappa_closed_form(const CHSetup& setup, const Point& pt) {
  const int d = setup.domain.dim;
  const double c = (setup.mu * (d + 1) - setup.domain.genus) / setup.mu;
  const double nmu = std::pow(generic_norm_value(setup.domain, pt.z), setup.mu);
  return d * c * (nmu - std::norm(pt.w)) / nmu - (d + 2.0) * (d + 1.0);
}

}  // namespace

double default_tolerance(const std::string& check_name) {
  const CheckDef* def = find_check(check_name);
  if (!def) throw std::invalid_argument("unknown check name: " + check_name);
  return def->tolerance;
}

VerificationReport run_verification(const CHSetup& setup, std::uint64_t seed,
                                    const std::map<std::string, double>& tol_overrides) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& [name, tol] : tol_overrides) {
    default_tolerance(name);  // validates the name
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive: " + name);
  }

  VerificationReport rep;
  rep.domain = setup.domain.spec_string;
  rep.mu = setup.mu;
  rep.seed = seed;

  const int d = setup.domain.dim;
  const int n = d + 1;
  const auto points = sample_interior_points(setup, 30, seed);
  const auto base_points = sample_base_points(setup.domain, 10, seed + 1);
  const auto w_points = sample_interior_points(setup, 10, seed + 2);

  const auto add_check = [&](const std::string& name, double residual) {
    const CheckDef* def = find_check(name);
    const auto it = tol_overrides.find(name);
    const double tol = (it != tol_overrides.end()) ? it->second : def->tolerance;
    rep.checks.push_back(Check{name, def->anchor, residual, tol, residual < tol});
  };

  // genus: point-independence of det(-ddbar log N) * N^genus
  add_check("genus", genus_check(setup.domain, base_points));

  // metric vs block oracle
  {
    double r = 0.0;
    for (const Point& pt : points) {
      const MetricData md = metric_at(setup, pt);
      const Mat<cplx> blk = metric_block_closed_at(setup, pt);
      double diff = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) diff = std::max(diff, std::abs(md.g(a, b) - blk(a, b)));
      r = std::max(r, diff / (1.0 + max_abs(blk)));
    }
    add_check("metric_block", r);
  }

  // determinant identity as ratio constancy
  {
    double lo = 0.0, hi = 0.0, sum = 0.0;
    bool first = true;
    for (const Point& pt : points) {
      const double ratio = metric_at(setup, pt).det_g / det_closed_at(setup, pt);
      if (first) {
        lo = hi = ratio;
        first = false;
      } else {
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      sum += ratio;
    }
    add_check("det_ratio", (hi - lo) / (sum / static_cast<double>(points.size())));
  }

  // inverse-block relation
  {
    double r = 0.0;
    for (const Point& pt : points) r = std::max(r, inverse_relation_check(setup, pt));
    add_check("inverse_relation", r);
  }

  // Ricci decomposition: Ric + (d+2) g - c * blockdiag(g_base, 0) = 0
  {
    const double c = (setup.mu * n - setup.domain.genus) / setup.mu;
    double r = 0.0;
    for (const Point& pt : points) {
      const RicciData rd = ricci_at(setup, pt);
      const Mat<cplx> gb = base_metric_at(setup.domain, pt.z, setup.mu);
      double diff = 0.0;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          cplx resid = rd.ric(a, b) + (d + 2.0) * rd.g(a, b);
          if (a < d && b < d) resid -= c * gb(a, b);
          diff = std::max(diff, std::abs(resid));
        }
      r = std::max(r, diff / (1.0 + max_abs(rd.g)));
    }
    add_check("ricci_decomposition", r);
  }

  // scalar curvature closed form
  {
    double r = 0.0;
    for (const Point& pt : points) {
      const double closed = kappa_closed_form(setup, pt);
      r = std::max(r, std::abs(scalar_curvature_at(setup, pt) - closed) /
                          (1.0 + std::abs(closed)));
    }
    add_check("kappa_closed", r);
  }

  // fiber closed forms for kappa, |Ric|^2, lap kappa, |R|^2
  {
    double r = 0.0;
    for (int i = 0; i < 10; ++i) {
      const double t = 0.1 * i;
      Point pt{std::vector<cplx>(d, cplx(0.0)), cplx(std::sqrt(t), 0.0)};
      const CurvatureBundle cb = curvature_at(setup, pt);
      const FiberClosedForms f = fiber_closed_forms(setup, FiberPoint{pt.w});
      r = std::max(r, std::abs(cb.kappa - f.kappa) / (1.0 + std::abs(f.kappa)));
      r = std::max(r, std::abs(cb.ric_norm_sq - f.ric_norm_sq) / (1.0 + std::abs(f.ric_norm_sq)));
      r = std::max(r, std::abs(cb.lap_kappa - f.lap_kappa) / (1.0 + std::abs(f.lap_kappa)));
      r = std::max(r, std::abs(cb.r_norm_sq - f.r_norm_sq) / (1.0 + std::abs(f.r_norm_sq)));
    }
    add_check("fiber_forms", r);
  }

  // fiber tensor components
  {
    double r = 0.0;
    for (double t : {0.1, 0.3, 0.5, 0.7, 0.9}) {
      const FiberTensorResiduals ft =
          fiber_tensor_identities(setup, FiberPoint{cplx(std::sqrt(t), 0.0)});
      r = std::max(r, ft.max_residual());
    }
    add_check("fiber_tensors", r);
  }

  // extremal field w-component vs closed form
  {
    double r = 0.0;
    for (const Point& pt : w_points) {
      const ExtremalResidual er = extremal_residual_at(setup, pt);
      const cplx closed = extremal_w_closed(setup, pt);
      r = std::max(r, std::abs(er.field[d] - closed) / (1.0 + std::abs(closed)));
    }
    add_check("extremal_w", r);
  }

  // a1 = kappa / 2, two independently computed routes
  {
    double r = 0.0;
    for (int i = 0; i < 5; ++i) {
      const Point& pt = points[i];
      r = std::max(r, std::abs(englis_coefficients_at(setup, pt).a1 -
                               0.5 * scalar_curvature_at(setup, pt)));
    }
    add_check("a1_half_kappa", r);
  }

  // a2 on the fiber is a polynomial of degree <= 2
  const FiberPolynomial fp = fit_fiber_a2(setup, kDefaultFiberSamples);
  add_check("a2_fit_degree", fp.fit_residual);

  // informational measurements
  rep.measurements.emplace_back("base_curvature_norm_sq", base_curvature_norm_sq(setup.domain));
  rep.measurements.emplace_back("a2_defect", 2.0 * fp.c0 + fp.c1);
  {
    const double mu_probe = 1.25 * ke_mu(setup.domain);
    const double defect = a2_defect(CHSetup{setup.domain, mu_probe});
    rep.measurements.emplace_back(
        "a2_defect_ratio", defect / (d + 1.0 - setup.domain.genus / mu_probe));
  }
  rep.measurements.emplace_back(
      "kappa_origin",
      scalar_curvature_at(setup, Point{std::vector<cplx>(d, cplx(0.0)), cplx(0.0)}));

  for (const Check& c : rep.checks) (c.pass ? rep.passed : rep.failed) += 1;
  rep.all_passed = rep.failed == 0;
  rep.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                    .count();
  return rep;
}

std::string to_json(const VerificationReport& rep) {
  JsonWriter w;
  w.begin_object();
  w.key("schema");
  w.value(rep.schema);
  w.key("command");
  w.value(std::string("verify"));
  w.key("domain");
  w.value(rep.domain);
  w.key("mu");
  w.value(rep.mu);
  w.key("seed");
  w.value(rep.seed);
  w.key("summary");
  w.begin_object();
  w.key("passed");
  w.value(rep.passed);
  w.key("failed");
  w.value(rep.failed);
  w.key("all_passed");
  w.value(rep.all_passed);
  w.end_object();
  w.key("checks");
  w.begin_array();
  for (const Check& c : rep.checks) {
    w.begin_object();
    w.key("name");
    w.value(c.name);
    w.key("anchor");
    w.value(c.anchor);
    w.key("residual");
    w.value(c.residual);
    w.key("tolerance");
    w.value(c.tolerance);
    w.key("pass");
    w.value(c.pass);
    w.end_object();
  }
  w.end_array();
  w.key("measurements");
  w.begin_object();
  for (const auto& [k, v] : rep.measurements) {
    w.key(k);
    w.value(v);
  }
  w.end_object();
  w.end_object();
  return w.str() + "\n";
}

std::vector<SweepRow> run_sweep(const DomainSpec& domain, double mu_min, double mu_max,
                                int steps) {
  if (!(mu_min > 0.0 && mu_min < mu_max))
    throw std::invalid_argument("sweep: need 0 < mu-min < mu-max");
  if (steps < 2) throw std::invalid_argument("sweep: need at least 2 steps");

  const int d = domain.dim;
  const Point probe{std::vector<cplx>(d, cplx(0.0)), cplx(0.3, 0.0)};
  const Point origin{std::vector<cplx>(d, cplx(0.0)), cplx(0.0)};
  Point generic;
  generic.z.resize(d);
  const double r = 0.2 / std::sqrt(static_cast<double>(d));
  for (int k = 0; k < d; ++k) generic.z[k] = cplx(r * (1.0 + 0.05 * k), -0.3 * r);
  generic.w = cplx(0.15, 0.1);
  const std::vector<Point> dev_points = {probe, generic};

  std::vector<SweepRow> rows;
  rows.reserve(steps);
  for (int i = 0; i < steps; ++i) {
    const double mu = mu_min + (mu_max - mu_min) * static_cast<double>(i) / (steps - 1);
    const CHSetup setup{domain, mu};
    SweepRow row;
    row.mu = mu;
    row.kappa_origin = scalar_curvature_at(setup, origin);
    row.extremal_residual = extremal_residual_at(setup, probe).residual_norm;
    row.a2_defect = a2_defect(setup);
    row.einstein_deviation = einstein_deviation(setup, dev_points);
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = "mu,kappa_origin,extremal_residual,a2_defect,einstein_deviation\n";
  for (const SweepRow& r : rows) {
    out += fmt_double(r.mu) + ',' + fmt_double(r.kappa_origin) + ',' +
           fmt_double(r.extremal_residual) + ',' + fmt_double(r.a2_defect) + ',' +
           fmt_double(r.einstein_deviation) + '\n';
  }
  return out;
}

std::string sweep_json(const DomainSpec& domain, const std::vector<SweepRow>& rows) {
  JsonWriter w;
  w.begin_object();
  w.key("schema");
  w.value(1);
  w.key("command");
  w.value(std::string("sweep"));
  w.key("domain");
  w.value(domain.spec_string);
  w.key("rows");
  w.begin_array();
  for (const SweepRow& r : rows) {
    w.begin_object();
    w.key("mu");
    w.value(r.mu);
    w.key("kappa_origin");
    w.value(r.kappa_origin);
    w.key("extremal_residual");
    w.value(r.extremal_residual);
    w.key("a2_defect");
    w.value(r.a2_defect);
    w.key("einstein_deviation");
    w.value(r.einstein_deviation);
    w.end_object();
  }
  w.end_array();
  w.end_object();
  return w.str() + "\n";
}

ExploreReport run_explore(const DomainSpec& domain, int grid, std::uint64_t seed) {
  if (grid < 1) throw std::invalid_argument("explore: grid size must be positive");
  ExploreReport rep;
  rep.domain = domain.spec_string;
  rep.mu = ke_mu(domain);
  rep.grid = grid;
  rep.seed = seed;
  const CHSetup setup{domain, rep.mu};
  rep.points = sample_interior_points(setup, grid, seed);
  rep.scan = conjecture_scan(setup, rep.points);
  return rep;
}

std::string to_json(const ExploreReport& rep) {
  JsonWriter w;
  w.begin_object();
  w.key("schema");
  w.value(rep.schema);
  w.key("command");
  w.value(std::string("explore"));
  w.key("domain");
  w.value(rep.domain);
  w.key("mu");
  w.value(rep.mu);
  w.key("grid");
  w.value(rep.grid);
  w.key("seed");
  w.value(rep.seed);
  w.key("points");
  w.begin_array();
  for (const Point& pt : rep.points) {
    w.begin_array();
    for (const cplx& z : pt.z) w.value_complex(z);
    w.value_complex(pt.w);
    w.end_array();
  }
  w.end_array();
  w.key("a2_values");
  w.begin_array();
  for (double v : rep.scan.a2_values) w.value(v);
  w.end_array();
  w.key("a2_min");
  w.value(rep.scan.a2_min);
  w.key("a2_max");
  w.value(rep.scan.a2_max);
  w.key("spread");
  w.value(rep.scan.spread);
  w.end_object();
  return w.str() + "\n";
}

std::string report_json(const CHSetup& setup, const Point& point) {
  const int d = setup.domain.dim;
  const int n = d + 1;
  const MetricData md = metric_at(setup, point);
  const CurvatureBundle cb = curvature_at(setup, point);
  const ExtremalResidual er = extremal_residual_at(setup, point);
  const EnglisCoefficients a = englis_coefficients_at(setup, point);
  const FiberClosedForms fiber_at_t = fiber_closed_forms(
      setup, FiberPoint{cplx(std::sqrt(std::norm(point.w)), 0.0)});
  const bool on_fiber = [&] {
    for (const cplx& z : point.z)
      if (z != cplx(0.0)) return false;
    return true;
  }();
  const double det_closed = det_closed_at(setup, point);
  const double kappa_closed = kappa_closed_form(setup, point);
  const cplx ew_closed = extremal_w_closed(setup, point);
  const std::vector<double> ric_ev = hermitian_eigenvalues(cb.ric);

  JsonWriter w;
  w.begin_object();
  w.key("schema");
  w.value(1);
  w.key("command");
  w.value(std::string("report"));
  w.key("domain");
  w.value(setup.domain.spec_string);
  w.key("mu");
  w.value(setup.mu);
  w.key("point");
  w.begin_array();
  for (const cplx& z : point.z) w.value_complex(z);
  w.value_complex(point.w);
  w.end_array();
  w.key("g");
  w.begin_array();
  for (int i = 0; i < n; ++i) {
    w.begin_array();
    for (int j = 0; j < n; ++j) w.value_complex(md.g(i, j));
    w.end_array();
  }
  w.end_array();
  w.key("det_g");
  w.value(md.det_g);
  w.key("condition");
  w.value(md.cond);
  w.key("kappa");
  w.value(cb.kappa);
  w.key("r_norm_sq");
  w.value(cb.r_norm_sq);
  w.key("ric_norm_sq");
  w.value(cb.ric_norm_sq);
  w.key("lap_kappa");
  w.value(cb.lap_kappa);
  w.key("ric_eigenvalues");
  w.begin_array();
  for (double v : ric_ev) w.value(v);
  w.end_array();
  w.key("extremal_residual");
  w.value(er.residual_norm);
  w.key("extremal_field_w");
  w.value_complex(er.field[d]);
  w.key("a0");
  w.value(a.a0);
  w.key("a1");
  w.value(a.a1);
  w.key("a2");
  w.value(a.a2);
  w.key("closed_forms");
  w.begin_object();
  w.key("det_closed");
  w.value(det_closed);
  w.key("det_ratio");
  w.value(md.det_g / det_closed);
  w.key("kappa_closed");
  w.value(kappa_closed);
  w.key("extremal_w_closed");
  w.value_complex(ew_closed);
  if (on_fiber) {
    w.key("fiber_kappa");
    w.value(fiber_at_t.kappa);
    w.key("fiber_ric_norm_sq");
    w.value(fiber_at_t.ric_norm_sq);
    w.key("fiber_lap_kappa");
    w.value(fiber_at_t.lap_kappa);
    w.key("fiber_r_norm_sq");
    w.value(fiber_at_t.r_norm_sq);
  }
  w.end_object();
  w.key("residuals");
  w.begin_object();
  w.key("kappa_vs_closed");
  w.value(std::abs(cb.kappa - kappa_closed));
  w.key("extremal_w_vs_closed");
  w.value(std::abs(er.field[d] - ew_closed));
  if (on_fiber) {
    w.key("r_norm_sq_vs_fiber");
    w.value(std::abs(cb.r_norm_sq - fiber_at_t.r_norm_sq));
  }
  w.end_object();
  w.end_object();
  return w.str() + "\n";
}

}  // namespace chgeo
