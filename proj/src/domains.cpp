#include "chgeo/domains.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "chgeo/random.hpp"

namespace chgeo {

namespace {

bool consume(std::string_view& s, std::string_view prefix) {
  if (s.substr(0, prefix.size()) != prefix) return false;
  s.remove_prefix(prefix.size());
  return true;
}

bool parse_int(std::string_view& s, int& out) {
  const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  if (res.ec != std::errc{}) return false;
  s.remove_prefix(static_cast<std::size_t>(res.ptr - s.data()));
  return true;
}

}  // namespace

DomainSpec make_domain(const std::string& spec) {
  std::string_view s(spec);
  DomainSpec d;
  d.spec_string = spec;
  if (consume(s, "ball:d=")) {
    int dim = 0;
    if (!parse_int(s, dim) || !s.empty())
      throw std::invalid_argument("domain spec: expected ball:d=<int>, got '" + spec + "'");
    if (dim < 1) throw std::invalid_argument("domain spec: ball dimension must be positive");
    d.kind = DomainKind::ball;
    d.dim = dim;
    d.genus = dim + 1;
    return d;
  }
  if (consume(s, "typeI:p=")) {
    int p = 0, q = 0;
    if (!parse_int(s, p) || !consume(s, ",q=") || !parse_int(s, q) || !s.empty())
      throw std::invalid_argument("domain spec: expected typeI:p=<int>,q=<int>, got '" + spec +
                                  "'");
    if (p < 1 || q < 1) throw std::invalid_argument("domain spec: typeI shape must be positive");
    d.kind = DomainKind::type_i;
    d.p = p;
    d.q = q;
    d.dim = p * q;
    d.genus = p + q;
    return d;
  }
  throw std::invalid_argument("domain spec: unknown kind in '" + spec + "'");
}

CHSetup make_setup(const std::string& domain_spec, double mu) {
  if (!(mu > 0.0)) throw std::invalid_argument("setup: mu must be positive");
  return CHSetup{make_domain(domain_spec), mu};
}

double generic_norm_value(const DomainSpec& domain, std::span<const cplx> z) {
  if (static_cast<int>(z.size()) != domain.dim)
    throw std::invalid_argument("generic norm: dimension mismatch");
  if (domain.kind == DomainKind::ball) {
    double s = 1.0;
    for (const cplx& v : z) s -= std::norm(v);
    return s;
  }
  const int p = domain.p, q = domain.q;
  Mat<cplx> m(p, p, cplx(0.0));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      cplx acc = (i == j) ? cplx(1.0) : cplx(0.0);
      for (int k = 0; k < q; ++k) acc -= z[i * q + k] * std::conj(z[j * q + k]);
      m(i, j) = acc;
    }
  return lu_det(lu_factor(std::move(m))).real();
}

namespace {

// Largest singular value of the type-I matrix via power iteration on Z Z*.
double sigma_max(const DomainSpec& domain, std::span<const cplx> z) {
  const int p = domain.p, q = domain.q;
  Mat<cplx> a(p, p, cplx(0.0));
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < p; ++j) {
      cplx acc(0.0);
      for (int k = 0; k < q; ++k) acc += z[i * q + k] * std::conj(z[j * q + k]);
      a(i, j) = acc;
    }
  std::vector<cplx> v(p);
  for (int i = 0; i < p; ++i) v[i] = cplx(1.0 + 0.37 * i, 0.11 * (i + 1));
  double lambda = 0.0;
  for (int it = 0; it < 200; ++it) {
    std::vector<cplx> av(p, cplx(0.0));
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) av[i] += a(i, j) * v[j];
    double nn = 0.0;
    for (const cplx& c : av) nn += std::norm(c);
    nn = std::sqrt(nn);
    if (nn == 0.0) return 0.0;
    lambda = nn;
    for (int i = 0; i < p; ++i) v[i] = av[i] / nn;
  }
  return std::sqrt(lambda);
}

}  // namespace

bool domain_interior(const DomainSpec& domain, std::span<const cplx> z) {
  if (static_cast<int>(z.size()) != domain.dim) return false;
  if (domain.kind == DomainKind::ball) {
    double s = 0.0;
    for (const cplx& v : z) s += std::norm(v);
    return s < 1.0;
  }
  return sigma_max(domain, z) < 1.0;
}

bool contains(const CHSetup& setup, const Point& point) {
  if (!domain_interior(setup.domain, point.z)) return false;
  const double n = generic_norm_value(setup.domain, point.z);
  return std::norm(point.w) < std::pow(n, setup.mu);
}

double ch_potential_value(const CHSetup& setup, const Point& point) {
  if (!contains(setup, point))
    throw std::domain_error("point outside the domain: requires |w|^2 < N(z,z)^mu");
  const double n = generic_norm_value(setup.domain, point.z);
  return -std::log(std::pow(n, setup.mu) - std::norm(point.w));
}

Jet ch_potential_jet(const CHSetup& setup, const Point& point, int mh, int ma) {
  if (!contains(setup, point))
    throw std::domain_error("point outside the domain: requires |w|^2 < N(z,z)^mu");
  const int d = setup.domain.dim;
  JetRing ring(d + 1, d + 1, mh, ma);
  std::vector<cplx> base(point.z.begin(), point.z.end());
  base.push_back(point.w);
  std::vector<Jet> jets = lift_point(ring, base);
  std::span<const Jet> holo(jets.data(), d + 1), anti(jets.data() + d + 1, d + 1);
  const Jet n = generic_norm_polarized<Jet>(setup.domain, holo.subspan(0, d), anti.subspan(0, d));
  return -log(pow(n, setup.mu) - holo[d] * anti[d]);
}

Jet base_log_norm_jet(const DomainSpec& domain, std::span<const cplx> z, int mh, int ma) {
  if (!domain_interior(domain, z))
    throw std::domain_error("point outside the base domain");
  JetRing ring(domain.dim, domain.dim, mh, ma);
  std::vector<Jet> jets = lift_point(ring, z);
  std::span<const Jet> holo(jets.data(), domain.dim), anti(jets.data() + domain.dim, domain.dim);
  return log(generic_norm_polarized<Jet>(domain, holo, anti));
}

Mat<cplx> base_metric_at(const DomainSpec& domain, std::span<const cplx> z, double scale) {
  const Jet ln = base_log_norm_jet(domain, z, 1, 1);
  const int d = domain.dim;
  Mat<cplx> g(d, d);
  for (int j = 0; j < d; ++j)
    for (int k = 0; k < d; ++k) g(j, k) = -scale * ln.wirtinger({j}, {k});
  return g;
}

double genus_check(const DomainSpec& domain, std::span<const std::vector<cplx>> sample_points) {
  if (sample_points.size() < 5)
    throw std::invalid_argument("genus check: at least 5 interior sample points required");
  double lo = 0.0, hi = 0.0, sum = 0.0;
  bool first = true;
  for (const auto& z : sample_points) {
    if (!domain_interior(domain, z))
      throw std::invalid_argument("genus check: sample point not interior");
    const Mat<cplx> g = base_metric_at(domain, z, 1.0);
    const double det = lu_det(lu_factor(g)).real();
    if (!(det > 0.0)) throw std::domain_error("genus check: non-positive metric determinant");
    const double v = det * std::pow(generic_norm_value(domain, z), domain.genus);
    if (first) {
      lo = hi = v;
      first = false;
    } else {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    sum += v;
  }
  const double mean = sum / static_cast<double>(sample_points.size());
  return (hi - lo) / mean;
}

std::vector<std::vector<cplx>> sample_base_points(const DomainSpec& domain, int count,
                                                  std::uint64_t seed) {
  Rng rng(seed);
  const double a = 0.7 / std::sqrt(2.0 * domain.dim);
  std::vector<std::vector<cplx>> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    std::vector<cplx> z(domain.dim);
    for (int tries = 0; tries < 1000; ++tries) {
      for (int k = 0; k < domain.dim; ++k)
        z[k] = cplx(rng.uniform(-a, a), rng.uniform(-a, a));
      if (domain_interior(domain, z) && generic_norm_value(domain, z) > 0.25) break;
    }
    pts.push_back(std::move(z));
  }
  return pts;
}

std::vector<Point> sample_interior_points(const CHSetup& setup, int count, std::uint64_t seed) {
  Rng rng(seed);
  const double a = 0.7 / std::sqrt(2.0 * setup.domain.dim);
  std::vector<Point> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    Point p;
    p.z.resize(setup.domain.dim);
    for (int tries = 0; tries < 1000; ++tries) {
      for (int k = 0; k < setup.domain.dim; ++k)
        p.z[k] = cplx(rng.uniform(-a, a), rng.uniform(-a, a));
      if (domain_interior(setup.domain, p.z) &&
          generic_norm_value(setup.domain, p.z) > 0.25)
        break;
    }
    const double n = generic_norm_value(setup.domain, p.z);
    const double frac = rng.uniform(0.05, 0.8);
    const double theta = rng.uniform(0.0, 6.283185307179586);
    const double r = std::sqrt(frac * std::pow(n, setup.mu));
    p.w = cplx(r * std::cos(theta), r * std::sin(theta));
    pts.push_back(std::move(p));
  }
  return pts;
}

}  // namespace chgeo
