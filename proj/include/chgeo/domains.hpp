#pragma once

// Catalog of bounded symmetric base domains (generic norm, genus, dimension)
// and the Cartan-Hartogs domains built on them.  A Cartan-Hartogs domain with
// Hartogs exponent mu > 0 is
//
//   M(mu) = { (z, w) in Omega x C : |w|^2 < N(z,z)^mu },
//
// carrying the Kahler potential  Phi(z, w) = -log(N^mu - |w|^2),  where N is
// the generic norm of the base domain (N(0,0) = 1, polynomial in z and zbar).

#include <span>
#include <string>
#include <vector>

#include "chgeo/jets.hpp"
#include "chgeo/linalg.hpp"

namespace chgeo {

enum class DomainKind { ball, type_i };

struct DomainSpec {
  DomainKind kind = DomainKind::ball;
  int p = 0, q = 0;   // type-I matrix shape; unused for the ball
  int dim = 0;        // complex dimension d
  double genus = 0.0; // exponent linking the generic norm to the Bergman kernel
  std::string spec_string;
};

// Parses "ball:d=<int>" or "typeI:p=<int>,q=<int>" (exact, case-sensitive)
// and fills in the catalog dimension and genus.
DomainSpec make_domain(const std::string& spec);

struct CHSetup {
  DomainSpec domain;
  double mu = 1.0;
};

CHSetup make_setup(const std::string& domain_spec, double mu);

struct Point {
  std::vector<cplx> z;
  cplx w;
};

// Polarized generic norm: holomorphic and antiholomorphic arguments are
// independent.  Ball: 1 - sum zh_k za_k.  Type I (p x q, row-major): the
// determinant of I_p - Z * transpose(Za).  With za = conj(zh) this is N(z,z).
template <class T>
T generic_norm_polarized(const DomainSpec& domain, std::span<const T> zh, std::span<const T> za) {
  if (static_cast<int>(zh.size()) != domain.dim || static_cast<int>(za.size()) != domain.dim)
    throw std::invalid_argument("generic norm: dimension mismatch");
  if (domain.kind == DomainKind::ball) {
    T acc = make_one_like(zh[0]);
    for (int k = 0; k < domain.dim; ++k) acc -= zh[k] * za[k];
    return acc;
  }
  const int p = domain.p, q = domain.q;
  const T zero = make_zero_like(zh[0]);
  const T one = make_one_like(zh[0]);
  Mat<T> m(p, p, zero);
  for (int i = 0; i < p; ++i) {
    for (int j = 0; j < p; ++j) {
      T acc = (i == j) ? one : zero;
      for (int k = 0; k < q; ++k) acc -= zh[i * q + k] * za[j * q + k];
      m(i, j) = acc;
    }
  }
  return lu_det(lu_factor(std::move(m)));
}

// N(z, z) as a real number; positive on the interior, N(0) = 1.
double generic_norm_value(const DomainSpec& domain, std::span<const cplx> z);

// Interior membership of the base domain (ball: |z|^2 < 1; type I: largest
// singular value of Z below one).
bool domain_interior(const DomainSpec& domain, std::span<const cplx> z);

// Interior membership of the Cartan-Hartogs domain: z interior and
// |w|^2 < N(z,z)^mu, strictly.
bool contains(const CHSetup& setup, const Point& point);

// Potential value Phi(z, w); throws std::domain_error outside the domain.
double ch_potential_value(const CHSetup& setup, const Point& point);

// Jet of Phi at the point over the polarized ring in d+1 variables per sheet
// with bi-graded order caps (mh, ma).
Jet ch_potential_jet(const CHSetup& setup, const Point& point, int mh, int ma);

// Jet of log N at z over the base ring in d variables per sheet.
Jet base_log_norm_jet(const DomainSpec& domain, std::span<const cplx> z, int mh, int ma);

// Metric of the base domain with potential -scale * log N, as values at z.
Mat<cplx> base_metric_at(const DomainSpec& domain, std::span<const cplx> z, double scale);

// Max relative spread of det(-ddbar log N) * N^genus across sample points;
// point-independence of that product pins the catalog genus.
double genus_check(const DomainSpec& domain, std::span<const std::vector<cplx>> sample_points);

std::vector<std::vector<cplx>> sample_base_points(const DomainSpec& domain, int count,
                                                  std::uint64_t seed);
std::vector<Point> sample_interior_points(const CHSetup& setup, int count, std::uint64_t seed);

}  // namespace chgeo
