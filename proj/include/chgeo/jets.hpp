#pragma once

// Bi-graded truncated Taylor arithmetic ("jets") over complex coefficients in
// polarized coordinates: the holomorphic sheet z_1..z_n and the antiholomorphic
// sheet zb_1..zb_n are independent formal variables.  A jet stores every Taylor
// coefficient with holomorphic degree <= max_holo_order AND antiholomorphic
// degree <= max_anti_order (bi-graded truncation, not total-degree truncation).
// Arithmetic is closed and truncation-consistent, so mixed Wirtinger partials
// of composite real-analytic expressions come out exact up to roundoff.

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "chgeo/scalar.hpp"

namespace chgeo {

namespace detail {

// Monomials over `nvars` variables with total degree <= kMaxDeg, ordered by
// degree then lexicographically (so the basis capped at any lower degree is a
// prefix).  Exponents are packed 4 bits per variable; within the degree caps
// exponent addition never carries between nibbles, so the key of a product
// monomial is the sum of the factor keys.
class MonomialBasis {
 public:
  static constexpr int kMaxVars = 5;
  static constexpr int kMaxDeg = 4;

  static const MonomialBasis& master(int nvars);

  int nvars() const { return nvars_; }
  int count_up_to(int deg) const { return deg_off_[deg + 1]; }
  int degree(int idx) const { return degs_[idx]; }
  std::uint32_t key(int idx) const { return keys_[idx]; }
  int exponent(int idx, int var) const {
    return static_cast<int>((keys_[idx] >> (4 * var)) & 0xFu);
  }
  // Product of the factorials of the exponents; converts a Taylor coefficient
  // into the corresponding mixed partial derivative.
  double exponent_factorial(int idx) const { return fact_[idx]; }
  int index_of(std::uint32_t key) const { return lut_[key]; }

 private:
  explicit MonomialBasis(int nvars);
  int nvars_;
  std::vector<std::uint32_t> keys_;
  std::vector<int> degs_;
  std::vector<int> deg_off_;   // size kMaxDeg + 2
  std::vector<double> fact_;
  std::vector<std::int32_t> lut_;
};

std::uint32_t pack_exponents(std::span<const int> exps);
std::uint32_t pack_from_vars(std::span<const int> vars, int nvars);

}  // namespace detail

// Shape of a jet ring: variable count per sheet and the bi-graded order caps.
struct JetRing {
  int num_holo_vars = 0;
  int num_anti_vars = 0;
  int max_holo_order = 0;
  int max_anti_order = 0;

  JetRing() = default;
  JetRing(int nh, int na, int mh, int ma);

  bool operator==(const JetRing& o) const {
    return num_holo_vars == o.num_holo_vars && num_anti_vars == o.num_anti_vars &&
           max_holo_order == o.max_holo_order && max_anti_order == o.max_anti_order;
  }

  const detail::MonomialBasis* holo_basis = nullptr;
  const detail::MonomialBasis* anti_basis = nullptr;

  int holo_count() const { return holo_basis->count_up_to(max_holo_order); }
  int anti_count() const { return anti_basis->count_up_to(max_anti_order); }
  int size() const { return holo_count() * anti_count(); }
};

class Jet {
 public:
  Jet() = default;
  explicit Jet(const JetRing& ring) : ring_(ring), c_(ring.size(), cplx(0.0)) {}

  static Jet constant(const JetRing& ring, cplx value);
  // base + 1 * (formal variable `var` on the holomorphic or antiholomorphic sheet)
  static Jet variable(const JetRing& ring, int var, bool anti, cplx base);

  const JetRing& ring() const { return ring_; }
  bool empty() const { return c_.empty(); }

  cplx constant_term() const { return c_.empty() ? cplx(0.0) : c_[0]; }

  // Taylor coefficient of the monomial with holomorphic exponents I and
  // antiholomorphic exponents J (exponent-vector form, length = var count).
  cplx coefficient(std::span<const int> I, std::span<const int> J) const;
  void add_to_coefficient(std::span<const int> I, std::span<const int> J, cplx v);

  // Mixed Wirtinger partial: coefficient(I, J) * I! * J!.
  cplx partial(std::span<const int> I, std::span<const int> J) const;
  // Same, with the derivative given as a list of variables (repeats allowed),
  // e.g. wirtinger({a, h}, {b}) = d^3 f / dz_a dz_h dzb_b.
  cplx wirtinger(std::span<const int> holo_vars, std::span<const int> anti_vars) const;
  cplx wirtinger(std::initializer_list<int> hv, std::initializer_list<int> av) const {
    return wirtinger(std::span<const int>(hv.begin(), hv.size()),
                     std::span<const int>(av.begin(), av.size()));
  }

  double max_abs_coefficient() const;
  bool is_zero() const;

  std::span<const cplx> raw() const { return c_; }

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator+=(cplx s);
  Jet& operator-=(cplx s);
  Jet& operator*=(cplx s);
  Jet& operator/=(cplx s);

  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet truncated(const Jet& f, int mh, int ma);
  friend Jet derivative(const Jet& f, int var, bool anti);
  friend class DerivativeTable;

 private:
  void require_compatible(const Jet& o) const;

  JetRing ring_;
  std::vector<cplx> c_;
};

Jet operator+(Jet a, const Jet& b);
Jet operator-(Jet a, const Jet& b);
Jet operator-(Jet a);
Jet operator*(const Jet& a, const Jet& b);
Jet operator/(const Jet& a, const Jet& b);

inline Jet operator+(Jet a, cplx s) { return a += s; }
inline Jet operator+(cplx s, Jet a) { return a += s; }
inline Jet operator-(Jet a, cplx s) { return a -= s; }
Jet operator-(cplx s, const Jet& a);
inline Jet operator*(Jet a, cplx s) { return a *= s; }
inline Jet operator*(cplx s, Jet a) { return a *= s; }
inline Jet operator/(Jet a, cplx s) { return a /= s; }
Jet operator/(cplx s, const Jet& a);
inline Jet operator+(Jet a, double s) { return a += cplx(s); }
inline Jet operator+(double s, Jet a) { return a += cplx(s); }
inline Jet operator-(Jet a, double s) { return a -= cplx(s); }
inline Jet operator-(double s, const Jet& a) { return cplx(s) - a; }
inline Jet operator*(Jet a, double s) { return a *= cplx(s); }
inline Jet operator*(double s, Jet a) { return a *= cplx(s); }
inline Jet operator/(Jet a, double s) { return a /= cplx(s); }
inline Jet operator/(double s, const Jet& a) { return cplx(s) / a; }

// Truncated copy; caps may only shrink.
Jet truncated(const Jet& f, int mh, int ma);
// Formal derivative with respect to one sheet variable; the corresponding
// order cap drops by one.
Jet derivative(const Jet& f, int var, bool anti);

// Multiplicative inverse; requires a nonzero constant term.
Jet recip(const Jet& f);
// Requires a nonzero constant term.
Jet log(const Jet& f);
Jet exp(const Jet& f);
// Real power u^e computed as exp(e * log u); requires a positive real
// constant term.
Jet pow(const Jet& f, double e);

// Scalar-ring hooks (see scalar.hpp).
inline Jet make_zero_like(const Jet& j) { return Jet::constant(j.ring(), cplx(0.0)); }
inline Jet make_one_like(const Jet& j) { return Jet::constant(j.ring(), cplx(1.0)); }
inline double scalar_magnitude(const Jet& j) { return std::abs(j.constant_term()); }

// All mixed Wirtinger partials of a function at a base point, indexed by the
// pair (holo multi-index, anti multi-index).  Stored dense over the same
// bi-graded monomial range as the jet it came from.
class DerivativeTable {
 public:
  DerivativeTable() = default;
  static DerivativeTable from_jet(const Jet& jet);

  int num_holo_vars() const { return ring_.num_holo_vars; }
  int num_anti_vars() const { return ring_.num_anti_vars; }
  int max_holo_order() const { return ring_.max_holo_order; }
  int max_anti_order() const { return ring_.max_anti_order; }

  cplx entry(std::span<const int> I, std::span<const int> J) const;
  cplx entry(std::initializer_list<int> I, std::initializer_list<int> J) const {
    return entry(std::span<const int>(I.begin(), I.size()),
                 std::span<const int>(J.begin(), J.size()));
  }

  // max |entry(I,J) - conj(entry(J,I))| over all stored pairs; zero for the
  // table of a real-valued expression.  Requires a square ring.
  double conjugation_symmetry_residual() const;

  template <class F>
  void for_each(F&& f) const {  // f(I_span, J_span, value)
    std::vector<int> I(ring_.num_holo_vars), J(ring_.num_anti_vars);
    const auto& hb = *ring_.holo_basis;
    const auto& ab = *ring_.anti_basis;
    for (int ih = 0; ih < ring_.holo_count(); ++ih) {
      for (int v = 0; v < ring_.num_holo_vars; ++v) I[v] = hb.exponent(ih, v);
      for (int ia = 0; ia < ring_.anti_count(); ++ia) {
        for (int v = 0; v < ring_.num_anti_vars; ++v) J[v] = ab.exponent(ia, v);
        f(std::span<const int>(I), std::span<const int>(J), e_[ih * ring_.anti_count() + ia]);
      }
    }
  }

 private:
  JetRing ring_;
  std::vector<cplx> e_;
};

// Seeded coordinate jets for a base point: 2n jets, the k-th holomorphic one
// carrying constant base[k] and a unit linear term in holo variable k, the
// antiholomorphic ones seeded with conj(base[k]).
std::vector<Jet> lift_point(const JetRing& ring, std::span<const cplx> base);

using JetExpression = std::function<Jet(std::span<const Jet>, std::span<const Jet>)>;

// Evaluates `f` on lifted coordinates at `point` over a ring of bi-graded
// order (holo_order, anti_order) and returns every mixed partial.
DerivativeTable mixed_partials(const JetExpression& f, std::span<const cplx> point,
                               int holo_order, int anti_order);

using PointwiseFn = std::function<cplx(std::span<const cplx>)>;

// Central finite-difference estimate of a mixed Wirtinger partial, built from
// real-coordinate differences via d/dz = (d/dx - i d/dy)/2, with one level of
// Richardson extrapolation.  |I| + |J| <= 4.  The default step suits orders
// <= 2; higher orders need a larger step to stay clear of cancellation.
cplx fd_oracle(const PointwiseFn& f, std::span<const cplx> point, std::span<const int> I,
               std::span<const int> J, double step = 1e-4);

}  // namespace chgeo
