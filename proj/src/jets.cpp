#include "chgeo/jets.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>

namespace chgeo {

namespace detail {

namespace {

void enumerate_degree(int nvars, int deg, int var, std::uint32_t key,
                      std::vector<std::uint32_t>& out) {
  if (var == nvars - 1) {
    out.push_back(key | (static_cast<std::uint32_t>(deg) << (4 * var)));
    return;
  }
  for (int e = deg; e >= 0; --e) {
    enumerate_degree(nvars, deg - e, var + 1, key | (static_cast<std::uint32_t>(e) << (4 * var)),
                     out);
  }
}

double factorial(int n) {
  static const double table[] = {1, 1, 2, 6, 24, 120, 720, 5040, 40320};
  return table[n];
}

}  // namespace

MonomialBasis::MonomialBasis(int nvars) : nvars_(nvars) {
  deg_off_.assign(kMaxDeg + 2, 0);
  for (int deg = 0; deg <= kMaxDeg; ++deg) {
    deg_off_[deg] = static_cast<int>(keys_.size());
    enumerate_degree(nvars, deg, 0, 0u, keys_);
    deg_off_[deg + 1] = static_cast<int>(keys_.size());
  }
  degs_.resize(keys_.size());
  fact_.resize(keys_.size());
  lut_.assign(std::size_t{1} << (4 * nvars), -1);
  for (std::size_t i = 0; i < keys_.size(); ++i) {
    int deg = 0;
    double f = 1.0;
    for (int v = 0; v < nvars; ++v) {
      const int e = static_cast<int>((keys_[i] >> (4 * v)) & 0xFu);
      deg += e;
      f *= factorial(e);
    }
    degs_[i] = deg;
    fact_[i] = f;
    lut_[keys_[i]] = static_cast<std::int32_t>(i);
  }
}

const MonomialBasis& MonomialBasis::master(int nvars) {
  if (nvars < 1 || nvars > kMaxVars)
    throw std::invalid_argument("jet ring: variable count out of range [1," +
                                std::to_string(kMaxVars) + "]");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<MonomialBasis>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = registry[nvars];
  if (!slot) slot.reset(new MonomialBasis(nvars));
  return *slot;
}

std::uint32_t pack_exponents(std::span<const int> exps) {
  std::uint32_t key = 0;
  for (std::size_t v = 0; v < exps.size(); ++v) {
    if (exps[v] < 0 || exps[v] > 0xF) throw std::invalid_argument("jet: exponent out of range");
    key |= static_cast<std::uint32_t>(exps[v]) << (4 * v);
  }
  return key;
}

std::uint32_t pack_from_vars(std::span<const int> vars, int nvars) {
  std::uint32_t key = 0;
  for (int v : vars) {
    if (v < 0 || v >= nvars) throw std::invalid_argument("jet: variable index out of range");
    key += std::uint32_t{1} << (4 * v);
  }
  return key;
}

}  // namespace detail

JetRing::JetRing(int nh, int na, int mh, int ma)
    : num_holo_vars(nh), num_anti_vars(na), max_holo_order(mh), max_anti_order(ma) {
  if (mh < 0 || ma < 0 || mh > detail::MonomialBasis::kMaxDeg ||
      ma > detail::MonomialBasis::kMaxDeg)
    throw std::invalid_argument("jet ring: order caps out of range [0," +
                                std::to_string(detail::MonomialBasis::kMaxDeg) + "]");
  holo_basis = &detail::MonomialBasis::master(nh);
  anti_basis = &detail::MonomialBasis::master(na);
}

Jet Jet::constant(const JetRing& ring, cplx value) {
  Jet j(ring);
  j.c_[0] = value;
  return j;
}

Jet Jet::variable(const JetRing& ring, int var, bool anti, cplx base) {
  Jet j(ring);
  j.c_[0] = base;
  const int n = anti ? ring.num_anti_vars : ring.num_holo_vars;
  const int cap = anti ? ring.max_anti_order : ring.max_holo_order;
  if (var < 0 || var >= n) throw std::invalid_argument("jet: variable index out of range");
  if (cap < 1) throw std::invalid_argument("jet: ring order too low to seed a variable");
  const auto& basis = anti ? *ring.anti_basis : *ring.holo_basis;
  const int idx = basis.index_of(std::uint32_t{1} << (4 * var));
  if (anti)
    j.c_[idx] = cplx(1.0);
  else
    j.c_[static_cast<std::size_t>(idx) * ring.anti_count()] = cplx(1.0);
  return j;
}

void Jet::require_compatible(const Jet& o) const {
  if (ring_.num_holo_vars != o.ring_.num_holo_vars ||
      ring_.num_anti_vars != o.ring_.num_anti_vars)
    throw std::invalid_argument("jet: ring mismatch");
}

cplx Jet::coefficient(std::span<const int> I, std::span<const int> J) const {
  if (static_cast<int>(I.size()) != ring_.num_holo_vars ||
      static_cast<int>(J.size()) != ring_.num_anti_vars)
    throw std::invalid_argument("jet: multi-index length mismatch");
  const int ih = ring_.holo_basis->index_of(detail::pack_exponents(I));
  const int ia = ring_.anti_basis->index_of(detail::pack_exponents(J));
  if (ih < 0 || ih >= ring_.holo_count() || ia < 0 || ia >= ring_.anti_count())
    throw std::out_of_range("jet: coefficient beyond truncation order");
  return c_[static_cast<std::size_t>(ih) * ring_.anti_count() + ia];
}

void Jet::add_to_coefficient(std::span<const int> I, std::span<const int> J, cplx v) {
  const int ih = ring_.holo_basis->index_of(detail::pack_exponents(I));
  const int ia = ring_.anti_basis->index_of(detail::pack_exponents(J));
  if (ih < 0 || ih >= ring_.holo_count() || ia < 0 || ia >= ring_.anti_count())
    throw std::out_of_range("jet: coefficient beyond truncation order");
  c_[static_cast<std::size_t>(ih) * ring_.anti_count() + ia] += v;
}

cplx Jet::partial(std::span<const int> I, std::span<const int> J) const {
  const int ih = ring_.holo_basis->index_of(detail::pack_exponents(I));
  const int ia = ring_.anti_basis->index_of(detail::pack_exponents(J));
  if (ih < 0 || ih >= ring_.holo_count() || ia < 0 || ia >= ring_.anti_count())
    throw std::out_of_range("jet: partial beyond truncation order");
  return c_[static_cast<std::size_t>(ih) * ring_.anti_count() + ia] *
         ring_.holo_basis->exponent_factorial(ih) * ring_.anti_basis->exponent_factorial(ia);
}

cplx Jet::wirtinger(std::span<const int> holo_vars, std::span<const int> anti_vars) const {
  const std::uint32_t hk = detail::pack_from_vars(holo_vars, ring_.num_holo_vars);
  const std::uint32_t ak = detail::pack_from_vars(anti_vars, ring_.num_anti_vars);
  const int ih = ring_.holo_basis->index_of(hk);
  const int ia = ring_.anti_basis->index_of(ak);
  if (ih < 0 || ih >= ring_.holo_count() || ia < 0 || ia >= ring_.anti_count())
    throw std::out_of_range("jet: partial beyond truncation order");
  return c_[static_cast<std::size_t>(ih) * ring_.anti_count() + ia] *
         ring_.holo_basis->exponent_factorial(ih) * ring_.anti_basis->exponent_factorial(ia);
}

double Jet::max_abs_coefficient() const {
  double m = 0.0;
  for (const cplx& v : c_) m = std::max(m, std::abs(v));
  return m;
}

bool Jet::is_zero() const {
  for (const cplx& v : c_)
    if (v != cplx(0.0)) return false;
  return true;
}

namespace {

// Aligns caps of two operands for a pointwise binary operation.
void align(Jet& a, Jet& b) {
  const int mh = std::min(a.ring().max_holo_order, b.ring().max_holo_order);
  const int ma = std::min(a.ring().max_anti_order, b.ring().max_anti_order);
  if (a.ring().max_holo_order != mh || a.ring().max_anti_order != ma) a = truncated(a, mh, ma);
  if (b.ring().max_holo_order != mh || b.ring().max_anti_order != ma) b = truncated(b, mh, ma);
}

}  // namespace

Jet& Jet::operator+=(const Jet& o) {
  require_compatible(o);
  if (!(ring_ == o.ring_)) {
    Jet a = *this, b = o;
    align(a, b);
    a += b;
    return *this = a;
  }
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  require_compatible(o);
  if (!(ring_ == o.ring_)) {
    Jet a = *this, b = o;
    align(a, b);
    a -= b;
    return *this = a;
  }
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  return *this;
}

Jet& Jet::operator+=(cplx s) {
  c_[0] += s;
  return *this;
}

Jet& Jet::operator-=(cplx s) {
  c_[0] -= s;
  return *this;
}

Jet& Jet::operator*=(cplx s) {
  for (cplx& v : c_) v *= s;
  return *this;
}

Jet& Jet::operator/=(cplx s) {
  if (s == cplx(0.0)) throw std::domain_error("jet division: zero scalar divisor");
  for (cplx& v : c_) v /= s;
  return *this;
}

Jet operator+(Jet a, const Jet& b) { return a += b; }
Jet operator-(Jet a, const Jet& b) { return a -= b; }

Jet operator-(Jet a) {
  a *= cplx(-1.0);
  return a;
}

Jet operator-(cplx s, const Jet& a) {
  Jet r = -a;
  r += s;
  return r;
}

Jet operator*(const Jet& a0, const Jet& b0) {
  a0.require_compatible(b0);
  Jet a = a0, b = b0;
  align(a, b);

  const JetRing& R = a.ring_;
  const auto& hb = *R.holo_basis;
  const auto& ab = *R.anti_basis;
  const int rh = R.max_holo_order, ra = R.max_anti_order;
  const int hcount = R.holo_count(), acount = R.anti_count();

  Jet out(R);

  // Rows (holo monomials) that are entirely zero are skipped.
  std::vector<char> arow(hcount, 0), brow(hcount, 0);
  for (int ih = 0; ih < hcount; ++ih) {
    const cplx* pa = &a.c_[static_cast<std::size_t>(ih) * acount];
    const cplx* pb = &b.c_[static_cast<std::size_t>(ih) * acount];
    for (int ia = 0; ia < acount; ++ia) {
      if (pa[ia] != cplx(0.0)) arow[ih] = 1;
      if (pb[ia] != cplx(0.0)) brow[ih] = 1;
    }
  }

  for (int ah = 0; ah < hcount; ++ah) {
    if (!arow[ah]) continue;
    const int da = hb.degree(ah);
    const cplx* pa = &a.c_[static_cast<std::size_t>(ah) * acount];
    const int bh_end = hb.count_up_to(rh - da);
    for (int bh = 0; bh < bh_end; ++bh) {
      if (!brow[bh]) continue;
      const int oh = hb.index_of(hb.key(ah) + hb.key(bh));
      const cplx* pb = &b.c_[static_cast<std::size_t>(bh) * acount];
      cplx* po = &out.c_[static_cast<std::size_t>(oh) * acount];
      for (int aa = 0; aa < acount; ++aa) {
        const cplx ca = pa[aa];
        if (ca == cplx(0.0)) continue;
        const int ea = ab.degree(aa);
        const std::uint32_t ka = ab.key(aa);
        const int ba_end = ab.count_up_to(ra - ea);
        for (int ba = 0; ba < ba_end; ++ba) {
          const cplx cb = pb[ba];
          if (cb == cplx(0.0)) continue;
          po[ab.index_of(ka + ab.key(ba))] += ca * cb;
        }
      }
    }
  }
  return out;
}

Jet truncated(const Jet& f, int mh, int ma) {
  if (mh > f.ring_.max_holo_order || ma > f.ring_.max_anti_order)
    throw std::invalid_argument("jet truncation: caps may only shrink");
  if (mh == f.ring_.max_holo_order && ma == f.ring_.max_anti_order) return f;
  JetRing R(f.ring_.num_holo_vars, f.ring_.num_anti_vars, mh, ma);
  Jet out(R);
  const int ac_out = R.anti_count(), ac_in = f.ring_.anti_count();
  for (int ih = 0; ih < R.holo_count(); ++ih)
    for (int ia = 0; ia < ac_out; ++ia)
      out.c_[static_cast<std::size_t>(ih) * ac_out + ia] =
          f.c_[static_cast<std::size_t>(ih) * ac_in + ia];
  return out;
}

Jet derivative(const Jet& f, int var, bool anti) {
  const JetRing& R = f.ring_;
  const int n = anti ? R.num_anti_vars : R.num_holo_vars;
  if (var < 0 || var >= n) throw std::invalid_argument("jet derivative: variable out of range");
  const int mh = R.max_holo_order - (anti ? 0 : 1);
  const int ma = R.max_anti_order - (anti ? 1 : 0);
  if (mh < 0 || ma < 0) throw std::invalid_argument("jet derivative: order cap exhausted");
  JetRing Rd(R.num_holo_vars, R.num_anti_vars, mh, ma);
  Jet out(Rd);
  const auto& hb = *R.holo_basis;
  const auto& ab = *R.anti_basis;
  const std::uint32_t bump = std::uint32_t{1} << (4 * var);
  const int ac_out = Rd.anti_count(), ac_in = R.anti_count();
  for (int ih = 0; ih < Rd.holo_count(); ++ih) {
    const int sh = anti ? ih : hb.index_of(hb.key(ih) + bump);
    for (int ia = 0; ia < ac_out; ++ia) {
      const int sa = anti ? ab.index_of(ab.key(ia) + bump) : ia;
      const int e = anti ? ab.exponent(sa, var) : hb.exponent(sh, var);
      out.c_[static_cast<std::size_t>(ih) * ac_out + ia] =
          f.c_[static_cast<std::size_t>(sh) * ac_in + sa] * static_cast<double>(e);
    }
  }
  return out;
}

Jet recip(const Jet& f) {
  const cplx c0 = f.constant_term();
  if (c0 == cplx(0.0)) throw std::domain_error("jet division: zero constant term");
  Jet x = f / c0;
  x -= cplx(1.0);  // strictly positive order
  const int terms = f.ring().max_holo_order + f.ring().max_anti_order;
  // 1 / (1 + x) = 1 - x + x^2 - ... via Horner
  Jet acc = Jet::constant(f.ring(), cplx(1.0));
  for (int k = 0; k < terms; ++k) {
    acc = cplx(1.0) - x * acc;
  }
  return acc / c0;
}

Jet operator/(const Jet& a, const Jet& b) { return a * recip(b); }

Jet operator/(cplx s, const Jet& a) { return recip(a) * s; }

Jet log(const Jet& f) {
  const cplx c0 = f.constant_term();
  if (c0 == cplx(0.0)) throw std::domain_error("jet log: zero constant term");
  Jet y = f / c0;
  y -= cplx(1.0);
  const int terms = f.ring().max_holo_order + f.ring().max_anti_order;
  // log(1 + y) = y - y^2/2 + y^3/3 - ... via Horner in y
  Jet r = Jet::constant(f.ring(), cplx(0.0));
  for (int k = terms; k >= 1; --k) {
    r = y * r;
    r += cplx(((k % 2 == 1) ? 1.0 : -1.0) / k);
  }
  r = y * r;
  r += std::log(c0);
  return r;
}

Jet exp(const Jet& f) {
  const cplx c0 = f.constant_term();
  Jet y = f;
  y -= c0;
  const int terms = f.ring().max_holo_order + f.ring().max_anti_order;
  // exp(y) = 1 + y (1 + y/2 (1 + y/3 (...)))
  Jet r = Jet::constant(f.ring(), cplx(1.0));
  for (int k = terms; k >= 1; --k) {
    r = y * r / static_cast<double>(k);
    r += cplx(1.0);
  }
  return r * std::exp(c0);
}

Jet pow(const Jet& f, double e) {
  const cplx c0 = f.constant_term();
  if (!(c0.real() > 0.0) || std::abs(c0.imag()) > 1e-9 * (1.0 + std::abs(c0.real())))
    throw std::domain_error("jet pow: constant term not positive real");
  return exp(log(f) * e);
}

DerivativeTable DerivativeTable::from_jet(const Jet& jet) {
  DerivativeTable t;
  t.ring_ = jet.ring();
  const auto& hb = *t.ring_.holo_basis;
  const auto& ab = *t.ring_.anti_basis;
  const int hc = t.ring_.holo_count(), ac = t.ring_.anti_count();
  t.e_.resize(static_cast<std::size_t>(hc) * ac);
  for (int ih = 0; ih < hc; ++ih)
    for (int ia = 0; ia < ac; ++ia)
      t.e_[static_cast<std::size_t>(ih) * ac + ia] =
          jet.c_[static_cast<std::size_t>(ih) * ac + ia] * hb.exponent_factorial(ih) *
          ab.exponent_factorial(ia);
  return t;
}

cplx DerivativeTable::entry(std::span<const int> I, std::span<const int> J) const {
  const int ih = ring_.holo_basis->index_of(detail::pack_exponents(I));
  const int ia = ring_.anti_basis->index_of(detail::pack_exponents(J));
  if (ih < 0 || ih >= ring_.holo_count() || ia < 0 || ia >= ring_.anti_count())
    throw std::out_of_range("derivative table: entry beyond stored orders");
  return e_[static_cast<std::size_t>(ih) * ring_.anti_count() + ia];
}

double DerivativeTable::conjugation_symmetry_residual() const {
  if (ring_.num_holo_vars != ring_.num_anti_vars)
    throw std::invalid_argument("derivative table: conjugation symmetry needs a square ring");
  const int m = std::min(ring_.max_holo_order, ring_.max_anti_order);
  const auto& hb = *ring_.holo_basis;
  const int count = hb.count_up_to(m);
  double r = 0.0;
  for (int ih = 0; ih < count; ++ih) {
    for (int ia = 0; ia < count; ++ia) {
      const cplx a = e_[static_cast<std::size_t>(ih) * ring_.anti_count() + ia];
      const cplx b = e_[static_cast<std::size_t>(ia) * ring_.anti_count() + ih];
      r = std::max(r, std::abs(a - std::conj(b)));
    }
  }
  return r;
}

std::vector<Jet> lift_point(const JetRing& ring, std::span<const cplx> base) {
  if (static_cast<int>(base.size()) != ring.num_holo_vars ||
      ring.num_holo_vars != ring.num_anti_vars)
    throw std::invalid_argument("lift_point: dimension mismatch");
  std::vector<Jet> jets;
  jets.reserve(2 * base.size());
  for (std::size_t k = 0; k < base.size(); ++k)
    jets.push_back(Jet::variable(ring, static_cast<int>(k), false, base[k]));
  for (std::size_t k = 0; k < base.size(); ++k)
    jets.push_back(Jet::variable(ring, static_cast<int>(k), true, std::conj(base[k])));
  return jets;
}

DerivativeTable mixed_partials(const JetExpression& f, std::span<const cplx> point,
                               int holo_order, int anti_order) {
  const int n = static_cast<int>(point.size());
  JetRing ring(n, n, holo_order, anti_order);
  std::vector<Jet> jets = lift_point(ring, point);
  std::span<const Jet> all(jets);
  Jet value = f(all.subspan(0, n), all.subspan(n, n));
  return DerivativeTable::from_jet(value);
}

namespace {

cplx wirtinger_fd(const PointwiseFn& f, std::vector<cplx>& pt, std::vector<int>& I,
                  std::vector<int>& J, double h) {
  for (std::size_t k = 0; k < I.size(); ++k) {
    if (I[k] > 0) {
      --I[k];
      const cplx saved = pt[k];
      pt[k] = saved + h;
      const cplx fxp = wirtinger_fd(f, pt, I, J, h);
      pt[k] = saved - h;
      const cplx fxm = wirtinger_fd(f, pt, I, J, h);
      pt[k] = saved + cplx(0.0, h);
      const cplx fyp = wirtinger_fd(f, pt, I, J, h);
      pt[k] = saved - cplx(0.0, h);
      const cplx fym = wirtinger_fd(f, pt, I, J, h);
      pt[k] = saved;
      ++I[k];
      return ((fxp - fxm) - cplx(0.0, 1.0) * (fyp - fym)) / (4.0 * h);
    }
  }
  for (std::size_t k = 0; k < J.size(); ++k) {
    if (J[k] > 0) {
      --J[k];
      const cplx saved = pt[k];
      pt[k] = saved + h;
      const cplx fxp = wirtinger_fd(f, pt, I, J, h);
      pt[k] = saved - h;
      const cplx fxm = wirtinger_fd(f, pt, I, J, h);
      pt[k] = saved + cplx(0.0, h);
      const cplx fyp = wirtinger_fd(f, pt, I, J, h);
      pt[k] = saved - cplx(0.0, h);
      const cplx fym = wirtinger_fd(f, pt, I, J, h);
      pt[k] = saved;
      ++J[k];
      return ((fxp - fxm) + cplx(0.0, 1.0) * (fyp - fym)) / (4.0 * h);
    }
  }
  return f(pt);
}

}  // namespace

cplx fd_oracle(const PointwiseFn& f, std::span<const cplx> point, std::span<const int> I,
               std::span<const int> J, double step) {
  if (I.size() != point.size() || J.size() != point.size())
    throw std::invalid_argument("fd_oracle: multi-index length mismatch");
  int total = 0;
  for (int e : I) total += e;
  for (int e : J) total += e;
  if (total > 4) throw std::invalid_argument("fd_oracle: total order above 4");
  if (!(step > 0.0)) throw std::invalid_argument("fd_oracle: step must be positive");
  std::vector<cplx> pt(point.begin(), point.end());
  std::vector<int> Iv(I.begin(), I.end()), Jv(J.begin(), J.end());
  const cplx coarse = wirtinger_fd(f, pt, Iv, Jv, step);
  const cplx fine = wirtinger_fd(f, pt, Iv, Jv, step / 2.0);
  return (4.0 * fine - coarse) / 3.0;
}

}  // namespace chgeo
