#pragma once

#include <cmath>
#include <complex>

namespace chgeo {

using cplx = std::complex<double>;

// Scalar-ring hooks used by the generic linear algebra.  Overloads for Jet
// live in jets.hpp; together they let the same LU/det/inverse code run over
// plain complex numbers or truncated jets.
inline cplx make_zero_like(const cplx&) { return cplx(0.0, 0.0); }
inline cplx make_one_like(const cplx&) { return cplx(1.0, 0.0); }
inline double scalar_magnitude(const cplx& v) { return std::abs(v); }

}  // namespace chgeo
