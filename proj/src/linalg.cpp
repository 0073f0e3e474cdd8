#include "chgeo/linalg.hpp"

#include <algorithm>

namespace chgeo {

std::vector<double> hermitian_eigenvalues(Mat<cplx> a) {
  const int n = a.rows();
  if (n != a.cols()) throw std::invalid_argument("hermitian_eigenvalues: square matrix required");

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0, diag = 0.0;
    for (int i = 0; i < n; ++i) {
      diag = std::max(diag, std::abs(a(i, i)));
      for (int j = i + 1; j < n; ++j) off = std::max(off, std::abs(a(i, j)));
    }
    if (off <= 1e-14 * (1.0 + diag)) break;

    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const cplx apq = a(p, q);
        const double mag = std::abs(apq);
        if (mag <= 1e-300) continue;
        // Phase so the (p,q) entry becomes real, then a real Jacobi rotation.
        const cplx u = apq / mag;  // a(p,q) = u * mag
        const double alpha = a(p, p).real();
        const double beta = a(q, q).real();
        const double tau = (beta - alpha) / (2.0 * mag);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        // Combined unitary U = diag(1, conj(u)) * [[c, s], [-s, c]] on the
        // (p,q) plane; apply A <- U* A U.
        for (int k = 0; k < n; ++k) {  // right multiplication (columns)
          const cplx akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * std::conj(u) * akq;
          a(k, q) = s * akp + c * std::conj(u) * akq;
        }
        for (int k = 0; k < n; ++k) {  // left multiplication by U* (rows)
          const cplx apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * u * aqk;
          a(q, k) = s * apk + c * u * aqk;
        }
        a(p, q) = cplx(0.0);
        a(q, p) = cplx(0.0);
        a(p, p) = cplx(a(p, p).real());
        a(q, q) = cplx(a(q, q).real());
      }
    }
  }

  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a(i, i).real();
  std::sort(ev.begin(), ev.end());
  return ev;
}

}  // namespace chgeo
