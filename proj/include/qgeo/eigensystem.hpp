#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "qgeo/matrix.hpp"

namespace qgeo {

struct Eigensystem {
  RealVector values;     // descending
  ComplexMatrix vectors; // columns are eigenvectors, unitary
};

namespace detail {

inline double off_diagonal_norm(const ComplexMatrix& a) {
  double s = 0.0;
  for (Index j = 0; j < a.cols(); ++j)
    for (Index i = 0; i < a.rows(); ++i)
      if (i != j) s += std::norm(a(i, j));
  return std::sqrt(s);
}

// One complex Jacobi rotation in the (p, q) plane, annihilating a(p, q).
inline void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, Index p, Index q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  if (mag == 0.0) return;
  const Complex phase = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double theta = (aqq - app) / (2.0 * mag);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  // R = diag(1, conj(phase)) * [[c, s], [-s, c]] embedded at (p, q).
  const Complex r_pp = c;
  const Complex r_pq = s;
  const Complex r_qp = -s * std::conj(phase);
  const Complex r_qq = c * std::conj(phase);

  const Index n = a.rows();
  for (Index i = 0; i < n; ++i) {  // a <- a R
    const Complex aip = a(i, p);
    const Complex aiq = a(i, q);
    a(i, p) = aip * r_pp + aiq * r_qp;
    a(i, q) = aip * r_pq + aiq * r_qq;
  }
  for (Index j = 0; j < n; ++j) {  // a <- R^H a
    const Complex apj = a(p, j);
    const Complex aqj = a(q, j);
    a(p, j) = std::conj(r_pp) * apj + std::conj(r_qp) * aqj;
    a(q, j) = std::conj(r_pq) * apj + std::conj(r_qq) * aqj;
  }
  for (Index i = 0; i < n; ++i) {  // v <- v R
    const Complex vip = v(i, p);
    const Complex viq = v(i, q);
    v(i, p) = vip * r_pp + viq * r_qp;
    v(i, q) = vip * r_pq + viq * r_qq;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

}  // namespace detail

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Eigenvalues come back strictly descending; ties keep the order in which
/// the sweeps left them on the diagonal, so equal inputs give equal outputs.
inline Eigensystem hermitian_eigensystem(const ComplexMatrix& m, const Tolerances& tol = {}) {
  if (m.rows() != m.cols() || m.rows() == 0) throw Error(ErrorKind::BadDims, "eigensystem needs a square matrix");
  if (!all_finite(m) || !is_hermitian(m, tol.herm)) throw Error(ErrorKind::NotHermitian, "eigensystem input");

  const Index n = m.rows();
  ComplexMatrix a = 0.5 * (m + m.adjoint());
  ComplexMatrix v = ComplexMatrix::Identity(n, n);
  const double scale = a.norm();
  const double target = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;

  int sweep = 0;
  while (detail::off_diagonal_norm(a) > target) {
    if (sweep++ >= tol.max_sweeps) throw Error(ErrorKind::NoConvergence, "Jacobi sweep cap exceeded");
    for (Index p = 0; p + 1 < n; ++p)
      for (Index q = p + 1; q < n; ++q) detail::jacobi_rotate(a, v, p, q);
  }

  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index i, Index j) { return a(i, i).real() > a(j, j).real(); });

  Eigensystem out{RealVector(n), ComplexMatrix(n, n)};
  for (Index c = 0; c < n; ++c) {
    const Index src = order[static_cast<std::size_t>(c)];
    out.values(c) = a(src, src).real();
    out.vectors.col(c) = v.col(src);
  }
  return out;
}

inline Eigensystem hermitian_eigensystem(const HermitianMatrix& m, const Tolerances& tol = {}) {
  return hermitian_eigensystem(m.matrix(), tol);
}

}  // namespace qgeo
