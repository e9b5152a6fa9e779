#pragma once

#include <cmath>

#include "qgeo/eigensystem.hpp"

namespace qgeo {

/// exp(t X) for anti-Hermitian X, through the eigensystem of the Hermitian
/// matrix iX: exp(tX) = V diag(exp(-i t lambda)) V^H.
inline ComplexMatrix unitary_exponential(const ComplexMatrix& x, double t, const Tolerances& tol = {}) {
  if (x.rows() != x.cols() || x.rows() == 0) throw Error(ErrorKind::BadDims, "exponential needs a square matrix");
  if (!all_finite(x) || !is_anti_hermitian(x, tol.herm)) throw Error(ErrorKind::NotAntiHermitian, "exponential input");

  const ComplexMatrix h = kI * x;
  const Eigensystem es = hermitian_eigensystem(h, tol);
  ComplexMatrix scaled = es.vectors;
  for (Index c = 0; c < scaled.cols(); ++c) scaled.col(c) *= std::exp(-kI * (t * es.values(c)));
  return scaled * es.vectors.adjoint();
}

}  // namespace qgeo
