#pragma once

#include <complex>
#include <string>

#include <Eigen/Dense>

#include "qgeo/errors.hpp"
#include "qgeo/tolerances.hpp"

namespace qgeo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr Complex kI{0.0, 1.0};

inline double frobenius(const ComplexMatrix& m) { return m.norm(); }

inline bool all_finite(const ComplexMatrix& m) {
  for (Index i = 0; i < m.size(); ++i) {
    const Complex z = m.data()[i];
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  }
  return true;
}

/// |M - M^H|_F; zero for Hermitian input.
inline double hermitian_residual(const ComplexMatrix& m) { return (m - m.adjoint()).norm(); }

/// |M + M^H|_F; zero for anti-Hermitian input.
inline double anti_hermitian_residual(const ComplexMatrix& m) { return (m + m.adjoint()).norm(); }

inline bool is_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && hermitian_residual(m) <= tol * m.norm();
}

inline bool is_anti_hermitian(const ComplexMatrix& m, double tol) {
  return m.rows() == m.cols() && anti_hermitian_residual(m) <= tol * m.norm();
}

/// Square, finite, Hermitian within a relative tolerance. Holds observables
/// and density matrices; the entries are stored as given.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(ComplexMatrix m, double tol_herm = Tolerances{}.herm,
                           const std::string& label = "matrix")
      : m_(std::move(m)) {
    if (m_.rows() != m_.cols() || m_.rows() == 0) {
      throw Error(ErrorKind::BadDims, label + " must be square and non-empty");
    }
    if (!all_finite(m_)) throw Error(ErrorKind::NotHermitian, label + " has non-finite entries");
    if (!is_hermitian(m_, tol_herm)) throw Error(ErrorKind::NotHermitian, label);
  }

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

 private:
  ComplexMatrix m_;
};

using Observable = HermitianMatrix;

inline double real_trace(const ComplexMatrix& m) { return m.trace().real(); }

}  // namespace qgeo
