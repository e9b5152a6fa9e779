#pragma once

#include <cstdlib>
#include <string>

namespace qgeo {

/// Every numerical threshold used by the library, in one place.
///
/// Absolute unless noted. `scaled()` multiplies each threshold (but not the
/// sweep cap) by a common factor, which is how the CLI applies QGEO_TOL_SCALE.
struct Tolerances {
  double herm = 1e-12;       // relative: |M - M^H|_F <= herm * |M|_F
  double eig = 1e-10;        // eigensystem reconstruction, relative to max(1, |M|_F)
  double unitary = 1e-10;    // U^H U = I
  double spec = 1e-9;        // eigenvalues vs declared spectrum
  double trace = 1e-12;      // trace(rho) = 1
  double psd = 1e-12;        // min eigenvalue >= -psd
  double normalization = 1e-12;  // sum p_j m_j = 1
  double frame = 1e-10;      // psi^H psi = P
  double gauge = 1e-12;      // anti-Hermitian, commutes with P
  double tangent = 1e-10;    // X^H psi + psi^H X = 0, relative to max(1, |X||psi|)
  double classify = 1e-9;    // parallel / perpendicular ratio
  double tie = 1e-12;        // winner tie band, times max(1, dA dB)
  double identity = 1e-8;    // decomposition identities, times scale^2
  double flow = 1e-5;        // d<B>/dt vs Poisson bracket, times scale
  int max_sweeps = 100;

  Tolerances scaled(double factor) const {
    Tolerances t = *this;
    for (double* v : {&t.herm, &t.eig, &t.unitary, &t.spec, &t.trace, &t.psd, &t.normalization,
                      &t.frame, &t.gauge, &t.tangent, &t.classify, &t.tie, &t.identity, &t.flow}) {
      *v *= factor;
    }
    return t;
  }
};

/// Reads QGEO_TOL_SCALE; returns 1 when unset. Throws std::invalid_argument
/// on a non-positive or unparsable value.
inline double tolerance_scale_from_env() {
  const char* raw = std::getenv("QGEO_TOL_SCALE");
  if (raw == nullptr || *raw == '\0') return 1.0;
  std::size_t used = 0;
  const double v = std::stod(raw, &used);
  if (used != std::string(raw).size() || !(v > 0.0)) {
    throw std::invalid_argument("QGEO_TOL_SCALE must be a positive real");
  }
  return v;
}

}  // namespace qgeo
