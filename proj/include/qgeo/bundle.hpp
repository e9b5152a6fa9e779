#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "qgeo/state_space.hpp"

namespace qgeo {

/// Planck constant and tolerances shared by every geometric evaluation.
class GeometryContext {
 public:
  explicit GeometryContext(double hbar = 1.0, Tolerances tol = {}) : hbar_(hbar), tol_(tol) {
    if (!(hbar_ > 0.0) || !std::isfinite(hbar_)) throw Error(ErrorKind::ConfigError, "hbar must be positive");
  }

  double hbar() const noexcept { return hbar_; }
  const Tolerances& tol() const noexcept { return tol_; }

 private:
  double hbar_;
  Tolerances tol_;
};

/// Residual of the tangency condition X^H psi + psi^H X = 0.
inline double tangency_residual(const ComplexMatrix& psi, const ComplexMatrix& x) {
  const ComplexMatrix t = x.adjoint() * psi;
  return (t + t.adjoint()).norm();
}

/// A tangent vector to the frame manifold at `basepoint`.
class AmbientTangent {
 public:
  AmbientTangent(ComplexMatrix x, PurificationFrame basepoint, const Tolerances& tol = {})
      : x_(std::move(x)), base_(std::move(basepoint)) {
    if (x_.rows() != base_.psi().rows() || x_.cols() != base_.psi().cols()) {
      throw Error(ErrorKind::BadDims, "tangent must have the shape of the frame");
    }
    const double scale = std::max(1.0, x_.norm() * base_.psi().norm());
    const double residual = tangency_residual(base_.psi(), x_);
    if (residual > tol.tangent * scale) throw Error(ErrorKind::NotTangent, "tangency residual " + std::to_string(residual));
  }

  const ComplexMatrix& X() const noexcept { return x_; }
  const PurificationFrame& basepoint() const noexcept { return base_; }

 private:
  ComplexMatrix x_;
  PurificationFrame base_;
};

/// G(X, Y) = hbar Tr(X^H Y + Y^H X) on the full operator space.
inline double hs_metric(const ComplexMatrix& x, const ComplexMatrix& y, double hbar) {
  return hbar * (x.adjoint() * y + y.adjoint() * x).trace().real();
}

/// Omega(X, Y) = -i hbar Tr(X^H Y - Y^H X) on the full operator space.
inline double hs_symplectic(const ComplexMatrix& x, const ComplexMatrix& y, double hbar) {
  return (-kI * hbar * (x.adjoint() * y - y.adjoint() * x).trace()).real();
}

struct AmbientForms {
  double g;
  double w;
};

namespace detail {
inline void require_same_base(const AmbientTangent& x, const AmbientTangent& y) {
  if (&x.basepoint() == &y.basepoint()) return;
  if (x.basepoint().psi() != y.basepoint().psi()) throw Error(ErrorKind::BasepointMismatch, "tangents at different frames");
}
}  // namespace detail

inline AmbientForms ambient_forms(const AmbientTangent& x, const AmbientTangent& y, const GeometryContext& ctx) {
  detail::require_same_base(x, y);
  return {hs_metric(x.X(), y.X(), ctx.hbar()), hs_symplectic(x.X(), y.X(), ctx.hbar())};
}

/// Bi-invariant metric on the gauge algebra: xi . eta = hbar Tr((xi^H eta + eta^H xi) P).
inline double inertia_inner(const GaugeElement& xi, const GaugeElement& eta, const GeometryContext& ctx) {
  if (!(xi.sigma() == eta.sigma())) throw Error(ErrorKind::SpectrumMismatch, "gauge elements of different spectra");
  const RealVector p = xi.sigma().expanded();
  const ComplexMatrix m = xi.xi().adjoint() * eta.xi() + eta.xi().adjoint() * xi.xi();
  return ctx.hbar() * (m.diagonal().real().cwiseProduct(p)).sum();
}

/// The unit vector 1 / (i sqrt(2 hbar)) of the gauge algebra.
inline GaugeElement chi(const Spectrum& sigma, const GeometryContext& ctx) {
  const Index k = sigma.rank();
  return GaugeElement(ComplexMatrix::Identity(k, k) / (kI * std::sqrt(2.0 * ctx.hbar())), sigma, ctx.tol());
}

/// J(psi)(xi) = i hbar Tr(psi^H psi xi) for any k x k anti-Hermitian xi and
/// any psi of matching width.
inline double momentum_map(const ComplexMatrix& psi, const ComplexMatrix& xi, const GeometryContext& ctx) {
  if (xi.rows() != psi.cols() || xi.cols() != psi.cols()) throw Error(ErrorKind::BadDims, "momentum_map: xi must be k x k");
  if (anti_hermitian_residual(xi) > ctx.tol().herm * std::max(1.0, xi.norm())) {
    throw Error(ErrorKind::NotAntiHermitian, "momentum_map argument");
  }
  return (kI * ctx.hbar() * (psi.adjoint() * psi * xi).trace()).real();
}

inline double momentum_map(const PurificationFrame& frame, const ComplexMatrix& xi, const GeometryContext& ctx) {
  return momentum_map(frame.psi(), xi, ctx);
}

/// Mechanical connection A_psi(X) = sum_j Pi_j psi^H X Pi_j P^{-1}.
inline GaugeElement connection(const PurificationFrame& frame, const ComplexMatrix& x, const GeometryContext& ctx) {
  const Spectrum& sigma = frame.sigma();
  const ComplexMatrix& psi = frame.psi();
  if (x.rows() != psi.rows() || x.cols() != psi.cols()) throw Error(ErrorKind::BadDims, "connection: shape mismatch");
  const double scale = std::max(1.0, x.norm() * psi.norm());
  if (tangency_residual(psi, x) > ctx.tol().tangent * scale) throw Error(ErrorKind::NotTangent, "connection argument");

  ComplexMatrix block = sigma.block_diagonal_part(psi.adjoint() * x);
  // Tangency makes the blocks anti-Hermitian up to round-off; drop the residue.
  block = 0.5 * (block - block.adjoint()).eval();
  return GaugeElement(block * sigma.P_inverse(), sigma, ctx.tol());
}

inline GaugeElement connection(const AmbientTangent& x, const GeometryContext& ctx) {
  return connection(x.basepoint(), x.X(), ctx);
}

struct TangentSplit {
  AmbientTangent hor;
  AmbientTangent vert;
};

/// Orthogonal decomposition into horizontal and vertical parts; vert = psi A_psi(X).
inline TangentSplit split(const AmbientTangent& x, const GeometryContext& ctx) {
  const GaugeElement a = connection(x, ctx);
  ComplexMatrix vert = x.basepoint().psi() * a.xi();
  ComplexMatrix hor = x.X() - vert;
  return {AmbientTangent(std::move(hor), x.basepoint(), ctx.tol()), AmbientTangent(std::move(vert), x.basepoint(), ctx.tol())};
}

/// X_A(psi) = A psi / (i hbar).
inline AmbientTangent hamiltonian_lift(const Observable& a, const PurificationFrame& frame, const GeometryContext& ctx) {
  if (a.dim() != frame.dim()) throw Error(ErrorKind::BadDims, "observable dimension does not match frame");
  ComplexMatrix x = a.matrix() * frame.psi() / (kI * ctx.hbar());
  return AmbientTangent(std::move(x), frame, ctx.tol());
}

/// Gauge-algebra value of an observable at a frame, and its part orthogonal
/// to chi.
///
/// Under psi -> psi U the field transforms as U^H xi U, so only contractions
/// that are invariant under conjugation (dot products, chi projections) are
/// properties of the density matrix.
struct XiField {
  GaugeElement xi;
  GaugeElement xi_perp;
};

inline XiField xi_field(const Observable& a, const PurificationFrame& frame, const GeometryContext& ctx) {
  GaugeElement xi = connection(hamiltonian_lift(a, frame, ctx), ctx);
  const GaugeElement unit = chi(frame.sigma(), ctx);
  const double along = inertia_inner(unit, xi, ctx);
  GaugeElement perp(xi.xi() - along * unit.xi(), frame.sigma(), ctx.tol());
  return {std::move(xi), std::move(perp)};
}

struct Brackets {
  double g;  // Riemann bracket, from horizontal parts
  double w;  // Poisson bracket, from full lifts
};

inline Brackets brackets(const Observable& a, const Observable& b, const PurificationFrame& frame, const GeometryContext& ctx) {
  const AmbientTangent lift_a = hamiltonian_lift(a, frame, ctx);
  const AmbientTangent lift_b = hamiltonian_lift(b, frame, ctx);
  const TangentSplit sa = split(lift_a, ctx);
  const TangentSplit sb = split(lift_b, ctx);
  return {hs_metric(sa.hor.X(), sb.hor.X(), ctx.hbar()), hs_symplectic(lift_a.X(), lift_b.X(), ctx.hbar())};
}

/// d pi(X) = X psi^H + psi X^H, a traceless Hermitian tangent at rho.
inline HermitianMatrix pushforward(const AmbientTangent& x, const GeometryContext& ctx) {
  const ComplexMatrix& psi = x.basepoint().psi();
  ComplexMatrix d = x.X() * psi.adjoint() + psi * x.X().adjoint();
  return HermitianMatrix(std::move(d), ctx.tol().herm, "pushforward");
}

struct SymplecticRank {
  Index rank;
  Index orbit_dim;
};

/// Rank of the Poisson-bracket matrix over the horizontal lifts of a basis of
/// Hermitian matrices, against the orbit dimension n^2 - (n-k)^2 - sum m_j^2.
/// Full rank means the reduced form is nondegenerate at this point.
inline SymplecticRank symplectic_rank_diagnostic(const PurificationFrame& frame, const GeometryContext& ctx) {
  const Index n = frame.dim();
  std::vector<ComplexMatrix> hor;
  hor.reserve(static_cast<std::size_t>(n * n));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      for (int part = 0; part < (i == j ? 1 : 2); ++part) {
        ComplexMatrix e = ComplexMatrix::Zero(n, n);
        const Complex v = part == 0 ? Complex(1.0) : kI;
        e(i, j) = v;
        e(j, i) = std::conj(v);
        const TangentSplit s = split(hamiltonian_lift(Observable(e), frame, ctx), ctx);
        hor.push_back(s.hor.X());
      }
    }
  }
  const Index m = static_cast<Index>(hor.size());
  ComplexMatrix omega(m, m);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < m; ++b) omega(a, b) = hs_symplectic(hor[a], hor[b], ctx.hbar());
  const Eigensystem es = hermitian_eigensystem(ComplexMatrix(kI * omega), ctx.tol());
  const double cutoff = 1e-9 * std::max(1.0, es.values.cwiseAbs().maxCoeff());
  Index rank = 0;
  for (Index c = 0; c < m; ++c)
    if (std::abs(es.values(c)) > cutoff) ++rank;

  Index stabilizer = (n - frame.rank()) * (n - frame.rank());
  for (int mult : frame.sigma().mults()) stabilizer += static_cast<Index>(mult) * mult;
  return {rank, n * n - stabilizer};
}

}  // namespace qgeo
