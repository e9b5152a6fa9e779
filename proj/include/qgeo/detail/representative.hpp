#pragma once

#include <vector>

#include "qgeo/uncertainty.hpp"

namespace qgeo::detail {

/// Gauge-invariant scalars for a pair of observables.
struct PairScalars {
  double g = 0.0;
  double w = 0.0;
  double xi_dot = 0.0;       // xi_A . xi_B
  double xi_perp_dot = 0.0;  // xi_A_perp . xi_B_perp
  double chi_a = 0.0;        // chi . xi_A
  double chi_b = 0.0;
  double geo = 0.0;
  double rs = 0.0;
  double combined = 0.0;
};

inline PairScalars pair_scalars(const Observable& a, const Observable& b, const PurificationFrame& frame,
                                const GeometryContext& ctx) {
  const XiField xa = xi_field(a, frame, ctx);
  const XiField xb = xi_field(b, frame, ctx);
  const GaugeElement unit = chi(frame.sigma(), ctx);
  const Brackets br = brackets(a, b, frame, ctx);
  PairScalars s;
  s.g = br.g;
  s.w = br.w;
  s.xi_dot = inertia_inner(xa.xi, xb.xi, ctx);
  s.xi_perp_dot = inertia_inner(xa.xi_perp, xb.xi_perp, ctx);
  s.chi_a = inertia_inner(unit, xa.xi, ctx);
  s.chi_b = inertia_inner(unit, xb.xi, ctx);
  s.geo = 0.5 * ctx.hbar() * std::hypot(s.g, s.w);
  const auto corr = correlations(a.matrix(), b.matrix(), frame.psi() * frame.psi().adjoint());
  s.rs = std::hypot(corr.covariance, corr.commutator);
  s.combined = combined_from_terms(ctx.hbar(), s.g, s.w, s.xi_perp_dot);
  return s;
}

/// The same scalars evaluated on the bundle built over a non-diagonal
/// representative P' = U P U^H, with frame psi' = psi U^H and block
/// projectors U Pi_j U^H. Everything is dense; nothing here relies on P
/// being diagonal.
inline PairScalars pair_scalars_at_representative(const Observable& a, const Observable& b,
                                                  const PurificationFrame& frame, const ComplexMatrix& u,
                                                  const GeometryContext& ctx) {
  const Spectrum& sigma = frame.sigma();
  const double hbar = ctx.hbar();
  const ComplexMatrix p = u * sigma.P() * u.adjoint();
  const ComplexMatrix p_inv = p.inverse();
  std::vector<ComplexMatrix> projectors;
  for (std::size_t j = 0; j < sigma.block_count(); ++j) projectors.push_back(u * sigma.projector(j) * u.adjoint());
  const ComplexMatrix psi = frame.psi() * u.adjoint();
  const Index k = sigma.rank();

  auto xi_of = [&](const ComplexMatrix& x) {
    ComplexMatrix out = ComplexMatrix::Zero(k, k);
    for (const ComplexMatrix& pi : projectors) out += pi * psi.adjoint() * x * pi;
    return ComplexMatrix(out * p_inv);
  };
  auto dot = [&](const ComplexMatrix& x, const ComplexMatrix& y) {
    return hbar * ((x.adjoint() * y + y.adjoint() * x) * p).trace().real();
  };

  const ComplexMatrix lift_a = a.matrix() * psi / (kI * hbar);
  const ComplexMatrix lift_b = b.matrix() * psi / (kI * hbar);
  const ComplexMatrix xi_a = xi_of(lift_a);
  const ComplexMatrix xi_b = xi_of(lift_b);
  const ComplexMatrix unit = ComplexMatrix::Identity(k, k) / (kI * std::sqrt(2.0 * hbar));
  const ComplexMatrix perp_a = xi_a - dot(unit, xi_a) * unit;
  const ComplexMatrix perp_b = xi_b - dot(unit, xi_b) * unit;

  PairScalars s;
  s.g = hs_metric(lift_a - psi * xi_a, lift_b - psi * xi_b, hbar);
  s.w = hs_symplectic(lift_a, lift_b, hbar);
  s.xi_dot = dot(xi_a, xi_b);
  s.xi_perp_dot = dot(perp_a, perp_b);
  s.chi_a = dot(unit, xi_a);
  s.chi_b = dot(unit, xi_b);
  s.geo = 0.5 * hbar * std::hypot(s.g, s.w);
  const auto corr = correlations(a.matrix(), b.matrix(), psi * psi.adjoint());
  s.rs = std::hypot(corr.covariance, corr.commutator);
  s.combined = combined_from_terms(hbar, s.g, s.w, s.xi_perp_dot);
  return s;
}

inline double max_abs_difference(const PairScalars& x, const PairScalars& y) {
  const double d[] = {x.g - y.g,   x.w - y.w,     x.xi_dot - y.xi_dot, x.xi_perp_dot - y.xi_perp_dot,
                      x.chi_a - y.chi_a, x.chi_b - y.chi_b, x.geo - y.geo, x.rs - y.rs, x.combined - y.combined};
  double m = 0.0;
  for (double v : d) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace qgeo::detail
