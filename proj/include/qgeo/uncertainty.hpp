#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "qgeo/bundle.hpp"
#include "qgeo/exponential.hpp"

namespace qgeo {

struct Moments {
  double exp;    // Tr(A rho)
  double delta;  // sqrt(Tr(A^2 rho) - Tr(A rho)^2), clamped at zero
};

namespace detail {

inline void require_dims(const Observable& a, Index n, std::string_view what) {
  if (a.dim() != n) throw Error(ErrorKind::BadDims, std::string(what) + " dimension does not match the state");
}

inline Moments moments(const ComplexMatrix& a, const ComplexMatrix& rho) {
  const double e = real_trace(a * rho);
  const double second = real_trace(a * a * rho);
  return {e, std::sqrt(std::max(0.0, second - e * e))};
}

// Tr((A,B) rho) - Tr(A rho) Tr(B rho) and Tr([A,B] rho), with the symmetric
// product (AB + BA)/2 and the antisymmetric product (AB - BA)/2i.
struct Correlations {
  double covariance;
  double commutator;
};

inline Correlations correlations(const ComplexMatrix& a, const ComplexMatrix& b, const ComplexMatrix& rho) {
  const ComplexMatrix ab = a * b;
  const ComplexMatrix ba = b * a;
  const double sym = real_trace(0.5 * (ab + ba) * rho);
  const double anti = real_trace((ab - ba) * rho / (2.0 * kI));
  return {sym - real_trace(a * rho) * real_trace(b * rho), anti};
}

}  // namespace detail

inline Moments moments(const Observable& a, const DensityState& state) {
  detail::require_dims(a, state.dim(), "observable");
  return detail::moments(a.matrix(), state.rho());
}

/// Robertson-Schroedinger lower bound on dA dB.
inline double rs_bound(const Observable& a, const Observable& b, const DensityState& state) {
  detail::require_dims(a, state.dim(), "observable A");
  detail::require_dims(b, state.dim(), "observable B");
  const auto c = detail::correlations(a.matrix(), b.matrix(), state.rho());
  return std::hypot(c.covariance, c.commutator);
}

/// (hbar/2) sqrt({A,B}_g^2 + {A,B}_w^2).
inline double geometric_bound(const Observable& a, const Observable& b, const PurificationFrame& frame,
                              const GeometryContext& ctx) {
  const Brackets br = brackets(a, b, frame, ctx);
  return 0.5 * ctx.hbar() * std::hypot(br.g, br.w);
}

namespace detail {
inline double combined_from_terms(double hbar, double g, double w, double cross_perp) {
  const double difference = 2.0 * g * cross_perp + cross_perp * cross_perp;
  return 0.5 * hbar * std::sqrt(g * g + w * w + std::max(0.0, difference));
}
}  // namespace detail

/// Geometric bound with the nonnegative part of the difference term added;
/// equals max(geometric, Robertson-Schroedinger).
inline double combined_bound(const Observable& a, const Observable& b, const PurificationFrame& frame,
                             const GeometryContext& ctx) {
  const Brackets br = brackets(a, b, frame, ctx);
  const double cross = inertia_inner(xi_field(a, frame, ctx).xi_perp, xi_field(b, frame, ctx).xi_perp, ctx);
  return detail::combined_from_terms(ctx.hbar(), br.g, br.w, cross);
}

enum class Winner { geometric, robertson_schrodinger, tie };

constexpr std::string_view to_string(Winner w) {
  switch (w) {
    case Winner::geometric: return "geometric";
    case Winner::robertson_schrodinger: return "robertson_schrodinger";
    case Winner::tie: return "tie";
  }
  return "tie";
}

struct BoundReport {
  double hbar = 1.0;
  double expA = 0.0, expB = 0.0;
  double dA = 0.0, dB = 0.0;
  double rs_bound = 0.0, geo_bound = 0.0, combined_bound = 0.0;
  double g_bracket = 0.0, w_bracket = 0.0;
  double gAA = 0.0, gBB = 0.0;
  double xiAperp_xiBperp = 0.0, xiAperp_sq = 0.0, xiBperp_sq = 0.0;
  double covariance = 0.0, commutator = 0.0;
  double variance_product_residual = 0.0, correlation_square_residual = 0.0;
  double scale = 1.0;
  Winner winner = Winner::tie;

  double product() const { return dA * dB; }
  /// 2 {A,B}_g xiA_perp . xiB_perp + (xiA_perp . xiB_perp)^2
  double difference_term() const { return 2.0 * g_bracket * xiAperp_xiBperp + xiAperp_xiBperp * xiAperp_xiBperp; }
  double recompute_combined() const { return detail::combined_from_terms(hbar, g_bracket, w_bracket, xiAperp_xiBperp); }
};

/// Every term of both bounds at one frame, with the two product expansions
/// checked:
///   dA^2 dB^2 = (hbar^2/4)(gAA gBB + gAA |xiB_perp|^2 + gBB |xiA_perp|^2 + |xiA_perp|^2 |xiB_perp|^2)
///   cov^2 + comm^2 = (hbar^2/4)(g^2 + w^2 + difference term)
/// Throws IdentityViolation when either residual exceeds tol.identity * scale.
inline BoundReport decomposition(const Observable& a, const Observable& b, const PurificationFrame& frame,
                                 const GeometryContext& ctx) {
  const double hbar = ctx.hbar();
  const ComplexMatrix rho = frame.psi() * frame.psi().adjoint();
  detail::require_dims(a, frame.dim(), "observable A");
  detail::require_dims(b, frame.dim(), "observable B");

  BoundReport r;
  r.hbar = hbar;
  const Moments ma = detail::moments(a.matrix(), rho);
  const Moments mb = detail::moments(b.matrix(), rho);
  r.expA = ma.exp;
  r.expB = mb.exp;
  r.dA = ma.delta;
  r.dB = mb.delta;
  const auto corr = detail::correlations(a.matrix(), b.matrix(), rho);
  r.covariance = corr.covariance;
  r.commutator = corr.commutator;
  r.rs_bound = std::hypot(corr.covariance, corr.commutator);

  const Brackets ab = brackets(a, b, frame, ctx);
  r.g_bracket = ab.g;
  r.w_bracket = ab.w;
  r.gAA = brackets(a, a, frame, ctx).g;
  r.gBB = brackets(b, b, frame, ctx).g;
  const XiField xa = xi_field(a, frame, ctx);
  const XiField xb = xi_field(b, frame, ctx);
  r.xiAperp_xiBperp = inertia_inner(xa.xi_perp, xb.xi_perp, ctx);
  r.xiAperp_sq = inertia_inner(xa.xi_perp, xa.xi_perp, ctx);
  r.xiBperp_sq = inertia_inner(xb.xi_perp, xb.xi_perp, ctx);

  r.geo_bound = 0.5 * hbar * std::hypot(r.g_bracket, r.w_bracket);
  r.combined_bound = r.recompute_combined();
  r.scale = std::max(1.0, r.product());

  const double q = 0.25 * hbar * hbar;
  const double variance_product_rhs =
      q * (r.gAA * r.gBB + r.gAA * r.xiBperp_sq + r.gBB * r.xiAperp_sq + r.xiAperp_sq * r.xiBperp_sq);
  const double vA = std::max(0.0, real_trace(a.matrix() * a.matrix() * rho) - r.expA * r.expA);
  const double vB = std::max(0.0, real_trace(b.matrix() * b.matrix() * rho) - r.expB * r.expB);
  r.variance_product_residual = std::abs(vA * vB - variance_product_rhs);
  const double correlation_square_rhs = q * (r.g_bracket * r.g_bracket + r.w_bracket * r.w_bracket + r.difference_term());
  r.correlation_square_residual = std::abs(r.covariance * r.covariance + r.commutator * r.commutator - correlation_square_rhs);

  const double limit = ctx.tol().identity * r.scale;
  if (r.variance_product_residual > limit || r.correlation_square_residual > limit) {
    throw Error(ErrorKind::IdentityViolation, "product expansion residuals " + std::to_string(r.variance_product_residual) + ", " +
                                                  std::to_string(r.correlation_square_residual));
  }

  const double band = ctx.tol().tie * r.scale;
  if (r.geo_bound > r.rs_bound + band) {
    r.winner = Winner::geometric;
  } else if (r.rs_bound > r.geo_bound + band) {
    r.winner = Winner::robertson_schrodinger;
  } else {
    r.winner = Winner::tie;
  }
  return r;
}

enum class Alignment { parallel, perpendicular, generic };

constexpr std::string_view to_string(Alignment a) {
  switch (a) {
    case Alignment::parallel: return "parallel";
    case Alignment::perpendicular: return "perpendicular";
    case Alignment::generic: return "generic";
  }
  return "generic";
}

/// Parallel: the lift is horizontal. Perpendicular: the lift is vertical.
/// A vanishing lift counts as parallel.
inline Alignment classify(const Observable& a, const PurificationFrame& frame, const GeometryContext& ctx) {
  const AmbientTangent lift = hamiltonian_lift(a, frame, ctx);
  const double norm = lift.X().norm();
  const TangentSplit s = split(lift, ctx);
  const double limit = ctx.tol().classify * norm;
  if (s.vert.X().norm() <= limit) return Alignment::parallel;
  if (s.hor.X().norm() <= limit) return Alignment::perpendicular;
  return Alignment::generic;
}

struct ProbeTrace {
  std::vector<double> expectation;    // Tr(B rho_j)
  std::vector<double> flow_residual;  // |d/dt Tr(B rho_t) - {B,H}_w(rho_t)|
  double max_residual = 0.0;
  double scale = 1.0;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<DensityState> states;
  std::map<std::string, ProbeTrace> probes;
  double max_drift = 0.0;
  bool flow_ok = true;
};

/// Von Neumann evolution rho_j = U_j rho U_j^H, U_j = exp(-i H t_j / hbar),
/// t_j = j t / steps for j = 0..steps. Each rho_j must keep the spectrum of
/// rho (SpectrumDrift otherwise). For every probe B the time derivative of
/// Tr(B rho_t), taken by central differences with step 1e-5, is compared with
/// the Poisson bracket {B, H}_w at a frame transported along the flow.
inline Trajectory evolve(const Observable& h, const DensityState& state, double t, int steps,
                         const std::map<std::string, Observable>& probes, const GeometryContext& ctx) {
  if (steps < 1) throw Error(ErrorKind::ConfigError, "evolve needs steps >= 1");
  detail::require_dims(h, state.dim(), "hamiltonian");
  for (const auto& [name, b] : probes) detail::require_dims(b, state.dim(), "probe " + name);

  const Tolerances& tol = ctx.tol();
  const ComplexMatrix generator = -kI * h.matrix() / ctx.hbar();
  const PurificationFrame frame0 = purify(state, tol);
  constexpr double kStep = 1e-5;
  const ComplexMatrix u_plus = unitary_exponential(generator, kStep, tol);
  const ComplexMatrix u_minus = u_plus.adjoint();

  Trajectory out;
  for (const auto& [name, b] : probes) {
    ProbeTrace& p = out.probes[name];
    p.scale = std::max(1.0, b.matrix().norm() * h.matrix().norm());
  }

  for (int j = 0; j <= steps; ++j) {
    const double tj = t * static_cast<double>(j) / static_cast<double>(steps);
    const ComplexMatrix u = unitary_exponential(generator, tj, tol);
    ComplexMatrix rho = u * state.rho() * u.adjoint();
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double drift = spectrum_deviation(rho, state.sigma(), tol);
    out.max_drift = std::max(out.max_drift, drift);
    if (drift > tol.spec) {
      throw Error(ErrorKind::SpectrumDrift, "step " + std::to_string(j) + " drifted by " + std::to_string(drift));
    }

    if (!probes.empty()) {
      const PurificationFrame frame(u * frame0.psi(), state.sigma(), tol);
      const ComplexMatrix rho_plus = u_plus * rho * u_plus.adjoint();
      const ComplexMatrix rho_minus = u_minus * rho * u_minus.adjoint();
      for (const auto& [name, b] : probes) {
        ProbeTrace& p = out.probes[name];
        const double fd = (real_trace(b.matrix() * rho_plus) - real_trace(b.matrix() * rho_minus)) / (2.0 * kStep);
        const double bracket = brackets(b, h, frame, ctx).w;
        const double residual = std::abs(fd - bracket);
        p.expectation.push_back(real_trace(b.matrix() * rho));
        p.flow_residual.push_back(residual);
        p.max_residual = std::max(p.max_residual, residual);
        if (residual > tol.flow * p.scale) out.flow_ok = false;
      }
    }
    out.times.push_back(tj);
    out.states.emplace_back(std::move(rho), state.sigma(), tol);
  }
  return out;
}

}  // namespace qgeo
