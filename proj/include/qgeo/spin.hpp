#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "qgeo/uncertainty.hpp"

namespace qgeo {

/// Spin quantum number stored as 2s so half-integers are exact.
class Spin {
 public:
  static Spin from_twice(int two_s) {
    if (two_s < 0) throw Error(ErrorKind::BadSpin, "2s must be nonnegative");
    return Spin(two_s);
  }

  static Spin from_value(double s) {
    const double twice = 2.0 * s;
    if (!std::isfinite(twice) || twice < 0.0 || std::abs(twice - std::round(twice)) > 1e-12) {
      throw Error(ErrorKind::BadSpin, "spin must be a nonnegative half-integer");
    }
    return Spin(static_cast<int>(std::lround(twice)));
  }

  int twice() const noexcept { return two_s_; }
  double value() const noexcept { return 0.5 * two_s_; }
  Index dim() const noexcept { return two_s_ + 1; }

  /// Basis position of magnetic number m; the basis runs m = s, s-1, ..., -s.
  Index index_of(double m) const { return static_cast<Index>(std::lround(value() - m)); }

  friend bool operator==(Spin, Spin) = default;

 private:
  explicit Spin(int two_s) : two_s_(two_s) {}
  int two_s_;
};

struct SpinSystem {
  Spin s;
  double hbar;
  ComplexMatrix Sx, Sy, Sz, Splus, Sminus;
};

/// Spin-s operators in the |s, m> basis, m descending, scaled by hbar.
inline SpinSystem build_spin(Spin s, double hbar = 1.0) {
  const Index d = s.dim();
  const double sv = s.value();
  SpinSystem out{s, hbar, {}, {}, ComplexMatrix::Zero(d, d), ComplexMatrix::Zero(d, d), {}};
  for (Index i = 0; i < d; ++i) {
    const double m = sv - static_cast<double>(i);
    out.Sz(i, i) = hbar * m;
    if (i > 0) out.Splus(i - 1, i) = hbar * std::sqrt(sv * (sv + 1.0) - m * (m + 1.0));
  }
  out.Sminus = out.Splus.adjoint();
  out.Sx = 0.5 * (out.Splus + out.Sminus);
  out.Sy = (out.Splus - out.Sminus) / (2.0 * kI);
  return out;
}

/// Ensemble rho = sum_j p_j |s, m_j><s, m_j| with distinct m_j and strictly
/// descending p_j.
struct EnsembleSpec {
  Spin s = Spin::from_twice(1);
  std::vector<double> m;
  std::vector<double> p;
};

inline void validate(const EnsembleSpec& spec, const Tolerances& tol = {}) {
  const std::size_t k = spec.m.size();
  if (k == 0 || k != spec.p.size()) throw Error(ErrorKind::BadEnsemble, "m and p must be non-empty and equal in length");
  if (static_cast<Index>(k) > spec.s.dim()) throw Error(ErrorKind::BadEnsemble, "more states than 2s+1");
  double total = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double m = spec.m[j];
    const double shifted = 2.0 * (spec.s.value() - m);
    if (!std::isfinite(m) || std::abs(m) > spec.s.value() || std::abs(shifted - std::round(shifted)) > 1e-12 ||
        std::lround(shifted) % 2 != 0) {
      throw Error(ErrorKind::BadEnsemble, "m = " + std::to_string(m) + " is not a magnetic number of this spin");
    }
    for (std::size_t i = 0; i < j; ++i)
      if (spec.s.index_of(spec.m[i]) == spec.s.index_of(m)) throw Error(ErrorKind::BadEnsemble, "repeated m");
    if (!(spec.p[j] > 0.0)) throw Error(ErrorKind::BadEnsemble, "probabilities must be positive");
    if (j > 0 && !(spec.p[j] < spec.p[j - 1])) {
      throw Error(ErrorKind::BadEnsemble, "probabilities must be strictly descending (nondegenerate)");
    }
    total += spec.p[j];
  }
  if (std::abs(total - 1.0) > tol.normalization) throw Error(ErrorKind::BadEnsemble, "probabilities must sum to 1");
}

struct Ensemble {
  SpinSystem spin;
  DensityState rho;
  PurificationFrame psi;
};

/// rho diagonal with p_j at the position of m_j; psi has sqrt(p_j) at
/// (position of m_j, j).
inline Ensemble build_ensemble(const EnsembleSpec& spec, const GeometryContext& ctx) {
  validate(spec, ctx.tol());
  const Spectrum sigma = Spectrum::nondegenerate(spec.p, ctx.tol());
  const Index d = spec.s.dim();
  const Index k = static_cast<Index>(spec.p.size());
  ComplexMatrix psi = ComplexMatrix::Zero(d, k);
  for (Index j = 0; j < k; ++j) psi(spec.s.index_of(spec.m[j]), j) = std::sqrt(spec.p[j]);
  ComplexMatrix rho = psi * psi.adjoint();
  return {build_spin(spec.s, ctx.hbar()), DensityState(std::move(rho), sigma, ctx.tol()),
          PurificationFrame(std::move(psi), sigma, ctx.tol())};
}

struct SpinForms {
  double sxsy_omega = 0.0;     // {S_x, S_y}_w
  double sxsx_g = 0.0;         // {S_x, S_x}_g
  double xi_sz_perp_sq = 0.0;  // xi_{S_z}^perp . xi_{S_z}^perp
  double sz_exp = 0.0;         // Tr(S_z rho)
  double sxsy_floor = 0.0;      // (hbar/2) |Tr(S_z rho)|
};

/// Closed-form values for an S_z-diagonal ensemble.
inline SpinForms closed_forms(const EnsembleSpec& spec, double hbar) {
  double first = 0.0;
  double second = 0.0;
  for (std::size_t j = 0; j < spec.p.size(); ++j) {
    first += spec.p[j] * spec.m[j];
    second += spec.p[j] * spec.m[j] * spec.m[j];
  }
  const double s = spec.s.value();
  SpinForms f;
  f.sxsy_omega = hbar * first;
  f.sxsx_g = hbar * s * (s + 1.0) - hbar * second;
  f.xi_sz_perp_sq = 2.0 * hbar * second - 2.0 * hbar * first * first;
  f.sz_exp = hbar * first;
  f.sxsy_floor = 0.5 * hbar * std::abs(f.sz_exp);
  return f;
}

/// The same quantities from the generic bundle machinery on dense matrices.
inline SpinForms machine_forms(const Ensemble& e, const GeometryContext& ctx) {
  const Observable sx(e.spin.Sx), sy(e.spin.Sy), sz(e.spin.Sz);
  const XiField xz = xi_field(sz, e.psi, ctx);
  SpinForms f;
  f.sxsy_omega = brackets(sx, sy, e.psi, ctx).w;
  f.sxsx_g = brackets(sx, sx, e.psi, ctx).g;
  f.xi_sz_perp_sq = inertia_inner(xz.xi_perp, xz.xi_perp, ctx);
  f.sz_exp = moments(sz, e.rho).exp;
  f.sxsy_floor = 0.5 * ctx.hbar() * std::abs(f.sz_exp);
  return f;
}

struct AbcdReport {
  EnsembleSpec spec;
  double eps = 0.0;
  double hbar = 1.0;
  SpinForms closed;
  SpinForms machine;
  // 0 < lower < upper is the condition under which the geometric bound wins
  // for (A, B) and the Robertson-Schroedinger bound wins for (C, D).
  double window_lower = 0.0;
  double window_upper = 0.0;
  bool window_holds = false;
  BoundReport ab;
  BoundReport cd;
  double sxsy_product = 0.0;  // dSx dSy
  double sxsy_floor = 0.0;  // (hbar^2/2) |sum p_j m_j|
  bool sxsy_holds = false;
  bool winners_as_predicted = false;
};

/// A = Sx + sqrt(eps) Sz, B = Sx - sqrt(eps) Sz, C = Sx + Sz, D = Sy + Sz.
inline AbcdReport abcd_experiment(const EnsembleSpec& spec, double eps, const GeometryContext& ctx) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw Error(ErrorKind::BadEpsilon, "eps must be positive");
  const Ensemble e = build_ensemble(spec, ctx);
  const double hbar = ctx.hbar();

  AbcdReport r;
  r.spec = spec;
  r.eps = eps;
  r.hbar = hbar;
  r.closed = closed_forms(spec, hbar);
  r.machine = machine_forms(e, ctx);
  r.window_lower = eps * r.closed.xi_sz_perp_sq;
  r.window_upper = r.closed.sxsx_g;
  r.window_holds = 0.0 < r.window_lower && r.window_lower < r.window_upper;

  const double root = std::sqrt(eps);
  const SpinSystem& sp = e.spin;
  const Observable a(sp.Sx + root * sp.Sz), b(sp.Sx - root * sp.Sz), c(sp.Sx + sp.Sz), d(sp.Sy + sp.Sz);
  r.ab = decomposition(a, b, e.psi, ctx);
  r.cd = decomposition(c, d, e.psi, ctx);

  const Moments mx = moments(Observable(sp.Sx), e.rho);
  const Moments my = moments(Observable(sp.Sy), e.rho);
  r.sxsy_product = mx.delta * my.delta;
  r.sxsy_floor = 0.5 * hbar * std::abs(r.closed.sxsy_omega);
  r.sxsy_holds = r.sxsy_product >= r.sxsy_floor - ctx.tol().identity;
  r.winners_as_predicted = r.ab.winner == Winner::geometric && r.cd.winner == Winner::robertson_schrodinger;
  return r;
}

}  // namespace qgeo
