#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qgeo/detail/representative.hpp"
#include "qgeo/sampling.hpp"

namespace qgeo::verify {

/// Unscaled thresholds; checks multiply them by Config::tol_scale.
inline constexpr Tolerances kBase{};

struct Config {
  std::uint64_t seed = 42;
  int trials = 1000;
  int dim_max = 8;
  double hbar = 1.0;
  int evolve_steps = 100;
  double tol_scale = 1.0;
  Tolerances tol{};  // passed to the library; already scaled
};

/// Outcome of one property suite. A trial fails when any of its residuals
/// exceeds its limit; `worst_ratio` is the largest residual/limit seen.
struct SuiteResult {
  int pass = 0;
  int fail = 0;
  double worst_residual = 0.0;
  double worst_ratio = 0.0;
  bool gating = true;
  std::string first_failure;

  bool ok() const { return fail == 0; }
};

/// Collects residual checks for one trial.
class TrialCheck {
 public:
  explicit TrialCheck(double limit_scale = 1.0) : limit_scale_(limit_scale) {}

  void check(double residual, double limit, const char* what) {
    limit *= limit_scale_;
    if (!std::isfinite(residual)) residual = HUGE_VAL;
    worst_residual_ = std::max(worst_residual_, residual);
    worst_ratio_ = std::max(worst_ratio_, limit > 0.0 ? residual / limit : (residual > 0.0 ? HUGE_VAL : 0.0));
    if (!(residual <= limit) && ok_) {
      ok_ = false;
      failure_ = what;
    }
  }
  void require(bool cond, const char* what) { check(cond ? 0.0 : 1.0, 0.5, what); }

  bool ok() const { return ok_; }
  double worst_residual() const { return worst_residual_; }
  double worst_ratio() const { return worst_ratio_; }
  const std::string& failure() const { return failure_; }

 private:
  double limit_scale_;
  bool ok_ = true;
  double worst_residual_ = 0.0;
  double worst_ratio_ = 0.0;
  std::string failure_;
};

using TrialFn = std::function<void(int trial, RngState& rng, TrialCheck& check)>;

inline SuiteResult run_suite(const Config& cfg, std::uint64_t salt, int trials, const TrialFn& body) {
  SuiteResult r;
  for (int t = 0; t < trials; ++t) {
    RngState rng = RngState::for_trial(cfg.seed ^ salt, static_cast<std::uint64_t>(t));
    TrialCheck check(cfg.tol_scale);
    try {
      body(t, rng, check);
    } catch (const Error& e) {
      check.require(false, e.what());
      if (r.first_failure.empty()) r.first_failure = "trial " + std::to_string(t) + ": " + e.what();
    }
    r.worst_residual = std::max(r.worst_residual, check.worst_residual());
    r.worst_ratio = std::max(r.worst_ratio, check.worst_ratio());
    if (check.ok()) {
      ++r.pass;
    } else {
      ++r.fail;
      if (r.first_failure.empty()) r.first_failure = "trial " + std::to_string(t) + ": " + check.failure();
    }
  }
  return r;
}

/// hbar alternates between the configured value and 0.32 so that a missing
/// factor of hbar cannot cancel out.
inline double trial_hbar(const Config& cfg, int trial) { return trial % 2 == 0 ? cfg.hbar : 0.32; }

inline double bound_scale(const BoundReport& r) { return std::max(1.0, r.product()); }

inline SuiteResult eigensystem_roundtrip(const Config& cfg) {
  return run_suite(cfg, 0x01, cfg.trials, [&](int, RngState& rng, TrialCheck& c) {
    const ComplexMatrix m = random_hermitian(rng.uniform_int(1, cfg.dim_max), rng);
    const Eigensystem es = hermitian_eigensystem(m, cfg.tol);
    const Index n = m.rows();
    const double scale = std::max(1.0, m.norm());
    c.check((es.vectors * es.values.cast<Complex>().asDiagonal() * es.vectors.adjoint() - m).norm(), 1e-9 * scale,
            "reconstruction");
    c.check((es.vectors.adjoint() * es.vectors - ComplexMatrix::Identity(n, n)).norm(), kBase.eig, "orthonormality");
    for (Index i = 1; i < n; ++i) c.require(es.values(i) <= es.values(i - 1), "descending order");
  });
}

inline SuiteResult sampler_determinism(const Config& cfg) {
  return run_suite(cfg, 0x02, cfg.trials, [&](int t, RngState&, TrialCheck& c) {
    const std::uint64_t seed = cfg.seed + static_cast<std::uint64_t>(t);
    for (SampleKind kind : {SampleKind::hermitian, SampleKind::haar_unitary, SampleKind::isometry}) {
      RngState r1(seed), r2(seed);
      const ComplexMatrix x = sample_random(kind, cfg.dim_max, 2, r1);
      const ComplexMatrix y = sample_random(kind, cfg.dim_max, 2, r2);
      c.require(x == y, "bitwise determinism");
    }
  });
}

inline SuiteResult exponential_group_law(const Config& cfg) {
  return run_suite(cfg, 0x03, cfg.trials, [&](int, RngState& rng, TrialCheck& c) {
    const Index n = rng.uniform_int(1, cfg.dim_max);
    ComplexMatrix x = kI * random_hermitian(n, rng);
    x /= std::max(1.0, x.norm());
    const double s = rng.uniform(-1.0, 1.0);
    const double t = rng.uniform(-1.0, 1.0);
    const ComplexMatrix us = unitary_exponential(x, s, cfg.tol);
    const ComplexMatrix ut = unitary_exponential(x, t, cfg.tol);
    const ComplexMatrix ust = unitary_exponential(x, s + t, cfg.tol);
    c.check((ust - us * ut).norm(), 1e-9, "group law");
    c.check((ust.adjoint() * ust - ComplexMatrix::Identity(n, n)).norm(), kBase.unitary, "unitarity");
  });
}

inline SuiteResult partial_trace_identity(const Config& cfg) {
  return run_suite(cfg, 0x04, cfg.trials, [&](int, RngState& rng, TrialCheck& c) {
    const int n = rng.uniform_int(1, std::min(6, cfg.dim_max));
    const int k = rng.uniform_int(1, std::min(4, n));
    const PurificationFrame f = random_frame(random_spectrum(k, rng), n, rng, cfg.tol);
    c.check((rank_one_partial_trace(f) - f.psi() * f.psi().adjoint()).norm(), kBase.frame, "partial trace");
  });
}

inline SuiteResult fiber_structure(const Config& cfg) {
  return run_suite(cfg, 0x05, cfg.trials, [&](int, RngState& rng, TrialCheck& c) {
    const int n = rng.uniform_int(1, cfg.dim_max);
    const Spectrum sigma = random_spectrum(rng.uniform_int(1, n), rng);
    const PurificationFrame psi = random_frame(sigma, n, rng, cfg.tol);
    const DensityState rho = frame_to_state(psi, cfg.tol);
    const PurificationFrame back = purify(rho, cfg.tol);
    c.check((back.psi() * back.psi().adjoint() - rho.rho()).norm(), kBase.spec, "purify round trip");

    const PurificationFrame phi = gauge_act(psi, random_gauge(sigma, rng), cfg.tol);
    c.check((phi.psi() * phi.psi().adjoint() - rho.rho()).norm(), kBase.spec, "gauge preserves state");
    const ComplexMatrix u = fiber_transport(psi, phi);
    const Index k = sigma.rank();
    const ComplexMatrix p = sigma.P();
    c.check((u.adjoint() * u - ComplexMatrix::Identity(k, k)).norm(), 1e-8, "transport unitary");
    c.check((u * p - p * u).norm(), 1e-8, "transport commutes with P");
    c.check((psi.psi() * u - phi.psi()).norm(), 1e-8, "transport reaches phi");
  });
}

inline SuiteResult connection_contract(const Config& cfg) {
  return run_suite(cfg, 0x06, cfg.trials, [&](int t, RngState& rng, TrialCheck& c) {
    const GeometryContext ctx(trial_hbar(cfg, t), cfg.tol);
    const int n = rng.uniform_int(1, cfg.dim_max);
    const Spectrum sigma = random_spectrum(rng.uniform_int(1, n), rng);
    const PurificationFrame psi = random_frame(sigma, n, rng, cfg.tol);
    const GaugeElement xi = random_gauge_element(sigma, rng);
    const GaugeElement back = connection(psi, psi.psi() * xi.xi(), ctx);
    c.check((back.xi() - xi.xi()).norm(), 1e-10 * std::max(1.0, xi.xi().norm()), "reproducing");

    const AmbientTangent x = hamiltonian_lift(Observable(random_hermitian(n, rng)), psi, ctx);
    const TangentSplit s = split(x, ctx);
    c.check(connection(s.hor, ctx).xi().norm(), 1e-10 * std::max(1.0, x.X().norm()), "annihilating");
    const GaugeElement eta = random_gauge_element(sigma, rng);
    const double scale = std::max(1.0, x.X().norm() * (psi.psi() * eta.xi()).norm());
    c.check(std::abs(hs_metric(s.hor.X(), psi.psi() * eta.xi(), ctx.hbar())), 1e-9 * scale, "orthogonality");
    c.check((s.hor.X() + s.vert.X() - x.X()).norm(), 4.0 * std::numeric_limits<double>::epsilon() * x.X().norm(),
            "sum reproduces X");
    c.check(split(s.hor, ctx).vert.X().norm(), 1e-10 * std::max(1.0, x.X().norm()), "idempotent");
  });
}

inline SuiteResult momentum_map_properties(const Config& cfg) {
  return run_suite(cfg, 0x07, cfg.trials, [&](int t, RngState& rng, TrialCheck& c) {
    const GeometryContext ctx(trial_hbar(cfg, t), cfg.tol);
    const int n = rng.uniform_int(1, cfg.dim_max);
    const int k = rng.uniform_int(1, n);
    const PurificationFrame psi = random_frame(random_spectrum(k, rng), n, rng, cfg.tol);
    const ComplexMatrix xi = kI * random_hermitian(k, rng);
    const ComplexMatrix u = random_unitary(k, rng);
    const double lhs = momentum_map(psi.psi() * u, xi, ctx);
    const double rhs = momentum_map(psi.psi(), ComplexMatrix(u * xi * u.adjoint()), ctx);
    c.check(std::abs(lhs - rhs), 1e-10 * std::max(1.0, ctx.hbar() * xi.norm()), "equivariance");

    const ComplexMatrix x = ginibre(n, k, rng);
    constexpr double h = 1e-5;
    const double fd = (momentum_map(ComplexMatrix(psi.psi() + h * x), xi, ctx) -
                       momentum_map(ComplexMatrix(psi.psi() - h * x), xi, ctx)) / (2.0 * h);
    const double omega = hs_symplectic(psi.psi() * xi, x, ctx.hbar());
    c.check(std::abs(fd - omega), 1e-5 * std::max(1.0, ctx.hbar() * xi.norm() * x.norm()), "differential");
  });
}

inline SuiteResult gauge_invariance(const Config& cfg) {
  return run_suite(cfg, 0x08, cfg.trials, [&](int t, RngState& rng, TrialCheck& c) {
    const Instance in = random_instance({cfg.dim_max, trial_hbar(cfg, t)}, rng, cfg.tol);
    const ComplexMatrix u = random_gauge(in.frame.sigma(), rng);
    const PurificationFrame moved = gauge_act(in.frame, u, cfg.tol);
    const auto s0 = detail::pair_scalars(in.a, in.b, in.frame, in.ctx);
    const auto s1 = detail::pair_scalars(in.a, in.b, moved, in.ctx);
    c.check(detail::max_abs_difference(s0, s1), 1e-9, "scalar invariance");
    const ComplexMatrix xi0 = xi_field(in.a, in.frame, in.ctx).xi.xi();
    const ComplexMatrix xi1 = xi_field(in.a, moved, in.ctx).xi.xi();
    c.check((xi1 - u.adjoint() * xi0 * u).norm(), 1e-9, "xi covariance");
  });
}

inline SuiteResult representative_invariance(const Config& cfg) {
  return run_suite(cfg, 0x09, cfg.trials, [&](int t, RngState& rng, TrialCheck& c) {
    const Instance in = random_instance({cfg.dim_max, trial_hbar(cfg, t)}, rng, cfg.tol);
    const ComplexMatrix u = random_unitary(in.frame.rank(), rng);
    const auto s0 = detail::pair_scalars(in.a, in.b, in.frame, in.ctx);
    const auto s1 = detail::pair_scalars_at_representative(in.a, in.b, in.frame, u, in.ctx);
    c.check(detail::max_abs_difference(s0, s1), 1e-9, "representative invariance");
  });
}

inline SuiteResult identities(const Config& cfg) {
  return run_suite(cfg, 0x0a, cfg.trials, [&](int t, RngState& rng, TrialCheck& c) {
    const Instance in = random_instance({cfg.dim_max, trial_hbar(cfg, t)}, rng, cfg.tol);
    const double hbar = in.ctx.hbar();
    const ComplexMatrix rho = in.frame.psi() * in.frame.psi().adjoint();
    const ComplexMatrix& a = in.a.matrix();
    const ComplexMatrix& b = in.b.matrix();
    const BoundReport r = decomposition(in.a, in.b, in.frame, in.ctx);
    const double scale = bound_scale(r);
    const double lim = kBase.identity * scale;
    const auto s = detail::pair_scalars(in.a, in.b, in.frame, in.ctx);
    const double exp_a = real_trace(a * rho);
    const double exp_b = real_trace(b * rho);
    c.check(std::abs(exp_a - std::sqrt(hbar / 2.0) * s.chi_a), lim, "expectation as chi projection");
    c.check(std::abs(exp_b - std::sqrt(hbar / 2.0) * s.chi_b), lim, "expectation as chi projection");
    const double sym = real_trace(0.5 * (a * b + b * a) * rho);
    c.check(std::abs(sym - 0.5 * hbar * (s.g + s.xi_dot)), lim, "symmetric product");
    c.check(std::abs(real_trace((a * b - b * a) * rho / (2.0 * kI)) - 0.5 * hbar * s.w), lim, "antisymmetric product");
    c.check(std::abs(sym - exp_a * exp_b - 0.5 * hbar * (s.g + s.xi_perp_dot)), lim, "covariance");
    c.check(r.variance_product_residual, lim, "product of variances");
    c.check(r.correlation_square_residual, lim, "covariance-commutator square");
    c.check(std::max(0.0, s.g * s.g + s.w * s.w - r.gAA * r.gBB), 1e-9 * scale * scale / (hbar * hbar),
            "Cauchy-Schwarz");
  });
}

inline SuiteResult bound_dominance(const Config& cfg) {
  return run_suite(cfg, 0x0b, cfg.trials, [&](int t, RngState& rng, TrialCheck& c) {
    const Instance in = random_instance({cfg.dim_max, trial_hbar(cfg, t)}, rng, cfg.tol);
    const BoundReport r = decomposition(in.a, in.b, in.frame, in.ctx);
    const double lim = 1e-9 * bound_scale(r);
    c.check(std::max(0.0, r.geo_bound - r.product()), lim, "geometric dominance");
    c.check(std::max(0.0, r.rs_bound - r.product()), lim, "RS dominance");
    c.check(std::max(0.0, r.combined_bound - r.product()), lim, "combined dominance");
    c.check(std::abs(r.combined_bound - std::max(r.geo_bound, r.rs_bound)), lim, "combined is max");
  });
}

inline SuiteResult pure_state_collapse(const Config& cfg) {
  return run_suite(cfg, 0x0c, cfg.trials, [&](int t, RngState& rng, TrialCheck& c) {
    InstanceOptions opt{cfg.dim_max, trial_hbar(cfg, t)};
    opt.pure = true;
    const Instance in = random_instance(opt, rng, cfg.tol);
    const BoundReport r = decomposition(in.a, in.b, in.frame, in.ctx);
    c.check(std::abs(r.geo_bound - r.rs_bound), 1e-9 * bound_scale(r), "pure collapse");
  });
}

inline SuiteResult parallel_collapse(const Config& cfg) {
  return run_suite(cfg, 0x0d, cfg.trials, [&](int t, RngState& rng, TrialCheck& c) {
    InstanceOptions opt{cfg.dim_max, trial_hbar(cfg, t)};
    opt.parallel_a = true;
    const Instance in = random_instance(opt, rng, cfg.tol);
    c.require(classify(in.a, in.frame, in.ctx) == Alignment::parallel, "projected observable is parallel");
    const BoundReport r = decomposition(in.a, in.b, in.frame, in.ctx);
    c.check(std::abs(r.geo_bound - r.rs_bound), 1e-9 * bound_scale(r), "parallel collapse");
  });
}

inline SuiteResult variance_floor(const Config& cfg) {
  return run_suite(cfg, 0x0e, cfg.trials, [&](int t, RngState& rng, TrialCheck& c) {
    const Instance in = random_instance({cfg.dim_max, trial_hbar(cfg, t)}, rng, cfg.tol);
    const BoundReport r = decomposition(in.a, in.a, in.frame, in.ctx);
    const double var = r.dA * r.dA;
    const double floor = 0.5 * in.ctx.hbar() * r.gAA;
    const double lim = 1e-9 * bound_scale(r);
    c.check(std::max(0.0, floor - var), lim, "variance floor");
    c.check(std::abs(var - floor - 0.5 * in.ctx.hbar() * r.xiAperp_sq), lim, "gap is the perpendicular part");
  });
}

inline SuiteResult spin_closed_forms(const Config& cfg) {
  return run_suite(cfg, 0x0f, cfg.trials, [&](int t, RngState& rng, TrialCheck& c) {
    const GeometryContext ctx(trial_hbar(cfg, t), cfg.tol);
    const EnsembleSpec spec = random_ensemble_spec(7, rng);
    const Ensemble e = build_ensemble(spec, ctx);
    const SpinForms want = closed_forms(spec, ctx.hbar());
    const SpinForms got = machine_forms(e, ctx);
    c.check(std::abs(want.sxsy_omega - got.sxsy_omega), 1e-9, "{Sx,Sy}_w");
    c.check(std::abs(want.sxsx_g - got.sxsx_g), 1e-9, "{Sx,Sx}_g");
    c.check(std::abs(want.xi_sz_perp_sq - got.xi_sz_perp_sq), 1e-9, "xi_Sz_perp^2");
    c.check(std::abs(want.sz_exp - got.sz_exp), 1e-9, "<Sz>");

    const Observable sx(e.spin.Sx), sy(e.spin.Sy), sz(e.spin.Sz);
    c.check(connection(hamiltonian_lift(sx, e.psi, ctx), ctx).xi().norm(), 1e-10, "Sx horizontal");
    c.check(connection(hamiltonian_lift(sy, e.psi, ctx), ctx).xi().norm(), 1e-10, "Sy horizontal");
    const AmbientTangent lz = hamiltonian_lift(sz, e.psi, ctx);
    c.check((lz.X() - e.psi.psi() * xi_field(sz, e.psi, ctx).xi.xi()).norm(), 1e-10, "Sz vertical");
  });
}

inline SuiteResult evolution(const Config& cfg) {
  return run_suite(cfg, 0x10, cfg.trials, [&](int t, RngState& rng, TrialCheck& c) {
    const GeometryContext ctx(trial_hbar(cfg, t), cfg.tol);
    const int n = rng.uniform_int(2, cfg.dim_max);
    const Spectrum sigma = random_spectrum(rng.uniform_int(1, n), rng);
    const PurificationFrame psi = random_frame(sigma, n, rng, cfg.tol);
    const DensityState rho = frame_to_state(psi, cfg.tol);
    const Observable h(random_hermitian(n, rng));
    std::map<std::string, Observable> probes;
    probes.emplace("B", Observable(random_hermitian(n, rng)));
    const Trajectory tr = evolve(h, rho, rng.uniform(0.1, 2.0), cfg.evolve_steps, probes, ctx);
    c.check(tr.max_drift, kBase.spec, "spectrum drift");
    c.check(tr.probes.at("B").max_residual, 1e-4, "flow derivative");
  });
}

inline SuiteResult symplectic_rank(const Config& cfg) {
  SuiteResult r = run_suite(cfg, 0x11, std::min(cfg.trials, 100), [&](int t, RngState& rng, TrialCheck& c) {
    const GeometryContext ctx(trial_hbar(cfg, t), cfg.tol);
    const int n = rng.uniform_int(1, std::min(cfg.dim_max, 5));
    const PurificationFrame psi = random_frame(random_spectrum(rng.uniform_int(1, n), rng), n, rng, cfg.tol);
    const SymplecticRank sr = symplectic_rank_diagnostic(psi, ctx);
    c.require(sr.rank == sr.orbit_dim, "full rank");
  });
  r.gating = false;
  return r;
}

using SuiteFn = SuiteResult (*)(const Config&);

inline const std::vector<std::pair<std::string, SuiteFn>>& suites() {
  static const std::vector<std::pair<std::string, SuiteFn>> all = {
      {"eigensystem_roundtrip", &eigensystem_roundtrip},
      {"sampler_determinism", &sampler_determinism},
      {"exponential_group_law", &exponential_group_law},
      {"partial_trace_identity", &partial_trace_identity},
      {"fiber_structure", &fiber_structure},
      {"connection_contract", &connection_contract},
      {"momentum_map", &momentum_map_properties},
      {"gauge_invariance", &gauge_invariance},
      {"representative_invariance", &representative_invariance},
      {"identities", &identities},
      {"bound_dominance", &bound_dominance},
      {"pure_state_collapse", &pure_state_collapse},
      {"parallel_collapse", &parallel_collapse},
      {"variance_floor", &variance_floor},
      {"spin_closed_forms", &spin_closed_forms},
      {"evolution", &evolution},
      {"symplectic_rank", &symplectic_rank},
  };
  return all;
}

inline nlohmann::json to_json(const SuiteResult& r) {
  nlohmann::json j = {{"pass", r.pass}, {"fail", r.fail}, {"worst_residual", r.worst_residual},
                      {"worst_ratio", r.worst_ratio}, {"gating", r.gating}};
  if (!r.first_failure.empty()) j["first_failure"] = r.first_failure;
  return j;
}

}  // namespace qgeo::verify
