#include <cmath>

#include <gtest/gtest.h>

#include "qgeo/bundle.hpp"
#include "qgeo/sampling.hpp"
#include "qgeo/spin.hpp"
#include "oracle.hpp"

namespace qgeo {
namespace {

template <typename F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::ConfigError;
}

// Tangents to the unitary orbit are i H psi; the psi xi term adds a vertical part.
ComplexMatrix random_tangent(const PurificationFrame& f, RngState& rng) {
  const ComplexMatrix& psi = f.psi();
  const ComplexMatrix xi = random_gauge_element(f.sigma(), rng).xi();
  return kI * random_hermitian(psi.rows(), rng) * psi + psi * xi;
}

ComplexMatrix random_gauge_algebra(const Spectrum& s, RngState& rng) {
  return random_gauge_element(s, rng).xi();
}

struct Fixture {
  GeometryContext ctx;
  PurificationFrame frame;
};

Fixture random_fixture(RngState& rng, double hbar = 1.0) {
  const int n = rng.uniform_int(1, 6);
  const Spectrum s = random_spectrum(rng.uniform_int(1, n), rng);
  return {GeometryContext(hbar), random_frame(s, n, rng)};
}

TEST(AmbientForms, SelfPairing) {
  RngState rng(1);
  for (double hbar : {1.0, 0.32}) {
    const Fixture fx = random_fixture(rng, hbar);
    const AmbientTangent x(random_tangent(fx.frame, rng), fx.frame);
    const AmbientForms f = ambient_forms(x, x, fx.ctx);
    EXPECT_NEAR(f.g, 2.0 * hbar * x.X().squaredNorm(), 1e-12 * std::max(1.0, f.g));
    EXPECT_NEAR(f.w, 0.0, 1e-12);
  }
}

TEST(AmbientForms, CompatiblePair) {
  RngState rng(2);
  const ComplexMatrix x = ginibre(4, 2, rng);
  const ComplexMatrix y = kI * x;
  for (double hbar : {1.0, 0.32}) {
    EXPECT_NEAR(hs_metric(x, y, hbar), 0.0, 1e-12);
    EXPECT_NEAR(hs_symplectic(x, y, hbar), 2.0 * hbar * x.squaredNorm(), 1e-12 * x.squaredNorm());
  }
}

TEST(AmbientForms, CauchySchwarz) {
  RngState rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const Fixture fx = random_fixture(rng);
    const AmbientTangent x(random_tangent(fx.frame, rng), fx.frame);
    const AmbientTangent y(random_tangent(fx.frame, rng), fx.frame);
    const AmbientForms xy = ambient_forms(x, y, fx.ctx);
    const double gxx = ambient_forms(x, x, fx.ctx).g;
    const double gyy = ambient_forms(y, y, fx.ctx).g;
    EXPECT_LE(xy.g * xy.g + xy.w * xy.w, gxx * gyy + 1e-9 * std::max(1.0, gxx * gyy));
  }
}

TEST(AmbientForms, BasepointMismatch) {
  RngState rng(4);
  const Spectrum s = make_spectrum({1.0}, {1});
  const PurificationFrame f1 = random_frame(s, 3, rng);
  const PurificationFrame f2 = random_frame(s, 3, rng);
  const AmbientTangent x(random_tangent(f1, rng), f1);
  const AmbientTangent y(random_tangent(f2, rng), f2);
  EXPECT_EQ(kind_of([&] { ambient_forms(x, y, GeometryContext()); }), ErrorKind::BasepointMismatch);
}

TEST(AmbientTangentType, RejectsNonTangent) {
  RngState rng(5);
  const PurificationFrame f = random_frame(make_spectrum({1.0}, {1}), 3, rng);
  EXPECT_EQ(kind_of([&] { AmbientTangent(f.psi(), f); }), ErrorKind::NotTangent);
  EXPECT_EQ(kind_of([&] { AmbientTangent(ComplexMatrix::Zero(2, 1), f); }), ErrorKind::BadDims);
}

TEST(Inertia, ChiIsUnit) {
  for (double hbar : {1.0, 0.32, 3.0}) {
    const GeometryContext ctx(hbar);
    const Spectrum s = make_spectrum({0.5, 0.3, 0.2}, {1, 1, 1});
    const GaugeElement c = chi(s, ctx);
    EXPECT_NEAR(inertia_inner(c, c, ctx), 1.0, 1e-14);
  }
}

TEST(Inertia, DisjointSupports) {
  const Spectrum s = make_spectrum({0.7, 0.3}, {1, 1});
  ComplexMatrix a = ComplexMatrix::Zero(2, 2), b = ComplexMatrix::Zero(2, 2);
  a(0, 0) = kI;
  b(1, 1) = kI;
  EXPECT_EQ(inertia_inner(GaugeElement(a, s), GaugeElement(b, s), GeometryContext()), 0.0);
}

TEST(Inertia, MatchesFundamentalField) {
  RngState rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    const Fixture fx = random_fixture(rng, trial % 2 ? 0.32 : 1.0);
    const GaugeElement xi = random_gauge_element(fx.frame.sigma(), rng);
    const GaugeElement eta = random_gauge_element(fx.frame.sigma(), rng);
    const double direct = inertia_inner(xi, eta, fx.ctx);
    const double ambient = hs_metric(fx.frame.psi() * xi.xi(), fx.frame.psi() * eta.xi(), fx.ctx.hbar());
    EXPECT_NEAR(direct, ambient, 1e-10 * std::max(1.0, std::abs(direct)));
  }
}

TEST(Inertia, SpectrumMismatch) {
  const Spectrum s1 = make_spectrum({0.7, 0.3}, {1, 1});
  const Spectrum s2 = make_spectrum({0.6, 0.4}, {1, 1});
  EXPECT_EQ(kind_of([&] { inertia_inner(chi(s1, GeometryContext()), chi(s2, GeometryContext()), GeometryContext()); }),
            ErrorKind::SpectrumMismatch);
}

TEST(MomentumMap, ChiValue) {
  const GeometryContext ctx;
  const Spectrum s = make_spectrum({0.7, 0.3}, {1, 1});
  RngState rng(7);
  const PurificationFrame f = random_frame(s, 3, rng);
  EXPECT_NEAR(momentum_map(f, chi(s, ctx).xi(), ctx), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_EQ(momentum_map(f, ComplexMatrix::Zero(2, 2), ctx), 0.0);
  EXPECT_EQ(kind_of([&] { momentum_map(f, ComplexMatrix::Identity(2, 2), ctx); }), ErrorKind::NotAntiHermitian);
}

TEST(MomentumMap, Equivariance) {
  RngState rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const Fixture fx = random_fixture(rng);
    const Index k = fx.frame.rank();
    ComplexMatrix xi = ginibre(k, k, rng);
    xi = 0.5 * (xi - xi.adjoint()).eval();
    const ComplexMatrix u = random_unitary(k, rng);
    const double lhs = momentum_map(ComplexMatrix(fx.frame.psi() * u), xi, fx.ctx);
    const double rhs = momentum_map(fx.frame.psi(), ComplexMatrix(u * xi * u.adjoint()), fx.ctx);
    EXPECT_NEAR(lhs, rhs, 1e-10 * std::max(1.0, std::abs(lhs)));
  }
}

TEST(MomentumMap, DifferentialIsOmega) {
  RngState rng(9);
  constexpr double h = 1e-5;
  for (int trial = 0; trial < 200; ++trial) {
    const Fixture fx = random_fixture(rng, trial % 2 ? 0.32 : 1.0);
    const ComplexMatrix xi = random_gauge_algebra(fx.frame.sigma(), rng);
    const ComplexMatrix x = random_tangent(fx.frame, rng);
    const ComplexMatrix& psi = fx.frame.psi();
    const double fd = (momentum_map(ComplexMatrix(psi + h * x), xi, fx.ctx) -
                       momentum_map(ComplexMatrix(psi - h * x), xi, fx.ctx)) /
                      (2.0 * h);
    const double omega = hs_symplectic(psi * xi, x, fx.ctx.hbar());
    EXPECT_NEAR(fd, omega, 1e-5 * std::max(1.0, xi.norm() * x.norm()));
  }
}

TEST(Connection, Reproducing) {
  RngState rng(10);
  for (int trial = 0; trial < 300; ++trial) {
    const Fixture fx = random_fixture(rng);
    const GaugeElement xi = random_gauge_element(fx.frame.sigma(), rng);
    const GaugeElement back = connection(fx.frame, fx.frame.psi() * xi.xi(), fx.ctx);
    EXPECT_LT((back.xi() - xi.xi()).norm(), 1e-10 * std::max(1.0, xi.xi().norm()));
  }
}

TEST(Connection, RankOne) {
  const GeometryContext ctx;
  ComplexMatrix psi = ComplexMatrix::Zero(2, 1);
  psi(0, 0) = 1.0;
  const PurificationFrame f(psi, make_spectrum({1.0}, {1}));
  ComplexMatrix x = ComplexMatrix::Zero(2, 1);
  x(0, 0) = Complex(0.0, 0.4);
  x(1, 0) = Complex(0.3, -0.2);
  EXPECT_LT(std::abs(connection(f, x, ctx).xi()(0, 0) - Complex(0.0, 0.4)), 1e-15);
}

TEST(Connection, AnnihilatesHorizontal) {
  RngState rng(11);
  for (int trial = 0; trial < 300; ++trial) {
    const Fixture fx = random_fixture(rng);
    const TangentSplit s = split(AmbientTangent(random_tangent(fx.frame, rng), fx.frame), fx.ctx);
    EXPECT_LT(connection(s.hor, fx.ctx).xi().norm(), 1e-10 * std::max(1.0, s.hor.X().norm()));
  }
}

TEST(Connection, RejectsNonTangent) {
  RngState rng(12);
  const PurificationFrame f = random_frame(make_spectrum({0.7, 0.3}, {1, 1}), 3, rng);
  EXPECT_EQ(kind_of([&] { connection(f, f.psi(), GeometryContext()); }), ErrorKind::NotTangent);
}

TEST(Split, FullyVertical) {
  RngState rng(13);
  const Fixture fx = random_fixture(rng);
  const GaugeElement xi = random_gauge_element(fx.frame.sigma(), rng);
  const ComplexMatrix x = fx.frame.psi() * xi.xi();
  const TangentSplit s = split(AmbientTangent(x, fx.frame), fx.ctx);
  EXPECT_LT(s.hor.X().norm(), 1e-10 * std::max(1.0, x.norm()));
  EXPECT_LT((s.vert.X() - x).norm(), 1e-10 * std::max(1.0, x.norm()));
}

TEST(Split, SpinLiftIsHorizontal) {
  const GeometryContext ctx;
  const Ensemble e = build_ensemble({Spin::from_twice(2), {1.0, 0.0}, {0.7, 0.3}}, ctx);
  const AmbientTangent lift = hamiltonian_lift(Observable(e.spin.Sx), e.psi, ctx);
  const TangentSplit s = split(lift, ctx);
  EXPECT_LT(s.vert.X().norm(), 1e-12);
  EXPECT_LT((s.hor.X() - lift.X()).norm(), 1e-12);
}

TEST(Split, OrthogonalAndIdempotent) {
  RngState rng(14);
  for (int trial = 0; trial < 300; ++trial) {
    const Fixture fx = random_fixture(rng, trial % 2 ? 0.32 : 1.0);
    const AmbientTangent x(random_tangent(fx.frame, rng), fx.frame);
    const TangentSplit s = split(x, fx.ctx);
    const double scale = std::max(1.0, x.X().norm());
    EXPECT_LT((s.hor.X() + s.vert.X() - x.X()).norm(), 4.0 * std::numeric_limits<double>::epsilon() * scale);
    const GaugeElement xi = random_gauge_element(fx.frame.sigma(), rng);
    EXPECT_NEAR(hs_metric(s.hor.X(), fx.frame.psi() * xi.xi(), fx.ctx.hbar()), 0.0, 1e-9 * scale * xi.xi().norm());
    const TangentSplit again = split(s.hor, fx.ctx);
    EXPECT_LT((again.hor.X() - s.hor.X()).norm(), 1e-10 * scale);
    EXPECT_LT(again.vert.X().norm(), 1e-10 * scale);
  }
}

TEST(Lift, IdentityIsVertical) {
  RngState rng(15);
  for (double hbar : {1.0, 0.32}) {
    const Fixture fx = random_fixture(rng, hbar);
    const Index n = fx.frame.dim(), k = fx.frame.rank();
    const AmbientTangent lift = hamiltonian_lift(Observable(ComplexMatrix::Identity(n, n)), fx.frame, fx.ctx);
    EXPECT_LT((lift.X() - fx.frame.psi() / (kI * hbar)).norm(), 1e-14);
    const GaugeElement a = connection(lift, fx.ctx);
    EXPECT_LT((a.xi() - ComplexMatrix::Identity(k, k) / (kI * hbar)).norm(), 1e-10);
    EXPECT_LT(split(lift, fx.ctx).hor.X().norm(), 1e-10);
  }
}

TEST(Lift, ZeroObservable) {
  RngState rng(16);
  const Fixture fx = random_fixture(rng);
  const Index n = fx.frame.dim();
  EXPECT_EQ(hamiltonian_lift(Observable(ComplexMatrix::Zero(n, n)), fx.frame, fx.ctx).X().norm(), 0.0);
}

TEST(Lift, SzIsVerticalAtSpinEnsemble) {
  const GeometryContext ctx;
  const Ensemble e = build_ensemble({Spin::from_twice(2), {1.0, 0.0}, {0.7, 0.3}}, ctx);
  const TangentSplit s = split(hamiltonian_lift(Observable(e.spin.Sz), e.psi, ctx), ctx);
  EXPECT_LT(s.hor.X().norm(), 1e-12);
}

TEST(XiFieldValues, ExpectationIdentity) {
  RngState rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const double hbar = trial % 2 ? 0.32 : 1.0;
    const Fixture fx = random_fixture(rng, hbar);
    const Observable a(random_hermitian(fx.frame.dim(), rng));
    const XiField x = xi_field(a, fx.frame, fx.ctx);
    const double via_xi = std::sqrt(hbar / 2.0) * inertia_inner(chi(fx.frame.sigma(), fx.ctx), x.xi, fx.ctx);
    const ComplexMatrix rho = fx.frame.psi() * fx.frame.psi().adjoint();
    EXPECT_NEAR(via_xi, oracle::expect(a.matrix(), rho), 1e-10 * std::max(1.0, a.matrix().norm()));
  }
}

TEST(XiFieldValues, PureStatePerpVanishes) {
  RngState rng(18);
  const GeometryContext ctx;
  const PurificationFrame f = random_frame(make_spectrum({1.0}, {1}), 4, rng);
  const XiField x = xi_field(Observable(random_hermitian(4, rng)), f, ctx);
  EXPECT_LT(x.xi_perp.xi().norm(), 1e-12);
}

TEST(XiFieldValues, SpinSzPerp) {
  for (double hbar : {1.0, 0.32}) {
    const GeometryContext ctx(hbar);
    const Ensemble e = build_ensemble({Spin::from_twice(2), {1.0, 0.0}, {0.7, 0.3}}, ctx);
    const XiField x = xi_field(Observable(e.spin.Sz), e.psi, ctx);
    const double want = 2.0 * hbar * 0.7 - 2.0 * hbar * 0.49;
    EXPECT_NEAR(inertia_inner(x.xi_perp, x.xi_perp, ctx), want, 1e-12);
  }
}

TEST(XiFieldValues, CovariantUnderGauge) {
  RngState rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const Fixture fx = random_fixture(rng);
    const Observable a(random_hermitian(fx.frame.dim(), rng));
    const ComplexMatrix u = random_gauge(fx.frame.sigma(), rng);
    const ComplexMatrix xi = xi_field(a, fx.frame, fx.ctx).xi.xi();
    const ComplexMatrix moved = xi_field(a, gauge_act(fx.frame, u), fx.ctx).xi.xi();
    EXPECT_LT((moved - u.adjoint() * xi * u).norm(), 1e-9 * std::max(1.0, xi.norm()));
  }
}

TEST(Brackets, Examples) {
  RngState rng(20);
  const Fixture fx = random_fixture(rng);
  const Observable a(random_hermitian(fx.frame.dim(), rng));
  const Brackets aa = brackets(a, a, fx.frame, fx.ctx);
  EXPECT_GE(aa.g, 0.0);
  EXPECT_EQ(aa.w, 0.0);

  for (double hbar : {1.0, 0.32}) {
    const GeometryContext ctx(hbar);
    const Ensemble e = build_ensemble({Spin::from_twice(2), {1.0, 0.0}, {0.7, 0.3}}, ctx);
    const Brackets xy = brackets(Observable(e.spin.Sx), Observable(e.spin.Sy), e.psi, ctx);
    EXPECT_NEAR(xy.g, 0.0, 1e-12);
    EXPECT_NEAR(xy.w, hbar * 0.7, 1e-12);
  }
}

TEST(Brackets, ProductIdentities) {
  RngState rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    const double hbar = trial % 2 ? 0.32 : 1.0;
    const Fixture fx = random_fixture(rng, hbar);
    const Index n = fx.frame.dim();
    const Observable a(random_hermitian(n, rng)), b(random_hermitian(n, rng));
    const ComplexMatrix rho = fx.frame.psi() * fx.frame.psi().adjoint();
    const Brackets ab = brackets(a, b, fx.frame, fx.ctx);
    const XiField xa = xi_field(a, fx.frame, fx.ctx), xb = xi_field(b, fx.frame, fx.ctx);
    const double scale = std::max(1.0, a.matrix().norm() * b.matrix().norm());

    EXPECT_NEAR(0.5 * hbar * ab.w, oracle::commutator(a.matrix(), b.matrix(), rho), 1e-9 * scale);
    const double sym = 0.5 * (a.matrix() * b.matrix() + b.matrix() * a.matrix()).cwiseProduct(rho.transpose()).sum().real();
    EXPECT_NEAR(sym, 0.5 * hbar * (ab.g + inertia_inner(xa.xi, xb.xi, fx.ctx)), 1e-9 * scale);
    EXPECT_NEAR(oracle::covariance(a.matrix(), b.matrix(), rho),
                0.5 * hbar * (ab.g + inertia_inner(xa.xi_perp, xb.xi_perp, fx.ctx)), 1e-9 * scale);

    const double gaa = brackets(a, a, fx.frame, fx.ctx).g, gbb = brackets(b, b, fx.frame, fx.ctx).g;
    EXPECT_GE(gaa * gbb, ab.g * ab.g + ab.w * ab.w - 1e-9 * std::max(1.0, gaa * gbb));
  }
}

TEST(Pushforward, Identities) {
  RngState rng(22);
  for (int trial = 0; trial < 200; ++trial) {
    const double hbar = trial % 2 ? 0.32 : 1.0;
    const Fixture fx = random_fixture(rng, hbar);
    const Index n = fx.frame.dim();
    const GaugeElement xi = random_gauge_element(fx.frame.sigma(), rng);
    EXPECT_LT(pushforward(AmbientTangent(fx.frame.psi() * xi.xi(), fx.frame), fx.ctx).matrix().norm(),
              1e-10 * std::max(1.0, xi.xi().norm()));

    const ComplexMatrix a = random_hermitian(n, rng);
    const ComplexMatrix rho = fx.frame.psi() * fx.frame.psi().adjoint();
    const HermitianMatrix d = pushforward(hamiltonian_lift(Observable(a), fx.frame, fx.ctx), fx.ctx);
    EXPECT_LT((d.matrix() - (a * rho - rho * a) / (kI * hbar)).norm(), 1e-10 * std::max(1.0, a.norm() / hbar));

    const HermitianMatrix r = pushforward(AmbientTangent(random_tangent(fx.frame, rng), fx.frame), fx.ctx);
    EXPECT_NEAR(std::abs(r.matrix().trace()), 0.0, 1e-10 * std::max(1.0, r.matrix().norm()));
  }
}

TEST(GaugeInvariance, ExportedScalars) {
  RngState rng(23);
  for (int trial = 0; trial < 200; ++trial) {
    const Fixture fx = random_fixture(rng, trial % 2 ? 0.32 : 1.0);
    const Index n = fx.frame.dim();
    const Observable a(random_hermitian(n, rng)), b(random_hermitian(n, rng));
    const PurificationFrame moved = gauge_act(fx.frame, random_gauge(fx.frame.sigma(), rng));
    const auto scalars = [&](const PurificationFrame& f) {
      const Brackets br = brackets(a, b, f, fx.ctx);
      const XiField xa = xi_field(a, f, fx.ctx), xb = xi_field(b, f, fx.ctx);
      return std::array<double, 5>{br.g, br.w, inertia_inner(xa.xi, xb.xi, fx.ctx),
                                   inertia_inner(xa.xi_perp, xb.xi_perp, fx.ctx),
                                   inertia_inner(chi(f.sigma(), fx.ctx), xa.xi, fx.ctx)};
    };
    const auto before = scalars(fx.frame), after = scalars(moved);
    const double scale = std::max(1.0, a.matrix().norm() * b.matrix().norm());
    for (std::size_t i = 0; i < before.size(); ++i) EXPECT_NEAR(before[i], after[i], 1e-9 * scale);
  }
}

TEST(SymplecticRankDiagnostic, MatchesOrbitDimension) {
  RngState rng(24);
  for (int trial = 0; trial < 30; ++trial) {
    const Fixture fx = random_fixture(rng);
    const SymplecticRank r = symplectic_rank_diagnostic(fx.frame, fx.ctx);
    EXPECT_EQ(r.rank, r.orbit_dim);
  }
}

TEST(Context, RejectsBadHbar) {
  EXPECT_EQ(kind_of([] { GeometryContext(0.0); }), ErrorKind::ConfigError);
  EXPECT_EQ(kind_of([] { GeometryContext(-1.0); }), ErrorKind::ConfigError);
}

}  // namespace
}  // namespace qgeo
