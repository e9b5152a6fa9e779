#pragma once

#include <algorithm>
#include <numeric>
#include <vector>

#include "qgeo/spin.hpp"

namespace qgeo {

/// Strictly descending positive weights summing to one (each weighted by its
/// multiplicity), with gaps bounded away from zero.
inline std::vector<double> random_descending_weights(const std::vector<int>& mults, RngState& rng) {
  const std::size_t l = mults.size();
  std::vector<double> v(l);
  double running = 0.0;
  for (std::size_t j = l; j-- > 0;) {
    running += rng.uniform(0.1, 1.0);
    v[j] = running;
  }
  double total = 0.0;
  for (std::size_t j = 0; j < l; ++j) total += v[j] * mults[j];
  for (double& x : v) x /= total;
  return v;
}

/// Random spectrum of rank k with a random multiplicity pattern.
inline Spectrum random_spectrum(int k, RngState& rng) {
  const int blocks = rng.uniform_int(1, k);
  // Random composition of k into `blocks` positive parts via sorted cut points.
  std::vector<int> cuts(static_cast<std::size_t>(k - 1));
  std::iota(cuts.begin(), cuts.end(), 1);
  for (std::size_t i = cuts.size(); i > 1; --i) std::swap(cuts[i - 1], cuts[rng.next_u64() % i]);
  cuts.resize(static_cast<std::size_t>(blocks - 1));
  std::sort(cuts.begin(), cuts.end());
  std::vector<int> mults;
  int prev = 0;
  for (int c : cuts) {
    mults.push_back(c - prev);
    prev = c;
  }
  mults.push_back(k - prev);
  std::vector<double> values = random_descending_weights(mults, rng);
  return Spectrum::make(std::move(values), std::move(mults));
}

/// Removes the vertical component of an observable's lift at `frame`:
/// A - psi P^{-1} D P^{-1} psi^H with D the block-diagonal part of psi^H A psi.
/// The result is Hermitian and parallel at the frame's density matrix.
inline Observable parallel_component(const Observable& a, const PurificationFrame& frame) {
  const Spectrum& sigma = frame.sigma();
  const ComplexMatrix& psi = frame.psi();
  const ComplexMatrix pinv = sigma.P_inverse();
  const ComplexMatrix d = sigma.block_diagonal_part(psi.adjoint() * a.matrix() * psi);
  ComplexMatrix out = a.matrix() - psi * pinv * d * pinv * psi.adjoint();
  out = 0.5 * (out + out.adjoint()).eval();
  return Observable(std::move(out));
}

struct Instance {
  GeometryContext ctx;
  PurificationFrame frame;
  Observable a;
  Observable b;
};

struct InstanceOptions {
  int dim_max = 8;
  double hbar = 1.0;
  bool pure = false;        // force rank one
  bool parallel_a = false;  // project A onto its parallel component
};

inline Instance random_instance(const InstanceOptions& opt, RngState& rng, const Tolerances& tol = {}) {
  const int n = rng.uniform_int(2, std::max(2, opt.dim_max));
  const int k = opt.pure ? 1 : rng.uniform_int(1, n);
  const Spectrum sigma = random_spectrum(k, rng);
  PurificationFrame frame = random_frame(sigma, n, rng, tol);
  Observable a(random_hermitian(n, rng));
  Observable b(random_hermitian(n, rng));
  // A full-rank frame with a single eigenvalue block has no horizontal
  // directions, so the parallel part of any observable is round-off. Redraw
  // until the parallel part is a genuine observable.
  while (opt.parallel_a) {
    Observable par = parallel_component(a, frame);
    if (par.matrix().norm() > 0.1 * a.matrix().norm()) {
      a = std::move(par);
      break;
    }
    if (sigma.block_count() == 1 && sigma.rank() == n) {
      return random_instance(opt, rng, tol);
    }
    a = Observable(random_hermitian(n, rng));
  }
  return {GeometryContext(opt.hbar, tol), std::move(frame), std::move(a), std::move(b)};
}

/// Random spin ensemble with 2s <= max_twice_s.
inline EnsembleSpec random_ensemble_spec(int max_twice_s, RngState& rng) {
  EnsembleSpec spec;
  spec.s = Spin::from_twice(rng.uniform_int(0, max_twice_s));
  const int d = static_cast<int>(spec.s.dim());
  const int k = rng.uniform_int(1, d);
  std::vector<int> idx(static_cast<std::size_t>(d));
  std::iota(idx.begin(), idx.end(), 0);
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.next_u64() % i]);
  for (int j = 0; j < k; ++j) spec.m.push_back(spec.s.value() - idx[static_cast<std::size_t>(j)]);
  spec.p = random_descending_weights(std::vector<int>(static_cast<std::size_t>(k), 1), rng);
  return spec;
}

}  // namespace qgeo
