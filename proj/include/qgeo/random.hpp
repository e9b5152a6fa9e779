#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "qgeo/matrix.hpp"

namespace qgeo {

/// Counter-based generator: draw i is splitmix64(seed, i). Copying an
/// RngState forks the stream, and equal seeds replay equal streams on any
/// platform.
class RngState {
 public:
  explicit RngState(std::uint64_t seed = 0) : seed_(seed) {}

  /// Independent stream for trial `index` of a campaign seeded with `seed`.
  static RngState for_trial(std::uint64_t seed, std::uint64_t index) {
    return RngState(mix(seed ^ mix(index + 0x632be59bd9b4e019ULL)));
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next_u64() { return mix(seed_ + 0x9e3779b97f4a7c15ULL * ++counter_); }

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Integer in [lo, hi].
  int uniform_int(int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(next_u64() % span);
  }

  double normal() {
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

  /// Standard complex Gaussian, E|z|^2 = 1.
  Complex complex_normal() { return Complex(normal(), normal()) / std::numbers::sqrt2; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t counter_ = 0;
};

enum class SampleKind { hermitian, haar_unitary, isometry };

inline ComplexMatrix ginibre(Index rows, Index cols, RngState& rng) {
  ComplexMatrix z(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) z(i, j) = rng.complex_normal();
  return z;
}

inline ComplexMatrix random_hermitian(Index n, RngState& rng) {
  if (n < 1) throw Error(ErrorKind::BadDims, "hermitian sample needs n >= 1");
  const ComplexMatrix z = ginibre(n, n, rng);
  return 0.5 * (z + z.adjoint());
}

/// Haar unitary: QR of a Ginibre matrix with the phases of diag(R) moved into Q.
inline ComplexMatrix random_unitary(Index n, RngState& rng) {
  if (n < 1) throw Error(ErrorKind::BadDims, "unitary sample needs n >= 1");
  const Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(n, n, rng));
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(n, n);
  const ComplexMatrix& r = qr.matrixQR();
  for (Index c = 0; c < n; ++c) {
    const double mag = std::abs(r(c, c));
    if (mag > 0.0) q.col(c) *= r(c, c) / mag;
  }
  return q;
}

inline ComplexMatrix random_isometry(Index n, Index k, RngState& rng) {
  if (k < 1 || k > n) throw Error(ErrorKind::BadDims, "isometry sample needs 1 <= k <= n");
  return random_unitary(n, rng).leftCols(k);
}

inline ComplexMatrix sample_random(SampleKind kind, Index n, Index k, RngState& rng) {
  switch (kind) {
    case SampleKind::hermitian: return random_hermitian(n, rng);
    case SampleKind::haar_unitary: return random_unitary(n, rng);
    case SampleKind::isometry: return random_isometry(n, k, rng);
  }
  throw Error(ErrorKind::BadDims, "unknown sample kind");
}

}  // namespace qgeo
