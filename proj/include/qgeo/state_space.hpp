#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qgeo/eigensystem.hpp"
#include "qgeo/random.hpp"

namespace qgeo {

/// Descending positive eigenvalues with declared multiplicities.
///
/// The multiplicity structure fixes the block shape of the gauge group, so it
/// is always supplied by the caller and never guessed from clustering.
class Spectrum {
 public:
  static Spectrum make(std::vector<double> values, std::vector<int> mults, const Tolerances& tol = {}) {
    if (values.empty() || values.size() != mults.size()) {
      throw Error(ErrorKind::BadDims, "spectrum values and multiplicities must be non-empty and equal in length");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < values.size(); ++j) {
      if (!(values[j] > 0.0) || !std::isfinite(values[j])) {
        throw Error(ErrorKind::NonPositive, "spectrum value " + std::to_string(j));
      }
      if (mults[j] < 1) throw Error(ErrorKind::NonPositive, "multiplicity " + std::to_string(j));
      if (j > 0 && !(values[j] < values[j - 1])) {
        throw Error(ErrorKind::NotDescending, "spectrum values must be strictly descending");
      }
      total += values[j] * mults[j];
    }
    if (std::abs(total - 1.0) > tol.normalization) {
      throw Error(ErrorKind::NotNormalized, "weighted sum is " + std::to_string(total));
    }
    return Spectrum(std::move(values), std::move(mults));
  }

  /// All multiplicities one.
  static Spectrum nondegenerate(std::vector<double> values, const Tolerances& tol = {}) {
    std::vector<int> mults(values.size(), 1);
    return make(std::move(values), std::move(mults), tol);
  }

  const std::vector<double>& distinct_values() const noexcept { return values_; }
  const std::vector<int>& mults() const noexcept { return mults_; }
  std::size_t block_count() const noexcept { return values_.size(); }
  Index rank() const noexcept { return rank_; }

  /// First basis index of block j and its size.
  Index block_offset(std::size_t j) const { return offsets_[j]; }
  Index block_size(std::size_t j) const { return mults_[j]; }

  /// (p_1, ..., p_k) with each distinct value repeated per multiplicity.
  RealVector expanded() const {
    RealVector p(rank_);
    for (std::size_t j = 0; j < values_.size(); ++j) p.segment(offsets_[j], mults_[j]).setConstant(values_[j]);
    return p;
  }

  ComplexMatrix P() const { return expanded().cast<Complex>().asDiagonal(); }
  ComplexMatrix P_inverse() const { return expanded().cwiseInverse().cast<Complex>().asDiagonal(); }

  ComplexMatrix projector(std::size_t j) const {
    ComplexMatrix pi = ComplexMatrix::Zero(rank_, rank_);
    pi.block(offsets_[j], offsets_[j], mults_[j], mults_[j]).setIdentity();
    return pi;
  }

  /// Keeps only the diagonal blocks: sum_j Pi_j M Pi_j.
  ComplexMatrix block_diagonal_part(const ComplexMatrix& m) const {
    ComplexMatrix out = ComplexMatrix::Zero(rank_, rank_);
    for (std::size_t j = 0; j < values_.size(); ++j) {
      out.block(offsets_[j], offsets_[j], mults_[j], mults_[j]) =
          m.block(offsets_[j], offsets_[j], mults_[j], mults_[j]);
    }
    return out;
  }

  /// Eigenvalues padded with zeros to ambient dimension n, descending.
  RealVector padded(Index n) const {
    RealVector out = RealVector::Zero(n);
    out.head(rank_) = expanded();
    return out;
  }

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  Spectrum(std::vector<double> values, std::vector<int> mults)
      : values_(std::move(values)), mults_(std::move(mults)) {
    offsets_.reserve(mults_.size());
    for (int m : mults_) {
      offsets_.push_back(rank_);
      rank_ += m;
    }
  }

  std::vector<double> values_;
  std::vector<int> mults_;
  std::vector<Index> offsets_;
  Index rank_ = 0;
};

inline Spectrum make_spectrum(std::vector<double> values, std::vector<int> mults, const Tolerances& tol = {}) {
  return Spectrum::make(std::move(values), std::move(mults), tol);
}

/// Largest |lambda_i(rho) - sigma_i| with sigma padded by zeros.
inline double spectrum_deviation(const ComplexMatrix& rho, const Spectrum& sigma, const Tolerances& tol = {}) {
  const Eigensystem es = hermitian_eigensystem(rho, tol);
  return (es.values - sigma.padded(rho.rows())).cwiseAbs().maxCoeff();
}

/// A density matrix certified to lie on the isospectral orbit of `sigma`.
class DensityState {
 public:
  DensityState(ComplexMatrix rho, Spectrum sigma, const Tolerances& tol = {})
      : rho_(std::move(rho), tol.herm, "rho"), sigma_(std::move(sigma)) {
    const Index n = rho_.dim();
    if (sigma_.rank() > n) throw Error(ErrorKind::BadDims, "spectrum rank exceeds dimension");
    const double tr = real_trace(rho_.matrix());
    if (std::abs(tr - 1.0) > tol.trace) throw Error(ErrorKind::NotNormalized, "trace(rho) = " + std::to_string(tr));
    const Eigensystem es = hermitian_eigensystem(rho_.matrix(), tol);
    if (es.values(n - 1) < -tol.psd) throw Error(ErrorKind::SpectrumMismatch, "rho is not positive semidefinite");
    const double dev = (es.values - sigma_.padded(n)).cwiseAbs().maxCoeff();
    if (dev > tol.spec) {
      throw Error(ErrorKind::SpectrumMismatch, "eigenvalues deviate from the declared spectrum by " + std::to_string(dev));
    }
  }

  const ComplexMatrix& rho() const noexcept { return rho_.matrix(); }
  const Spectrum& sigma() const noexcept { return sigma_; }
  Index dim() const noexcept { return rho_.dim(); }

 private:
  HermitianMatrix rho_;
  Spectrum sigma_;
};

/// An n x k matrix psi with psi^H psi = P: a point of the fiber bundle's
/// total space over the orbit of `sigma`.
class PurificationFrame {
 public:
  PurificationFrame(ComplexMatrix psi, Spectrum sigma, const Tolerances& tol = {})
      : psi_(std::move(psi)), sigma_(std::move(sigma)) {
    if (psi_.cols() != sigma_.rank() || psi_.rows() < psi_.cols()) {
      throw Error(ErrorKind::BadDims, "frame must be n x k with k = rank(sigma) <= n");
    }
    if (!all_finite(psi_)) throw Error(ErrorKind::NotFrame, "non-finite entries");
    const double residual = (psi_.adjoint() * psi_ - sigma_.P()).norm();
    if (residual > tol.frame) throw Error(ErrorKind::NotFrame, "|psi^H psi - P| = " + std::to_string(residual));
  }

  const ComplexMatrix& psi() const noexcept { return psi_; }
  const Spectrum& sigma() const noexcept { return sigma_; }
  Index dim() const noexcept { return psi_.rows(); }
  Index rank() const noexcept { return psi_.cols(); }

 private:
  ComplexMatrix psi_;
  Spectrum sigma_;
};

/// Element of the gauge Lie algebra: k x k anti-Hermitian, commuting with P.
class GaugeElement {
 public:
  GaugeElement(ComplexMatrix xi, Spectrum sigma, const Tolerances& tol = {})
      : xi_(std::move(xi)), sigma_(std::move(sigma)) {
    if (xi_.rows() != sigma_.rank() || xi_.cols() != sigma_.rank()) {
      throw Error(ErrorKind::BadDims, "gauge element must be k x k");
    }
    const double scale = std::max(1.0, xi_.norm());
    if (anti_hermitian_residual(xi_) > tol.gauge * scale) throw Error(ErrorKind::NotGauge, "not anti-Hermitian");
    const ComplexMatrix p = sigma_.P();
    if ((xi_ * p - p * xi_).norm() > tol.gauge * scale) throw Error(ErrorKind::NotGauge, "does not commute with P");
  }

  const ComplexMatrix& xi() const noexcept { return xi_; }
  const Spectrum& sigma() const noexcept { return sigma_; }

 private:
  ComplexMatrix xi_;
  Spectrum sigma_;
};

/// Uhlmann purification psi = sum_j sqrt(p_j) |v_j><j| from the descending
/// eigensystem of rho. Each eigenvector is rotated so that its largest-modulus
/// entry is real and positive.
inline PurificationFrame purify(const DensityState& state, const Tolerances& tol = {}) {
  const Spectrum& sigma = state.sigma();
  const Eigensystem es = hermitian_eigensystem(state.rho(), tol);
  const Index n = state.dim();
  const Index k = sigma.rank();
  const double dev = (es.values - sigma.padded(n)).cwiseAbs().maxCoeff();
  if (dev > tol.spec) throw Error(ErrorKind::SpectrumMismatch, "purify: deviation " + std::to_string(dev));

  const RealVector p = sigma.expanded();
  ComplexMatrix psi(n, k);
  for (Index j = 0; j < k; ++j) {
    Eigen::VectorXcd v = es.vectors.col(j);
    Index lead = 0;
    for (Index i = 1; i < n; ++i)
      if (std::abs(v(i)) > std::abs(v(lead))) lead = i;
    v *= std::conj(v(lead)) / std::abs(v(lead));
    v(lead) = std::abs(v(lead));
    psi.col(j) = std::sqrt(p(j)) * v;
  }
  return PurificationFrame(std::move(psi), sigma, tol);
}

inline DensityState frame_to_state(const PurificationFrame& frame, const Tolerances& tol = {}) {
  return DensityState(frame.psi() * frame.psi().adjoint(), frame.sigma(), tol);
}

/// Right action psi -> psi U of the gauge group.
inline PurificationFrame gauge_act(const PurificationFrame& frame, const ComplexMatrix& u, const Tolerances& tol = {}) {
  const Index k = frame.rank();
  if (u.rows() != k || u.cols() != k) throw Error(ErrorKind::NotGauge, "gauge unitary must be k x k");
  if ((u.adjoint() * u - ComplexMatrix::Identity(k, k)).norm() > tol.unitary) {
    throw Error(ErrorKind::NotGauge, "not unitary");
  }
  const ComplexMatrix p = frame.sigma().P();
  if ((u * p - p * u).norm() > tol.unitary) throw Error(ErrorKind::NotGauge, "does not commute with P");
  return PurificationFrame(frame.psi() * u, frame.sigma(), tol);
}

/// psi = V P^{1/2} with V a Haar isometry.
inline PurificationFrame random_frame(const Spectrum& sigma, Index n, RngState& rng, const Tolerances& tol = {}) {
  if (sigma.rank() > n) throw Error(ErrorKind::BadDims, "random_frame needs rank <= n");
  const ComplexMatrix v = random_isometry(n, sigma.rank(), rng);
  const RealVector root = sigma.expanded().cwiseSqrt();
  return PurificationFrame(v * root.cast<Complex>().asDiagonal(), sigma, tol);
}

/// Block-diagonal unitary with one Haar block per distinct eigenvalue.
inline ComplexMatrix random_gauge(const Spectrum& sigma, RngState& rng) {
  const Index k = sigma.rank();
  ComplexMatrix u = ComplexMatrix::Zero(k, k);
  for (std::size_t j = 0; j < sigma.block_count(); ++j) {
    const Index off = sigma.block_offset(j);
    const Index m = sigma.block_size(j);
    u.block(off, off, m, m) = random_unitary(m, rng);
  }
  return u;
}

/// Random element of the gauge algebra: block-diagonal anti-Hermitian.
inline GaugeElement random_gauge_element(const Spectrum& sigma, RngState& rng) {
  const ComplexMatrix h = sigma.block_diagonal_part(random_hermitian(sigma.rank(), rng));
  return GaugeElement(kI * h, sigma);
}

/// psi viewed as a unit vector in H (x) K*; the rank-one projector on it is
/// traced over K*, which must reproduce psi psi^H.
inline ComplexMatrix rank_one_partial_trace(const PurificationFrame& frame) {
  const ComplexMatrix& psi = frame.psi();
  const Index n = psi.rows();
  const Index k = psi.cols();
  Eigen::VectorXcd vec(n * k);
  for (Index a = 0; a < n; ++a)
    for (Index b = 0; b < k; ++b) vec(a * k + b) = psi(a, b);
  const ComplexMatrix projector = vec * vec.adjoint();

  ComplexMatrix reduced = ComplexMatrix::Zero(n, n);
  for (Index a = 0; a < n; ++a)
    for (Index c = 0; c < n; ++c)
      for (Index b = 0; b < k; ++b) reduced(a, c) += projector(a * k + b, c * k + b);
  return reduced;
}

/// The gauge transformation U = psi^H phi P^{-1} carrying psi to phi when
/// both frames lie over the same density matrix.
inline ComplexMatrix fiber_transport(const PurificationFrame& from, const PurificationFrame& to) {
  return from.psi().adjoint() * to.psi() * from.sigma().P_inverse();
}

}  // namespace qgeo
