#pragma once

// Constructors for the recurrent/encoding weight families and the spectral
// rescaling stabiliser.

#include "organics/core.hpp"
#include "organics/eigen.hpp"

#include <Eigen/QR>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace organics::weights {

// Divides w by the largest real part of its spectrum so that the leading
// eigenvalue has real part 1.
inline CMat rescale_spectrum(const CMat& w) {
  const CVec eig = sorted_eigenvalues(w);
  const double top = eig[0].real();
  if (!(top > 0.0))
    throw ParameterError("rescale_spectrum: no eigenvalue has a positive real part");
  return w / top;
}

inline RMat rescale_spectrum(const RMat& w) {
  return rescale_spectrum(CMat(w.cast<cplx>())).real();
}

struct CenterSurroundBands {
  double self_w = 3.0;
  double flank_w = 2.0;
  double surround_w = -1.0;
};

// Circulant matrix: self_w on the diagonal, flank_w on the two cyclic
// neighbours, surround_w everywhere else, then rescaled so the leading
// eigenvalue is 1. The default bands give a weight range of
// [-0.1213, 0.3640] and a doubly degenerate unit eigenvalue for n = 8.
inline RMat center_surround(int n, CenterSurroundBands bands = {}) {
  if (n < 3) throw ParameterError("center_surround: n must be at least 3");
  RMat w(n, n);
  for (int r = 0; r < n; ++r) {
    for (int c = 0; c < n; ++c) {
      const int d = ((c - r) % n + n) % n;
      if (d == 0)
        w(r, c) = bands.self_w;
      else if (d == 1 || d == n - 1)
        w(r, c) = bands.flank_w;
      else
        w(r, c) = bands.surround_w;
    }
  }
  return rescale_spectrum(w);
}

// Cyclic shift: neuron j drives neuron j+1, the last neuron drives the first.
inline RMat synfire(int n) {
  if (n < 2) throw ParameterError("synfire: n must be at least 2");
  RMat w = RMat::Zero(n, n);
  for (int j = 0; j < n; ++j) w((j + 1) % n, j) = 1.0;
  return w;
}

struct SpectrumRequest {
  int n = 100;
  int d = 10;               // eigenvalues with real part exactly 1
  double imag_std = 0.05;   // std of the imaginary parts
  std::uint64_t seed = 0;
};

// W = Q D Q^H with Q the unitary factor of a seeded complex Gaussian matrix.
// The first d diagonal entries of D have real part 1, the rest uniform
// [0, 1); every imaginary part is Gaussian with std imag_std.
inline CMat random_spectral(const SpectrumRequest& req) {
  if (req.n < 1 || req.d < 1 || req.d > req.n)
    throw ParameterError("random_spectral: need 1 <= d <= n");
  if (!(req.imag_std >= 0.0)) throw ParameterError("random_spectral: imag_std must be >= 0");

  std::mt19937_64 rng(req.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  CMat a(req.n, req.n);
  for (int c = 0; c < req.n; ++c)
    for (int r = 0; r < req.n; ++r) a(r, c) = cplx(gauss(rng), gauss(rng));
  Eigen::HouseholderQR<CMat> qr(a);
  const CMat q = qr.householderQ();

  CVec diag(req.n);
  for (int i = 0; i < req.n; ++i) {
    const double re = i < req.d ? 1.0 : unif(rng);
    const double im = req.imag_std > 0.0 ? req.imag_std * gauss(rng) : 0.0;
    diag[i] = cplx(re, im);
  }
  return q * diag.asDiagonal() * q.adjoint();
}

// Excitatory/inhibitory pair: column 0 excitatory, column 1 inhibitory.
inline RMat ei_pair() {
  RMat w(2, 2);
  w << 2.0, -1.0,
       2.0, -0.25;
  return w;
}

// Diagonal weights 1 + i 2 pi f tau with f converted from Hz to cycles/ms.
inline CMat diagonal_oscillators(const RVec& freqs_hz, double tau_y_ms) {
  if (!(tau_y_ms > 0.0)) throw ParameterError("diagonal_oscillators: tau_y must be positive");
  CVec d(freqs_hz.size());
  for (Eigen::Index j = 0; j < freqs_hz.size(); ++j)
    d[j] = cplx(1.0, 2.0 * std::numbers::pi * (freqs_hz[j] / 1000.0) * tau_y_ms);
  return d.asDiagonal();
}

// Unit-norm eigenvectors of the k eigenvalues with largest real part, in
// the canonical eigen ordering.
inline CMat eigen_encoder(const CMat& w_yy, int k) {
  if (k < 1 || k > w_yy.rows()) throw ParameterError("eigen_encoder: need 1 <= k <= N");
  const EigenPairs ep = eigen_decompose(w_yy);
  CMat v = ep.vectors.leftCols(k);
  detail::require_independent(v);
  return v;
}

inline CMat eigen_encoder(const RMat& w_yy, int k) {
  return eigen_encoder(CMat(w_yy.cast<cplx>()), k);
}

// Eigenvectors whose eigenvalues have real part within tol of 1.
inline CMat sustained_basis(const CMat& w_yy, double tol = 1e-6) {
  const EigenPairs ep = eigen_decompose(w_yy);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ep.values.size(); ++i)
    if (std::abs(ep.values[i].real() - 1.0) <= tol) keep.push_back(i);
  CMat v(w_yy.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) v.col(static_cast<Eigen::Index>(c)) = ep.vectors.col(keep[c]);
  detail::require_independent(v);
  return v;
}

// Scales w so that the eigenvalue pair closest to the top with nonzero
// imaginary part has real part exactly 1. Applied to a cyclic shift this
// turns the slowest travelling-wave pair into an undamped oscillation.
inline CMat sustain_leading_oscillation(const CMat& w) {
  const CVec eig = sorted_eigenvalues(w);
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (std::abs(eig[i].imag()) > 1e-9 && eig[i].real() > 0.0) return w / eig[i].real();
  }
  throw ParameterError("sustain_leading_oscillation: no oscillatory eigenvalue with Re > 0");
}

}  // namespace organics::weights
