#pragma once

// Eigen-analysis of recurrent weights and time constants, steady-state
// projection and readouts.

#include "organics/core.hpp"
#include "organics/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace organics {

enum class Stability { decaying, sustained, stable_oscillation, unstable };

inline std::string to_string(Stability s) {
  switch (s) {
    case Stability::decaying: return "decaying";
    case Stability::sustained: return "sustained";
    case Stability::stable_oscillation: return "stable-oscillation";
    case Stability::unstable: return "unstable";
  }
  return "unknown";
}

struct SpectralTolerances {
  double unit_real = 1e-6;      // |Re(lambda) - 1| counted toward D
  double marginal = 1e-3;       // |Re(lambda')| treated as zero
  double nonzero_imag = 1e-9;   // |Im(lambda')| treated as nonzero
};

struct SpectralReport {
  CVec eigenvalues;            // of W_yy, canonical order
  CVec effective_eigenvalues;  // of W', canonical order
  Stability stability = Stability::decaying;
  std::vector<double> frequencies_hz;
  int dimensionality = 0;
};

// W' = diag(1/tau) (W - I), in 1/ms.
inline CMat effective_matrix(const CMat& w_yy, const RVec& tau_y) {
  detail::require_dims(w_yy.rows() == w_yy.cols(), "effective_matrix: W must be square");
  detail::require_dims(tau_y.size() == w_yy.rows(), "effective_matrix: tau length != N");
  if (!(tau_y.array() > 0.0).all()) throw ParameterError("effective_matrix: tau must be positive");
  const CMat shifted = w_yy - CMat::Identity(w_yy.rows(), w_yy.cols());
  return tau_y.cwiseInverse().cast<cplx>().asDiagonal() * shifted;
}

// (1000 / 2 pi) Im(lambda) for every eigenvalue of W' that sits on the
// imaginary axis (within tol) with positive imaginary part. Descending.
inline std::vector<double> oscillation_frequencies(const CMat& w_prime,
                                                   const SpectralTolerances& tol = {}) {
  std::vector<double> out;
  const CVec eig = sorted_eigenvalues(w_prime);
  for (Eigen::Index i = 0; i < eig.size(); ++i) {
    if (std::abs(eig[i].real()) <= tol.marginal && eig[i].imag() > tol.nonzero_imag)
      out.push_back(1000.0 / (2.0 * std::numbers::pi) * eig[i].imag());
  }
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

inline Stability classify_stability(const CVec& w_prime_eigenvalues,
                                    const SpectralTolerances& tol = {}) {
  bool marginal = false;
  bool marginal_osc = false;
  for (Eigen::Index i = 0; i < w_prime_eigenvalues.size(); ++i) {
    const cplx l = w_prime_eigenvalues[i];
    if (l.real() > tol.marginal) return Stability::unstable;
    if (std::abs(l.real()) <= tol.marginal) {
      marginal = true;
      if (std::abs(l.imag()) > tol.nonzero_imag) marginal_osc = true;
    }
  }
  if (marginal_osc) return Stability::stable_oscillation;
  if (marginal) return Stability::sustained;
  return Stability::decaying;
}

inline Stability classify_stability(const CMat& w_prime, const SpectralTolerances& tol = {}) {
  return classify_stability(sorted_eigenvalues(w_prime), tol);
}

inline int representational_dimensionality(const CVec& w_eigenvalues, double tol = 1e-6) {
  int d = 0;
  for (Eigen::Index i = 0; i < w_eigenvalues.size(); ++i)
    if (std::abs(w_eigenvalues[i].real() - 1.0) <= tol) ++d;
  return d;
}

inline SpectralReport analyze(const CMat& w_yy, const RVec& tau_y,
                              const SpectralTolerances& tol = {}) {
  const CMat wp = effective_matrix(w_yy, tau_y);
  SpectralReport r;
  r.eigenvalues = sorted_eigenvalues(w_yy);
  r.effective_eigenvalues = sorted_eigenvalues(wp);
  r.stability = classify_stability(r.effective_eigenvalues, tol);
  r.frequencies_hz = oscillation_frequencies(wp, tol);
  r.dimensionality = representational_dimensionality(r.eigenvalues, tol.unit_real);
  return r;
}

namespace detail {

inline void require_orthonormal(const CMat& v, const char* who) {
  const CMat gram = v.adjoint() * v;
  const double err = (gram - CMat::Identity(v.cols(), v.cols())).cwiseAbs().maxCoeff();
  if (!(err <= 1e-8))
    throw ParameterError(std::string(who) + ": columns of V are not orthonormal (max |V^H V - I| = " +
                         std::to_string(err) + ")");
}

}  // namespace detail

struct Projection {
  CVec p;     // V^H y0
  CVec y_ss;  // V p
};

inline Projection steady_state_project(const CMat& v, const CVec& y0) {
  detail::require_dims(v.rows() == y0.size(), "steady_state_project: V rows != length of y0");
  detail::require_orthonormal(v, "steady_state_project");
  Projection out;
  out.p = v.adjoint() * y0;
  out.y_ss = v * out.p;
  return out;
}

inline CVec linear_readout(const CMat& w_ry, const CVec& c_r, const CVec& y) {
  detail::require_dims(w_ry.cols() == y.size() && w_ry.rows() == c_r.size(),
                       "linear_readout: dimension mismatch");
  return w_ry * y + c_r;
}

// |V^H y|, the phase-free readout for complex spectra.
inline RVec magnitude_readout(const CMat& v, const CVec& y) {
  detail::require_dims(v.rows() == y.size(), "magnitude_readout: V rows != length of y");
  return (v.adjoint() * y).cwiseAbs();
}

}  // namespace organics
