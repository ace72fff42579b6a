#pragma once

// Shared data model and primitive computations for ORGaNIC networks:
// weights, instantaneous state, recorded trajectories, rectification,
// input/recurrent drive and the discrete energy function.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace organics {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

// Raised when a state or energy stops being finite. Carries the simulated
// time (ms) at which the failure was detected when one is known.
class NonFiniteError : public Error {
 public:
  explicit NonFiniteError(const std::string& what, double t_ms = std::nan(""))
      : Error(what), time_ms_(t_ms) {}
  double time_ms() const noexcept { return time_ms_; }

 private:
  double time_ms_;
};

namespace detail {

inline void require_dims(bool ok, const std::string& what) {
  if (!ok) throw DimensionError(what);
}

template <typename Derived>
bool all_finite(const Eigen::DenseBase<Derived>& m) {
  return m.allFinite();
}

}  // namespace detail

// All weights, offsets and time constants defining one network.
//
// N neurons, M inputs, K readout channels. Modulator weights are real;
// encoding, recurrent and readout weights are complex. Time constants are
// in milliseconds.
struct NetworkSpec {
  CMat w_zx;   // N x M, encoding
  CMat w_yy;   // N x N, recurrent
  CMat w_ry;   // K x N, readout
  RMat w_ax;   // N x M
  RMat w_ay;   // N x N
  RMat w_bx;   // N x M
  RMat w_by;   // N x N
  CVec c_z;    // N
  CVec c_yhat; // N
  RVec c_a;    // N
  RVec c_b;    // N
  CVec c_r;    // K
  RVec tau_y;  // N, ms
  double tau_a = 10.0;
  double tau_b = 10.0;

  Eigen::Index n_neurons() const { return w_yy.rows(); }
  Eigen::Index n_inputs() const { return w_zx.cols(); }
  Eigen::Index n_readouts() const { return w_ry.rows(); }

  // Zero-weight network with unit readout (K = N) and uniform tau_y.
  static NetworkSpec zeros(Eigen::Index n, Eigen::Index m, double tau_y = 10.0,
                           double tau_ab = 10.0) {
    NetworkSpec s;
    s.w_zx = CMat::Zero(n, m);
    s.w_yy = CMat::Zero(n, n);
    s.w_ry = CMat::Identity(n, n);
    s.w_ax = RMat::Zero(n, m);
    s.w_ay = RMat::Zero(n, n);
    s.w_bx = RMat::Zero(n, m);
    s.w_by = RMat::Zero(n, n);
    s.c_z = CVec::Zero(n);
    s.c_yhat = CVec::Zero(n);
    s.c_a = RVec::Zero(n);
    s.c_b = RVec::Zero(n);
    s.c_r = CVec::Zero(n);
    s.tau_y = RVec::Constant(n, tau_y);
    s.tau_a = tau_ab;
    s.tau_b = tau_ab;
    return s;
  }

  // Throws DimensionError / ParameterError when the invariants do not hold.
  void validate() const {
    const auto n = n_neurons();
    const auto m = n_inputs();
    const auto k = n_readouts();
    using detail::require_dims;
    require_dims(n > 0 && m > 0, "network needs at least one neuron and one input");
    require_dims(w_yy.cols() == n, "w_yy must be square");
    require_dims(w_zx.rows() == n, "w_zx rows must equal N");
    require_dims(w_ry.cols() == n, "w_ry cols must equal N");
    require_dims(w_ax.rows() == n && w_ax.cols() == m, "w_ax must be N x M");
    require_dims(w_bx.rows() == n && w_bx.cols() == m, "w_bx must be N x M");
    require_dims(w_ay.rows() == n && w_ay.cols() == n, "w_ay must be N x N");
    require_dims(w_by.rows() == n && w_by.cols() == n, "w_by must be N x N");
    require_dims(c_z.size() == n && c_yhat.size() == n, "c_z/c_yhat must have length N");
    require_dims(c_a.size() == n && c_b.size() == n, "c_a/c_b must have length N");
    require_dims(c_r.size() == k, "c_r must have length K");
    require_dims(tau_y.size() == n, "tau_y must have length N");
    if (!(tau_y.array() > 0.0).all() || !(tau_a > 0.0) || !(tau_b > 0.0))
      throw ParameterError("time constants must be strictly positive");
  }

  // True when every complex weight and offset has zero imaginary part.
  bool is_real() const {
    return w_zx.imag().isZero(0.0) && w_yy.imag().isZero(0.0) &&
           w_ry.imag().isZero(0.0) && c_z.imag().isZero(0.0) &&
           c_yhat.imag().isZero(0.0) && c_r.imag().isZero(0.0);
  }
};

// Instantaneous network state. a and b are stored unrectified.
struct SimState {
  CVec y;
  RVec a;
  RVec b;
  double t = 0.0;

  static SimState zeros(Eigen::Index n, double t0 = 0.0) {
    return SimState{CVec::Zero(n), RVec::Zero(n), RVec::Zero(n), t0};
  }
};

// Time-indexed record of a run. Samples are uniformly spaced by dt (the
// recording interval, which may be a multiple of the integration step).
struct Trajectory {
  double dt = 1.0;
  std::vector<double> times;
  std::vector<CVec> x;
  std::vector<CVec> z;
  std::vector<CVec> yhat;
  std::vector<RVec> a;
  std::vector<RVec> b;
  std::vector<CVec> y;
  std::vector<CVec> readout;  // optional, empty when not recorded

  std::size_t size() const { return times.size(); }
  bool empty() const { return times.empty(); }

  // Index of the first sample at or after t (clamped to the last sample).
  std::size_t index_at(double t) const {
    if (times.empty()) return 0;
    const double k = std::ceil((t - times.front()) / dt - 1e-9);
    if (k <= 0) return 0;
    return std::min<std::size_t>(static_cast<std::size_t>(k), times.size() - 1);
  }
};

// Halfwave rectification, max(0, v) elementwise.
inline RVec rectify(const RVec& v) { return v.cwiseMax(0.0); }
inline double rectify(double v) { return v > 0.0 ? v : 0.0; }

// z = W_zx x + c_z
inline CVec input_drive(const NetworkSpec& spec, const CVec& x) {
  detail::require_dims(x.size() == spec.n_inputs(),
                       "input vector length " + std::to_string(x.size()) +
                           " != M = " + std::to_string(spec.n_inputs()));
  return spec.w_zx * x + spec.c_z;
}

// yhat = W_yy y + c_yhat
inline CVec recurrent_drive(const NetworkSpec& spec, const CVec& y) {
  detail::require_dims(y.size() == spec.n_neurons(),
                       "response vector length " + std::to_string(y.size()) +
                           " != N = " + std::to_string(spec.n_neurons()));
  return spec.w_yy * y + spec.c_yhat;
}

// Input gain b+/(1+b+).
inline double input_gain(double b) {
  const double bp = rectify(b);
  return bp / (1.0 + bp);
}

// Recurrent gain alpha+ recovered from the a/b modulators:
// (1 + a+) = (1 + b+)(1 + alpha+), clamped at zero.
inline double alpha_from_ab(double a, double b) {
  return rectify((1.0 + rectify(a)) / (1.0 + rectify(b)) - 1.0);
}

// Energy summand for one neuron at one instant (without the dt/2 factor):
// (b+/(1+b+))|y - z|^2 + (1/(1+b+))|y - yhat/(1+alpha+)|^2.
inline double energy_term(cplx y, cplx z, cplx yhat, double alpha, double b) {
  const double beta = input_gain(b);
  const double ap = rectify(alpha);
  return beta * std::norm(y - z) + (1.0 - beta) * std::norm(y - yhat / (1.0 + ap));
}

// Sum over neurons of energy_term for one instant, alpha given per neuron.
inline double instant_energy(const CVec& y, const CVec& z, const CVec& yhat,
                             const RVec& alpha, const RVec& b) {
  const auto n = y.size();
  detail::require_dims(z.size() == n && yhat.size() == n && alpha.size() == n &&
                           b.size() == n,
                       "instant_energy: inconsistent vector lengths");
  double e = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) e += energy_term(y[j], z[j], yhat[j], alpha[j], b[j]);
  return e;
}

// Discrete energy of a recorded trajectory: (dt/2) sum_t sum_j of the two
// weighted residuals. alpha is recovered from the recorded a, b.
inline double energy(const NetworkSpec& spec, const Trajectory& traj) {
  const auto n = spec.n_neurons();
  const std::size_t len = traj.size();
  detail::require_dims(traj.y.size() == len && traj.z.size() == len &&
                           traj.yhat.size() == len && traj.a.size() == len &&
                           traj.b.size() == len,
                       "energy: trajectory is missing y/z/yhat/a/b samples");
  double total = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    detail::require_dims(traj.y[k].size() == n, "energy: sample length != N");
    RVec alpha(n);
    for (Eigen::Index j = 0; j < n; ++j) alpha[j] = alpha_from_ab(traj.a[k][j], traj.b[k][j]);
    total += instant_energy(traj.y[k], traj.z[k], traj.yhat[k], alpha, traj.b[k]);
  }
  total *= 0.5 * traj.dt;
  if (!std::isfinite(total)) throw NonFiniteError("energy is not finite");
  return total;
}

}  // namespace organics
