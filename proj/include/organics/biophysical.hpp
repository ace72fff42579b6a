#pragma once

// Equivalent-circuit realisation: three-compartment pyramidal cells
// (soma, apical and basal dendrites) arranged as ON/OFF pairs, gated by
// conductance-based thalamic modulator units. Real-valued networks only.

#include "organics/core.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace organics::circuit {

struct CircuitParams {
  double C = 1.0;
  double g_vs = 1.0;
  double R_a = 10.0;
  double R_b = 1.0;
  double g_l = 1.0;
  double E_l = 0.0;
  double E_e = 1.0;
  double E_i = -1.0;

  void validate() const {
    if (!(C > 0.0 && g_vs > 0.0 && R_a > 0.0 && R_b > 0.0 && g_l > 0.0))
      throw ParameterError("circuit: capacitance, conductances and resistances must be positive");
  }
};

struct CircuitState {
  RVec v_plus, v_minus;
  RVec va_plus, va_minus;
  RVec vb_plus, vb_minus;
  RVec a, b;  // thalamic membrane potentials
  double t = 0.0;

  static CircuitState zeros(Eigen::Index n, double t0 = 0.0) {
    const RVec z = RVec::Zero(n);
    return CircuitState{z, z, z, z, z, z, z, z, t0};
  }

  RVec y_plus() const { return rectify(v_plus); }
  RVec y_minus() const { return rectify(v_minus); }
  // Signed response represented by the pair.
  RVec y() const { return y_plus() - y_minus(); }
};

namespace detail {

inline RVec pos(const RVec& v) { return v.cwiseMax(0.0); }
inline RVec neg(const RVec& v) { return (-v).cwiseMax(0.0); }
inline RMat pos(const RMat& m) { return m.cwiseMax(0.0); }
inline RMat neg(const RMat& m) { return (-m).cwiseMax(0.0); }

inline void require_finite(const RVec& v, double t, const char* what) {
  if (!v.allFinite())
    throw NonFiniteError(std::string("circuit: non-finite ") + what + " at t = " + std::to_string(t) + " ms", t);
}

// Excitatory and inhibitory conductances for a signed weight matrix acting
// on a signed signal, split into rectified halves.
inline std::pair<RVec, RVec> split_conductances(const RMat& w, const RVec& s) {
  const RMat wp = pos(w), wn = neg(w);
  const RVec sp = pos(s), sn = neg(s);
  return {wp * sp + wn * sn, wp * sn + wn * sp};
}

}  // namespace detail

// One membrane update for a bank of conductance-based units:
// C dv/dt = -g_l(v - E_l) - g_e(v - E_e) - g_i(v - E_i).
inline RVec membrane_step(const CircuitParams& p, const RVec& v, const RVec& g_e, const RVec& g_i,
                          double dt) {
  const RVec rhs = -p.g_l * (v.array() - p.E_l) - g_e.array() * (v.array() - p.E_e) -
                   g_i.array() * (v.array() - p.E_i);
  return v + (dt / p.C) * rhs;
}

// Advances the thalamic a and b units one step.
inline std::pair<RVec, RVec> thalamic_step(const NetworkSpec& spec, const CircuitParams& p,
                                           const CircuitState& s, const RVec& x,
                                           const RVec& y_plus, const RVec& y_minus, double dt) {
  const RVec y = y_plus - y_minus;
  auto drive = [&](const RMat& wx, const RMat& wy, const RVec& c) {
    auto [ex, ix] = detail::split_conductances(wx, x);
    auto [ey, iy] = detail::split_conductances(wy, y);
    return std::pair<RVec, RVec>{ex + ey + detail::pos(c), ix + iy + detail::neg(c)};
  };
  const auto [g_ea, g_ia] = drive(spec.w_ax, spec.w_ay, spec.c_a);
  const auto [g_eb, g_ib] = drive(spec.w_bx, spec.w_by, spec.c_b);
  RVec a = membrane_step(p, s.a, g_ea, g_ia, dt);
  RVec b = membrane_step(p, s.b, g_eb, g_ib, dt);
  detail::require_finite(a, s.t, "thalamic a");
  detail::require_finite(b, s.t, "thalamic b");
  return {std::move(a), std::move(b)};
}

// Advances the six PFC compartment potentials one step using the current
// thalamic a, b of the state. The thalamic fields are copied unchanged.
inline CircuitState pfc_step(const NetworkSpec& spec, const CircuitParams& p, const CircuitState& s,
                             const RVec& x, double dt) {
  const RMat w_zx = spec.w_zx.real();
  const RMat w_yy = spec.w_yy.real();
  const RVec c_z = spec.c_z.real();
  const RVec c_y = spec.c_yhat.real();

  const RVec xp = detail::pos(x), xn = detail::neg(x);
  const RVec yp = s.y_plus(), yn = s.y_minus();
  const RVec iz_p = detail::pos(w_zx) * xp + detail::neg(w_zx) * xn + detail::pos(c_z);
  const RVec iz_n = detail::neg(w_zx) * xp + detail::pos(w_zx) * xn + detail::neg(c_z);
  const RVec iy_p = detail::pos(w_yy) * yp + detail::neg(w_yy) * yn + detail::pos(c_y);
  const RVec iy_n = detail::neg(w_yy) * yp + detail::pos(w_yy) * yn + detail::neg(c_y);

  const RVec g_va = rectify(s.a) / p.R_a;
  const RVec g_vb = rectify(s.b) / p.R_b;
  const RVec ias_p = (s.va_plus - s.v_plus) / p.R_a;
  const RVec ias_n = (s.va_minus - s.v_minus) / p.R_a;
  const RVec ibs_p = (s.vb_plus - s.v_plus) / p.R_b;
  const RVec ibs_n = (s.vb_minus - s.v_minus) / p.R_b;
  const double k = dt / p.C;

  CircuitState n = s;
  n.v_plus = s.v_plus + k * (-p.g_vs * s.v_plus + (iz_p - iz_n) + ias_p + ibs_p);
  n.va_plus = s.va_plus + k * (-g_va.cwiseProduct(s.va_plus) + (iy_p - iy_n) - ias_p);
  n.vb_plus = s.vb_plus + k * (-g_vb.cwiseProduct(s.vb_plus) + (iz_n - iz_p) - ibs_p);
  n.v_minus = s.v_minus + k * (-p.g_vs * s.v_minus + (iz_n - iz_p) + ias_n + ibs_n);
  n.va_minus = s.va_minus + k * (-g_va.cwiseProduct(s.va_minus) + (iy_n - iy_p) - ias_n);
  n.vb_minus = s.vb_minus + k * (-g_vb.cwiseProduct(s.vb_minus) + (iz_p - iz_n) - ibs_n);
  n.t = s.t + dt;
  for (const RVec* v : {&n.v_plus, &n.v_minus, &n.va_plus, &n.va_minus, &n.vb_plus, &n.vb_minus})
    detail::require_finite(*v, s.t, "compartment potential");
  return n;
}

// g_vs + a+/(R_a(1+a+)) + b+/(R_b(1+b+))
inline double total_conductance(const CircuitParams& p, double a_plus, double b_plus) {
  if (a_plus < 0.0 || b_plus < 0.0) throw ParameterError("total_conductance: a+, b+ must be >= 0");
  return p.g_vs + a_plus / (p.R_a * (1.0 + a_plus)) + b_plus / (p.R_b * (1.0 + b_plus));
}

// Steady-state somatic potential for fixed drives and modulators.
inline double steady_state_vs(const CircuitParams& p, double z, double yhat, double a_plus,
                              double b_plus) {
  const double g_v = total_conductance(p, a_plus, b_plus);
  return (b_plus / (1.0 + b_plus) * z + yhat / (1.0 + a_plus)) / g_v;
}

using CircuitInputFn = std::function<RVec(double t_ms)>;

struct CircuitOptions {
  std::size_t record_every = 1;
  // When set, a and b are held at these values instead of being integrated.
  std::optional<RVec> clamp_a;
  std::optional<RVec> clamp_b;
};

struct CircuitTrajectory {
  double dt = 1.0;
  std::vector<double> times;
  std::vector<RVec> x;
  std::vector<CircuitState> states;

  std::size_t size() const { return times.size(); }
  std::size_t index_at(double t) const {
    if (times.empty()) return 0;
    const double k = std::ceil((t - times.front()) / dt - 1e-9);
    if (k <= 0) return 0;
    return std::min<std::size_t>(static_cast<std::size_t>(k), times.size() - 1);
  }
};

inline CircuitTrajectory simulate_circuit(const NetworkSpec& spec, const CircuitParams& p,
                                          const CircuitInputFn& input_fn, double t0, double t1,
                                          double dt, CircuitState init,
                                          const CircuitOptions& opts = {}) {
  spec.validate();
  p.validate();
  if (!spec.is_real()) throw ParameterError("simulate_circuit: network must be real-valued");
  if (!(t1 > t0)) throw ParameterError("simulate_circuit: t1 must exceed t0");
  if (!(dt > 0.0)) throw ParameterError("simulate_circuit: dt must be positive");
  const auto n = spec.n_neurons();
  detail::require_finite(init.v_plus, t0, "initial state");
  organics::detail::require_dims(init.v_plus.size() == n && init.a.size() == n,
                                 "simulate_circuit: init does not match network size");

  const auto steps = static_cast<std::size_t>(std::llround((t1 - t0) / dt));
  const std::size_t every = std::max<std::size_t>(1, opts.record_every);
  CircuitTrajectory traj;
  traj.dt = dt * static_cast<double>(every);
  traj.times.reserve(steps / every + 1);

  CircuitState s = std::move(init);
  if (opts.clamp_a) s.a = *opts.clamp_a;
  if (opts.clamp_b) s.b = *opts.clamp_b;
  for (std::size_t k = 0;; ++k) {
    s.t = t0 + static_cast<double>(k) * dt;
    const RVec x = input_fn(s.t);
    organics::detail::require_dims(x.size() == spec.n_inputs(), "simulate_circuit: input length != M");
    if (k % every == 0) {
      traj.times.push_back(s.t);
      traj.x.push_back(x);
      traj.states.push_back(s);
    }
    if (k == steps) break;
    auto [a, b] = thalamic_step(spec, p, s, x, s.y_plus(), s.y_minus(), dt);
    CircuitState next = pfc_step(spec, p, s, x, dt);
    next.a = opts.clamp_a ? *opts.clamp_a : std::move(a);
    next.b = opts.clamp_b ? *opts.clamp_b : std::move(b);
    s = std::move(next);
  }
  return traj;
}

}  // namespace organics::circuit
