#pragma once

// Incremental forward-Euler simulation of the rate model. All updates in a
// step read the pre-step state, then are applied together.

#include "organics/core.hpp"

#include <cmath>
#include <functional>
#include <string>

namespace organics {

struct StepInput {
  CVec x;
  double dt = 1.0;
};

using InputFn = std::function<CVec(double t_ms)>;
using ClosedLoopInputFn = std::function<CVec(double t_ms, const SimState&)>;

// Right-hand side of tau_y dy/dt for the given drives:
// -y + (b+/(1+b+)) z + (1/(1+a+)) yhat, elementwise.
inline CVec response_drive(const CVec& y, const CVec& z, const CVec& yhat,
                           const RVec& a, const RVec& b) {
  CVec out(y.size());
  for (Eigen::Index j = 0; j < y.size(); ++j)
    out[j] = -y[j] + input_gain(b[j]) * z[j] + yhat[j] / (1.0 + rectify(a[j]));
  return out;
}

inline SimState step(const NetworkSpec& spec, const SimState& state, const StepInput& inp) {
  const auto n = spec.n_neurons();
  detail::require_dims(state.y.size() == n && state.a.size() == n && state.b.size() == n,
                       "step: state does not match network size");
  if (!(inp.dt > 0.0)) throw ParameterError("step: dt must be positive");

  const CVec z = input_drive(spec, inp.x);
  const CVec yhat = recurrent_drive(spec, state.y);
  const RVec x_re = inp.x.real();
  const RVec y_re = state.y.real();

  const RVec da = (inp.dt / spec.tau_a) *
                  (-state.a + spec.w_ax * x_re + spec.w_ay * y_re + spec.c_a);
  const RVec db = (inp.dt / spec.tau_b) *
                  (-state.b + spec.w_bx * x_re + spec.w_by * y_re + spec.c_b);
  const CVec dy = (inp.dt * spec.tau_y.cwiseInverse()).cast<cplx>().cwiseProduct(
      response_drive(state.y, z, yhat, state.a, state.b));

  SimState next{state.y + dy, state.a + da, state.b + db, state.t + inp.dt};
  if (!next.y.allFinite() || !next.a.allFinite() || !next.b.allFinite())
    throw NonFiniteError("non-finite state at t = " + std::to_string(state.t) + " ms", state.t);
  return next;
}

struct SimulateOptions {
  // Keep every n-th integration step in the trajectory.
  std::size_t record_every = 1;
};

namespace detail {

inline void record_sample(const NetworkSpec& spec, Trajectory& traj, const SimState& s,
                          const CVec& x) {
  traj.times.push_back(s.t);
  traj.x.push_back(x);
  traj.z.push_back(input_drive(spec, x));
  traj.yhat.push_back(recurrent_drive(spec, s.y));
  traj.a.push_back(s.a);
  traj.b.push_back(s.b);
  traj.y.push_back(s.y);
  traj.readout.push_back(spec.w_ry * s.y + spec.c_r);
}

inline std::size_t step_count(double t0, double t1, double dt) {
  if (!(t1 > t0)) throw ParameterError("simulate: t1 must exceed t0");
  if (!(dt > 0.0)) throw ParameterError("simulate: dt must be positive");
  return static_cast<std::size_t>(std::llround((t1 - t0) / dt));
}

}  // namespace detail

// Runs the network from init over [t0, t1]. The input function may inspect
// the current state, which is how closed-loop tasks are wired.
inline Trajectory simulate(const NetworkSpec& spec, const ClosedLoopInputFn& input_fn, double t0,
                           double t1, double dt, SimState init,
                           const SimulateOptions& opts = {}) {
  spec.validate();
  const std::size_t steps = detail::step_count(t0, t1, dt);
  const std::size_t every = std::max<std::size_t>(1, opts.record_every);
  init.t = t0;

  Trajectory traj;
  traj.dt = dt * static_cast<double>(every);
  const std::size_t expected = steps / every + 1;
  traj.times.reserve(expected);

  SimState s = std::move(init);
  for (std::size_t k = 0;; ++k) {
    s.t = t0 + static_cast<double>(k) * dt;
    CVec x = input_fn(s.t, s);
    if (k % every == 0) detail::record_sample(spec, traj, s, x);
    if (k == steps) break;
    s = step(spec, s, StepInput{std::move(x), dt});
  }
  return traj;
}

inline Trajectory simulate(const NetworkSpec& spec, const InputFn& input_fn, double t0,
                           double t1, double dt, SimState init,
                           const SimulateOptions& opts = {}) {
  return simulate(
      spec, ClosedLoopInputFn([&](double t, const SimState&) { return input_fn(t); }), t0, t1,
      dt, std::move(init), opts);
}

}  // namespace organics
