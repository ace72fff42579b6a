#pragma once

// Preset experiments. Each preset builds its network and input schedule,
// runs the matching simulator, and evaluates a list of machine-checkable
// assertions. Assertion failures are reported, never thrown.

#include "organics/batch.hpp"
#include "organics/biophysical.hpp"
#include "organics/core.hpp"
#include "organics/dynamics.hpp"
#include "organics/io.hpp"
#include "organics/prediction.hpp"
#include "organics/signal.hpp"
#include "organics/spectral.hpp"
#include "organics/weights.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace organics::scenarios {

class UnknownScenarioError : public Error {
 public:
  using Error::Error;
};

struct Overrides {
  std::optional<double> dt;
  std::optional<double> duration;
  std::optional<std::uint64_t> seed;
  double tau_scale = 1.0;
};

struct Assertion {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double limit = 0.0;
  std::string detail;
};

struct ScenarioResult {
  std::string name;
  std::string description;
  io::CsvTable table;
  std::string plot_title;
  std::vector<io::PlotSeries> plot;
  std::vector<Assertion> assertions;

  bool passed() const {
    for (const auto& a : assertions)
      if (!a.passed) return false;
    return true;
  }

  const Assertion& assertion(const std::string& n) const {
    for (const auto& a : assertions)
      if (a.name == n) return a;
    throw Error("scenario " + name + " has no assertion '" + n + "'");
  }

  std::string report() const {
    std::ostringstream os;
    os << "scenario: " << name << "\n" << "description: " << description << "\n";
    std::size_t ok = 0;
    for (const auto& a : assertions) {
      ok += a.passed ? 1 : 0;
      os << (a.passed ? "PASS " : "FAIL ") << a.name << "  measured=" << io::format_double(a.measured)
         << " limit=" << io::format_double(a.limit);
      if (!a.detail.empty()) os << "  (" << a.detail << ")";
      os << "\n";
    }
    os << "result: " << (passed() ? "PASS" : "FAIL") << " (" << ok << "/" << assertions.size() << ")\n";
    return os.str();
  }
};

namespace detail {

inline Assertion at_most(std::string name, double measured, double limit, std::string detail = {}) {
  return {std::move(name), std::isfinite(measured) && measured <= limit, measured, limit, std::move(detail)};
}

inline Assertion holds(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok, ok ? 1.0 : 0.0, 1.0, std::move(detail)};
}

// Rectangular pulse on [on, off).
inline double pulse(double t, double on, double off) {
  constexpr double eps = 1e-9;
  return (t + eps >= on && t + eps < off) ? 1.0 : 0.0;
}

}  // namespace detail

// Timeline shared by the delay-period tasks: a start cue drives both
// modulators, the target is shown, a delay follows, and an end cue resets.
struct DelayTimeline {
  double cue_on = 0.0;
  double cue_off = 500.0;
  double target_off = 1000.0;
  double check_from = 1500.0;  // 0.5 s after the input is removed
  double end_on = 3000.0;
  double end_off = 3500.0;
  double duration = 4000.0;
};

// Network whose inputs are (target_0..target_{k-1}, start cue, end cue).
// The start cue drives a and b; the end cue drives a only.
inline NetworkSpec delay_network(const CMat& w_yy, const CMat& encoder, const RVec& tau_y,
                                 const CMat& readout) {
  const auto n = w_yy.rows();
  const auto k = encoder.cols();
  NetworkSpec s = NetworkSpec::zeros(n, k + 2);
  s.w_yy = w_yy;
  s.w_zx.leftCols(k) = encoder;
  s.w_ax.col(k).setOnes();
  s.w_ax.col(k + 1).setOnes();
  s.w_bx.col(k).setOnes();
  s.w_ry = readout;
  s.c_r = CVec::Zero(readout.rows());
  s.tau_y = tau_y;
  return s;
}

inline InputFn delay_input(const DelayTimeline& tl, const CVec& target) {
  return [tl, target](double t) {
    const auto k = target.size();
    CVec x = CVec::Zero(k + 2);
    x.head(k) = target * detail::pulse(t, tl.cue_on, tl.target_off);
    x[k] = detail::pulse(t, tl.cue_on, tl.cue_off);
    x[k + 1] = detail::pulse(t, tl.end_on, tl.end_off);
    return x;
  };
}

inline std::vector<double> real_series(const Trajectory& tr, Eigen::Index j, double from, double to) {
  std::vector<double> out;
  for (std::size_t i = tr.index_at(from); i < tr.size() && tr.times[i] <= to + 1e-9; ++i)
    out.push_back(tr.y[i][j].real());
  return out;
}

inline bool covers(const std::vector<double>& times, double t) {
  return !times.empty() && times.back() + 1e-9 >= t;
}

// ----------------------------------------------------------------- fig2 --

inline const CVec& fig2_target() {
  static const CVec t = (CVec(2) << cplx(std::cos(std::numbers::pi / 3), 0.0),
                         cplx(std::sin(std::numbers::pi / 3), 0.0)).finished();
  return t;
}

inline NetworkSpec fig2_network(double tau_scale = 1.0) {
  const CMat w = weights::center_surround(8).cast<cplx>();
  const CMat v = weights::eigen_encoder(w, 2);
  return delay_network(w, v, RVec::Constant(8, 10.0 * tau_scale), v.adjoint());
}

inline void add_y_plot(ScenarioResult& r, const std::vector<double>& times, const std::vector<CVec>& y,
                       std::size_t max_series = 8, const std::string& prefix = "y") {
  if (y.empty()) return;
  const auto n = static_cast<std::size_t>(y.front().size());
  for (std::size_t j = 0; j < std::min(n, max_series); ++j) {
    io::PlotSeries s{prefix + std::to_string(j), times, {}};
    s.y.reserve(y.size());
    for (const auto& v : y) s.y.push_back(v[static_cast<Eigen::Index>(j)].real());
    r.plot.push_back(std::move(s));
  }
}

inline std::vector<io::ExtraColumn> readout_columns(const Trajectory& tr) {
  std::vector<io::ExtraColumn> cols;
  if (tr.readout.empty()) return cols;
  const auto k = tr.readout.front().size();
  for (Eigen::Index c = 0; c < k; ++c) {
    io::ExtraColumn re{"re_r_" + std::to_string(c), {}}, im{"im_r_" + std::to_string(c), {}};
    for (const auto& r : tr.readout) {
      re.values.push_back(r[c].real());
      im.values.push_back(r[c].imag());
    }
    cols.push_back(std::move(re));
    cols.push_back(std::move(im));
  }
  return cols;
}

inline double max_readout_error(const Trajectory& tr, const CVec& target, double from, double to) {
  double err = 0.0;
  for (std::size_t i = tr.index_at(from); i < tr.size() && tr.times[i] <= to + 1e-9; ++i)
    err = std::max(err, (tr.readout[i] - target).cwiseAbs().maxCoeff());
  return err;
}

inline ScenarioResult run_fig2(const Overrides& ov) {
  DelayTimeline tl;
  tl.duration = ov.duration.value_or(tl.duration);
  const double dt = ov.dt.value_or(1.0);
  const NetworkSpec spec = fig2_network(ov.tau_scale);
  const Trajectory tr = simulate(spec, delay_input(tl, fig2_target()), 0.0, tl.duration, dt,
                                 SimState::zeros(8));

  ScenarioResult r;
  r.name = "fig2";
  r.description = "sustained delay-period activity, 8-neuron center-surround network";
  r.table = io::trajectory_table(tr, readout_columns(tr));
  r.plot_title = "fig2: responses Re(y)";
  add_y_plot(r, tr.times, tr.y);

  const double tau = 10.0 * ov.tau_scale;
  const CMat w = spec.w_yy;
  r.assertions.push_back(detail::holds(
      "two-unit-eigenvalues", representational_dimensionality(sorted_eigenvalues(w), 1e-6) == 2));
  if (covers(tr.times, tl.end_on)) {
    r.assertions.push_back(detail::at_most("delay-readout-equals-target",
                                           max_readout_error(tr, fig2_target(), tl.check_from, tl.end_on),
                                           1e-3, "max |readout - target| over the delay"));
    const CMat v = spec.w_ry.adjoint();
    const CVec y0 = tr.y[tr.index_at(tl.target_off)];
    const CVec plateau = tr.y[tr.index_at(0.5 * (tl.check_from + tl.end_on))];
    r.assertions.push_back(detail::at_most("projection-predicts-plateau",
                                           (steady_state_project(v, y0).y_ss - plateau).cwiseAbs().maxCoeff(),
                                           1e-3));
  } else {
    r.assertions.push_back(detail::holds("delay-readout-equals-target", false, "run ends before the delay"));
  }
  const double reset_t = tl.end_on + 20.0 * tau;
  if (covers(tr.times, reset_t)) {
    r.assertions.push_back(detail::at_most("reset-within-20-tau", tr.y[tr.index_at(reset_t)].cwiseAbs().maxCoeff(),
                                           1e-3, "max |y| 20 tau after the end cue"));
  } else {
    r.assertions.push_back(detail::holds("reset-within-20-tau", false, "run ends before reset check"));
  }
  return r;
}

// Encoder V plus a component orthogonal to V: the delay readout must not change.
inline ScenarioResult run_fig2_robust(const Overrides& ov) {
  DelayTimeline tl;
  tl.duration = ov.duration.value_or(tl.duration);
  const double dt = ov.dt.value_or(1.0);
  const NetworkSpec base = fig2_network(ov.tau_scale);
  const CMat v = base.w_ry.adjoint();

  std::mt19937_64 rng(ov.seed.value_or(7));
  std::normal_distribution<double> g(0.0, 1.0);
  RMat raw(8, 2);
  for (Eigen::Index c = 0; c < 2; ++c)
    for (Eigen::Index i = 0; i < 8; ++i) raw(i, c) = g(rng);
  CMat vp = raw.cast<cplx>();
  vp -= v * (v.adjoint() * vp);
  vp /= vp.norm();  // Frobenius norm 1

  NetworkSpec perturbed = base;
  perturbed.w_zx.leftCols(2) = v + vp;

  const auto in = delay_input(tl, fig2_target());
  const Trajectory a = simulate(base, in, 0.0, tl.duration, dt, SimState::zeros(8));
  const Trajectory b = simulate(perturbed, in, 0.0, tl.duration, dt, SimState::zeros(8));

  ScenarioResult r;
  r.name = "fig2-robust";
  r.description = "encoder with an added component orthogonal to the sustained eigenvectors";
  r.table = io::trajectory_table(b, readout_columns(b));
  r.plot_title = "fig2-robust: responses Re(y)";
  add_y_plot(r, b.times, b.y);

  r.assertions.push_back(detail::at_most("orthogonal-component", (v.adjoint() * vp).cwiseAbs().maxCoeff(), 1e-12));
  if (covers(b.times, tl.end_on)) {
    double diff = 0.0;
    for (std::size_t i = b.index_at(tl.check_from); i < b.size() && b.times[i] <= tl.end_on + 1e-9; ++i)
      diff = std::max(diff, (b.readout[i] - a.readout[i]).cwiseAbs().maxCoeff());
    r.assertions.push_back(detail::at_most("delay-readout-unchanged", diff, 1e-6,
                                           "max |readout(V + Vp) - readout(V)| over the delay"));
  } else {
    r.assertions.push_back(detail::holds("delay-readout-unchanged", false, "run ends before the delay"));
  }
  return r;
}

// ----------------------------------------------------------------- fig3 --

inline ScenarioResult run_fig3(const Overrides& ov) {
  DelayTimeline tl;
  tl.duration = ov.duration.value_or(tl.duration);
  const double dt = ov.dt.value_or(1.0);
  const NetworkSpec spec = fig2_network(ov.tau_scale);
  const auto in = delay_input(tl, fig2_target());

  batch::BatchProblem prob;
  prob.spec = spec;
  prob.dt = dt;
  prob.r = 1.0;
  prob.max_iters = 20000;
  prob.tolerance = 1e-10;
  const auto steps = static_cast<std::size_t>(std::llround(tl.duration / dt));
  for (std::size_t k = 0; k <= steps; ++k) prob.x_series.push_back(in(static_cast<double>(k) * dt));
  const batch::BatchResult res = batch::solve(prob);
  const batch::ForwardOutputs f = batch::forward_pass(prob, res.y);

  std::vector<double> times(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) times[k] = static_cast<double>(k) * dt;

  const Trajectory inc = simulate(spec, in, 0.0, tl.duration, dt, SimState::zeros(8));

  ScenarioResult r;
  r.name = "fig3";
  r.description = "sustained delay-period activity, batch energy minimisation";
  r.table = io::trajectory_table(times, res.y, f.a, f.b);
  r.plot_title = "fig3: batch responses Re(y)";
  add_y_plot(r, times, res.y);

  r.assertions.push_back(detail::holds("batch-converged", res.converged,
                                       "iterations=" + std::to_string(res.iterations)));
  if (covers(times, tl.end_on)) {
    double diff = 0.0;
    for (std::size_t i = inc.index_at(tl.check_from); i < inc.size() && inc.times[i] <= tl.end_on + 1e-9; ++i)
      diff = std::max(diff, (res.y[i] - inc.y[i]).cwiseAbs().maxCoeff());
    r.assertions.push_back(detail::at_most("batch-plateau-matches-incremental", diff, 1e-4,
                                           "max per-neuron |y_batch - y_incremental| over the delay"));
  } else {
    r.assertions.push_back(detail::holds("batch-plateau-matches-incremental", false, "run ends before the delay"));
  }
  return r;
}

// ----------------------------------------------------------------- fig4 --

struct DoubleStepConfig {
  CVec target1 = (CVec(2) << 1.0, 0.5).finished();
  CVec target2 = (CVec(2) << -1.0, 0.5).finished();
  double cue_on = 0.0, cue_off = 500.0, target_off = 1000.0;
  double saccade1 = 1500.0, saccade2 = 2200.0, saccade_ms = 100.0;
  double end_on = 3000.0, end_off = 3500.0, duration = 3500.0;
  double dt = 1.0;
  double tau_y = 10.0;
  double tau_ab = 10.0;
  // Snapshot times: before the first saccade, between, after the second.
  double snap1 = 1490.0, snap2 = 2150.0, snap3 = 2900.0;
};

struct DoubleStepResult {
  NetworkSpec spec;
  Trajectory traj;
  std::vector<std::pair<CVec, CVec>> snapshots;  // (target1, target2) readouts
  double cd_gain = 1.0;                          // integrated input gain of one movement pulse
};

// sum over the movement pulse of (dt/tau_y) b+/(1+b+) with b driven by a
// unit pulse from rest, using the same Euler recurrence as the simulator.
inline double movement_gain(double dt, double tau_y, double tau_b, double pulse_ms) {
  const auto steps = static_cast<std::size_t>(std::llround(pulse_ms / dt));
  double b = 0.0, sum = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    sum += dt / tau_y * input_gain(b);
    b += dt / tau_b * (1.0 - b);
  }
  return sum;
}

// Two 8-neuron blocks, one per remembered target. Inputs:
// (T1x, T1y, T2x, T2y, CDx, CDy, start cue, end cue, movement).
inline DoubleStepResult double_step_loop(const DoubleStepConfig& cfg) {
  const RMat cs = weights::center_surround(8);
  const CMat v8 = weights::eigen_encoder(cs, 2);
  NetworkSpec s = NetworkSpec::zeros(16, 9, cfg.tau_y, cfg.tau_ab);
  s.w_yy.setZero();
  s.w_yy.topLeftCorner(8, 8) = cs.cast<cplx>();
  s.w_yy.bottomRightCorner(8, 8) = cs.cast<cplx>();
  s.w_zx.block(0, 0, 8, 2) = v8;
  s.w_zx.block(8, 2, 8, 2) = v8;
  s.w_zx.block(0, 4, 8, 2) = -v8;
  s.w_zx.block(8, 4, 8, 2) = -v8;
  s.w_ax.col(6).setOnes();
  s.w_ax.col(7).setOnes();
  s.w_bx.col(6).setOnes();
  s.w_bx.col(8).setOnes();
  s.w_ry = CMat::Zero(4, 16);
  s.w_ry.block(0, 0, 2, 8) = v8.adjoint();
  s.w_ry.block(2, 8, 2, 8) = v8.adjoint();
  s.c_r = CVec::Zero(4);

  const double gain = movement_gain(cfg.dt, cfg.tau_y, cfg.tau_ab, cfg.saccade_ms);
  std::optional<CVec> cd1, cd2;
  const CMat w_ry = s.w_ry;
  auto input = [&](double t, const SimState& st) {
    using detail::pulse;
    CVec x = CVec::Zero(9);
    const double shown = pulse(t, cfg.cue_on, cfg.target_off);
    x.segment(0, 2) = cfg.target1 * shown;
    x.segment(2, 2) = cfg.target2 * shown;
    x[6] = pulse(t, cfg.cue_on, cfg.cue_off);
    x[7] = pulse(t, cfg.end_on, cfg.end_off);
    // Corollary discharge: copy of the readout of the target about to be
    // foveated, latched at movement onset.
    const CVec r = w_ry * st.y;
    if (pulse(t, cfg.saccade1, cfg.saccade1 + cfg.saccade_ms) > 0.0) {
      if (!cd1) cd1 = r.segment(0, 2);
      x.segment(4, 2) = *cd1 / gain;
      x[8] = 1.0;
    }
    if (pulse(t, cfg.saccade2, cfg.saccade2 + cfg.saccade_ms) > 0.0) {
      if (!cd2) cd2 = r.segment(2, 2);
      x.segment(4, 2) = *cd2 / gain;
      x[8] = 1.0;
    }
    return x;
  };

  DoubleStepResult out;
  out.cd_gain = gain;
  out.traj = simulate(s, ClosedLoopInputFn(input), 0.0, cfg.duration, cfg.dt, SimState::zeros(16));
  for (double ts : {cfg.snap1, cfg.snap2, cfg.snap3}) {
    const CVec& r = out.traj.readout[out.traj.index_at(ts)];
    out.snapshots.emplace_back(r.segment(0, 2), r.segment(2, 2));
  }
  out.spec = std::move(s);
  return out;
}

inline ScenarioResult run_fig4(const Overrides& ov) {
  DoubleStepConfig cfg;
  cfg.dt = ov.dt.value_or(cfg.dt);
  cfg.duration = ov.duration.value_or(cfg.duration);
  cfg.tau_y *= ov.tau_scale;
  const DoubleStepResult res = double_step_loop(cfg);

  ScenarioResult r;
  r.name = "fig4";
  r.description = "double-step saccade task with corollary-discharge updating";
  r.table = io::trajectory_table(res.traj, readout_columns(res.traj));
  r.plot_title = "fig4: target readouts";
  const char* labels[] = {"T1 x", "T1 y", "T2 x", "T2 y"};
  for (Eigen::Index c = 0; c < 4; ++c) {
    io::PlotSeries ps{labels[c], res.traj.times, {}};
    for (const auto& rv : res.traj.readout) ps.y.push_back(rv[c].real());
    r.plot.push_back(std::move(ps));
  }

  const std::vector<std::pair<std::array<double, 2>, std::array<double, 2>>> expected = {
      {{1.0, 0.5}, {-1.0, 0.5}}, {{0.0, 0.0}, {0.0, -1.0}}, {{0.0, 1.0}, {0.0, 0.0}}};
  const char* phase[] = {"before-first-saccade", "between-saccades", "after-second-saccade"};
  for (std::size_t i = 0; i < 3; ++i) {
    if (!covers(res.traj.times, i == 0 ? cfg.snap1 : i == 1 ? cfg.snap2 : cfg.snap3)) {
      r.assertions.push_back(detail::holds(std::string(phase[i]), false, "run ends before snapshot"));
      continue;
    }
    for (int tgt = 0; tgt < 2; ++tgt) {
      const CVec& got = tgt == 0 ? res.snapshots[i].first : res.snapshots[i].second;
      const auto& want = tgt == 0 ? expected[i].first : expected[i].second;
      const double err = std::max(std::abs(got[0] - want[0]), std::abs(got[1] - want[1]));
      std::ostringstream d;
      d << "readout (" << got[0].real() << ", " << got[1].real() << "), expected (" << want[0] << ", "
        << want[1] << ")";
      r.assertions.push_back(detail::at_most(std::string(phase[i]) + "-target" + std::to_string(tgt + 1), err,
                                             5e-2, d.str()));
    }
  }
  return r;
}

// ----------------------------------------------------------------- fig5 --

inline const CVec& fig5_target() {
  static const CVec t = (CVec(2) << 0.6, 0.8).finished();
  return t;
}

inline double max_magnitude_drift(const Trajectory& tr, const CMat& v, double from, double to) {
  const std::size_t i0 = tr.index_at(from);
  const RVec ref = magnitude_readout(v, tr.y[i0]);
  double drift = 0.0;
  for (std::size_t i = i0; i < tr.size() && tr.times[i] <= to + 1e-9; ++i)
    drift = std::max(drift, (magnitude_readout(v, tr.y[i]) - ref).cwiseAbs().maxCoeff());
  return drift;
}

inline ScenarioResult run_fig5(const Overrides& ov) {
  DelayTimeline tl;
  tl.duration = ov.duration.value_or(tl.duration);
  const double dt = ov.dt.value_or(0.01);
  const double tau = 10.0 * ov.tau_scale;
  const CMat raw = weights::synfire(100).cast<cplx>();
  const CMat w = weights::sustain_leading_oscillation(raw);
  const CMat v = weights::sustained_basis(w);
  const NetworkSpec spec = delay_network(w, v, RVec::Constant(100, tau), v.adjoint());

  SimulateOptions opts;
  opts.record_every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(1.0 / dt)));
  const Trajectory tr = simulate(spec, delay_input(tl, fig5_target()), 0.0, tl.duration, dt,
                                 SimState::zeros(100), opts);

  ScenarioResult r;
  r.name = "fig5";
  r.description = "periodic sequential activity with 100-neuron synfire-chain weights";
  r.table = io::trajectory_table(tr, readout_columns(tr));
  r.plot_title = "fig5: responses Re(y), neurons 0-4";
  add_y_plot(r, tr.times, tr.y, 5);

  const CVec raw_eig = sorted_eigenvalues(raw);
  r.assertions.push_back(detail::at_most("top-pair-imaginary-part", std::abs(std::abs(raw_eig[1].imag()) - 0.0628),
                                         5e-4, "|Im| of the leading oscillatory eigenvalue pair"));
  r.assertions.push_back(detail::holds("sustained-pair-dimension", v.cols() == 2,
                                       "eigenvalues with real part 1: " + std::to_string(v.cols())));
  if (covers(tr.times, tl.end_on)) {
    r.assertions.push_back(detail::at_most("magnitude-readout-constant",
                                           max_magnitude_drift(tr, v, tl.target_off, tl.end_on), 1e-3,
                                           "max change of |V^H y| over the delay"));
    const auto series = real_series(tr, 0, tl.target_off, tl.end_on);
    const auto spec_s = signal::amplitude_spectrum(series, tr.dt);
    const double peak = signal::spectral_peaks(spec_s, 1).at(0).freq_hz;
    const auto predicted = oscillation_frequencies(effective_matrix(w, spec.tau_y));
    const double want = predicted.empty() ? 0.0 : predicted.back();
    r.assertions.push_back(detail::at_most("oscillation-near-1-hz", std::abs(peak - 1.0), spec_s.bin_hz,
                                           "FFT peak " + io::format_double(peak).substr(0, 7) + " Hz"));
    r.assertions.push_back(detail::at_most("fft-matches-eigenvalue", std::abs(peak - want), spec_s.bin_hz,
                                           "predicted " + io::format_double(want).substr(0, 7) + " Hz"));
  } else {
    r.assertions.push_back(detail::holds("magnitude-readout-constant", false, "run ends before the delay ends"));
  }
  return r;
}

// ----------------------------------------------------------------- fig6 --

inline CMat fig6_matrix(std::uint64_t seed) {
  return weights::random_spectral({100, 10, 0.05, seed});
}

inline CVec random_input(std::size_t k, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> g(0.0, 1.0);
  CVec x(static_cast<Eigen::Index>(k));
  for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = g(rng);
  return x;
}

inline ScenarioResult run_fig6(const Overrides& ov) {
  DelayTimeline tl;
  tl.duration = ov.duration.value_or(tl.duration);
  const double dt = ov.dt.value_or(0.01);
  const std::uint64_t seed = ov.seed.value_or(1);
  const CMat w = fig6_matrix(seed);
  const CMat v = weights::sustained_basis(w, 1e-8);
  const CVec x0 = random_input(10, seed);
  const NetworkSpec spec = delay_network(w, v, RVec::Constant(100, 10.0 * ov.tau_scale), v.adjoint());

  SimulateOptions opts;
  opts.record_every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(1.0 / dt)));
  const Trajectory tr = simulate(spec, delay_input(tl, x0), 0.0, tl.duration, dt, SimState::zeros(100), opts);

  ScenarioResult r;
  r.name = "fig6";
  r.description = "complex dynamics with random complex spectrum, 10 sustained dimensions";
  r.table = io::trajectory_table(tr, readout_columns(tr));
  r.plot_title = "fig6: responses Re(y), neurons 0-4";
  add_y_plot(r, tr.times, tr.y, 5);

  int unit = 0;
  const CVec eig = sorted_eigenvalues(w);
  for (Eigen::Index i = 0; i < eig.size(); ++i) unit += std::abs(eig[i].real() - 1.0) < 1e-8 ? 1 : 0;
  r.assertions.push_back(detail::holds("ten-unit-eigenvalues", unit == 10, "count=" + std::to_string(unit)));
  if (covers(tr.times, tl.end_on)) {
    r.assertions.push_back(detail::at_most("magnitude-readout-constant",
                                           max_magnitude_drift(tr, v, tl.target_off, tl.end_on), 1e-2,
                                           "max change of |V^H y| over a 2 s delay"));
  } else {
    r.assertions.push_back(detail::holds("magnitude-readout-constant", false, "run ends before the delay ends"));
  }
  return r;
}

// ----------------------------------------------------------------- fig7 --

struct EiOutcome {
  Trajectory traj;
  SpectralReport report;
  double fft_peak_hz = 0.0;
  double bin_hz = 0.0;
};

inline EiOutcome run_ei_pair(const RVec& tau_y, double dt, const DelayTimeline& tl) {
  const CMat w = weights::ei_pair().cast<cplx>();
  const CMat enc = (CMat(2, 1) << 1.0, 0.0).finished();
  const NetworkSpec spec = delay_network(w, enc, tau_y, CMat::Identity(2, 2));
  const CVec target = (CVec(1) << 1.0).finished();
  EiOutcome out;
  out.traj = simulate(spec, delay_input(tl, target), 0.0, tl.duration, dt, SimState::zeros(2));
  out.report = analyze(w, tau_y);
  if (covers(out.traj.times, tl.end_on)) {
    const auto series = real_series(out.traj, 0, tl.target_off, tl.end_on);
    const auto s = signal::amplitude_spectrum(series, out.traj.dt);
    out.fft_peak_hz = signal::spectral_peaks(s, 1).at(0).freq_hz;
    out.bin_hz = s.bin_hz;
  }
  return out;
}

inline ScenarioResult ei_result(const std::string& name, const std::string& desc, const EiOutcome& o) {
  ScenarioResult r;
  r.name = name;
  r.description = desc;
  r.table = io::trajectory_table(o.traj);
  r.plot_title = name + ": E and I responses";
  add_y_plot(r, o.traj.times, o.traj.y, 2);
  r.plot[0].label = "E";
  r.plot[1].label = "I";
  return r;
}

inline ScenarioResult run_fig7_oscillating(const std::string& name, double tau_e, double tau_i, double expected_hz,
                                           const Overrides& ov) {
  DelayTimeline tl;
  tl.duration = ov.duration.value_or(tl.duration);
  const RVec tau = (RVec(2) << tau_e, tau_i).finished() * ov.tau_scale;
  const EiOutcome o = run_ei_pair(tau, ov.dt.value_or(0.1), tl);
  ScenarioResult r = ei_result(name, "E:I pair with tau = (" + io::format_double(tau[0]) + ", " +
                                         io::format_double(tau[1]) + ") ms, stable oscillation",
                               o);
  r.assertions.push_back(detail::holds("stable-oscillation", o.report.stability == Stability::stable_oscillation,
                                       to_string(o.report.stability)));
  const double predicted = o.report.frequencies_hz.empty() ? 0.0 : o.report.frequencies_hz.front();
  r.assertions.push_back(detail::at_most("predicted-frequency", std::abs(predicted - expected_hz / ov.tau_scale),
                                         0.01, "predicted " + io::format_double(predicted).substr(0, 7) + " Hz"));
  if (o.bin_hz > 0.0) {
    r.assertions.push_back(detail::at_most("fft-peak-matches", std::abs(o.fft_peak_hz - predicted), 0.5,
                                           "FFT peak " + io::format_double(o.fft_peak_hz).substr(0, 7) + " Hz"));
  } else {
    r.assertions.push_back(detail::holds("fft-peak-matches", false, "run ends before the delay ends"));
  }
  return r;
}

inline ScenarioResult run_fig7(const Overrides& ov) {
  return run_fig7_oscillating("fig7", 10.0, 12.5, 1000.0 * std::sqrt(0.006) / (2.0 * std::numbers::pi), ov);
}

inline ScenarioResult run_fig7c(const Overrides& ov) {
  return run_fig7_oscillating("fig7c", 20.0, 25.0, 500.0 * std::sqrt(0.006) / (2.0 * std::numbers::pi), ov);
}

inline ScenarioResult run_fig7a(const Overrides& ov) {
  DelayTimeline tl;
  tl.duration = ov.duration.value_or(tl.duration);
  const RVec tau = RVec::Constant(2, 10.0 * ov.tau_scale);
  const EiOutcome o = run_ei_pair(tau, ov.dt.value_or(0.1), tl);
  ScenarioResult r = ei_result("fig7a", "E:I pair with equal time constants, damped oscillation", o);
  r.assertions.push_back(detail::holds("decaying", o.report.stability == Stability::decaying,
                                       to_string(o.report.stability)));
  const double from = 1200.0;
  if (covers(o.traj.times, tl.end_on)) {
    const auto series = real_series(o.traj, 0, from, tl.end_on);
    const auto peaks = signal::local_maxima(series);
    bool decreasing = peaks.size() >= 2;
    for (std::size_t i = 1; i < peaks.size(); ++i) decreasing = decreasing && series[peaks[i]] < series[peaks[i - 1]];
    r.assertions.push_back(detail::holds("envelope-decreasing", decreasing,
                                         std::to_string(peaks.size()) + " local maxima after 1200 ms"));
  } else {
    r.assertions.push_back(detail::holds("envelope-decreasing", false, "run ends before the delay ends"));
  }
  return r;
}

// Doubling every tau_y halves the oscillation frequency.
inline ScenarioResult run_fig7_warp(const Overrides& ov) {
  DelayTimeline tl;
  tl.duration = ov.duration.value_or(tl.duration);
  const double dt = ov.dt.value_or(0.1);
  const RVec tau = (RVec(2) << 10.0, 12.5).finished() * ov.tau_scale;
  const EiOutcome base = run_ei_pair(tau, dt, tl);
  const EiOutcome slow = run_ei_pair(2.0 * tau, dt, tl);
  ScenarioResult r = ei_result("fig7-warp", "time-warp: E:I pair with all time constants doubled", slow);
  if (base.bin_hz > 0.0) {
    r.assertions.push_back(detail::at_most("fft-peak-halves", std::abs(slow.fft_peak_hz - 0.5 * base.fft_peak_hz),
                                           slow.bin_hz,
                                           "peaks " + io::format_double(base.fft_peak_hz).substr(0, 7) + " -> " +
                                               io::format_double(slow.fft_peak_hz).substr(0, 7) + " Hz"));
    const double f0 = base.report.frequencies_hz.empty() ? 0.0 : base.report.frequencies_hz.front();
    const double f1 = slow.report.frequencies_hz.empty() ? 0.0 : slow.report.frequencies_hz.front();
    r.assertions.push_back(detail::at_most("predicted-frequency-halves", std::abs(f1 - 0.5 * f0), 1e-12));
  } else {
    r.assertions.push_back(detail::holds("fft-peak-halves", false, "run ends before the delay ends"));
  }
  return r;
}

// ----------------------------------------------------------------- fig8 --

inline ScenarioResult run_fig8(const Overrides& ov) {
  DelayTimeline tl;
  tl.duration = ov.duration.value_or(tl.duration);
  const double dt = ov.dt.value_or(0.1);
  const std::uint64_t seed = ov.seed.value_or(1);
  const CMat w = fig6_matrix(seed);
  const CMat v = weights::sustained_basis(w, 1e-8);
  const CMat identity = CMat::Identity(100, 100);
  const NetworkSpec spec = delay_network(w, identity, RVec::Constant(100, 10.0 * ov.tau_scale), v.adjoint());

  SimulateOptions opts;
  opts.record_every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(1.0 / dt)));
  auto run = [&](const CVec& x) {
    return simulate(spec, delay_input(tl, x), 0.0, tl.duration, dt, SimState::zeros(100), opts);
  };
  const Trajectory ta = run(v.col(0));
  const Trajectory tb = run(v.col(1));
  const Trajectory tc = run(v.col(0) + v.col(1));

  double diff = 0.0;
  for (std::size_t i = 0; i < tc.size(); ++i) diff = std::max(diff, (tc.y[i] - ta.y[i] - tb.y[i]).cwiseAbs().maxCoeff());

  ScenarioResult r;
  r.name = "fig8";
  r.description = "signal generators: single-eigenvector drives and their sum";
  r.table = io::trajectory_table(tc, readout_columns(tc));
  r.plot_title = "fig8: responses Re(y) to the summed drive, neurons 0-4";
  add_y_plot(r, tc.times, tc.y, 5);
  r.assertions.push_back(detail::at_most("response-superposition", diff, 1e-8,
                                         "max |y(x1 + x2) - y(x1) - y(x2)|"));
  return r;
}

// ----------------------------------------------------------------- fig9 --

inline ScenarioResult run_fig9(const Overrides& ov) {
  DelayTimeline tl;
  tl.duration = ov.duration.value_or(tl.duration);
  const double dt = ov.dt.value_or(0.01);
  const NetworkSpec spec = fig2_network(ov.tau_scale);
  const circuit::CircuitParams p;
  const auto in_c = delay_input(tl, fig2_target());
  const circuit::CircuitInputFn real_in = [&](double t) { return RVec(in_c(t).real()); };

  circuit::CircuitOptions opts;
  opts.record_every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(1.0 / dt)));
  const circuit::CircuitTrajectory tr = circuit::simulate_circuit(spec, p, real_in, 0.0, tl.duration, dt,
                                                                  circuit::CircuitState::zeros(8), opts);

  ScenarioResult r;
  r.name = "fig9";
  r.description = "equivalent-circuit implementation of the fig2 network";
  {
    std::vector<CVec> y;
    std::vector<RVec> a, b;
    std::vector<io::ExtraColumn> extra;
    const char* names[] = {"v_plus", "v_minus", "va_plus", "va_minus", "vb_plus", "vb_minus"};
    for (const char* nm : names)
      for (int j = 0; j < 8; ++j) extra.push_back({std::string(nm) + "_" + std::to_string(j), {}});
    for (const auto& s : tr.states) {
      y.push_back(s.y().cast<cplx>());
      a.push_back(s.a);
      b.push_back(s.b);
      const RVec* parts[] = {&s.v_plus, &s.v_minus, &s.va_plus, &s.va_minus, &s.vb_plus, &s.vb_minus};
      for (int c = 0; c < 6; ++c)
        for (int j = 0; j < 8; ++j) extra[static_cast<std::size_t>(c * 8 + j)].values.push_back((*parts[c])[j]);
    }
    r.table = io::trajectory_table(tr.times, y, a, b, extra);
    r.plot_title = "fig9: circuit responses y+ - y-";
    add_y_plot(r, tr.times, y);
  }

  // Delay-period steady state with no modulation is the recurrent drive.
  const double s_vs = circuit::steady_state_vs(p, 0.7, 0.3, 0.0, 0.0);
  r.assertions.push_back(detail::holds("delay-steady-state-identity",
                                       s_vs == 0.3 && circuit::total_conductance(p, 0.0, 0.0) == 1.0));

  double both_on = 0.0;
  for (const auto& s : tr.states) both_on = std::max(both_on, s.v_plus.cwiseMin(s.v_minus).maxCoeff());
  r.assertions.push_back(detail::at_most("on-off-complementary", both_on, 1e-12, "max min(v+, v-)"));

  // Input period: somatic potential against the closed form with the
  // circuit's own recurrent drive and modulators.
  const double t_in = tl.cue_off - 10.0;
  if (covers(tr.times, t_in)) {
    const auto& s = tr.states[tr.index_at(t_in)];
    const RVec z = (spec.w_zx * in_c(t_in)).real();
    const RVec yhat = (spec.w_yy.real() * s.y());
    double err = 0.0;
    for (Eigen::Index j = 0; j < 8; ++j)
      err = std::max(err, std::abs(s.v_plus[j] - circuit::steady_state_vs(p, z[j], yhat[j], rectify(s.a[j]),
                                                                            rectify(s.b[j]))));
    r.assertions.push_back(detail::at_most("input-period-steady-state", err, 1e-3,
                                           "|v - steady_state_vs| just before the start cue ends"));
  }

  // Delay: rate model started from the circuit state after a 10 tau settling window.
  const double tau_c = p.C * p.R_a;
  const double t_s = tl.target_off + 10.0 * tau_c;
  if (covers(tr.times, tl.end_on)) {
    const std::size_t i_s = tr.index_at(t_s);
    SimState init = SimState::zeros(8, t_s);
    init.y = tr.states[i_s].y().cast<cplx>();
    SimulateOptions ro;
    ro.record_every = opts.record_every;
    const Trajectory rate =
        simulate(spec, delay_input(tl, fig2_target()), tr.times[i_s], tl.end_on, dt, init, ro);
    double err = 0.0;
    for (std::size_t k = 0; k < rate.size(); ++k)
      err = std::max(err, (rate.y[k].real() - tr.states[i_s + k].y()).cwiseAbs().maxCoeff());
    r.assertions.push_back(detail::at_most("delay-matches-rate-model", err, 1e-3,
                                           "max |(y+ - y-) - y_rate| after a 10 tau window"));
    const RVec readout = (spec.w_ry * tr.states[tr.index_at(0.5 * (t_s + tl.end_on))].y().cast<cplx>()).real();
    const RVec target = fig2_target().real();
    const double cross = std::abs(readout[0] * target[1] - readout[1] * target[0]) / readout.norm();
    r.assertions.push_back(detail::at_most("delay-readout-direction", cross, 1e-3,
                                           "sine of the angle between readout and target"));
  } else {
    r.assertions.push_back(detail::holds("delay-matches-rate-model", false, "run ends before the delay ends"));
  }
  return r;
}

// ---------------------------------------------------------------- fig10 --

struct PredictionConfig {
  std::vector<double> freqs_hz{0.0, 1.0, 2.0, 4.0, 8.0, 16.0};
  double tau_y = 10.0;
  double t0 = -3000.0;
  double horizon = 3000.0;
  double reset_at = 2500.0;
  double modulator = 0.01;
  double dt = 1e-4;
  double record_ms = 1.0;
};

inline prediction::PredictorSpec fig10_predictor(const PredictionConfig& cfg) {
  prediction::PredictorSpec ps;
  ps.freqs_hz = Eigen::Map<const RVec>(cfg.freqs_hz.data(), static_cast<Eigen::Index>(cfg.freqs_hz.size()));
  ps.tau_y = cfg.tau_y;
  ps.mode = prediction::CompetitionMode::real_sum;
  ps.schedule.segments = {{cfg.t0, cfg.modulator, cfg.modulator}, {0.0, 0.0, 0.0}, {cfg.reset_at, 1.0, 0.0}};
  return ps;
}

inline double fig10_input(double t) {
  if (t > 0.0) return 0.0;
  const double s = t / 1000.0;
  return std::sin(2.0 * std::numbers::pi * 2.0 * s) + std::sin(2.0 * std::numbers::pi * 8.0 * s);
}

inline ScenarioResult run_fig10(const Overrides& ov) {
  PredictionConfig cfg;
  cfg.dt = ov.dt.value_or(cfg.dt);
  cfg.horizon = ov.duration.value_or(cfg.horizon);
  cfg.tau_y *= ov.tau_scale;
  const auto ps = fig10_predictor(cfg);
  const auto every = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.record_ms / cfg.dt)));
  const prediction::PredictionResult res = prediction::predict_series(ps, fig10_input, cfg.t0, cfg.horizon, cfg.dt, every);

  ScenarioResult r;
  r.name = "fig10";
  r.description = "time-series prediction with six oscillator channels (0, 1, 2, 4, 8, 16 Hz)";
  {
    std::vector<RVec> a, b;
    const auto n = ps.n_channels();
    for (std::size_t k = 0; k < res.times.size(); ++k) {
      a.push_back(RVec::Constant(n, res.a[k]));
      b.push_back(RVec::Constant(n, res.b[k]));
    }
    r.table = io::trajectory_table(res.times, res.y, a, b,
                                   {{"x", res.x}, {"sum_re_y", res.sum_re}, {"sum_im_y", res.sum_im}});
  }
  r.plot_title = "fig10: input and summed prediction";
  r.plot.push_back({"input", res.times, res.x});
  r.plot.push_back({"sum Re(y)", res.times, res.sum_re});
  r.plot.push_back({"sum Im(y)", res.times, res.sum_im});

  const std::size_t i0 = res.index_at(0.0);
  if (!covers(res.times, 1000.0)) {
    r.assertions.push_back(detail::holds("prediction-spectrum", false, "run ends before 1000 ms"));
    return r;
  }
  const std::size_t i1 = res.index_at(1000.0);

  // Two dominant components of the continuation.
  std::vector<double> cont(res.sum_re.begin() + static_cast<std::ptrdiff_t>(i0 + 1),
                           res.sum_re.begin() + static_cast<std::ptrdiff_t>(i1 + 1));
  const auto s = signal::amplitude_spectrum(cont, res.dt);
  const auto peaks = signal::spectral_peaks(s, 2);
  double err = peaks.size() < 2 ? INFINITY : 0.0;
  if (peaks.size() == 2) {
    const double lo = std::min(peaks[0].freq_hz, peaks[1].freq_hz);
    const double hi = std::max(peaks[0].freq_hz, peaks[1].freq_hz);
    err = std::max(std::abs(lo - 2.0), std::abs(hi - 8.0));
  }
  r.assertions.push_back(detail::at_most(
      "prediction-peaks-2-and-8-hz", err, s.bin_hz,
      peaks.size() == 2 ? "peaks " + io::format_double(peaks[0].freq_hz).substr(0, 6) + ", " +
                              io::format_double(peaks[1].freq_hz).substr(0, 6) + " Hz"
                        : "fewer than two peaks"));

  // Channels driven at the input frequencies carry the largest responses.
  const RVec mag0 = res.y[i0].cwiseAbs();
  bool dominant = true;
  for (Eigen::Index j = 0; j < mag0.size(); ++j)
    if (j != 2 && j != 4) dominant = dominant && mag0[j] < std::min(mag0[2], mag0[4]);
  r.assertions.push_back(detail::holds("2-and-8-hz-channels-dominate", dominant));

  double drift = 0.0;
  for (std::size_t i = i0; i <= i1; ++i) drift = std::max(drift, (res.y[i].cwiseAbs() - mag0).cwiseAbs().maxCoeff());
  r.assertions.push_back(detail::at_most("free-run-magnitude-conserved", drift, 1e-4,
                                         "max change of |y_j| over the first free-run second"));

  const double reset_check = cfg.reset_at + 20.0 * cfg.tau_y;
  if (covers(res.times, reset_check)) {
    r.assertions.push_back(detail::at_most("reset-within-20-tau", res.y[res.index_at(reset_check)].cwiseAbs().maxCoeff(),
                                           1e-3, "max |y| 20 tau after a is set to 1"));
  }
  return r;
}

// ------------------------------------------------------------- registry --

struct ScenarioInfo {
  std::string name;
  std::string summary;
  std::function<ScenarioResult(const Overrides&)> run;
};

inline const std::vector<ScenarioInfo>& registry() {
  static const std::vector<ScenarioInfo> r = {
      {"fig2", "sustained delay-period activity", run_fig2},
      {"fig2-robust", "encoder with an orthogonal extra component", run_fig2_robust},
      {"fig3", "batch energy minimisation of the fig2 task", run_fig3},
      {"fig4", "double-step saccade manipulation", run_fig4},
      {"fig5", "synfire-chain periodic activity", run_fig5},
      {"fig6", "random complex spectrum, 10 sustained dimensions", run_fig6},
      {"fig7", "E:I pair, tau = (10, 12.5) ms", run_fig7},
      {"fig7a", "E:I pair, tau = (10, 10) ms", run_fig7a},
      {"fig7c", "E:I pair, tau = (20, 25) ms", run_fig7c},
      {"fig7-warp", "E:I pair time-warp", run_fig7_warp},
      {"fig8", "linear superposition of eigenvector drives", run_fig8},
      {"fig9", "equivalent-circuit implementation", run_fig9},
      {"fig10", "time-series prediction", run_fig10},
  };
  return r;
}

inline std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& s : registry()) out.push_back(s.name);
  return out;
}

inline ScenarioResult run_scenario(const std::string& name, const Overrides& ov = {}) {
  if (ov.dt && !(*ov.dt > 0.0)) throw ParameterError("dt must be positive");
  if (ov.duration && !(*ov.duration > 0.0)) throw ParameterError("duration must be positive");
  if (!(ov.tau_scale > 0.0)) throw ParameterError("tau scale must be positive");
  for (const auto& s : registry())
    if (s.name == name) return s.run(ov);
  throw UnknownScenarioError("unknown scenario '" + name + "'");
}

}  // namespace organics::scenarios
