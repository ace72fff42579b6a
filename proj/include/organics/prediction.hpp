#pragma once

// Predictive variant: a bank of complex oscillator channels that compete to
// reproduce a scalar input while it is present and keep oscillating once it
// stops, extrapolating the signal forward in time.

#include "organics/core.hpp"
#include "organics/weights.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace organics::prediction {

// How the competition term couples the channels.
enum class CompetitionMode {
  real_sum,     // beta (y_j - sum_k Re y_k), for real-valued input
  complex_sum,  // -beta sum_{k != j} y_k, for complex-valued input
};

// Piecewise-constant modulators shared by all channels. Each segment holds
// from its start time until the next segment starts.
struct ModulatorSchedule {
  struct Segment {
    double t_start;
    double a;
    double b;
  };
  std::vector<Segment> segments;

  std::pair<double, double> at(double t) const {
    double a = 0.0, b = 0.0;
    for (const auto& s : segments) {
      if (s.t_start <= t + 1e-9) {
        a = s.a;
        b = s.b;
      } else {
        break;
      }
    }
    return {a, b};
  }
};

struct PredictorSpec {
  RVec freqs_hz;
  double tau_y = 10.0;
  CompetitionMode mode = CompetitionMode::real_sum;
  ModulatorSchedule schedule;

  Eigen::Index n_channels() const { return freqs_hz.size(); }

  CVec weights() const {
    return weights::diagonal_oscillators(freqs_hz, tau_y).diagonal();
  }

  void validate() const {
    if (freqs_hz.size() == 0) throw ParameterError("predictor: need at least one frequency");
    if (!(tau_y > 0.0)) throw ParameterError("predictor: tau_y must be positive");
    for (Eigen::Index i = 0; i < freqs_hz.size(); ++i) {
      if (!(freqs_hz[i] >= 0.0)) throw ParameterError("predictor: frequencies must be non-negative");
      for (Eigen::Index k = 0; k < i; ++k)
        if (freqs_hz[i] == freqs_hz[k]) throw ParameterError("predictor: frequencies must be distinct");
    }
    for (std::size_t i = 1; i < schedule.segments.size(); ++i)
      if (!(schedule.segments[i].t_start > schedule.segments[i - 1].t_start))
        throw ParameterError("predictor: schedule segments must be increasing in time");
  }
};

// Right-hand side of tau_y dy_j/dt for every channel.
inline CVec prediction_drive(const PredictorSpec& ps, const CVec& w, const CVec& y, cplx x,
                             double a, double b) {
  const double beta = input_gain(b);
  const double rg = 1.0 / (1.0 + rectify(a));
  const cplx total = y.sum();
  const double total_re = total.real();
  CVec out(y.size());
  for (Eigen::Index j = 0; j < y.size(); ++j) {
    const cplx comp = ps.mode == CompetitionMode::real_sum ? beta * (y[j] - total_re)
                                                           : -beta * (total - y[j]);
    out[j] = -y[j] + beta * x + rg * w[j] * y[j] + comp;
  }
  return out;
}

inline CVec prediction_step(const PredictorSpec& ps, const CVec& y, cplx x, double a, double b,
                            double dt) {
  detail::require_dims(y.size() == ps.n_channels(), "prediction_step: state length != channels");
  CVec next = y + (dt / ps.tau_y) * prediction_drive(ps, ps.weights(), y, x, a, b);
  if (!next.allFinite()) throw NonFiniteError("prediction_step: non-finite response");
  return next;
}

// Impulse response of channel j alone with the modulators frozen at (a, b).
inline std::vector<cplx> predictive_basis(const PredictorSpec& ps, Eigen::Index j, double horizon_ms,
                                          double dt, double a, double b) {
  if (j < 0 || j >= ps.n_channels()) throw DimensionError("predictive_basis: channel out of range");
  if (!(dt > 0.0) || !(horizon_ms > 0.0)) throw ParameterError("predictive_basis: dt and horizon must be positive");
  const cplx w = ps.weights()[j];
  const double rg = 1.0 / (1.0 + rectify(a));
  const double beta = input_gain(b);
  const auto steps = static_cast<std::size_t>(std::llround(horizon_ms / dt));
  std::vector<cplx> out;
  out.reserve(steps + 1);
  cplx y = 1.0;
  for (std::size_t k = 0; k <= steps; ++k) {
    out.push_back(y);
    // A lone channel competes only with its own real part in real mode.
    const cplx comp = ps.mode == CompetitionMode::real_sum ? beta * (y - y.real()) : cplx(0.0);
    y += (dt / ps.tau_y) * (-y + rg * w * y + comp);
  }
  return out;
}

struct PredictionResult {
  double dt = 1.0;  // recording interval
  std::vector<double> times;
  std::vector<double> x;
  std::vector<CVec> y;
  std::vector<double> a, b;
  std::vector<double> sum_re;  // sum_j Re y_j
  std::vector<double> sum_im;  // sum_j Im y_j

  std::size_t index_at(double t) const {
    if (times.empty()) return 0;
    const double k = std::ceil((t - times.front()) / dt - 1e-9);
    if (k <= 0) return 0;
    return std::min<std::size_t>(static_cast<std::size_t>(k), times.size() - 1);
  }
};

// Runs the bank from t0 (zero responses) to horizon_ms with the schedule's
// modulators and input x(t).
inline PredictionResult predict_series(const PredictorSpec& ps, const std::function<double(double)>& x_fn,
                                       double t0, double horizon_ms, double dt,
                                       std::size_t record_every = 1) {
  ps.validate();
  if (!(horizon_ms > t0)) throw ParameterError("predict_series: horizon must exceed t0");
  if (!(dt > 0.0)) throw ParameterError("predict_series: dt must be positive");
  const auto steps = static_cast<std::size_t>(std::llround((horizon_ms - t0) / dt));
  const std::size_t every = std::max<std::size_t>(1, record_every);
  const auto n = static_cast<std::size_t>(ps.n_channels());
  const CVec wv = ps.weights();
  const std::vector<cplx> w(wv.data(), wv.data() + n);
  const bool real_mode = ps.mode == CompetitionMode::real_sum;
  const double k_dt = dt / ps.tau_y;

  PredictionResult res;
  res.dt = dt * static_cast<double>(every);
  std::vector<cplx> y(n, cplx(0.0)), dy(n);
  for (std::size_t k = 0;; ++k) {
    const double t = t0 + static_cast<double>(k) * dt;
    const double x = x_fn(t);
    const auto [a, b] = ps.schedule.at(t);
    cplx total(0.0);
    for (const cplx& v : y) total += v;
    if (k % every == 0) {
      res.times.push_back(t);
      res.x.push_back(x);
      res.y.push_back(Eigen::Map<const CVec>(y.data(), static_cast<Eigen::Index>(n)));
      res.a.push_back(a);
      res.b.push_back(b);
      res.sum_re.push_back(total.real());
      res.sum_im.push_back(total.imag());
    }
    if (k == steps) break;
    const double beta = input_gain(b);
    const double rg = 1.0 / (1.0 + rectify(a));
    for (std::size_t j = 0; j < n; ++j) {
      const cplx comp = real_mode ? beta * (y[j] - total.real()) : -beta * (total - y[j]);
      dy[j] = k_dt * (-y[j] + beta * x + rg * w[j] * y[j] + comp);
    }
    for (std::size_t j = 0; j < n; ++j) {
      y[j] += dy[j];
      if (!std::isfinite(y[j].real()) || !std::isfinite(y[j].imag()))
        throw NonFiniteError("predict_series: non-finite response at t = " + std::to_string(t) + " ms", t);
    }
  }
  return res;
}

}  // namespace organics::prediction
