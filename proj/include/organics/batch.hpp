#pragma once

// Batch minimisation of the energy over a whole trajectory by alternating
// forward passes (drives and modulators from the current responses) and
// backward passes (one gradient step on every instant).

#include "organics/core.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace organics::batch {

class DivergenceError : public Error {
 public:
  DivergenceError(const std::string& what, std::size_t iteration)
      : Error(what), iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

struct BatchProblem {
  NetworkSpec spec;
  std::vector<CVec> x_series;  // one input sample per instant
  double dt = 1.0;
  double r = 0.01;             // learning rate
  std::size_t max_iters = 10000;
  double tolerance = 1e-8;     // on max |gradient|
  // Optional frozen modulators (alpha, b per instant). When absent they are
  // integrated from the a/b weights and alpha is recovered from (a, b).
  std::optional<std::vector<RVec>> frozen_alpha;
  std::optional<std::vector<RVec>> frozen_b;

  void validate() const {
    spec.validate();
    if (!(r >= 0.0)) throw ParameterError("batch: learning rate must be >= 0");
    if (!(dt > 0.0)) throw ParameterError("batch: dt must be positive");
    if (x_series.empty()) throw DimensionError("batch: empty input series");
    for (const auto& x : x_series)
      detail::require_dims(x.size() == spec.n_inputs(), "batch: input sample length != M");
    if (frozen_alpha) detail::require_dims(frozen_alpha->size() == x_series.size(), "batch: alpha series length");
    if (frozen_b) detail::require_dims(frozen_b->size() == x_series.size(), "batch: b series length");
  }
};

struct ForwardOutputs {
  std::vector<CVec> z;
  std::vector<RVec> a;  // integrated a series (zero when alpha is frozen)
  std::vector<CVec> yhat;
  std::vector<RVec> alpha;
  std::vector<RVec> b;
};

// yhat(t) uses y(t - dt), with zero responses before the first instant.
inline ForwardOutputs forward_pass(const BatchProblem& prob, const std::vector<CVec>& y) {
  const auto& s = prob.spec;
  const std::size_t len = prob.x_series.size();
  const auto n = s.n_neurons();
  detail::require_dims(y.size() == len, "forward_pass: y series length != input length");

  ForwardOutputs f;
  f.z.reserve(len);
  f.yhat.reserve(len);
  f.alpha.reserve(len);
  f.b.reserve(len);
  f.a.reserve(len);
  RVec a = RVec::Zero(n);
  RVec b = RVec::Zero(n);
  for (std::size_t t = 0; t < len; ++t) {
    detail::require_dims(y[t].size() == n, "forward_pass: y sample length != N");
    f.z.push_back(input_drive(s, prob.x_series[t]));
    f.yhat.push_back(t == 0 ? CVec(s.c_yhat) : recurrent_drive(s, y[t - 1]));

    RVec alpha(n);
    for (Eigen::Index j = 0; j < n; ++j) alpha[j] = alpha_from_ab(a[j], b[j]);
    f.a.push_back(a);
    f.alpha.push_back(prob.frozen_alpha ? (*prob.frozen_alpha)[t] : alpha);
    f.b.push_back(prob.frozen_b ? (*prob.frozen_b)[t] : b);

    const RVec x_re = prob.x_series[t].real();
    const RVec y_re = y[t].real();
    const RVec da = (prob.dt / s.tau_a) * (-a + s.w_ax * x_re + s.w_ay * y_re + s.c_a);
    const RVec db = (prob.dt / s.tau_b) * (-b + s.w_bx * x_re + s.w_by * y_re + s.c_b);
    a += da;
    b += db;
  }
  return f;
}

// Per-instant gradient beta (y - z) + (1 - beta)(y - yhat/(1 + alpha+)).
inline std::vector<CVec> gradient(const std::vector<CVec>& y, const ForwardOutputs& f) {
  std::vector<CVec> g(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) {
    g[t].resize(y[t].size());
    for (Eigen::Index j = 0; j < y[t].size(); ++j) {
      const double beta = input_gain(f.b[t][j]);
      const double ap = rectify(f.alpha[t][j]);
      g[t][j] = beta * (y[t][j] - f.z[t][j]) + (1.0 - beta) * (y[t][j] - f.yhat[t][j] / (1.0 + ap));
    }
  }
  return g;
}

inline std::vector<CVec> backward_pass(const BatchProblem& prob, const std::vector<CVec>& y,
                                       const ForwardOutputs& f) {
  const auto g = gradient(y, f);
  std::vector<CVec> out(y.size());
  for (std::size_t t = 0; t < y.size(); ++t) {
    out[t] = y[t] - prob.r * g[t];
    if (!out[t].allFinite())
      throw NonFiniteError("backward_pass: non-finite response", static_cast<double>(t) * prob.dt);
  }
  return out;
}

inline double batch_energy(const BatchProblem& prob, const std::vector<CVec>& y,
                           const ForwardOutputs& f) {
  double e = 0.0;
  for (std::size_t t = 0; t < y.size(); ++t) e += instant_energy(y[t], f.z[t], f.yhat[t], f.alpha[t], f.b[t]);
  return 0.5 * prob.dt * e;
}

struct BatchResult {
  std::vector<CVec> y;
  std::vector<double> energy_history;  // energy before each backward pass
  std::size_t iterations = 0;
  bool converged = false;
};

// Alternates passes until max |gradient| < tolerance or max_iters. Throws
// DivergenceError when the energy grows on 10 consecutive iterations.
inline BatchResult solve(const BatchProblem& prob, std::vector<CVec> y) {
  prob.validate();
  detail::require_dims(y.size() == prob.x_series.size(), "solve: init length != input length");

  BatchResult res;
  std::size_t growth = 0;
  for (std::size_t it = 0; it < prob.max_iters; ++it) {
    const ForwardOutputs f = forward_pass(prob, y);
    const double e = batch_energy(prob, y, f);
    if (!std::isfinite(e)) throw NonFiniteError("solve: energy is not finite");
    if (!res.energy_history.empty() && e > res.energy_history.back()) {
      if (++growth >= 10)
        throw DivergenceError("solve: energy grew on 10 consecutive iterations, last at iteration " +
                                  std::to_string(it),
                              it);
    } else {
      growth = 0;
    }
    res.energy_history.push_back(e);

    const auto g = gradient(y, f);
    double gmax = 0.0;
    for (const auto& gt : g) gmax = std::max(gmax, gt.cwiseAbs().maxCoeff());
    res.iterations = it;
    if (gmax < prob.tolerance) {
      res.converged = true;
      break;
    }
    for (std::size_t t = 0; t < y.size(); ++t) y[t] -= prob.r * g[t];
    res.iterations = it + 1;
  }
  res.y = std::move(y);
  return res;
}

inline BatchResult solve(const BatchProblem& prob) {
  return solve(prob, std::vector<CVec>(prob.x_series.size(), CVec::Zero(prob.spec.n_neurons())));
}

}  // namespace organics::batch
