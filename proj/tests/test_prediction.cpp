#include <organics/dynamics.hpp>
#include <organics/prediction.hpp>
#include <organics/signal.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace organics;
using namespace organics::prediction;

namespace {

constexpr double pi = std::numbers::pi;

PredictorSpec bank(std::vector<double> f, CompetitionMode mode = CompetitionMode::real_sum) {
  PredictorSpec ps;
  ps.freqs_hz = Eigen::Map<const RVec>(f.data(), static_cast<Eigen::Index>(f.size()));
  ps.mode = mode;
  return ps;
}

// Neuron j's summand of the prediction energy (real case), yhat held fixed:
// beta [sum_k y_k - x]^2 + (1 - beta) [y_j - yhat_j/(1+alpha)]^2.
double summand(const std::vector<double>& y, double yhat_j, std::size_t j, double x, double alpha, double b) {
  double s = 0.0;
  for (double v : y) s += v;
  const double beta = input_gain(b);
  const double r = y[j] - yhat_j / (1.0 + alpha);
  return beta * (s - x) * (s - x) + (1.0 - beta) * r * r;
}

}  // namespace

TEST(Prediction, SingleChannelMatchesRateModel) {
  const PredictorSpec ps = bank({0.0}, CompetitionMode::complex_sum);
  NetworkSpec s = NetworkSpec::zeros(1, 1, ps.tau_y);
  s.w_zx(0, 0) = 1.0;
  s.w_yy(0, 0) = ps.weights()[0];
  SimState st = SimState::zeros(1);
  st.y[0] = cplx(0.3, -0.1);
  st.a[0] = 0.4;
  st.b[0] = 0.7;
  const cplx x(0.9, 0.2);
  const CVec want = step(s, st, {CVec::Constant(1, x), 0.1}).y;
  const CVec got = prediction_step(ps, st.y, x, 0.4, 0.7, 0.1);
  EXPECT_LT(std::abs(got[0] - want[0]), 1e-15);
}

TEST(Prediction, NoInputGainDecouplesChannels) {
  const PredictorSpec ps = bank({1.0, 4.0});
  const CVec y = (CVec(2) << cplx(1.0, 0.0), cplx(0.0, 1.0)).finished();
  const CVec joint = prediction_drive(ps, ps.weights(), y, 0.0, 0.0, 0.0);
  // b+ = 0, a+ = 0: tau dy/dt = i 2 pi f tau y.
  for (Eigen::Index j = 0; j < 2; ++j)
    EXPECT_LT(std::abs(joint[j] - cplx(0.0, 2 * pi * ps.freqs_hz[j] / 1000.0 * ps.tau_y) * y[j]), 1e-15);
}

TEST(PredictionProperty, DriveMatchesEnergyGradient) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 4;
    std::vector<double> y(n), w(n);
    for (auto& v : y) v = g(rng);
    for (auto& v : w) v = g(rng);
    const double x = g(rng), b = u(rng), a = b + u(rng);
    const double alpha = alpha_from_ab(a, b);
    const PredictorSpec ps = bank({0.0, 1.0, 2.0, 3.0});
    CVec yv(n), wv(n);
    for (std::size_t j = 0; j < n; ++j) {
      yv[static_cast<Eigen::Index>(j)] = y[j];
      wv[static_cast<Eigen::Index>(j)] = w[j];
    }
    const CVec drive = prediction_drive(ps, wv, yv, x, a, b);
    for (std::size_t j = 0; j < n; ++j) {
      const double h = 1e-6;
      auto yp = y, ym = y;
      yp[j] += h;
      ym[j] -= h;
      const double yhat = w[j] * y[j];
      const double fd = (summand(yp, yhat, j, x, alpha, b) - summand(ym, yhat, j, x, alpha, b)) / (2 * h);
      const double want = -0.5 * fd;
      EXPECT_NEAR(drive[static_cast<Eigen::Index>(j)].real(), want, 1e-6 * std::max(1.0, std::abs(want)));
    }
  }
}

TEST(Prediction, BasisIsUndampedRotationWithoutModulators) {
  const PredictorSpec ps = bank({2.0});
  const double dt = 0.001;
  const auto basis = predictive_basis(ps, 0, 500.0, dt, 0.0, 0.0);
  // Euler growth per step is |1 + i theta| - 1 ~ theta^2/2.
  const double theta = 2 * pi * 0.002 * dt;
  const double growth = std::pow(std::sqrt(1 + theta * theta), 500.0 / dt);
  EXPECT_NEAR(std::abs(basis.back()), growth, 1e-10);
  EXPECT_NEAR(std::abs(basis.back()), 1.0, 1e-4);
  EXPECT_NEAR(std::arg(basis.back()), 0.0, 1e-3);  // one full period at 2 Hz
  EXPECT_NEAR(basis[static_cast<std::size_t>(125.0 / dt)].imag(), 1.0, 1e-3);
}

TEST(Prediction, ZeroFrequencyBasisDecays) {
  const PredictorSpec ps = bank({0.0});
  const auto basis = predictive_basis(ps, 0, 200.0, 0.01, 0.5, 0.5);
  for (std::size_t k = 1; k < basis.size(); ++k) {
    EXPECT_LT(basis[k].real(), basis[k - 1].real());
    EXPECT_EQ(basis[k].imag(), 0.0);
  }
  EXPECT_THROW(predictive_basis(ps, 1, 10.0, 0.1, 0.0, 0.0), DimensionError);
}

TEST(Prediction, BasisConvergesAtFirstOrder) {
  const PredictorSpec ps = bank({8.0});
  const auto coarse = predictive_basis(ps, 0, 100.0, 0.1, 0.2, 0.2);
  const auto fine = predictive_basis(ps, 0, 100.0, 0.05, 0.2, 0.2);
  const auto finest = predictive_basis(ps, 0, 100.0, 0.025, 0.2, 0.2);
  const double e1 = std::abs(coarse.back() - finest.back());
  const double e2 = std::abs(fine.back() - finest.back());
  EXPECT_NEAR(e1 / e2, 3.0, 0.3);  // (dt - dt/4) / (dt/2 - dt/4)
}

TEST(Prediction, ScheduleLookup) {
  ModulatorSchedule s;
  s.segments = {{-10.0, 0.1, 0.2}, {0.0, 0.0, 0.0}, {5.0, 1.0, 0.0}};
  EXPECT_EQ(s.at(-20.0), std::make_pair(0.0, 0.0));
  EXPECT_EQ(s.at(-1.0), std::make_pair(0.1, 0.2));
  EXPECT_EQ(s.at(0.0), std::make_pair(0.0, 0.0));
  EXPECT_EQ(s.at(7.0), std::make_pair(1.0, 0.0));
}

TEST(Prediction, ValidateRejectsBadBanks) {
  EXPECT_THROW(bank({1.0, 1.0}).validate(), ParameterError);
  EXPECT_THROW(bank({-1.0}).validate(), ParameterError);
  EXPECT_THROW(bank({}).validate(), ParameterError);
  PredictorSpec ps = bank({1.0});
  ps.schedule.segments = {{5.0, 0, 0}, {1.0, 0, 0}};
  EXPECT_THROW(ps.validate(), ParameterError);
}

TEST(Prediction, ZeroInputStaysZero) {
  PredictorSpec ps = bank({0.0, 2.0, 8.0});
  ps.schedule.segments = {{-100.0, 0.01, 0.01}};
  const auto r = predict_series(ps, [](double) { return 0.0; }, -100.0, 100.0, 0.1, 10);
  for (const auto& y : r.y) EXPECT_EQ(y.cwiseAbs().maxCoeff(), 0.0);
  for (double s : r.sum_re) EXPECT_EQ(s, 0.0);
}

// A pure sinusoid at one listed frequency is carried mostly by the matching channel.
TEST(PredictionProperty, SpectralSelectivity) {
  const std::vector<double> freqs{0.0, 1.0, 2.0, 4.0, 8.0, 16.0};
  PredictorSpec ps = bank(freqs);
  ps.schedule.segments = {{-3000.0, 0.01, 0.01}};
  for (std::size_t target = 0; target < freqs.size(); ++target) {
    const double f = freqs[target];
    auto x = [f](double t) { return f == 0.0 ? 1.0 : std::sin(2 * pi * f * t / 1000.0); };
    const auto r = predict_series(ps, x, -3000.0, 0.0, 0.05, 100);
    const RVec mag = r.y.back().cwiseAbs();
    for (Eigen::Index j = 0; j < mag.size(); ++j)
      if (static_cast<std::size_t>(j) != target) EXPECT_GT(mag[static_cast<Eigen::Index>(target)], mag[j]) << f << " Hz";
  }
}
