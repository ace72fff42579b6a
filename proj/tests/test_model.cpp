#include <organics/core.hpp>
#include <organics/dynamics.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace organics;

namespace {

NetworkSpec single_integrator(double tau) {
  NetworkSpec s = NetworkSpec::zeros(1, 1, tau);
  s.w_yy(0, 0) = 1.0;
  s.w_zx(0, 0) = 1.0;
  return s;
}

}  // namespace

TEST(Core, RectifyAndGains) {
  EXPECT_EQ(rectify(-2.0), 0.0);
  EXPECT_EQ(rectify(1.5), 1.5);
  EXPECT_DOUBLE_EQ(input_gain(1.0), 0.5);
  EXPECT_EQ(input_gain(-3.0), 0.0);
  EXPECT_DOUBLE_EQ(alpha_from_ab(3.0, 1.0), 1.0);
  EXPECT_EQ(alpha_from_ab(0.0, 1.0), 0.0);  // clamped
}

TEST(Core, ZerosSpecIsValid) {
  const NetworkSpec s = NetworkSpec::zeros(4, 3);
  EXPECT_NO_THROW(s.validate());
  EXPECT_EQ(s.n_neurons(), 4);
  EXPECT_EQ(s.n_inputs(), 3);
  EXPECT_EQ(s.n_readouts(), 4);
  EXPECT_TRUE(s.is_real());
}

TEST(Core, ValidateRejectsBadShapes) {
  NetworkSpec s = NetworkSpec::zeros(3, 2);
  s.w_zx = CMat::Zero(2, 2);
  EXPECT_THROW(s.validate(), DimensionError);
  s = NetworkSpec::zeros(3, 2);
  s.tau_y[1] = 0.0;
  EXPECT_THROW(s.validate(), ParameterError);
  s = NetworkSpec::zeros(3, 2);
  s.tau_b = -1.0;
  EXPECT_THROW(s.validate(), ParameterError);
}

TEST(Core, DriveDimensionsChecked) {
  const NetworkSpec s = NetworkSpec::zeros(3, 2);
  EXPECT_THROW(input_drive(s, CVec::Zero(3)), DimensionError);
  EXPECT_THROW(recurrent_drive(s, CVec::Zero(2)), DimensionError);
}

TEST(Core, EnergyTermMatchesHandValue) {
  // b = 1 -> beta = 1/2; alpha = 1 -> yhat / 2.
  const double e = energy_term(cplx(1.0, 0.0), cplx(0.0, 0.0), cplx(4.0, 0.0), 1.0, 1.0);
  EXPECT_DOUBLE_EQ(e, 0.5 * 1.0 + 0.5 * 1.0);
}

TEST(Core, EnergyIsNonNegative) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const cplx y(g(rng), g(rng)), z(g(rng), g(rng)), yh(g(rng), g(rng));
    EXPECT_GE(energy_term(y, z, yh, g(rng), g(rng)), 0.0);
  }
}

TEST(Dynamics, ZeroInputZeroStateStaysZero) {
  const NetworkSpec s = single_integrator(10.0);
  const Trajectory tr = simulate(s, [](double) { return CVec::Zero(1); }, 0.0, 100.0, 1.0, SimState::zeros(1));
  for (const auto& y : tr.y) EXPECT_EQ(y[0], cplx(0.0));
}

TEST(Dynamics, LeakyIntegratorClosedForm) {
  const double tau = 10.0, b = 1.0;
  NetworkSpec s = single_integrator(tau);
  s.c_a[0] = b;
  s.c_b[0] = b;
  SimState init = SimState::zeros(1);
  init.a[0] = b;
  init.b[0] = b;
  const double dt = tau / 100.0;
  const Trajectory tr = simulate(s, [](double) { return CVec::Ones(1); }, 0.0, 200.0, dt, init);
  const double tau_eff = tau * (1.0 + b) / b;
  double worst = 0.0;
  for (std::size_t k = 10; k < tr.size(); ++k) {
    const double want = 1.0 - std::exp(-tr.times[k] / tau_eff);
    worst = std::max(worst, std::abs(tr.y[k][0].real() - want) / want);
  }
  EXPECT_LT(worst, 1e-2);
}

TEST(Dynamics, StepMatchesResponseDrive) {
  NetworkSpec s = NetworkSpec::zeros(2, 1, 5.0);
  s.w_yy << 0.5, 0.1, -0.2, 0.9;
  s.w_zx << 1.0, 2.0;
  SimState st = SimState::zeros(2);
  st.y << cplx(0.3, 0.1), cplx(-0.2, 0.4);
  st.a << 0.5, 0.0;
  st.b << 1.0, 2.0;
  const CVec x = CVec::Constant(1, 0.7);
  const SimState next = step(s, st, {x, 0.1});
  const CVec want = st.y + (0.1 / 5.0) * response_drive(st.y, input_drive(s, x), recurrent_drive(s, st.y), st.a, st.b);
  EXPECT_LT((next.y - want).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_DOUBLE_EQ(next.t, 0.1);
}

// Without input gain and with a+ = 0, a unit eigenvalue holds its state.
TEST(Dynamics, SustainedEigenvectorHeld) {
  NetworkSpec s = NetworkSpec::zeros(2, 1);
  s.w_yy << 1.0, 0.0, 0.0, 0.5;
  SimState st = SimState::zeros(2);
  st.y << 1.0, 1.0;
  const Trajectory tr = simulate(s, [](double) { return CVec::Zero(1); }, 0.0, 500.0, 1.0, st);
  EXPECT_NEAR(tr.y.back()[0].real(), 1.0, 1e-12);
  EXPECT_LT(std::abs(tr.y.back()[1]), 1e-5);
}

TEST(Dynamics, RecordEveryThinsSamples) {
  const NetworkSpec s = single_integrator(10.0);
  SimulateOptions o;
  o.record_every = 10;
  const Trajectory tr = simulate(s, [](double) { return CVec::Ones(1); }, 0.0, 10.0, 0.1, SimState::zeros(1), o);
  ASSERT_EQ(tr.size(), 11u);
  EXPECT_DOUBLE_EQ(tr.dt, 1.0);
  EXPECT_NEAR(tr.times[5], 5.0, 1e-12);
  EXPECT_EQ(tr.index_at(4.5), 5u);
}

TEST(Dynamics, ClosedLoopSeesState) {
  const NetworkSpec s = single_integrator(10.0);
  int calls = 0;
  ClosedLoopInputFn fn = [&](double, const SimState& st) {
    ++calls;
    EXPECT_EQ(st.y.size(), 1);
    return CVec::Zero(1);
  };
  simulate(s, fn, 0.0, 5.0, 1.0, SimState::zeros(1));
  EXPECT_EQ(calls, 6);
}

TEST(Dynamics, NonFiniteReportsTime) {
  NetworkSpec s = single_integrator(1.0);
  s.w_yy(0, 0) = 1e200;
  SimState st = SimState::zeros(1);
  st.y[0] = 1e200;
  try {
    simulate(s, [](double) { return CVec::Zero(1); }, 0.0, 100.0, 1.0, st);
    FAIL() << "expected NonFiniteError";
  } catch (const NonFiniteError& e) {
    EXPECT_TRUE(std::isfinite(e.time_ms()));
  }
}

TEST(Dynamics, InvalidArgumentsRejected) {
  const NetworkSpec s = single_integrator(10.0);
  auto zero = [](double) { return CVec::Zero(1); };
  EXPECT_THROW(simulate(s, zero, 0.0, 10.0, 0.0, SimState::zeros(1)), ParameterError);
  EXPECT_THROW(simulate(s, zero, 10.0, 0.0, 1.0, SimState::zeros(1)), ParameterError);
  EXPECT_THROW(simulate(s, zero, 0.0, 10.0, 1.0, SimState::zeros(2)), DimensionError);
  EXPECT_THROW(simulate(s, [](double) { return CVec::Zero(2); }, 0.0, 10.0, 1.0, SimState::zeros(1)),
               DimensionError);
}

// The rate model descends the energy: the drive equals -1/2 of the gradient
// of each neuron's summand (with a+ >= b+ so alpha+ is not clamped).
TEST(DynamicsProperty, DriveIsNegativeHalfGradient) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    const double y = g(rng), z = g(rng), yh = g(rng);
    const double b = u(rng), a = b + u(rng);
    const double alpha = alpha_from_ab(a, b);
    const double h = 1e-6;
    const double fd = (energy_term(y + h, z, yh, alpha, b) - energy_term(y - h, z, yh, alpha, b)) / (2 * h);
    const CVec drive = response_drive(CVec::Constant(1, y), CVec::Constant(1, z), CVec::Constant(1, yh),
                                      RVec::Constant(1, a), RVec::Constant(1, b));
    EXPECT_NEAR(drive[0].real(), -0.5 * fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

// Superposition: with modulators independent of y the model is linear in x.
TEST(DynamicsProperty, LinearInInput) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    NetworkSpec s = NetworkSpec::zeros(3, 2);
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 3; ++j) s.w_yy(i, j) = 0.3 * g(rng);
    for (Eigen::Index i = 0; i < 3; ++i)
      for (Eigen::Index j = 0; j < 2; ++j) s.w_zx(i, j) = g(rng);
    s.c_b.setConstant(1.0);
    const CVec x1 = (CVec(2) << g(rng), g(rng)).finished();
    const CVec x2 = (CVec(2) << g(rng), g(rng)).finished();
    auto run = [&](const CVec& x) {
      return simulate(s, [x](double) { return x; }, 0.0, 100.0, 0.5, SimState::zeros(3));
    };
    const auto a = run(x1), b = run(x2), c = run(x1 + x2);
    for (std::size_t k = 0; k < c.size(); ++k) EXPECT_LT((c.y[k] - a.y[k] - b.y[k]).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DynamicsProperty, TrajectoryEnergyFinite) {
  NetworkSpec s = single_integrator(10.0);
  s.c_b[0] = 1.0;
  const Trajectory tr = simulate(s, [](double) { return CVec::Ones(1); }, 0.0, 50.0, 1.0, SimState::zeros(1));
  const double e = energy(s, tr);
  EXPECT_TRUE(std::isfinite(e));
  EXPECT_GE(e, 0.0);
}
