#include <organics/biophysical.hpp>
#include <organics/dynamics.hpp>
#include <organics/weights.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace organics;
using namespace organics::circuit;

namespace {

NetworkSpec two_neuron_spec() {
  NetworkSpec s = NetworkSpec::zeros(2, 2);
  s.w_yy << 0.6, -0.2, 0.3, 0.5;
  s.w_zx << 1.0, -0.5, 0.25, 1.0;
  s.w_bx.col(0).setOnes();
  s.w_ax.col(1).setOnes();
  return s;
}

}  // namespace

TEST(Circuit, DelaySteadyStateEqualsRecurrentDrive) {
  const CircuitParams p;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double z = g(rng), yh = g(rng);
    EXPECT_EQ(total_conductance(p, 0.0, 0.0), 1.0);
    EXPECT_EQ(steady_state_vs(p, z, yh, 0.0, 0.0), yh);
  }
}

TEST(Circuit, SteadyStateMatchesRateFixedPointUpToConductance) {
  const CircuitParams p;
  const double z = 0.8, yh = 0.3, a = 1.0, b = 2.0;
  const double rate = input_gain(b) * z + yh / (1.0 + a);
  EXPECT_NEAR(steady_state_vs(p, z, yh, a, b) * total_conductance(p, a, b), rate, 1e-15);
  EXPECT_THROW(total_conductance(p, -1.0, 0.0), ParameterError);
}

TEST(Circuit, ThalamicUnitSettlesAtHalfForUnitCue) {
  NetworkSpec s = NetworkSpec::zeros(1, 1);
  s.w_ax(0, 0) = 1.0;
  s.w_bx(0, 0) = 1.0;
  const CircuitParams p;
  CircuitState st = CircuitState::zeros(1);
  const RVec x = RVec::Ones(1);
  for (int k = 0; k < 5000; ++k) {
    auto [a, b] = thalamic_step(s, p, st, x, st.y_plus(), st.y_minus(), 0.01);
    st.a = a;
    st.b = b;
  }
  // g_l (0 - v) + g_e (1 - v) = 0 with g_l = g_e = 1.
  EXPECT_NEAR(st.a[0], 0.5, 1e-9);
  EXPECT_NEAR(st.b[0], 0.5, 1e-9);
}

TEST(Circuit, OnOffPairIsComplementary) {
  const NetworkSpec s = two_neuron_spec();
  const CircuitParams p;
  auto in = [](double t) {
    RVec x(2);
    x << std::sin(t / 20.0), (t < 200.0 ? 1.0 : 0.0);
    return x;
  };
  const auto tr = simulate_circuit(s, p, in, 0.0, 400.0, 0.01, CircuitState::zeros(2));
  for (const auto& st : tr.states) {
    EXPECT_LE(st.v_plus.cwiseMin(st.v_minus).maxCoeff(), 1e-12);
    EXPECT_LT((st.v_plus + st.v_minus).cwiseAbs().maxCoeff(), 1e-12);
  }
}

// With clamped modulators the circuit relaxes to the closed-form potential.
TEST(Circuit, ClampedCircuitReachesSteadyState) {
  NetworkSpec s = NetworkSpec::zeros(1, 1);
  s.w_zx(0, 0) = 1.0;
  s.w_yy(0, 0) = 0.5;
  const CircuitParams p;
  CircuitOptions o;
  o.clamp_a = RVec::Constant(1, 1.0);
  o.clamp_b = RVec::Constant(1, 1.0);
  const auto tr = simulate_circuit(s, p, [](double) { return RVec::Ones(1); }, 0.0, 500.0, 0.01,
                                   CircuitState::zeros(1), o);
  const auto& st = tr.states.back();
  const double yhat = 0.5 * st.y()[0];
  EXPECT_NEAR(st.v_plus[0], steady_state_vs(p, 1.0, yhat, 1.0, 1.0), 1e-9);
}

TEST(Circuit, RejectsComplexAndBadArguments) {
  NetworkSpec s = two_neuron_spec();
  const CircuitParams p;
  auto in = [](double) { return RVec::Zero(2); };
  EXPECT_THROW(simulate_circuit(s, p, in, 0.0, 10.0, 0.0, CircuitState::zeros(2)), ParameterError);
  EXPECT_THROW(simulate_circuit(s, p, in, 0.0, 10.0, 0.1, CircuitState::zeros(3)), DimensionError);
  EXPECT_THROW(simulate_circuit(s, p, [](double) { return RVec::Zero(3); }, 0.0, 10.0, 0.1, CircuitState::zeros(2)),
               DimensionError);
  CircuitParams bad;
  bad.C = 0.0;
  EXPECT_THROW(simulate_circuit(s, bad, in, 0.0, 10.0, 0.1, CircuitState::zeros(2)), ParameterError);
  s.w_yy(0, 1) = cplx(0.0, 1.0);
  EXPECT_THROW(simulate_circuit(s, p, in, 0.0, 10.0, 0.1, CircuitState::zeros(2)), ParameterError);
}

TEST(Circuit, RecordEvery) {
  const NetworkSpec s = two_neuron_spec();
  CircuitOptions o;
  o.record_every = 100;
  const auto tr = simulate_circuit(s, CircuitParams{}, [](double) { return RVec::Zero(2); }, 0.0, 10.0, 0.01,
                                   CircuitState::zeros(2), o);
  EXPECT_EQ(tr.size(), 11u);
  EXPECT_EQ(tr.index_at(3.0), 3u);
}
