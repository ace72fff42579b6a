#include <organics/scenarios.hpp>

#include <gtest/gtest.h>

#include <algorithm>

using namespace organics;
using namespace organics::scenarios;

TEST(Scenarios, RegistryNames) {
  const auto names = scenario_names();
  for (const char* n : {"fig2", "fig2-robust", "fig3", "fig4", "fig5", "fig6", "fig7", "fig7a", "fig7c",
                        "fig7-warp", "fig8", "fig9", "fig10"})
    EXPECT_NE(std::find(names.begin(), names.end(), n), names.end()) << n;
}

TEST(Scenarios, UnknownNameThrows) {
  try {
    run_scenario("nope");
    FAIL();
  } catch (const UnknownScenarioError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown scenario"), std::string::npos);
  }
}

TEST(Scenarios, OverridesValidated) {
  Overrides ov;
  ov.dt = -1.0;
  EXPECT_THROW(run_scenario("fig2", ov), ParameterError);
  ov = {};
  ov.tau_scale = 0.0;
  EXPECT_THROW(run_scenario("fig2", ov), ParameterError);
}

TEST(Scenarios, Fig2PassesAndFillsOutputs) {
  const ScenarioResult r = run_scenario("fig2");
  EXPECT_TRUE(r.passed()) << r.report();
  EXPECT_EQ(r.table.columns.front(), "t");
  EXPECT_EQ(r.table.rows.size(), 4001u);
  EXPECT_FALSE(r.plot.empty());
  EXPECT_NE(r.report().find("result: PASS"), std::string::npos);
  EXPECT_THROW(r.assertion("missing"), Error);
}

// A run that ends before the delay cannot satisfy its assertions.
TEST(Scenarios, ShortRunFailsHonestly) {
  Overrides ov;
  ov.duration = 800.0;
  const ScenarioResult r = run_scenario("fig2", ov);
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.assertion("delay-readout-equals-target").passed);
}

TEST(Scenarios, Fig7FamilyPasses) {
  for (const char* n : {"fig7", "fig7a", "fig7c", "fig7-warp"}) {
    const ScenarioResult r = run_scenario(n);
    EXPECT_TRUE(r.passed()) << r.report();
  }
}

TEST(Scenarios, TauScaleHalvesFig7Frequency) {
  Overrides ov;
  ov.tau_scale = 2.0;
  const ScenarioResult r = run_scenario("fig7", ov);
  EXPECT_TRUE(r.passed()) << r.report();
}

TEST(Scenarios, MovementGainMatchesRecurrence) {
  // One step: b starts at rest so the first step contributes nothing.
  EXPECT_EQ(movement_gain(1.0, 10.0, 10.0, 1.0), 0.0);
  // Two steps: b = 0.1 after the first step.
  EXPECT_NEAR(movement_gain(1.0, 10.0, 10.0, 2.0), 0.1 * (0.1 / 1.1), 1e-15);
}

TEST(Scenarios, DoubleStepFirstSnapshotHoldsTargets) {
  const DoubleStepResult res = double_step_loop({});
  ASSERT_EQ(res.snapshots.size(), 3u);
  EXPECT_NEAR(res.snapshots[0].first[0].real(), 1.0, 1e-6);
  EXPECT_NEAR(res.snapshots[0].second[0].real(), -1.0, 1e-6);
  // The first saccade foveates target 1.
  EXPECT_LT(res.snapshots[1].first.cwiseAbs().maxCoeff(), 1e-6);
}
