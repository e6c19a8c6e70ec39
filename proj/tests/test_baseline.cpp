#include <doctest.h>

#include "gatsac/baseline/fixed_timing.hpp"
#include "gatsac/env/traffic_env.hpp"
#include "support/sim_helpers.hpp"

using namespace gatsac;
using namespace gatsac::sim;

TEST_SUITE_BEGIN("baseline");

namespace {

env::TrafficEnv::EpisodeSummary run_fixed(const SimConfig& cfg, std::uint64_t seed) {
  env::TrafficEnv env(cfg, /*enforce_cycle_cap=*/false);
  baseline::FixedTimingController ctrl(baseline::FixedPlan::from_config(cfg));
  env.reset(seed);
  env::TrafficEnv::StepInfo info;
  while (!env.done()) env.step(ctrl.act(env.state()), info);
  return env.summary();
}

}  // namespace

TEST_CASE("schedule arithmetic: 30 s greens with 3 s clearances put t=65 in phase 1 green") {
  SimConfig cfg;
  cfg.demand = 0.0;
  SimState st = init_simulation(cfg);
  st.signal.enforce_cycle_cap = false;
  baseline::FixedTimingController ctrl(baseline::FixedPlan::from_config(cfg));
  while (st.time < 65.0 - 1e-9) step(st, ctrl.act(st));
  CHECK(st.time == doctest::Approx(65.0));
  CHECK(st.signal.phase == 1);
  CHECK_FALSE(st.signal.in_clearance);

  // spot-check the block boundaries: clearance [33,36) before green [36,66)
  SimState st2 = init_simulation(cfg);
  st2.signal.enforce_cycle_cap = false;
  while (st2.time < 34.0 - 1e-9) step(st2, ctrl.act(st2));
  CHECK(st2.signal.phase == 1);
  CHECK(st2.signal.in_clearance);
}

TEST_CASE("cycle length is constant and equal to the plan sum; sequence strictly periodic") {
  SimConfig cfg;
  cfg.demand = 0.0;
  SimState st = init_simulation(cfg);
  st.signal.enforce_cycle_cap = false;
  baseline::FixedTimingController ctrl(baseline::FixedPlan::from_config(cfg));
  const double cycle = baseline::FixedPlan::from_config(cfg).cycle_length();
  CHECK(cycle == doctest::Approx(132.0));

  // phase index over three full cycles follows floor arithmetic on the plan
  std::vector<int> observed;
  std::vector<double> at_times;
  for (int i = 0; i < static_cast<int>(3 * cycle / cfg.dt); ++i) {
    step(st, ctrl.act(st));
    if (i % 50 == 0) {
      observed.push_back(st.signal.phase);
      at_times.push_back(st.time);
    }
  }
  for (std::size_t k = 0; k < observed.size(); ++k) {
    const double tc = std::fmod(at_times[k] - 1e-9, cycle);
    const int expect = tc < 33.0 ? 0 : tc < 66.0 ? 1 : tc < 99.0 ? 2 : 3;
    REQUIRE(observed[k] == expect);
  }
}

TEST_CASE("controller output is independent of vehicle state") {
  SimConfig cfg;
  SimState empty = init_simulation(cfg);
  SimState busy = init_simulation(cfg);
  for (int i = 0; i < 9; ++i)
    testsupport::add_vehicle(busy, testsupport::make_vehicle(cfg, static_cast<std::uint64_t>(i + 1),
                                                             VehClass::HDV, i % kNumLanes,
                                                             250.0 - 11.0 * i, 4.0));
  baseline::FixedTimingController ctrl(baseline::FixedPlan::from_config(cfg));
  const SignalCommand a = ctrl.act(empty);
  const SignalCommand b = ctrl.act(busy);
  CHECK(a.greens == b.greens);
  CHECK(a.request_switch == b.request_switch);
  CHECK(a.apply_lane_types == b.apply_lane_types);
  CHECK(a.use_priorities == b.use_priorities);
  CHECK_FALSE(a.apply_lane_types);  // all lanes stay mixed
  CHECK_FALSE(a.use_priorities);
}

TEST_CASE("identical seeds give identical episode metrics; zero demand gives zeros") {
  SimConfig cfg;
  cfg.demand = 1200.0;
  cfg.episode_length = 200.0;
  const auto a = run_fixed(cfg, 42);
  const auto b = run_fixed(cfg, 42);
  CHECK(a.reward_sum == b.reward_sum);
  CHECK(a.departed == b.departed);
  CHECK(a.avg_delay == b.avg_delay);
  CHECK(a.events == b.events);

  SimConfig zero = cfg;
  zero.demand = 0.0;
  const auto z = run_fixed(zero, 42);
  CHECK(z.departed == 0);
  CHECK(z.avg_delay == 0.0);
  CHECK(z.events == 0);
  CHECK(z.reward_sum == 0.0);
}

TEST_CASE("plan validation: wrong phase count is a configuration error") {
  SimConfig cfg;
  cfg.fixed_plan_greens = {30.0, 30.0};
  CHECK_THROWS_AS(baseline::FixedPlan::from_config(cfg), ConfigError);
  cfg.fixed_plan_greens = {25.0};  // single value broadcast to all phases
  const auto plan = baseline::FixedPlan::from_config(cfg);
  CHECK(plan.greens == std::vector<double>(4, 25.0));
}

TEST_SUITE_END();
