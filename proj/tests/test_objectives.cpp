#include <doctest.h>

#include <cmath>

#include "gatsac/env/traffic_env.hpp"
#include "gatsac/objectives/cost.hpp"
#include "support/sim_helpers.hpp"

using namespace gatsac;
using namespace gatsac::sim;
using testsupport::add_vehicle;
using testsupport::make_vehicle;

TEST_SUITE_BEGIN("objectives");

TEST_CASE("delay: positive-part excess over the free-flow budget") {
  SimConfig cfg;
  cfg.demand = 0.0;
  SimState st = init_simulation(cfg);
  CHECK(objectives::delay_cost(st, 100.0) == 0.0);  // empty convention

  const int lane = lane_index(Approach::N, Movement::Through);
  VehicleState v = make_vehicle(cfg, 1, VehClass::CAV, lane, 10.0, 5.0);
  v.arrival_time = 80.0;
  v.freeflow_time = 15.0;
  add_vehicle(st, v);
  CHECK(objectives::delay_cost(st, 100.0) == doctest::Approx(5.0));  // 100-80-15

  // within budget: clamped at zero
  CHECK(objectives::delay_cost(st, 90.0) == 0.0);
}

TEST_CASE("fairness: equality, paper-input case, absence convention, symmetry, range") {
  CHECK(objectives::fairness_cost(12.0, 12.0) == 0.0);
  CHECK(objectives::fairness_cost(0.0, 0.0) == 0.0);

  // derived from the reported per-class fixed-timing means 45.3 / 32.0
  const double oracle = std::fabs(45.3 - 32.0) / std::max(45.3, 32.0);
  CHECK(objectives::fairness_cost(45.3, 32.0) == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(std::round(oracle * 1e4) / 1e4 == 0.2936);

  CHECK(objectives::fairness_cost(45.3, 32.0, 10, 0) == 0.0);  // one class absent
  CHECK(objectives::fairness_cost(45.3, 32.0, 0, 10) == 0.0);

  Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    const double a = rng.uniform(0.0, 100.0), b = rng.uniform(0.0, 100.0);
    const double f = objectives::fairness_cost(a, b);
    CHECK(f >= 0.0);
    CHECK(f <= 1.0);
    CHECK(f == objectives::fairness_cost(b, a));  // symmetric
  }
}

TEST_CASE("safety: weighted event counts") {
  SimConfig cfg;
  CostWeights w = cfg.weights;  // alpha_rlr=1.0, beta_ttc=0.5, delta_hb=0.25
  CHECK(objectives::safety_cost({}, w) == 0.0);

  std::vector<SafetyEvent> one_rlr{{EventKind::RLR, 0.0, 1, 0, 1.0}};
  CHECK(objectives::safety_cost(one_rlr, w) == 1.0);

  std::vector<SafetyEvent> mixed{
      {EventKind::TTC, 0.0, 1, 2, 0.5},
      {EventKind::TTC, 0.0, 3, 4, 0.5},
      {EventKind::HB, 0.0, 5, 0, 1.1},
  };
  CHECK(objectives::safety_cost(mixed, w) == doctest::Approx(2 * 0.5 + 1 * 0.25));
}

TEST_CASE("total cost and reward: arithmetic, zero case, weight linearity") {
  CostWeights w;
  w.w_d = 1.0;
  w.w_f = 0.5;
  w.w_s = 2.0;
  auto zero = objectives::total_cost_and_reward(0, 0, 0, w, 0, 0.01);
  CHECK(zero.total == 0.0);
  CHECK(zero.reward == 0.0);

  auto c = objectives::total_cost_and_reward(10.0, 0.3, 2.0, w, 0, 0.0);
  CHECK(c.total == doctest::Approx(14.15));
  CHECK(c.reward == doctest::Approx(-14.15));

  // scaling every weight by k>0 scales the total by k
  CostWeights w2 = w;
  w2.w_d *= 3.0;
  w2.w_f *= 3.0;
  w2.w_s *= 3.0;
  auto c2 = objectives::total_cost_and_reward(10.0, 0.3, 2.0, w2, 0, 0.0);
  CHECK(c2.total == doctest::Approx(3.0 * c.total));

  // monotone nondecreasing in each component
  auto base = objectives::total_cost_and_reward(5.0, 0.2, 1.0, w, 0, 0.0);
  CHECK(objectives::total_cost_and_reward(6.0, 0.2, 1.0, w, 0, 0.0).total >= base.total);
  CHECK(objectives::total_cost_and_reward(5.0, 0.4, 1.0, w, 0, 0.0).total >= base.total);
  CHECK(objectives::total_cost_and_reward(5.0, 0.2, 2.0, w, 0, 0.0).total >= base.total);

  // throughput bonus enters the reward only
  auto cb = objectives::total_cost_and_reward(10.0, 0.3, 2.0, w, 7, 0.01);
  CHECK(cb.total == doctest::Approx(14.15));
  CHECK(cb.reward == doctest::Approx(-14.15 + 0.07));
}

TEST_CASE("accounting identity: episode reward sum = -weighted cost sum + bonus * throughput") {
  SimConfig cfg;
  cfg.demand = 2000.0;
  cfg.episode_length = 120.0;
  cfg.rng_seed = 44;
  env::TrafficEnv env(cfg);
  env.reset(44);

  // independent accumulation, substep by substep, straight from sim opcodes
  SimState shadow = init_simulation([&] {
    SimConfig c = cfg;
    c.rng_seed = 44;
    return c;
  }());
  shadow.signal.enforce_cycle_cap = true;
  double shadow_cost = 0.0;
  long shadow_departed = 0;
  SignalCommand cmd;
  cmd.greens.fill(30.0);
  while (shadow.time < cfg.episode_length - 1e-9) {
    const StepOutcome out = step(shadow, cmd);
    const auto c = objectives::step_cost(out, cfg.weights, cfg.throughput_bonus);
    shadow_cost += c.total;
    shadow_departed += out.departed;
  }

  env::TrafficEnv::StepInfo info;
  while (!env.done()) env.step(cmd, info);
  const auto s = env.summary();
  CHECK(s.reward_sum ==
        doctest::Approx(-shadow_cost + cfg.throughput_bonus * shadow_departed).epsilon(1e-9));
  CHECK(s.departed == shadow_departed);
}

TEST_SUITE_END();
