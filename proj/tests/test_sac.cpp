#include <doctest.h>

#include <cmath>
#include <set>

#include "gatsac/env/traffic_env.hpp"
#include "gatsac/sac/agent.hpp"
#include "gatsac/sac/train.hpp"
#include "support/fd_check.hpp"

using namespace gatsac;
using namespace gatsac::sac;
using nn::Tensor;
using nn::Vec;

TEST_SUITE_BEGIN("sac");

TEST_CASE("action layout: 12 lane + 5 signal + 16 conflict components") {
  CHECK(ControlAction::lane_dim() == 12);
  CHECK(ControlAction::signal_dim() == 5);
  CHECK(ControlAction::conflict_dim() == 16);
  CHECK(ControlAction::total_dim() == 33);
}

TEST_CASE("decode: midpoint, saturation, and a bounds grid scan") {
  sim::SimConfig cfg;
  ControlAction a;
  a.raw.assign(static_cast<std::size_t>(ControlAction::total_dim()), 0.0);

  const sim::SignalCommand mid = decode_action(a, cfg);
  for (double g : mid.greens) CHECK(g == doctest::Approx(0.5 * (cfg.g_min + cfg.g_max)));
  CHECK_FALSE(mid.request_switch);  // logit 0 is not a switch
  CHECK(mid.use_priorities);
  CHECK(mid.conflict_priority.size() == 16);

  // saturation: a -> 1-eps approaches g_max from below, never exceeding it
  for (int k = 0; k < sim::kNumPhases; ++k)
    a.raw[static_cast<std::size_t>(ControlAction::lane_dim() + k)] = 1.0 - 1e-9;
  const sim::SignalCommand hi = decode_action(a, cfg);
  for (double g : hi.greens) {
    CHECK(g <= cfg.g_max);
    CHECK(g == doctest::Approx(cfg.g_max).epsilon(1e-6));
  }

  // grid scan: every raw vector in (-1,1)^d decodes within bounds
  Rng rng(5);
  for (int trial = 0; trial < 2000; ++trial) {
    for (double& v : a.raw) v = rng.uniform(-1.0 + 1e-12, 1.0 - 1e-12);
    const sim::SignalCommand c = decode_action(a, cfg);
    for (double g : c.greens) {
      REQUIRE(g >= cfg.g_min);
      REQUIRE(g <= cfg.g_max);
    }
    REQUIRE(c.conflict_priority.size() == 16);
  }
  // clearances come from config and respect c_min
  CHECK(cfg.clearance >= cfg.c_min);
}

TEST_CASE("sample_action: sigma -> 0 collapses onto tanh(mu); deterministic mean is exact") {
  Rng rng(9);
  GaussianActor actor(4, 8, 8, 3, rng);
  Tensor Z(1, 4);
  for (double& v : Z.data) v = rng.normal();

  GaussianActor::Cache det;
  actor.forward(Z, det);
  actor.sample(det, nullptr, /*deterministic=*/true);
  for (int d = 0; d < 3; ++d) CHECK(det.a(0, d) == doctest::Approx(std::tanh(det.mu(0, d))));

  // force sigma ~ exp(-20): stochastic samples coincide with the mean action
  actor.params().value("log_std.W").zero();
  for (double& v : actor.params().value("log_std.b").data) v = -50.0;  // clamps to -20
  GaussianActor::Cache sto;
  actor.forward(Z, sto);
  Rng srng(11);
  actor.sample(sto, &srng, /*deterministic=*/false);
  for (int d = 0; d < 3; ++d) CHECK(sto.a(0, d) == doctest::Approx(std::tanh(sto.mu(0, d))).epsilon(1e-7));

  // mu = 0 deterministic gives the zero action
  actor.params().value("mu.W").zero();
  actor.params().value("mu.b").zero();
  GaussianActor::Cache zero;
  actor.forward(Z, zero);
  actor.sample(zero, nullptr, true);
  for (int d = 0; d < 3; ++d) CHECK(zero.a(0, d) == 0.0);
}

TEST_CASE("log_prob agrees with an empirical histogram density on a 1-D policy") {
  Rng rng(13);
  GaussianActor actor(2, 6, 6, 1, rng);
  Tensor Z(1, 2);
  Z(0, 0) = 0.4;
  Z(0, 1) = -0.2;

  GaussianActor::Cache probe;
  actor.forward(Z, probe);

  // histogram of squashed samples around a reference point
  const int n = 400000;
  const double lo = 0.05, hi = 0.10;  // fixed bin in action space
  Rng srng(21);
  int in_bin = 0;
  for (int i = 0; i < n; ++i) {
    GaussianActor::Cache c = probe;
    actor.sample(c, &srng, false);
    if (c.a(0, 0) >= lo && c.a(0, 0) < hi) ++in_bin;
  }
  const double empirical = static_cast<double>(in_bin) / n / (hi - lo);

  // model density at the bin centre via log_prob of a cache pinned there
  const double a_mid = 0.5 * (lo + hi);
  GaussianActor::Cache at;
  actor.forward(Z, at);
  const double sigma = std::exp(at.log_std(0, 0));
  Tensor xi(1, 1);
  xi(0, 0) = (std::atanh(a_mid) - at.mu(0, 0)) / sigma;
  actor.sample_with(at, xi);
  const double model = std::exp(actor.log_prob(at)[0]);

  // Monte-Carlo + bin-width tolerance
  CHECK(empirical == doctest::Approx(model).epsilon(0.05));
}

TEST_CASE("log_prob stays finite out to |a| = 1 - 1e-6") {
  Rng rng(14);
  GaussianActor actor(2, 4, 4, 1, rng);
  Tensor Z(1, 2);
  GaussianActor::Cache c;
  actor.forward(Z, c);
  // push the squashed action directly against the clamp
  c.log_std = c.log_std_pre = Tensor(1, 1);
  c.mu = Tensor(1, 1);
  c.mu(0, 0) = 20.0;  // tanh(20) == 1 - ~4e-18, far past the clamp
  actor.sample_with(c, Tensor(1, 1));
  const Vec lp = actor.log_prob(c);
  CHECK(std::isfinite(lp[0]));
}

TEST_CASE("critic target: done, gamma=0, and the twin-min arithmetic example") {
  CHECK(critic_target_value(3.0, 1.0, 99.0, -5.0, 0.7, 0.95) == 3.0);
  CHECK(critic_target_value(2.5, 0.0, 99.0, -5.0, 0.7, 0.0) == 2.5);
  // critics (2, 5), alpha=0, gamma=0.95, r=1, d=0: y = 1 + 0.95*2 = 2.9
  CHECK(critic_target_value(1.0, 0.0, std::min(2.0, 5.0), 0.0, 0.0, 0.95) ==
        doctest::Approx(2.9));
  // twin-min symmetry: swapping the critics changes nothing
  CHECK(critic_target_value(1.0, 0.0, std::min(5.0, 2.0), 0.0, 0.0, 0.95) ==
        critic_target_value(1.0, 0.0, std::min(2.0, 5.0), 0.0, 0.0, 0.95));
}

TEST_CASE("critic loss: zero residual, unit residual, random recomputation oracle") {
  Vec y{1.0, -2.0, 0.5};
  CHECK(critic_loss_value(y, y, y) == 0.0);

  Vec q1{2.0, -1.0, 1.5}, q2{2.0, -1.0, 1.5};  // both off by exactly +1
  CHECK(critic_loss_value(q1, q2, y) == doctest::Approx(2.0));

  Rng rng(15);
  Vec a(10), b(10), t(10);
  for (std::size_t i = 0; i < 10; ++i) {
    a[i] = rng.normal();
    b[i] = rng.normal();
    t[i] = rng.normal();
  }
  double oracle = 0.0;
  for (std::size_t i = 0; i < 10; ++i)
    oracle += ((a[i] - t[i]) * (a[i] - t[i]) + (b[i] - t[i]) * (b[i] - t[i])) / 10.0;
  CHECK(critic_loss_value(a, b, t) == doctest::Approx(oracle).epsilon(1e-14));
}

TEST_CASE("actor loss: alpha scan is strictly increasing when mean log-prob is positive") {
  Vec logp{0.5, 1.5, 0.2};  // positive mean
  Vec q1{1.0, 2.0, 0.0}, q2{2.0, 1.0, 3.0};
  double prev = actor_loss_value(logp, q1, q2, 0.0);
  for (double alpha : {0.1, 0.2, 0.5, 1.0, 2.0}) {
    const double cur = actor_loss_value(logp, q1, q2, alpha);
    CHECK(cur > prev);
    prev = cur;
  }
  // alpha = 0 reduces to -mean(min q)
  CHECK(actor_loss_value(logp, q1, q2, 0.0) ==
        doctest::Approx(-(1.0 + 1.0 + 0.0) / 3.0));
}

TEST_CASE("actor gradient through frozen critics matches finite differences") {
  Rng rng(16);
  const int zdim = 3, adim = 2;
  GaussianActor actor(zdim, 5, 4, adim, rng);
  nn::ParamStore critics;
  QCritic q1(critics, "q1", zdim, adim, 5, 4, rng);
  QCritic q2(critics, "q2", zdim, adim, 5, 4, rng);
  const double alpha = 0.3;

  Tensor Z(4, zdim);
  for (double& v : Z.data) v = rng.normal();
  GaussianActor::Cache c0;
  actor.forward(Z, c0);
  Rng srng(71);
  actor.sample(c0, &srng, false);
  const Tensor xi = c0.xi;  // frozen reparameterization noise

  auto loss = [&]() {
    GaussianActor::Cache c;
    actor.forward(Z, c);
    actor.sample_with(c, xi);
    const Vec lp = actor.log_prob(c);
    QCritic::Cache cc1, cc2;
    const Vec v1 = q1.forward(Z, c.a, cc1);
    const Vec v2 = q2.forward(Z, c.a, cc2);
    return actor_loss_value(lp, v1, v2, alpha);
  };

  // analytic gradient, mirroring the agent's actor update
  GaussianActor::Cache c;
  actor.forward(Z, c);
  actor.sample_with(c, xi);
  const Vec lp = actor.log_prob(c);
  QCritic::Cache cc1, cc2;
  const Vec v1 = q1.forward(Z, c.a, cc1);
  const Vec v2 = q2.forward(Z, c.a, cc2);
  const int B = Z.rows;
  Vec gq1(static_cast<std::size_t>(B), 0.0), gq2(static_cast<std::size_t>(B), 0.0);
  Vec gLogp(static_cast<std::size_t>(B), alpha / B);
  for (int n = 0; n < B; ++n)
    (v1[static_cast<std::size_t>(n)] <= v2[static_cast<std::size_t>(n)] ? gq1 : gq2)
        [static_cast<std::size_t>(n)] = -1.0 / B;
  Tensor gA1, gA2;
  q1.backward(cc1, gq1, &gA1, false);
  q2.backward(cc2, gq2, &gA2, false);
  for (std::size_t i = 0; i < gA1.data.size(); ++i) gA1.data[i] += gA2.data[i];
  actor.params().zero_grad();
  actor.backward(c, &gA1, &gLogp);

  const auto rep = testsupport::fd_check(actor.params(), loss);
  INFO("worst: ", rep.worst_param);
  CHECK(rep.max_rel_err < 1e-4);
}

TEST_CASE("critic gradient against fixed targets matches finite differences") {
  Rng rng(17);
  const int zdim = 3, adim = 2;
  nn::ParamStore critics;
  QCritic q1(critics, "q1", zdim, adim, 5, 4, rng);
  QCritic q2(critics, "q2", zdim, adim, 5, 4, rng);
  Tensor Z(4, zdim), A(4, adim);
  for (double& v : Z.data) v = rng.normal();
  for (double& v : A.data) v = std::tanh(rng.normal());
  Vec y(4);
  for (double& v : y) v = rng.normal();

  auto loss = [&]() {
    QCritic::Cache c1, c2;
    return critic_loss_value(q1.forward(Z, A, c1), q2.forward(Z, A, c2), y);
  };

  QCritic::Cache c1, c2;
  const Vec v1 = q1.forward(Z, A, c1);
  const Vec v2 = q2.forward(Z, A, c2);
  critics.zero_grad();
  Vec g1(4), g2(4);
  for (std::size_t i = 0; i < 4; ++i) {
    g1[i] = 2.0 * (v1[i] - y[i]) / 4.0;
    g2[i] = 2.0 * (v2[i] - y[i]) / 4.0;
  }
  q1.backward(c1, g1, nullptr, true);
  q2.backward(c2, g2, nullptr, true);

  const auto rep = testsupport::fd_check(critics, loss);
  INFO("worst: ", rep.worst_param);
  CHECK(rep.max_rel_err < 1e-4);
}

TEST_CASE("temperature: fixed point, direction, and long-run positivity") {
  // zero gradient exactly when E[log pi] = -H_target
  const double H = -4.0;
  Vec at_fixed{4.0, 4.0, 4.0};  // logp = -H
  CHECK(temperature_grad_log_alpha(at_fixed, 0.2, H) == 0.0);

  // entropy below target (log pi above -H): alpha must increase
  nn::ParamStore alpha_store;
  alpha_store.add("log_alpha", 1, 1).data[0] = std::log(0.2);
  Vec too_certain{6.0, 5.0, 7.0};
  alpha_store.grad("log_alpha").data[0] =
      temperature_grad_log_alpha(too_certain, 0.2, H);
  nn::AdamConfig adam;
  adam.lr = 1e-2;
  nn::adam_update(alpha_store, adam);
  CHECK(std::exp(alpha_store.value("log_alpha").data[0]) > 0.2);

  // 1e4 noisy updates: alpha finite and positive throughout
  Rng rng(18);
  for (int i = 0; i < 10000; ++i) {
    const double alpha = std::exp(alpha_store.value("log_alpha").data[0]);
    Vec lp{rng.normal(4.0, 3.0), rng.normal(4.0, 3.0)};
    alpha_store.grad("log_alpha").data[0] = temperature_grad_log_alpha(lp, alpha, H);
    nn::adam_update(alpha_store, adam);
    const double a = std::exp(alpha_store.value("log_alpha").data[0]);
    REQUIRE(std::isfinite(a));
    REQUIRE(a > 0.0);
  }
}

TEST_CASE("soft update: tau=1 copies, tau=0.005 arithmetic, geometric convergence") {
  Rng rng(19);
  nn::ParamStore online, target;
  nn::init_xavier(online.add("w", 3, 3), rng);
  target.add("w", 3, 3);

  soft_update(target, online, 1.0);
  CHECK(target.value("w").data == online.value("w").data);

  // tau = 0.005 from 1.0 toward 0.0: one step lands on 0.995
  online.value("w").zero();
  for (double& v : target.value("w").data) v = 1.0;
  soft_update(target, online, 0.005);
  for (double v : target.value("w").data) CHECK(v == doctest::Approx(0.995).epsilon(1e-15));

  // closed-form geometric series: after k more steps, (1 - tau)^(k+1)
  for (int k = 0; k < 99; ++k) soft_update(target, online, 0.005);
  const double expect = std::pow(0.995, 100);
  for (double v : target.value("w").data) CHECK(v == doctest::Approx(expect).epsilon(1e-10));

  nn::ParamStore wrong;
  wrong.add("w", 2, 2);
  CHECK_THROWS_AS(soft_update(wrong, online, 0.5), ShapeError);
}

TEST_CASE("replay buffer: strict FIFO eviction and without-replacement sampling") {
  ReplayBuffer buf(8);
  auto tr = [](double tag) {
    Transition t;
    t.z = {tag};
    t.a = {0.0};
    t.r = tag;
    t.z_next = {tag};
    return t;
  };
  for (int i = 0; i < 13; ++i) buf.push(tr(static_cast<double>(i)));
  REQUIRE(buf.size() == 8);
  // after M + k pushes the k oldest are gone and order is preserved
  for (std::size_t i = 0; i < 8; ++i) CHECK(buf.at(i).r == doctest::Approx(5.0 + static_cast<double>(i)));

  Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto batch = buf.sample(6, rng);
    std::set<const Transition*> distinct(batch.begin(), batch.end());
    REQUIRE(distinct.size() == 6);
  }
  const auto all = buf.sample(8, rng);
  CHECK(std::set<const Transition*>(all.begin(), all.end()).size() == 8);
}

TEST_CASE("agent: target parameters only move through the soft update") {
  sim::SimConfig cfg;
  cfg.sac.gat_hidden_dim = 16;
  cfg.sac.actor_hidden1 = 16;
  cfg.sac.actor_hidden2 = 8;
  cfg.sac.warmup_steps = 4;
  cfg.sac.batch_size = 4;
  SacAgent agent(cfg, 77);

  Rng rng(29);
  auto rand_vec = [&](int n) {
    Vec v(static_cast<std::size_t>(n));
    for (double& x : v) x = rng.normal();
    return v;
  };
  for (int i = 0; i < 16; ++i)
    agent.observe(rand_vec(agent.obs_dim()), rand_vec(ControlAction::total_dim()), rng.normal(),
                  rand_vec(agent.obs_dim()), 0.0);

  // expected target after one update: tau-blend of old target and new online
  std::vector<Tensor> old_target;
  for (const auto& p : agent.target_params().params()) old_target.push_back(p.value);

  const auto st = agent.update();
  REQUIRE(st.ran);
  REQUIRE(st.applied);
  const auto& online = agent.critic_params().params();
  const auto& target = agent.target_params().params();
  for (std::size_t i = 0; i < target.size(); ++i) {
    for (std::size_t k = 0; k < target[i].value.data.size(); ++k) {
      const double expect =
          cfg.sac.tau * online[i].value.data[k] + (1.0 - cfg.sac.tau) * old_target[i].data[k];
      REQUIRE(target[i].value.data[k] == doctest::Approx(expect).epsilon(1e-12));
    }
    // optimizer state untouched: targets never see gradients
    for (double g : target[i].grad.data) REQUIRE(g == 0.0);
    for (double m : target[i].m.data) REQUIRE(m == 0.0);
  }
  CHECK(agent.target_params().adam_step == 0);
}

TEST_CASE("warmup gate: an episode shorter than warmup performs zero updates") {
  sim::SimConfig cfg;
  cfg.demand = 600.0;
  cfg.episode_length = 20.0;
  cfg.control_interval = 5.0;  // 4 control steps
  cfg.sac.warmup_steps = 1000;
  cfg.sac.gat_hidden_dim = 16;
  cfg.sac.actor_hidden1 = 16;
  cfg.sac.actor_hidden2 = 8;
  env::TrafficEnv env(cfg);
  SacAgent agent(cfg, 3);
  const auto rows = sac::train_agent(env, agent, 1);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].critic_loss == 0.0);
  CHECK(rows[0].actor_loss == 0.0);
  CHECK(agent.buffer().size() == 4);
  CHECK(agent.alpha() == doctest::Approx(cfg.sac.init_temperature));
}

TEST_CASE("training determinism: identical seeds give identical episode metrics") {
  sim::SimConfig cfg;
  cfg.demand = 1200.0;
  cfg.episode_length = 30.0;
  cfg.rng_seed = 11;
  cfg.sac.warmup_steps = 3;
  cfg.sac.batch_size = 4;
  cfg.sac.gat_hidden_dim = 16;
  cfg.sac.actor_hidden1 = 16;
  cfg.sac.actor_hidden2 = 8;

  auto run = [&]() {
    env::TrafficEnv env(cfg);
    SacAgent agent(cfg, cfg.rng_seed);
    return sac::train_agent(env, agent, 3);
  };
  const auto a = run();
  const auto b = run();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].reward == b[i].reward);
    CHECK(a[i].throughput == b[i].throughput);
    CHECK(a[i].avg_delay == b[i].avg_delay);
    CHECK(a[i].critic_loss == b[i].critic_loss);
    CHECK(a[i].alpha == b[i].alpha);
  }
}

TEST_CASE("checkpoint round trip restores the full agent") {
  sim::SimConfig cfg;
  cfg.sac.gat_hidden_dim = 16;
  cfg.sac.actor_hidden1 = 16;
  cfg.sac.actor_hidden2 = 8;
  SacAgent a(cfg, 5);
  a.save("agent_ckpt_test.txt");
  SacAgent b(cfg, 999);  // different init
  CHECK(b.actor().params().value_hash() != a.actor().params().value_hash());
  b.load("agent_ckpt_test.txt");
  CHECK(b.actor().params().value_hash() == a.actor().params().value_hash());
  CHECK(b.critic_params().value_hash() == a.critic_params().value_hash());
  CHECK(b.encoder().params().value_hash() == a.encoder().params().value_hash());
  CHECK(b.alpha() == a.alpha());

  // shape mismatch: different hidden dim rejects the file
  sim::SimConfig other = cfg;
  other.sac.gat_hidden_dim = 32;
  SacAgent c(other, 5);
  CHECK_THROWS_AS(c.load("agent_ckpt_test.txt"), CheckpointError);
}

TEST_SUITE_END();
