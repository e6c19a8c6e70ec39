// Python bindings for the core operations: scenario configs, IDM, the
// environment, the GAT-SAC agent, cost functions and the harness entry points.

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gatsac/env/traffic_env.hpp"
#include "gatsac/harness/run.hpp"
#include "gatsac/harness/sweep.hpp"
#include "gatsac/objectives/cost.hpp"
#include "gatsac/sac/agent.hpp"
#include "gatsac/sac/train.hpp"
#include "gatsac/sim/idm.hpp"

namespace py = pybind11;
using namespace gatsac;

namespace {

std::vector<std::vector<double>> graph_features(const graph::TrafficGraph& g) {
  std::vector<std::vector<double>> rows;
  rows.reserve(sim::kNumLanes);
  for (int i = 0; i < sim::kNumLanes; ++i) {
    const auto r = g.feature_row(i);
    rows.emplace_back(r.begin(), r.end());
  }
  return rows;
}

// Env + agent pair stepped from python.
struct PySession {
  sim::SimConfig cfg;
  env::TrafficEnv env;
  sac::SacAgent agent;

  PySession(const sim::SimConfig& c, std::uint64_t seed)
      : cfg(c), env(c), agent(c, seed) {}
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "mixed-autonomy intersection simulator with a GAT-SAC controller";
  m.attr("__version__") = "0.1.0";
  m.attr("NUM_LANES") = sim::kNumLanes;
  m.attr("NUM_PHASES") = sim::kNumPhases;
  m.attr("ACTION_DIM") = sac::ControlAction::total_dim();

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);
  py::register_exception<CheckpointError>(m, "CheckpointError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_IOError);

  py::class_<sim::VehicleClassParams>(m, "VehicleClassParams")
      .def(py::init<>([](double reaction_time, double desired_headway, double max_accel,
                         double comfortable_decel, double min_gap, double desired_speed,
                         double accel_exponent) {
             return sim::VehicleClassParams{reaction_time, desired_headway, max_accel,
                                            comfortable_decel, min_gap, desired_speed,
                                            accel_exponent};
           }),
           py::arg("reaction_time"), py::arg("desired_headway"), py::arg("max_accel"),
           py::arg("comfortable_decel"), py::arg("min_gap"), py::arg("desired_speed"),
           py::arg("accel_exponent"))
      .def_readwrite("reaction_time", &sim::VehicleClassParams::reaction_time)
      .def_readwrite("desired_headway", &sim::VehicleClassParams::desired_headway)
      .def_readwrite("max_accel", &sim::VehicleClassParams::max_accel)
      .def_readwrite("comfortable_decel", &sim::VehicleClassParams::comfortable_decel)
      .def_readwrite("min_gap", &sim::VehicleClassParams::min_gap)
      .def_readwrite("desired_speed", &sim::VehicleClassParams::desired_speed)
      .def_readwrite("accel_exponent", &sim::VehicleClassParams::accel_exponent);

  py::class_<sim::SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def("set", &sim::apply_override, py::arg("key"), py::arg("value"),
           "override one scenario key (values as strings, like the CLI)")
      .def("get", &sim::get_config_value, py::arg("key"))
      .def("validate", &sim::SimConfig::validate)
      .def("save", &sim::save_config)
      .def_property_readonly("cav", [](const sim::SimConfig& c) { return c.cav; })
      .def_property_readonly("hdv", [](const sim::SimConfig& c) { return c.hdv; })
      .def("__repr__",
           [](const sim::SimConfig& c) {
             return "<SimConfig demand=" + std::to_string(c.demand) +
                    " cav_penetration=" + std::to_string(c.cav_penetration) + ">";
           });
  m.def("load_config", &sim::load_config, py::arg("path"));
  m.def("config_keys", &sim::config_keys);

  m.def("idm_acceleration", &sim::idm_acceleration, py::arg("speed"), py::arg("gap"),
        py::arg("closing_speed"), py::arg("params"),
        "IDM longitudinal acceleration; gap <= 0 returns the emergency floor");
  m.attr("FREE_ROAD_GAP") = sim::kFreeRoadGap;

  m.def("fairness_cost",
        py::overload_cast<double, double>(&objectives::fairness_cost),
        py::arg("mean_delay_hdv"), py::arg("mean_delay_cav"));
  m.def(
      "total_cost",
      [](double delay, double fairness, double safety, double w_d, double w_f, double w_s) {
        sim::CostWeights w;
        w.w_d = w_d;
        w.w_f = w_f;
        w.w_s = w_s;
        return objectives::total_cost_and_reward(delay, fairness, safety, w, 0, 0.0).total;
      },
      py::arg("delay"), py::arg("fairness"), py::arg("safety"), py::arg("w_d") = 1.0,
      py::arg("w_f") = 0.5, py::arg("w_s") = 2.0);

  py::class_<PySession>(m, "Session")
      .def(py::init<const sim::SimConfig&, std::uint64_t>(), py::arg("config"), py::arg("seed"))
      .def(
          "reset",
          [](PySession& s, std::uint64_t seed) { return graph_features(s.env.reset(seed)); },
          py::arg("seed"), "reset the episode; returns the 12x4 lane feature matrix")
      .def(
          "act",
          [](PySession& s, bool deterministic) {
            const auto r = s.agent.act(s.env.graph(), sim::signal_features(s.env.state().signal),
                                       deterministic ? sac::ActMode::Deterministic
                                                     : sac::ActMode::Stochastic,
                                       false);
            return r.action.raw;
          },
          py::arg("deterministic") = true, "policy action for the current state")
      .def(
          "step",
          [](PySession& s, const std::vector<double>& action) {
            sac::ControlAction a;
            a.raw = action;
            sim::SignalCommand cmd = sac::decode_action(a, s.cfg);
            env::TrafficEnv::StepInfo info;
            const auto& g = s.env.step(cmd, info);
            py::dict d;
            d["reward"] = info.reward;
            d["cost_delay"] = info.cost_delay;
            d["cost_fairness"] = info.cost_fairness;
            d["cost_safety"] = info.cost_safety;
            d["cost_total"] = info.cost_total;
            d["departed"] = info.departed;
            d["events"] = info.events;
            return py::make_tuple(graph_features(g), info.reward, info.done, d);
          },
          py::arg("action"), "decode and hold the raw action for one control interval")
      .def("time", [](const PySession& s) { return s.env.time(); })
      .def("done", [](const PySession& s) { return s.env.done(); })
      .def("load", [](PySession& s, const std::string& path) { s.agent.load(path); })
      .def("train",
           [](PySession& s, int episodes) {
             const auto rows = sac::train_agent(s.env, s.agent, episodes);
             py::list out;
             for (const auto& r : rows) {
               py::dict d;
               d["episode"] = r.episode;
               d["reward"] = r.reward;
               d["throughput"] = r.throughput;
               d["delay"] = r.avg_delay;
               d["violations"] = r.violations;
               d["alpha"] = r.alpha;
               out.append(d);
             }
             return out;
           })
      .def("summary", [](const PySession& s) {
        const auto e = s.env.summary();
        py::dict d;
        d["reward"] = e.reward_sum;
        d["departed"] = e.departed;
        d["avg_delay"] = e.avg_delay;
        d["hdv_delay"] = e.hdv_delay;
        d["cav_delay"] = e.cav_delay;
        d["fairness_ratio"] = e.fairness_ratio;
        d["events"] = e.events;
        d["throughput_per_min"] = e.throughput_per_min;
        return d;
      });

  m.def(
      "train",
      [](const sim::SimConfig& cfg, int episodes, const std::string& out_dir) {
        const auto res = harness::run_train(cfg, episodes, out_dir);
        py::dict d;
        d["run_dir"] = res.run_dir;
        d["checkpoint"] = res.checkpoint_path;
        d["metrics"] = res.metrics_path;
        d["episodes"] = static_cast<int>(res.rows.size());
        return d;
      },
      py::arg("config"), py::arg("episodes"), py::arg("out_dir"));

  auto eval_dict = [](const harness::EvalResult& res) {
    py::dict d;
    d["csv"] = res.csv_path;
    d["mean_reward"] = res.mean.reward;
    d["mean_delay"] = res.mean.avg_delay;
    d["mean_violations_per_100"] = res.mean.violations_per_100;
    d["mean_throughput_vpm"] = res.mean.throughput_vpm;
    d["runs"] = static_cast<int>(res.rows.size());
    return d;
  };
  m.def(
      "evaluate",
      [eval_dict](const sim::SimConfig& cfg, const std::string& checkpoint, int runs,
                  std::uint64_t seed, const std::string& out_csv) {
        harness::EvalOptions opts;
        opts.runs = runs;
        opts.seed = seed;
        return eval_dict(harness::run_eval_agent(cfg, checkpoint, opts, out_csv));
      },
      py::arg("config"), py::arg("checkpoint"), py::arg("runs") = 20, py::arg("seed") = 1,
      py::arg("out_csv") = "");
  m.def(
      "evaluate_baseline",
      [eval_dict](const sim::SimConfig& cfg, int runs, std::uint64_t seed,
                  const std::string& out_csv) {
        harness::EvalOptions opts;
        opts.runs = runs;
        opts.seed = seed;
        return eval_dict(harness::run_eval_baseline(cfg, opts, out_csv));
      },
      py::arg("config"), py::arg("runs") = 20, py::arg("seed") = 1, py::arg("out_csv") = "");
}
