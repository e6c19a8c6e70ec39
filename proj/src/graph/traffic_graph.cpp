#include "gatsac/graph/traffic_graph.hpp"

#include <algorithm>

#include "gatsac/core/csv.hpp"

namespace gatsac::graph {

using sim::kNumLanes;

const std::array<std::vector<int>, kNumLanes>& lane_neighborhoods() {
  static const auto nbrs = [] {
    std::array<std::vector<int>, kNumLanes> n;
    for (int i = 0; i < kNumLanes; ++i) n[static_cast<std::size_t>(i)].push_back(i);
    // same-approach adjacent lanes (left<->through, through<->right)
    for (int a = 0; a < 4; ++a) {
      const int base = a * 3;
      for (auto [x, y] : {std::pair{base, base + 1}, std::pair{base + 1, base + 2}}) {
        n[static_cast<std::size_t>(x)].push_back(y);
        n[static_cast<std::size_t>(y)].push_back(x);
      }
    }
    for (const auto& cp : sim::ConflictGeometry::instance().pairs()) {
      n[static_cast<std::size_t>(cp.lane_a)].push_back(cp.lane_b);
      n[static_cast<std::size_t>(cp.lane_b)].push_back(cp.lane_a);
    }
    for (auto& v : n) std::sort(v.begin(), v.end());
    return n;
  }();
  return nbrs;
}

int queue_length(const sim::SimState& state, int lane) {
  int n = 0;
  for (const auto& v : state.lanes[static_cast<std::size_t>(lane)].vehicles)
    if (v.speed < kStoppedSpeed && v.position < state.cfg->lane_length) ++n;
  return n;
}

TrafficGraph build_graph(const sim::SimState& state) {
  const sim::SimConfig& cfg = *state.cfg;
  TrafficGraph g;
  g.nbrs = lane_neighborhoods();
  g.num_edges = 0;
  for (const auto& v : g.nbrs) g.num_edges += static_cast<int>(v.size());

  const double v_ref = std::max(cfg.cav.desired_speed, cfg.hdv.desired_speed);
  const double capacity = cfg.lane_length / kJamSpacing;

  for (int lane = 0; lane < kNumLanes; ++lane) {
    const auto& L = state.lanes[static_cast<std::size_t>(lane)];
    NodeFeatures f{1.0, 0.0, 0.0, 0.0};
    int in_lane = 0, cav = 0;
    double speed_sum = 0.0;
    for (const auto& v : L.vehicles) {
      if (v.position >= cfg.lane_length) continue;  // box occupants left the lane
      ++in_lane;
      speed_sum += v.speed;
      if (v.cls == sim::VehClass::CAV) ++cav;
    }
    if (in_lane > 0) {
      f.speed_norm = (speed_sum / in_lane) / v_ref;
      f.density = (static_cast<double>(in_lane) / cfg.lane_length) * kJamSpacing;
      f.cav_ratio = static_cast<double>(cav) / in_lane;
      f.queue = static_cast<double>(queue_length(state, lane)) / capacity;
    }
    g.nodes[static_cast<std::size_t>(lane)] = f;
  }
  return g;
}

void write_graph_csv(const TrafficGraph& g, const std::string& path) {
  CsvWriter w(path, {"node_id", "v_norm", "density", "cav_ratio", "queue"});
  for (int i = 0; i < kNumLanes; ++i) {
    const NodeFeatures& f = g.nodes[static_cast<std::size_t>(i)];
    w.row({std::to_string(i), format_double(f.speed_norm), format_double(f.density),
           format_double(f.cav_ratio), format_double(f.queue)});
  }
}

}  // namespace gatsac::graph
