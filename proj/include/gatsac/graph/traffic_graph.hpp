#pragma once

#include <array>
#include <string>
#include <vector>

#include "gatsac/sim/simulation.hpp"

namespace gatsac::graph {

// Jam spacing used to normalize density and queue length: one vehicle per
// (vehicle length + standstill gap).
inline constexpr double kJamSpacing = 7.0;  // m
// Below this speed a vehicle counts as queued.
inline constexpr double kStoppedSpeed = 0.1;  // m/s

struct NodeFeatures {
  double speed_norm;  // mean speed / desired speed; 1.0 for an empty lane
  double density;     // vehicles per meter over jam density
  double cav_ratio;   // in [0,1]
  double queue;       // stopped vehicles over lane capacity
};
inline constexpr int kFeatureDim = 4;

// Lane-level directed graph: one node per lane in canonical order, self-loop
// on every node, same-approach adjacency both ways and crossing-conflict
// pairs both ways. Topology is fixed by the geometry; features track state.
struct TrafficGraph {
  std::array<NodeFeatures, sim::kNumLanes> nodes;
  // neighborhoods: nbrs[i] lists j in N(i), ascending, always containing i
  std::array<std::vector<int>, sim::kNumLanes> nbrs;
  int num_edges = 0;  // directed, including self-loops

  std::array<double, kFeatureDim> feature_row(int node) const {
    const NodeFeatures& f = nodes[static_cast<std::size_t>(node)];
    return {f.speed_norm, f.density, f.cav_ratio, f.queue};
  }
};

// Static topology shared by every snapshot.
const std::array<std::vector<int>, sim::kNumLanes>& lane_neighborhoods();

TrafficGraph build_graph(const sim::SimState& state);

// Stopped-vehicle count for a lane.
int queue_length(const sim::SimState& state, int lane);

// node_id,v_norm,density,cav_ratio,queue
void write_graph_csv(const TrafficGraph& g, const std::string& path);

}  // namespace gatsac::graph
