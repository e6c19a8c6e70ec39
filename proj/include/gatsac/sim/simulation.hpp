#pragma once

#include <array>
#include <deque>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "gatsac/core/rng.hpp"
#include "gatsac/sim/config.hpp"
#include "gatsac/sim/conflicts.hpp"
#include "gatsac/sim/signal.hpp"
#include "gatsac/sim/types.hpp"

namespace gatsac::sim {

// Decoded controller command executed by the simulator for one step. Decoding
// (sac::decode_action) guarantees greens within [g_min, g_max].
struct SignalCommand {
  std::array<double, kNumPhases> greens{30.0, 30.0, 30.0, 30.0};
  bool request_switch = false;
  std::array<LaneType, kNumLanes> lane_types{};
  bool apply_lane_types = false;
  std::vector<double> conflict_priority;  // per ConflictGeometry pair; >0 favors lane_a
  bool use_priorities = false;

  SignalCommand() { lane_types.fill(LaneType::Mixed); }
};

// Spawn drawn but not yet admitted into its lane.
struct PendingVehicle {
  std::uint64_t id;
  VehClass cls;
  double arrival_time;
  double headway_mult;
  std::uint64_t noise_seed;
};

struct LaneState {
  LaneType type = LaneType::Mixed;
  std::vector<VehicleState> vehicles;  // sorted front-first (descending position)
  std::deque<PendingVehicle> outside_queue;
};

struct SimState {
  std::shared_ptr<const SimConfig> cfg;
  double time = 0.0;
  std::uint64_t next_vehicle_id = 1;
  std::array<LaneState, kNumLanes> lanes;
  SignalState signal;
  Rng rng{0};

  // running conservation / metrics counters
  std::array<std::uint64_t, 2> spawned_by_class{};   // drawn arrivals (incl. queued)
  std::array<std::uint64_t, 2> entered_by_class{};   // admitted into a lane
  std::array<std::uint64_t, 2> departed_by_class{};  // crossed the far side
  std::array<double, 2> exit_delay_sum{};            // excess delay at departure

  std::vector<double> conflict_priority;  // held command, per conflict pair
  bool use_priorities = false;

  // one event per pair/vehicle per continuous violation episode
  std::set<std::pair<std::uint64_t, std::uint64_t>> active_ttc;
  std::set<std::uint64_t> active_hb;

  std::uint64_t total_spawned() const { return spawned_by_class[0] + spawned_by_class[1]; }
  std::uint64_t total_departed() const { return departed_by_class[0] + departed_by_class[1]; }
  std::uint64_t total_entered() const { return entered_by_class[0] + entered_by_class[1]; }
  int present_count() const;
  int queued_count() const;
};

struct StepOutcome {
  int departed = 0;
  int spawned = 0;
  int entered = 0;
  std::array<int, 2> present_count{};      // by VehClass
  std::array<double, 2> waiting_sum{};     // excess delay among present vehicles
  std::vector<SafetyEvent> events;
};

// Fresh state at t=0: empty lanes, phase 0 (clearance), seeded RNG.
SimState init_simulation(const SimConfig& cfg);

// One dt step: applies the command, advances the signal, moves every vehicle
// (IDM on delayed observations), spawns arrivals and collects events.
// Degenerate kinematics produce events, never failures.
StepOutcome step(SimState& state, const SignalCommand& cmd);

// Safety detector over two consecutive states (thresholds from cfg). Updates
// next's continuity bookkeeping so each violation episode counts once.
std::vector<SafetyEvent> detect_safety_events(const SimState& prev, SimState& next);

// Poisson arrivals for one dt; blocked spawns queue outside, and queued
// vehicles are admitted when their lane's type and entry cell allow.
void spawn_arrivals(SimState& state, double dt, int* spawned = nullptr, int* entered = nullptr);

// Episode trace row: time,vehicle_id,class,lane,position,speed,accel
void append_trace(const SimState& state, std::string& out);
std::string trace_header();

// Per-vehicle excess delay at time t.
double vehicle_delay(const VehicleState& v, double t);

}  // namespace gatsac::sim
