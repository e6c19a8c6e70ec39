#pragma once

// Shared fixtures for simulator tests: hand-built vehicles and states.

#include <cmath>
#include <cstring>

#include "gatsac/sim/idm.hpp"
#include "gatsac/sim/simulation.hpp"

namespace testsupport {

inline gatsac::sim::VehicleState make_vehicle(const gatsac::sim::SimConfig& cfg,
                                              std::uint64_t id, gatsac::sim::VehClass cls,
                                              int lane, double pos, double speed,
                                              double sensed_gap = gatsac::sim::kFreeRoadGap,
                                              double sensed_dv = 0.0) {
  using namespace gatsac::sim;
  VehicleState v;
  v.id = id;
  v.cls = cls;
  v.lane = lane;
  v.position = pos;
  v.speed = speed;
  v.arrival_time = 0.0;
  const VehicleClassParams& p = cfg.class_params(cls);
  v.freeflow_time = cfg.lane_length / p.desired_speed;
  const double delay = (cls == VehClass::CAV) ? cfg.v2i_period : p.reaction_time;
  v.delay_steps = std::max(0, static_cast<int>(std::lround(delay / cfg.dt)));
  v.ring.assign(static_cast<std::size_t>(v.delay_steps + 1), VehicleState::Sense{});
  VehicleState::Sense s;
  s.gap = sensed_gap;
  s.dv = sensed_dv;
  s.has_leader = sensed_gap < 0.5 * kFreeRoadGap;
  v.push_sense(s);
  return v;
}

// Sorted insert (front-first by position).
inline void add_vehicle(gatsac::sim::SimState& st, const gatsac::sim::VehicleState& v) {
  auto& lane = st.lanes[static_cast<std::size_t>(v.lane)].vehicles;
  auto it = lane.begin();
  while (it != lane.end() && it->position >= v.position) ++it;
  lane.insert(it, v);
}

// Forces the signal into a held green for the given phase.
inline void hold_green(gatsac::sim::SimState& st, int phase) {
  st.signal.phase = phase;
  st.signal.in_clearance = false;
  st.signal.phase_elapsed = 0.0;
  st.signal.cycle_elapsed = 0.0;
  st.signal.enforce_cycle_cap = false;
  st.signal.greens.fill(1e9);
}

inline gatsac::sim::SignalCommand hold_command() {
  gatsac::sim::SignalCommand cmd;
  cmd.greens.fill(1e9);
  return cmd;
}

// Behavioral fingerprint of a state (positions/speeds bit patterns + counters).
inline std::uint64_t state_fingerprint(const gatsac::sim::SimState& st) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](std::uint64_t x) {
    h ^= x;
    h *= 0x100000001b3ULL;
  };
  auto mixd = [&](double d) {
    std::uint64_t bits;
    std::memcpy(&bits, &d, sizeof(bits));
    mix(bits);
  };
  mixd(st.time);
  mix(st.next_vehicle_id);
  mix(st.total_spawned());
  mix(st.total_departed());
  mix(static_cast<std::uint64_t>(st.signal.phase));
  mix(static_cast<std::uint64_t>(st.signal.in_clearance));
  mixd(st.signal.phase_elapsed);
  for (const auto& L : st.lanes) {
    mix(L.vehicles.size());
    mix(L.outside_queue.size());
    for (const auto& v : L.vehicles) {
      mix(v.id);
      mixd(v.position);
      mixd(v.speed);
      mixd(v.accel);
    }
  }
  return h;
}

}  // namespace testsupport
