#include "gatsac/sim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <unordered_map>

#include "gatsac/core/error.hpp"
#include "gatsac/sim/idm.hpp"

namespace gatsac::sim {
namespace {

// Entry cell that must be free before a queued spawn is admitted.
constexpr double kEntryCell = 8.0;  // m
// A vehicle that would need more than this to stop at the line keeps going
// (dilemma-zone commitment -> red-light-running event).
constexpr double kRedCommitDecel = 6.0;  // m/s^2
// Speed floor when projecting arrival times at box conflict points.
constexpr double kCrossingSpeedFloor = 0.5;  // m/s

int cls_idx(VehClass c) { return static_cast<int>(c); }

double box_path_length(int lane, double box_length) {
  return ConflictGeometry::instance().path_length(lane_movement(lane), box_length);
}

// Hold rule for a green lane under V2I conflict priorities: defer when any
// crossing movement has a vehicle inside the box and the pair's priority
// favors the occupant.
bool cav_entry_hold(const SimState& s, int lane, const std::array<bool, kNumLanes>& box_occupied) {
  if (!s.use_priorities || s.conflict_priority.empty()) return false;
  const auto& geom = ConflictGeometry::instance();
  for (int other = 0; other < kNumLanes; ++other) {
    if (!box_occupied[static_cast<std::size_t>(other)]) continue;
    const int idx = geom.pair_index(lane, other);
    if (idx < 0) continue;
    const double score = s.conflict_priority[static_cast<std::size_t>(idx)];
    const bool favors_self = (geom.pairs()[static_cast<std::size_t>(idx)].lane_a == lane)
                                 ? (score > 0.0)
                                 : (score <= 0.0);
    if (!favors_self) return true;
  }
  return false;
}

}  // namespace

int SimState::present_count() const {
  int n = 0;
  for (const auto& l : lanes) n += static_cast<int>(l.vehicles.size());
  return n;
}

int SimState::queued_count() const {
  int n = 0;
  for (const auto& l : lanes) n += static_cast<int>(l.outside_queue.size());
  return n;
}

double vehicle_delay(const VehicleState& v, double t) {
  return std::max(0.0, t - v.arrival_time - v.freeflow_time);
}

SimState init_simulation(const SimConfig& cfg) {
  cfg.validate();
  SimState s;
  s.cfg = std::make_shared<const SimConfig>(cfg);
  s.rng = Rng(cfg.rng_seed);
  s.signal.bounds = {cfg.g_min, cfg.g_max, cfg.c_min, cfg.t_min, cfg.t_max};
  s.signal.clearances.fill(cfg.clearance);
  s.signal.greens.fill(0.5 * (cfg.g_min + cfg.g_max));
  s.conflict_priority.assign(
      static_cast<std::size_t>(ConflictGeometry::instance().num_pairs()), 0.0);
  return s;
}

void spawn_arrivals(SimState& s, double dt, int* spawned_out, int* entered_out) {
  const SimConfig& cfg = *s.cfg;
  int spawned = 0, entered = 0;

  const int n = s.rng.poisson(cfg.demand / 3600.0 * dt);
  for (int k = 0; k < n; ++k) {
    const auto app = static_cast<Approach>(
        std::min<std::uint64_t>(3, static_cast<std::uint64_t>(s.rng.uniform() * 4.0)));
    const double um = s.rng.uniform();
    Movement mov;
    if (um < cfg.split_through)
      mov = Movement::Through;
    else if (um < cfg.split_through + cfg.split_left)
      mov = Movement::Left;
    else
      mov = Movement::Right;
    const VehClass cls = s.rng.bernoulli(cfg.cav_penetration) ? VehClass::CAV : VehClass::HDV;

    PendingVehicle pv;
    pv.id = s.next_vehicle_id++;
    pv.cls = cls;
    pv.arrival_time = s.time;
    pv.noise_seed = pv.id;
    pv.headway_mult = 1.0;
    if (cls == VehClass::HDV && cfg.hdv_headway_noise > 0.0)
      pv.headway_mult = std::max(0.2, 1.0 + cfg.hdv_headway_noise * s.rng.normal());

    s.lanes[static_cast<std::size_t>(lane_index(app, mov))].outside_queue.push_back(pv);
    s.spawned_by_class[static_cast<std::size_t>(cls_idx(cls))]++;
    ++spawned;
  }

  // admission: first class-admissible queued vehicle enters when the entry
  // cell is free. A vehicle blocked by the lane type longer than one
  // channelization period overrides it: typing biases arrivals, it cannot
  // starve a movement's demand.
  for (int lane = 0; lane < kNumLanes; ++lane) {
    auto& L = s.lanes[static_cast<std::size_t>(lane)];
    for (;;) {
      if (L.outside_queue.empty()) break;
      auto it = std::find_if(L.outside_queue.begin(), L.outside_queue.end(),
                             [&](const PendingVehicle& p) {
                               return lane_admits(L.type, p.cls) ||
                                      s.time - p.arrival_time >= cfg.channelization_period;
                             });
      if (it == L.outside_queue.end()) break;
      if (!L.vehicles.empty() && L.vehicles.back().position < kEntryCell) break;

      const VehicleClassParams& p = cfg.class_params(it->cls);
      VehicleState v;
      v.id = it->id;
      v.cls = it->cls;
      v.lane = lane;
      v.position = 0.0;
      v.arrival_time = it->arrival_time;
      v.freeflow_time = cfg.lane_length / p.desired_speed;
      v.headway_mult = it->headway_mult;
      v.noise_seed = it->noise_seed;
      const double delay =
          (v.cls == VehClass::CAV) ? cfg.v2i_period : p.reaction_time;
      v.delay_steps = std::max(0, static_cast<int>(std::lround(delay / cfg.dt)));
      v.ring.assign(static_cast<std::size_t>(v.delay_steps + 1), VehicleState::Sense{});
      v.ring_head = 0;
      v.ring_count = 0;

      VehicleState::Sense first;
      if (!L.vehicles.empty()) {
        const VehicleState& lead = L.vehicles.back();
        first.gap = lead.position - v.position - kVehicleLength;
        first.dv = 0.0;
        first.has_leader = true;
        v.speed = (first.gap < 2.0 * p.desired_speed * p.desired_headway)
                      ? std::min(p.desired_speed, lead.speed)
                      : p.desired_speed;
        first.dv = v.speed - lead.speed;
      } else {
        v.speed = p.desired_speed;
      }
      v.push_sense(first);

      L.vehicles.push_back(v);
      s.entered_by_class[static_cast<std::size_t>(cls_idx(v.cls))]++;
      ++entered;
      L.outside_queue.erase(it);
    }
  }
  if (spawned_out) *spawned_out += spawned;
  if (entered_out) *entered_out += entered;
}

std::vector<SafetyEvent> detect_safety_events(const SimState& prev, SimState& next) {
  const SimConfig& cfg = *next.cfg;
  const SafetyThresholds& th = cfg.safety;
  const auto& geom = ConflictGeometry::instance();
  std::vector<SafetyEvent> events;

  std::unordered_map<std::uint64_t, double> prev_pos;
  prev_pos.reserve(128);
  for (const auto& L : prev.lanes)
    for (const auto& v : L.vehicles) prev_pos[v.id] = v.position;

  // red-light running: stop line crossed this step while the movement is red
  for (int lane = 0; lane < kNumLanes; ++lane) {
    if (lane_green(next.signal, lane)) continue;
    for (const auto& v : next.lanes[static_cast<std::size_t>(lane)].vehicles) {
      auto it = prev_pos.find(v.id);
      if (it == prev_pos.end()) continue;
      if (it->second < cfg.lane_length && v.position >= cfg.lane_length) {
        const double v0 = cfg.class_params(v.cls).desired_speed;
        events.push_back({EventKind::RLR, next.time, v.id, 0,
                          std::max(v.speed, 0.1) / v0});
      }
    }
  }

  // hard braking, one event per continuous episode
  std::set<std::uint64_t> hb_now;
  for (const auto& L : next.lanes)
    for (const auto& v : L.vehicles)
      if (v.accel <= -th.hb_decel_threshold) {
        hb_now.insert(v.id);
        if (!next.active_hb.count(v.id))
          events.push_back({EventKind::HB, next.time, v.id, 0,
                            -v.accel / th.hb_decel_threshold});
      }
  next.active_hb = std::move(hb_now);

  // TTC: same-lane closing pairs plus box crossing conflicts
  std::set<std::pair<std::uint64_t, std::uint64_t>> ttc_now;
  auto flag_pair = [&](std::uint64_t a, std::uint64_t b, double severity) {
    const auto key = std::minmax(a, b);
    if (ttc_now.insert({key.first, key.second}).second &&
        !next.active_ttc.count({key.first, key.second}))
      events.push_back({EventKind::TTC, next.time, key.first, key.second, severity});
  };

  for (const auto& L : next.lanes) {
    for (std::size_t i = 1; i < L.vehicles.size(); ++i) {
      const VehicleState& lead = L.vehicles[i - 1];
      const VehicleState& foll = L.vehicles[i];
      const double gap = lead.position - foll.position - kVehicleLength;
      if (gap < 0.0) {
        flag_pair(foll.id, lead.id, 1.0 - gap / kVehicleLength);
        continue;
      }
      const double dv = foll.speed - lead.speed;
      if (dv > 1e-9 && gap / dv < th.ttc_threshold)
        flag_pair(foll.id, lead.id, th.ttc_threshold - gap / dv);
    }
  }

  std::array<std::vector<const VehicleState*>, kNumLanes> box_veh;
  for (int lane = 0; lane < kNumLanes; ++lane)
    for (const auto& v : next.lanes[static_cast<std::size_t>(lane)].vehicles)
      if (v.position >= cfg.lane_length) box_veh[static_cast<std::size_t>(lane)].push_back(&v);

  for (int idx = 0; idx < geom.num_pairs(); ++idx) {
    const ConflictPair& cp = geom.pairs()[static_cast<std::size_t>(idx)];
    const double ca = geom.conflict_distance(idx, cp.lane_a, cfg.box_length);
    const double cb = geom.conflict_distance(idx, cp.lane_b, cfg.box_length);
    for (const VehicleState* va : box_veh[static_cast<std::size_t>(cp.lane_a)]) {
      const double da = ca - (va->position - cfg.lane_length);
      if (da < -kVehicleLength) continue;  // already past the conflict point
      for (const VehicleState* vb : box_veh[static_cast<std::size_t>(cp.lane_b)]) {
        const double db = cb - (vb->position - cfg.lane_length);
        if (db < -kVehicleLength) continue;
        const double ta = std::max(da, 0.0) / std::max(va->speed, kCrossingSpeedFloor);
        const double tb = std::max(db, 0.0) / std::max(vb->speed, kCrossingSpeedFloor);
        const double dt_cross = std::fabs(ta - tb);
        if (dt_cross < th.ttc_threshold)
          flag_pair(va->id, vb->id, th.ttc_threshold - dt_cross);
      }
    }
  }
  next.active_ttc = std::move(ttc_now);

  return events;
}

StepOutcome step(SimState& s, const SignalCommand& cmd) {
  const SimConfig& cfg = *s.cfg;
  const double dt = cfg.dt;
  StepOutcome out;

  // 1. controller command
  s.signal.greens = cmd.greens;
  if (cmd.request_switch) s.signal.pending_switch = true;
  if (cmd.apply_lane_types)
    for (int i = 0; i < kNumLanes; ++i)
      s.lanes[static_cast<std::size_t>(i)].type = cmd.lane_types[static_cast<std::size_t>(i)];
  s.use_priorities = cmd.use_priorities;
  if (cmd.use_priorities) s.conflict_priority = cmd.conflict_priority;

  const SimState prev = s;

  // 2. clock and signal
  s.time += dt;
  signal_advance(s.signal, dt);

  // 3. perception pass (current leader kinematics into each ring)
  for (auto& L : s.lanes) {
    for (std::size_t i = 0; i < L.vehicles.size(); ++i) {
      VehicleState::Sense sense;
      if (i > 0) {
        const VehicleState& lead = L.vehicles[i - 1];
        sense.gap = lead.position - L.vehicles[i].position - kVehicleLength;
        sense.dv = L.vehicles[i].speed - lead.speed;
        sense.has_leader = true;
      }
      L.vehicles[i].push_sense(sense);
    }
  }

  // 4. commanded accelerations
  std::array<bool, kNumLanes> box_occupied{};
  for (int lane = 0; lane < kNumLanes; ++lane)
    for (const auto& v : s.lanes[static_cast<std::size_t>(lane)].vehicles)
      if (v.position >= cfg.lane_length) box_occupied[static_cast<std::size_t>(lane)] = true;

  std::array<std::vector<double>, kNumLanes> accel;
  for (int lane = 0; lane < kNumLanes; ++lane) {
    auto& L = s.lanes[static_cast<std::size_t>(lane)];
    accel[static_cast<std::size_t>(lane)].resize(L.vehicles.size());
    const bool green = lane_green(s.signal, lane);
    const bool hold_cavs = green && cav_entry_hold(s, lane, box_occupied);

    for (std::size_t i = 0; i < L.vehicles.size(); ++i) {
      VehicleState& v = L.vehicles[i];
      VehicleClassParams p = cfg.class_params(v.cls);
      p.desired_headway *= v.headway_mult;

      const VehicleState::Sense d = v.delayed_sense();
      double a = d.has_leader ? idm_acceleration(v.speed, d.gap, d.dv, p)
                              : idm_free_acceleration(v.speed, p);

      if (v.position < cfg.lane_length) {
        bool must_stop = !green || (hold_cavs && v.cls == VehClass::CAV);
        if (!green) {
          const double gap_line = cfg.lane_length - v.position;
          const double a_req = v.speed * v.speed / (2.0 * std::max(gap_line, 0.01));
          if (v.committed_through_red || a_req > kRedCommitDecel) {
            v.committed_through_red = true;
            must_stop = false;
          }
        } else {
          v.committed_through_red = false;
        }
        if (must_stop) {
          const double gap_line = std::max(cfg.lane_length - v.position, 1e-3);
          a = std::min(a, idm_acceleration(v.speed, gap_line, v.speed, p));
        }
      }
      accel[static_cast<std::size_t>(lane)][i] = std::clamp(a, -kEmergencyDecel, p.max_accel);
    }
  }

  // 5. integrate front-to-back; departures leave from the vector head
  for (int lane = 0; lane < kNumLanes; ++lane) {
    auto& L = s.lanes[static_cast<std::size_t>(lane)];
    const double exit_pos = cfg.lane_length + box_path_length(lane, cfg.box_length);
    std::size_t removed = 0;
    for (std::size_t i = 0; i < L.vehicles.size(); ++i) {
      VehicleState& v = L.vehicles[i];
      const double a = accel[static_cast<std::size_t>(lane)][i];
      double v_new = v.speed + a * dt;
      double x_new;
      if (v_new < 0.0) {
        const double ts = (a < 0.0) ? v.speed / (-a) : 0.0;
        x_new = v.position + v.speed * ts + 0.5 * a * ts * ts;
        v_new = 0.0;
      } else {
        x_new = v.position + v.speed * dt + 0.5 * a * dt * dt;
      }
      // no passing within a lane: cap just behind the leader if overlapped
      if (i > removed) {
        const VehicleState& lead = L.vehicles[i - 1];
        if (x_new > lead.position - 0.1) {
          x_new = lead.position - 0.1;
          v_new = std::min(v_new, lead.speed);
        }
      }
      v.accel = (v_new - v.speed) / dt;
      v.speed = v_new;
      v.position = x_new;

      if (v.position >= exit_pos) {
        const int ci = cls_idx(v.cls);
        s.departed_by_class[static_cast<std::size_t>(ci)]++;
        s.exit_delay_sum[static_cast<std::size_t>(ci)] += vehicle_delay(v, s.time);
        ++out.departed;
        ++removed;
      }
    }
    if (removed > 0)
      L.vehicles.erase(L.vehicles.begin(), L.vehicles.begin() + static_cast<std::ptrdiff_t>(removed));
  }

  // 6. arrivals
  spawn_arrivals(s, dt, &out.spawned, &out.entered);

  // 7. events against the pre-step state
  out.events = detect_safety_events(prev, s);

  // 8. presence and waiting accumulators; vehicles queued at the boundary are
  // arrived demand and carry their waiting time into the delay objective
  for (const auto& L : s.lanes) {
    for (const auto& v : L.vehicles) {
      const int ci = cls_idx(v.cls);
      out.present_count[static_cast<std::size_t>(ci)]++;
      out.waiting_sum[static_cast<std::size_t>(ci)] += vehicle_delay(v, s.time);
    }
    for (const auto& p : L.outside_queue) {
      const int ci = cls_idx(p.cls);
      const double freeflow = cfg.lane_length / cfg.class_params(p.cls).desired_speed;
      out.present_count[static_cast<std::size_t>(ci)]++;
      out.waiting_sum[static_cast<std::size_t>(ci)] +=
          std::max(0.0, s.time - p.arrival_time - freeflow);
    }
  }
  return out;
}

std::string trace_header() { return "time,vehicle_id,class,lane,position,speed,accel"; }

void append_trace(const SimState& s, std::string& outbuf) {
  char buf[160];
  for (int lane = 0; lane < kNumLanes; ++lane) {
    for (const auto& v : s.lanes[static_cast<std::size_t>(lane)].vehicles) {
      std::snprintf(buf, sizeof(buf), "%.1f,%llu,%s,%s,%.3f,%.3f,%.3f\n", s.time,
                    static_cast<unsigned long long>(v.id), class_name(v.cls), lane_name(lane),
                    v.position, v.speed, v.accel);
      outbuf += buf;
    }
  }
}

}  // namespace gatsac::sim
