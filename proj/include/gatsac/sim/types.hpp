#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace gatsac::sim {

inline constexpr int kNumLanes = 12;
inline constexpr int kNumPhases = 4;
inline constexpr double kVehicleLength = 5.0;  // meters, bumper to bumper basis

enum class VehClass : int { CAV = 0, HDV = 1 };
enum class Approach : int { N = 0, S = 1, E = 2, W = 3 };
enum class Movement : int { Left = 0, Through = 1, Right = 2 };
enum class LaneType : int { CavOnly = 0, HdvOnly = 1, Mixed = 2 };

inline int lane_index(Approach a, Movement m) {
  return static_cast<int>(a) * 3 + static_cast<int>(m);
}
inline Approach lane_approach(int lane) { return static_cast<Approach>(lane / 3); }
inline Movement lane_movement(int lane) { return static_cast<Movement>(lane % 3); }

const char* lane_name(int lane);  // "N_left", "N_through", ...
const char* class_name(VehClass c);
const char* lane_type_name(LaneType t);

bool lane_admits(LaneType t, VehClass c);

struct VehicleClassParams {
  double reaction_time;      // s
  double desired_headway;    // s (IDM T)
  double max_accel;          // m/s^2 (IDM a)
  double comfortable_decel;  // m/s^2 (IDM b)
  double min_gap;            // m (IDM s0)
  double desired_speed;      // m/s (IDM v0)
  double accel_exponent;     // IDM delta
};

struct VehicleState {
  std::uint64_t id = 0;
  VehClass cls = VehClass::CAV;
  int lane = 0;
  double position = 0.0;  // m from lane entry; > lane_length means inside the box
  double speed = 0.0;
  double accel = 0.0;          // realized accel over the last step
  double arrival_time = 0.0;   // when the vehicle joined the system
  double freeflow_time = 0.0;  // lane_length / desired_speed, fixed at spawn
  double headway_mult = 1.0;   // per-driver headway noise (HDV)
  std::uint64_t noise_seed = 0;
  bool committed_through_red = false;  // dilemma-zone commitment latch

  // Delayed perception of the leader: ring of per-step samples; a vehicle
  // acts on the sample delay_steps old.
  struct Sense {
    double gap = 1e9;
    double dv = 0.0;  // own speed minus leader speed (closing > 0)
    bool has_leader = false;
  };
  std::vector<Sense> ring;
  int ring_head = 0;
  int ring_count = 0;
  int delay_steps = 0;

  void push_sense(const Sense& s);
  Sense delayed_sense() const;
};

struct SafetyThresholds {
  double ttc_threshold = 1.5;       // s
  double hb_decel_threshold = 4.5;  // m/s^2
  double min_gap = 2.0;             // m
};

enum class EventKind : int { RLR = 0, TTC = 1, HB = 2 };

struct SafetyEvent {
  EventKind kind;
  double time;
  std::uint64_t vehicle_a;
  std::uint64_t vehicle_b;  // 0 for single-vehicle events
  double severity;          // dimensionless, > 0
};

const char* event_kind_name(EventKind k);

}  // namespace gatsac::sim
