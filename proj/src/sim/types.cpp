#include "gatsac/sim/types.hpp"

namespace gatsac::sim {

const char* lane_name(int lane) {
  static const char* names[kNumLanes] = {
      "N_left", "N_through", "N_right", "S_left", "S_through", "S_right",
      "E_left", "E_through", "E_right", "W_left", "W_through", "W_right"};
  return names[lane];
}

const char* class_name(VehClass c) { return c == VehClass::CAV ? "CAV" : "HDV"; }

const char* lane_type_name(LaneType t) {
  switch (t) {
    case LaneType::CavOnly: return "CAV_only";
    case LaneType::HdvOnly: return "HDV_only";
    default: return "mixed";
  }
}

bool lane_admits(LaneType t, VehClass c) {
  if (t == LaneType::Mixed) return true;
  return (t == LaneType::CavOnly) == (c == VehClass::CAV);
}

const char* event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::RLR: return "RLR";
    case EventKind::TTC: return "TTC";
    default: return "HB";
  }
}

void VehicleState::push_sense(const Sense& s) {
  if (ring.empty()) return;
  ring_head = (ring_head + 1) % static_cast<int>(ring.size());
  ring[static_cast<std::size_t>(ring_head)] = s;
  if (ring_count < static_cast<int>(ring.size())) ++ring_count;
}

VehicleState::Sense VehicleState::delayed_sense() const {
  if (ring.empty() || ring_count == 0) return Sense{};
  const int lag = std::min(delay_steps, ring_count - 1);
  const int n = static_cast<int>(ring.size());
  const int idx = ((ring_head - lag) % n + n) % n;
  return ring[static_cast<std::size_t>(idx)];
}

}  // namespace gatsac::sim
