#include "gatsac/sac/action.hpp"

namespace gatsac::sac {

sim::SignalCommand decode_action(const ControlAction& a, const sim::SimConfig& cfg) {
  if (static_cast<int>(a.raw.size()) != ControlAction::total_dim())
    throw ShapeError("decode_action: raw size " + std::to_string(a.raw.size()) +
                     " vs expected " + std::to_string(ControlAction::total_dim()));
  sim::SignalCommand cmd;
  const auto sig = a.signal();
  for (int k = 0; k < sim::kNumPhases; ++k)
    cmd.greens[static_cast<std::size_t>(k)] =
        cfg.g_min + 0.5 * (sig[static_cast<std::size_t>(k)] + 1.0) * (cfg.g_max - cfg.g_min);
  cmd.request_switch = sig[static_cast<std::size_t>(sim::kNumPhases)] > 0.0;
  const auto con = a.conflict();
  cmd.conflict_priority.assign(con.begin(), con.end());
  cmd.use_priorities = true;
  return cmd;
}

}  // namespace gatsac::sac
