#pragma once

#include <array>
#include <vector>

#include "gatsac/sim/types.hpp"

namespace gatsac::sim {

// Crossing-conflict pair between two movements, with the conflict point given
// as a fraction along each movement's path through the intersection box.
struct ConflictPair {
  int lane_a;  // canonical: lane_a < lane_b
  int lane_b;
  double frac_a;
  double frac_b;
};

// Movement paths are modelled as chords of the intersection box (entry point
// to exit point); two movements conflict when their chords properly cross in
// the interior. Shared exits are merges, not crossings, and same-approach
// pairs never conflict. The table is a pure function of the fixed 12-lane
// geometry and is computed once.
class ConflictGeometry {
 public:
  static const ConflictGeometry& instance();

  const std::vector<ConflictPair>& pairs() const { return pairs_; }
  int num_pairs() const { return static_cast<int>(pairs_.size()); }

  // -1 when the two lanes' movements do not cross; order-insensitive.
  int pair_index(int lane_a, int lane_b) const { return index_[lane_a][lane_b]; }

  // Length of the in-box path for a movement, in meters. box_length is the
  // straight-through crossing distance.
  double path_length(Movement m, double box_length) const;

  // Distance in meters from box entry to the conflict point along `lane`'s path.
  double conflict_distance(int pair_idx, int lane, double box_length) const;

 private:
  ConflictGeometry();
  std::vector<ConflictPair> pairs_;
  std::array<std::array<int, kNumLanes>, kNumLanes> index_;
  std::array<double, 3> unit_length_;  // per Movement, in box half-width units
};

}  // namespace gatsac::sim
