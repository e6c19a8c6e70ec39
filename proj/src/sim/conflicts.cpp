#include "gatsac/sim/conflicts.hpp"

#include <cmath>

#include "gatsac/core/error.hpp"

namespace gatsac::sim {
namespace {

struct Pt {
  double x, y;
};

// Right-hand traffic on a [-1,1]^2 box. Inbound lanes sit on the driver's
// right of each road, outbound lanes mirror them.
Pt entry_point(Approach a) {
  switch (a) {
    case Approach::N: return {-0.5, 1.0};
    case Approach::S: return {0.5, -1.0};
    case Approach::E: return {1.0, 0.5};
    default: return {-1.0, -0.5};  // W
  }
}

// Exit point by outbound heading.
Pt exit_north() { return {0.5, 1.0}; }
Pt exit_south() { return {-0.5, -1.0}; }
Pt exit_east() { return {1.0, -0.5}; }
Pt exit_west() { return {-1.0, 0.5}; }

Pt exit_point(Approach a, Movement m) {
  switch (a) {
    case Approach::N:  // heading south
      return m == Movement::Left ? exit_east() : m == Movement::Right ? exit_west() : exit_south();
    case Approach::S:  // heading north
      return m == Movement::Left ? exit_west() : m == Movement::Right ? exit_east() : exit_north();
    case Approach::E:  // heading west
      return m == Movement::Left ? exit_south() : m == Movement::Right ? exit_north() : exit_west();
    default:  // W, heading east
      return m == Movement::Left ? exit_north() : m == Movement::Right ? exit_south() : exit_east();
  }
}

double cross(const Pt& o, const Pt& a, const Pt& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

// Proper interior intersection; endpoint touches (merges/diverges) excluded.
bool proper_intersection(const Pt& a, const Pt& b, const Pt& c, const Pt& d,
                         double& ta, double& tb) {
  const double d1 = cross(c, d, a);
  const double d2 = cross(c, d, b);
  const double d3 = cross(a, b, c);
  const double d4 = cross(a, b, d);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) &&
      ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
    ta = d1 / (d1 - d2);
    tb = d3 / (d3 - d4);
    return true;
  }
  return false;
}

}  // namespace

const ConflictGeometry& ConflictGeometry::instance() {
  static const ConflictGeometry geom;
  return geom;
}

ConflictGeometry::ConflictGeometry() {
  std::array<Pt, kNumLanes> ent, ext;
  for (int lane = 0; lane < kNumLanes; ++lane) {
    ent[lane] = entry_point(lane_approach(lane));
    ext[lane] = exit_point(lane_approach(lane), lane_movement(lane));
  }
  for (auto& row : index_) row.fill(-1);

  // chord length per movement kind, in box half-width units
  for (Movement m : {Movement::Left, Movement::Through, Movement::Right}) {
    const int lane = lane_index(Approach::N, m);
    const double dx = ext[lane].x - ent[lane].x;
    const double dy = ext[lane].y - ent[lane].y;
    unit_length_[static_cast<int>(m)] = std::sqrt(dx * dx + dy * dy);
  }

  for (int a = 0; a < kNumLanes; ++a) {
    for (int b = a + 1; b < kNumLanes; ++b) {
      if (lane_approach(a) == lane_approach(b)) continue;
      double ta = 0.0, tb = 0.0;
      if (proper_intersection(ent[a], ext[a], ent[b], ext[b], ta, tb)) {
        index_[a][b] = index_[b][a] = static_cast<int>(pairs_.size());
        pairs_.push_back({a, b, ta, tb});
      }
    }
  }
}

double ConflictGeometry::path_length(Movement m, double box_length) const {
  return unit_length_[static_cast<int>(m)] * 0.5 * box_length;
}

double ConflictGeometry::conflict_distance(int pair_idx, int lane, double box_length) const {
  const ConflictPair& p = pairs_.at(static_cast<std::size_t>(pair_idx));
  double frac;
  if (p.lane_a == lane)
    frac = p.frac_a;
  else if (p.lane_b == lane)
    frac = p.frac_b;
  else
    throw ShapeError("conflict_distance: lane not in pair");
  return frac * path_length(lane_movement(lane), box_length);
}

}  // namespace gatsac::sim
