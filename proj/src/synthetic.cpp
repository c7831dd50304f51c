// Copyright 2026 The floorloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "floorloc/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <utility>

#include "floorloc/error.hpp"
#include "floorloc/random.hpp"
#include "floorloc/ray_casting.hpp"

namespace floorloc {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kCornerMargin = 0.3;  // keep doors and pilasters off corners

struct Side {
  Vec2 start;
  Vec2 dir;     // unit, along the wall
  Vec2 inward;  // unit, into the room
  double length;
  std::vector<std::pair<double, double>> blocked;  // occupied [s0, s1] along the side
};

bool interval_free(const Side& side, double s0, double s1, double pad) {
  for (const auto& [b0, b1] : side.blocked) {
    if (s0 < b1 + pad && s1 > b0 - pad) return false;
  }
  return true;
}

void add_pilasters(Side& side, int count, Stream& rng, std::vector<Segment2>& walls) {
  for (int k = 0; k < count; ++k) {
    for (int attempt = 0; attempt < 20; ++attempt) {
      const double width = rng.uniform(0.25, 0.45);
      const double depth = rng.uniform(0.15, 0.30);
      const double hi = side.length - kCornerMargin - width;
      if (hi <= kCornerMargin) break;
      const double s = rng.uniform(kCornerMargin, hi);
      if (!interval_free(side, s, s + width, 0.2)) continue;
      const Vec2 p1 = side.start + s * side.dir;
      const Vec2 p2 = p1 + width * side.dir;
      const Vec2 q1 = p1 + depth * side.inward;
      const Vec2 q2 = p2 + depth * side.inward;
      walls.push_back({p1, q1});
      walls.push_back({q1, q2});
      walls.push_back({q2, p2});
      side.blocked.emplace_back(s, s + width);
      break;
    }
  }
}

// Splits a straight wall at the given gaps (sorted, disjoint, in arc length).
void emit_with_gaps(const Vec2& a, const Vec2& b, const std::vector<std::pair<double, double>>& gaps,
                    std::vector<Segment2>& walls, std::vector<Segment2>& doors) {
  const double len = (b - a).norm();
  const Vec2 dir = (b - a) / len;
  double cursor = 0.0;
  for (const auto& [g0, g1] : gaps) {
    if (g0 > cursor) walls.push_back({a + cursor * dir, a + g0 * dir});
    doors.push_back({a + g0 * dir, a + g1 * dir});
    cursor = g1;
  }
  if (cursor < len) walls.push_back({a + cursor * dir, b});
}

double segment_distance(const Vec2& p, const Segment2& s) {
  const Vec2 e = s.b - s.a;
  const double len2 = e.squaredNorm();
  const double t = len2 > 0.0 ? std::clamp((p - s.a).dot(e) / len2, 0.0, 1.0) : 0.0;
  return (p - (s.a + t * e)).norm();
}

double wall_clearance(const Vec2& p, const std::vector<Segment2>& walls) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& s : walls) best = std::min(best, segment_distance(p, s));
  return best;
}

FloorPlan single_room(const GenSpec& spec, Stream& rng) {
  const double w = spec.room_width > 0.0 ? spec.room_width : rng.uniform(spec.width_min, spec.width_max);
  const double d = spec.room_depth > 0.0 ? spec.room_depth : rng.uniform(spec.width_min, spec.width_max);
  std::vector<Segment2> walls{{{0, 0}, {w, 0}}, {{w, 0}, {w, d}}, {{w, d}, {0, d}}, {{0, d}, {0, 0}}};
  std::vector<Side> sides{{{0, 0}, {1, 0}, {0, 1}, w, {}},
                          {{w, 0}, {0, 1}, {-1, 0}, d, {}},
                          {{0, d}, {1, 0}, {0, -1}, w, {}},
                          {{0, 0}, {0, 1}, {1, 0}, d, {}}};
  for (int k = 0; k < spec.pilasters_per_room; ++k) {
    add_pilasters(sides[rng.below(sides.size())], 1, rng, walls);
  }
  SegmentSet set{walls, SegmentFrame::kFloorPlan};
  return build_floorplan(std::move(set), {}, spec.resolution, Vec2(w / 2, d / 2));
}

}  // namespace

void GenSpec::validate() const {
  if (rooms < 1 || rooms > 64) throw InputError("gen spec: rooms must be in [1, 64]");
  if (corridors < 0 || corridors > 1) throw InputError("gen spec: corridors must be 0 or 1");
  if (corridors == 0 && rooms != 1) throw InputError("gen spec: without a corridor only one room is possible");
  if (!(width_min >= 2.0) || !(width_max >= width_min)) {
    throw InputError("gen spec: need 2 <= width_min <= width_max");
  }
  if (room_width != 0.0 && !(room_width >= 2.0)) throw InputError("gen spec: room_width must be >= 2 m");
  if (room_depth != 0.0 && !(room_depth >= 2.0)) throw InputError("gen spec: room_depth must be >= 2 m");
  const double narrowest = room_width > 0.0 ? room_width : width_min;
  if (!(door_width > 0.0) || door_width + 2.0 * kCornerMargin + chamfer + 0.2 > narrowest) {
    throw InputError("gen spec: door does not fit in the narrowest room");
  }
  if (!(corridor_width >= 1.0)) throw InputError("gen spec: corridor_width must be >= 1 m");
  if (chamfer < 0.0 || chamfer > corridor_width - 0.3) {
    throw InputError("gen spec: chamfer must be in [0, corridor_width - 0.3]");
  }
  if (pilasters_per_room < 0 || corridor_pilasters < 0) throw InputError("gen spec: negative pilaster count");
  if (!(resolution > 0.0)) throw InputError("gen spec: resolution must be positive");
}

FloorPlan gen_floorplan(std::uint64_t seed, const GenSpec& spec) {
  spec.validate();
  Stream rng(seed, 0x9E7);
  if (spec.corridors == 0) return single_room(spec, rng);

  const double cw = spec.corridor_width;
  const int top = (spec.rooms + 1) / 2;
  const int bottom = spec.rooms / 2;
  auto draw = [&](double fixed) { return fixed > 0.0 ? fixed : rng.uniform(spec.width_min, spec.width_max); };
  const double module_w = draw(spec.room_width);
  const double module_d = draw(spec.room_depth);

  struct Room {
    double x0, x1, depth;
    bool upper;
  };
  std::vector<Room> rooms;
  double l_top = 0.0;
  double l_bottom = 0.0;
  for (int i = 0; i < top; ++i) {
    const double w = spec.uniform_rooms ? module_w : draw(spec.room_width);
    const double d = spec.uniform_rooms ? module_d : draw(spec.room_depth);
    rooms.push_back({l_top, l_top + w, d, true});
    l_top += w;
  }
  for (int i = 0; i < bottom; ++i) {
    const double w = spec.uniform_rooms ? module_w : draw(spec.room_width);
    const double d = spec.uniform_rooms ? module_d : draw(spec.room_depth);
    rooms.push_back({l_bottom, l_bottom + w, d, false});
    l_bottom += w;
  }
  const double length = std::max(l_top, l_bottom);
  const double chamfer = spec.chamfer;

  std::vector<Segment2> walls;
  std::vector<Segment2> doors;
  std::vector<std::pair<double, double>> top_gaps;
  std::vector<std::pair<double, double>> bottom_gaps;
  std::vector<Side> room_sides;
  std::vector<int> side_owner;

  for (std::size_t r = 0; r < rooms.size(); ++r) {
    const Room& room = rooms[r];
    const double y_door = room.upper ? cw : 0.0;
    const double y_far = room.upper ? cw + room.depth : -room.depth;
    const double sgn = room.upper ? 1.0 : -1.0;

    // Door on the corridor wall, kept clear of the chamfered corner.
    double hi = room.x1 - kCornerMargin - spec.door_width;
    if (!room.upper && chamfer > 0.0) hi = std::min(hi, length - chamfer - 0.2 - spec.door_width);
    const double lo = room.x0 + kCornerMargin;
    if (hi < lo) throw InputError("gen spec: no room for a door");
    const double g0 = rng.uniform(lo, hi);
    (room.upper ? top_gaps : bottom_gaps).emplace_back(g0, g0 + spec.door_width);

    walls.push_back({{room.x0, y_far}, {room.x1, y_far}});
    // Side walls; a neighbour's deeper wall overlaps harmlessly.
    walls.push_back({{room.x0, y_door}, {room.x0, y_far}});
    walls.push_back({{room.x1, y_door}, {room.x1, y_far}});

    const double width = room.x1 - room.x0;
    Side corridor_side{{room.x0, y_door}, {1, 0}, {0, sgn}, width, {}};
    corridor_side.blocked.emplace_back(g0 - room.x0, g0 - room.x0 + spec.door_width);
    room_sides.push_back(corridor_side);
    room_sides.push_back({{room.x0, y_far}, {1, 0}, {0, -sgn}, width, {}});
    room_sides.push_back({{room.x0, y_door}, {0, sgn}, {1, 0}, room.depth, {}});
    room_sides.push_back({{room.x1, y_door}, {0, sgn}, {-1, 0}, room.depth, {}});
    for (int k = 0; k < 4; ++k) side_owner.push_back(static_cast<int>(r));
  }

  std::sort(top_gaps.begin(), top_gaps.end());
  std::sort(bottom_gaps.begin(), bottom_gaps.end());
  emit_with_gaps({0, cw}, {length, cw}, top_gaps, walls, doors);
  emit_with_gaps({0, 0}, {length, 0}, bottom_gaps, walls, doors);
  walls.push_back({{0, 0}, {0, cw}});
  walls.push_back({{length, 0}, {length, cw}});
  if (chamfer > 0.0) walls.push_back({{length - chamfer, 0}, {length, chamfer}});

  for (std::size_t r = 0; r < rooms.size(); ++r) {
    for (int k = 0; k < spec.pilasters_per_room; ++k) {
      const std::size_t pick = 4 * r + rng.below(4);
      add_pilasters(room_sides[pick], 1, rng, walls);
    }
  }

  Side corridor_low{{0, 0}, {1, 0}, {0, 1}, length, {}};
  Side corridor_high{{0, cw}, {1, 0}, {0, -1}, length, {}};
  for (const auto& g : bottom_gaps) corridor_low.blocked.push_back(g);
  for (const auto& g : top_gaps) corridor_high.blocked.push_back(g);
  if (chamfer > 0.0) corridor_low.blocked.emplace_back(length - chamfer, length);
  for (int k = 0; k < spec.corridor_pilasters; ++k) {
    add_pilasters(rng.below(2) == 0 ? corridor_low : corridor_high, 1, rng, walls);
  }

  SegmentSet set{walls, SegmentFrame::kFloorPlan};
  return build_floorplan(std::move(set), std::move(doors), spec.resolution, Vec2(length / 2, cw / 2));
}

std::vector<PoseEstimate> sample_poses(const FloorPlan& plan, std::size_t count, std::uint64_t seed,
                                       double clearance) {
  std::vector<std::size_t> cells;
  const Raster2D& free = plan.traversable;
  for (std::size_t i = 0; i < free.size(); ++i) {
    if (free.values[i] > 0.5) cells.push_back(i);
  }
  if (cells.empty()) throw InputError("sample_poses: plan has no traversable space");
  const auto walls = plan.closed_walls().segments;
  Stream rng(seed, 0x5A3);
  std::vector<PoseEstimate> out;
  const std::size_t budget = 1000 * std::max<std::size_t>(count, 1);
  for (std::size_t attempt = 0; out.size() < count; ++attempt) {
    if (attempt >= budget) throw InputError("sample_poses: no location satisfies the wall clearance");
    const std::size_t cell = cells[rng.below(cells.size())];
    const Vec2 c = free.cell_center(static_cast<int>(cell % free.width), static_cast<int>(cell / free.width));
    const Vec2 p = c + Vec2(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)) * free.resolution;
    const double theta = rng.uniform(0.0, kTwoPi);
    if (!plan.is_traversable(p) || wall_clearance(p, walls) < clearance) continue;
    out.push_back({p.x(), p.y(), theta, 0.0});
  }
  return out;
}

SyntheticScan render_scan(const FloorPlan& plan, const PoseEstimate& pose, const ScanSpec& spec,
                          std::uint64_t seed) {
  if (spec.views < 1 || spec.width < 2 || spec.height < 2) throw InputError("scan spec: bad image layout");
  if (!(spec.hfov_deg > 0.0 && spec.hfov_deg < 180.0)) throw InputError("scan spec: hfov out of range");
  if (!(spec.scale_min > 0.0) || spec.scale_max < spec.scale_min) {
    throw InputError("scan spec: need 0 < scale_min <= scale_max");
  }
  const Vec2 pos(pose.x, pose.y);
  if (!plan.is_traversable(pos)) throw InputError("render_scan: pose outside traversable space");

  Stream rng(seed, 0x5CA);
  const SegmentIndex index(plan.closed_walls().segments, 1.0);
  const double h = spec.camera_height;
  const double pitch = spec.pitch_down_deg * std::numbers::pi / 180.0;

  Intrinsics k;
  k.width = spec.width;
  k.height = spec.height;
  k.fx = 0.5 * spec.width / std::tan(0.5 * spec.hfov_deg * std::numbers::pi / 180.0);
  k.fy = k.fx;
  k.cx = 0.5 * (spec.width - 1);
  k.cy = 0.5 * (spec.height - 1);

  struct Table {
    Vec2 center;
    double angle, half_len, half_dep;
    bool contains(const Vec2& p) const {
      const Vec2 l = rotate2d(p - center, -angle);
      return std::abs(l.x()) <= half_len && std::abs(l.y()) <= half_dep;
    }
  };
  std::vector<Table> tables;
  for (int t = 0; t < spec.tables; ++t) {
    for (int attempt = 0; attempt < 30; ++attempt) {
      const double bearing = rng.uniform(0.0, kTwoPi);
      const double dist = rng.uniform(1.0, 2.2);
      Table tab{pos + dist * Vec2(std::cos(bearing), std::sin(bearing)), rng.uniform(0.0, std::numbers::pi),
                0.5 * spec.table_length, 0.5 * spec.table_depth};
      bool ok = !tab.contains(pos) && (tab.center - pos).norm() - std::hypot(tab.half_len, tab.half_dep) > 0.3;
      for (int c = 0; c < 4 && ok; ++c) {
        const Vec2 corner(c & 1 ? tab.half_len : -tab.half_len, c & 2 ? tab.half_dep : -tab.half_dep);
        ok = plan.is_traversable(tab.center + rotate2d(corner, tab.angle));
      }
      if (ok) {
        tables.push_back(tab);
        break;
      }
    }
  }

  std::vector<int> window_views;
  for (int v = 0; v < spec.views; ++v) window_views.push_back(v);
  for (int i = spec.views - 1; i > 0; --i) std::swap(window_views[i], window_views[rng.below(i + 1)]);
  window_views.resize(std::clamp(spec.windows, 0, spec.views));

  SyntheticScan scan;
  scan.truth = pose;
  for (int view = 0; view < spec.views; ++view) {
    const double yaw = kTwoPi * view / spec.views;
    const Pose3 cam = camera_pose_from_yaw_pitch(yaw, pitch, Vec3::Zero());
    const double corruption = rng.uniform(spec.scale_min, spec.scale_max);
    scan.corruptions.push_back(corruption);

    const bool has_window = std::find(window_views.begin(), window_views.end(), view) != window_views.end();
    int win_u0 = -1;
    int win_u1 = -1;
    double win_extra = 0.0;
    if (has_window) {
      win_u0 = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.width * 4 / 5)));
      win_u1 = win_u0 + spec.width / 5;
      win_extra = rng.uniform(2.0, 5.0);
    }

    ObservationFrame frame;
    frame.intrinsics = k;
    frame.pose = cam;
    frame.depth = DepthMap(spec.width, spec.height, 0.0f);
    if (spec.emit_mask) frame.depth.mask.assign(static_cast<std::size_t>(spec.width) * spec.height, 1);

    for (int v = 0; v < spec.height; ++v) {
      for (int u = 0; u < spec.width; ++u) {
        const Vec3 dc((u - k.cx) / k.fx, (v - k.cy) / k.fy, 1.0);
        const Vec3 ds = cam.rotation * dc;
        const Vec2 horiz = to_plan2d(ds);
        const double hn = horiz.norm();
        double t = std::numeric_limits<double>::infinity();
        bool wall = false;
        if (hn > 1e-12) {
          const Vec2 dir = rotate2d(horiz / hn, pose.theta);
          const double th = index.cast(pos, dir, spec.max_depth * hn + 1.0);
          if (std::isfinite(th)) {
            t = th / hn;
            wall = true;
          }
        }
        if (ds.y() > 0.0) {
          const double tf = h / ds.y();
          if (tf < t) {
            t = tf;
            wall = false;
          }
          const double tt = (h - spec.table_height) / ds.y();
          if (tt < t) {
            const Vec2 hit = pos + rotate2d(horiz * tt, pose.theta);
            for (const auto& tab : tables) {
              if (tab.contains(hit)) {
                t = tt;
                wall = false;
                break;
              }
            }
          }
        } else if (ds.y() < 0.0) {
          const double tc = -(spec.ceiling_height - h) / ds.y();
          if (tc < t) {
            t = tc;
            wall = false;
          }
        }
        if (!std::isfinite(t)) continue;
        double depth = t;  // camera z equals the ray parameter since dc.z = 1
        if (wall && has_window && u >= win_u0 && u < win_u1) {
          const double elev_above_floor = h - t * ds.y();
          if (elev_above_floor >= 1.0 && elev_above_floor <= 2.2) {
            depth += win_extra;
            if (spec.emit_mask) frame.depth.mask[static_cast<std::size_t>(v) * spec.width + u] = 0;
          }
        }
        if (depth > spec.max_depth) continue;
        frame.depth.at(u, v) = static_cast<float>(depth * corruption);
      }
    }
    scan.bundle.frames.push_back(std::move(frame));
  }
  return scan;
}

SyntheticTrajectory gen_trajectory(const FloorPlan& plan, const TrajectorySpec& spec, std::uint64_t seed,
                                   const std::optional<PoseEstimate>& start) {
  if (spec.steps < 1) throw InputError("trajectory spec: need at least one step");
  if (!(spec.step_length > 0.0) || spec.step_length >= kMaxOdometryStep) {
    throw InputError("trajectory spec: step_length must be in (0, 5) m");
  }
  const Raster2D& free = plan.traversable;
  const auto& walls = plan.walls.segments;
  std::vector<std::uint8_t> ok(free.size(), 0);
  std::vector<double> clearance(free.size(), 0.0);
  std::vector<std::size_t> ok_cells;
  for (int r = 0; r < free.height; ++r) {
    for (int c = 0; c < free.width; ++c) {
      const std::size_t i = free.index(c, r);
      if (free.values[i] <= 0.5) continue;
      clearance[i] = wall_clearance(free.cell_center(c, r), walls);
      if (clearance[i] >= spec.clearance) {
        ok[i] = 1;
        ok_cells.push_back(i);
      }
    }
  }
  if (ok_cells.empty()) throw InputError("gen_trajectory: no cell satisfies the clearance");

  auto ok_at = [&](int c, int r) { return free.contains(c, r) && ok[free.index(c, r)] != 0; };
  // Shortcuts may not bring the walker much closer to a wall than either end.
  auto line_of_sight = [&](std::size_t from, std::size_t to, const Vec2& a, const Vec2& b) {
    const double floor_clearance = 0.8 * std::min(clearance[from], clearance[to]);
    bool clear = true;
    trace_segment(free, a, b, [&](const Cell& cell) {
      clear = ok_at(cell.col, cell.row) && clearance[free.index(cell.col, cell.row)] >= floor_clearance;
      return clear;
    });
    return clear;
  };

  // Dijkstra over 8-connected ok cells, no corner cutting; steps near walls
  // cost more so walks keep to the middle of corridors and doorways.
  auto shortest_path = [&](std::size_t from, std::size_t to) {
    std::vector<double> dist(free.size(), std::numeric_limits<double>::infinity());
    std::vector<std::int64_t> parent(free.size(), -1);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[from] = 0.0;
    parent[from] = static_cast<std::int64_t>(from);
    queue.push({0.0, from});
    while (!queue.empty()) {
      const auto [d, cur] = queue.top();
      queue.pop();
      if (cur == to) break;
      if (d > dist[cur]) continue;
      const int c = static_cast<int>(cur % free.width);
      const int r = static_cast<int>(cur / free.width);
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          if ((dr == 0 && dc == 0) || !ok_at(c + dc, r + dr)) continue;
          if (dr != 0 && dc != 0 && (!ok_at(c + dc, r) || !ok_at(c, r + dr))) continue;
          const std::size_t next = free.index(c + dc, r + dr);
          const double step = (dr != 0 && dc != 0) ? std::numbers::sqrt2 : 1.0;
          const double nd = d + step * (1.0 + 1.0 / clearance[next]);
          if (nd < dist[next]) {
            dist[next] = nd;
            parent[next] = static_cast<std::int64_t>(cur);
            queue.push({nd, next});
          }
        }
      }
    }
    std::vector<std::size_t> path;
    if (parent[to] < 0) return path;
    for (std::size_t cur = to; cur != from; cur = static_cast<std::size_t>(parent[cur])) path.push_back(cur);
    path.push_back(from);
    std::reverse(path.begin(), path.end());
    return path;
  };
  auto center = [&](std::size_t i) {
    return free.cell_center(static_cast<int>(i % free.width), static_cast<int>(i / free.width));
  };

  Stream rng(seed, 0x7A1);
  std::size_t current = ok_cells[rng.below(ok_cells.size())];
  if (start) {
    const Vec2 p(start->x, start->y);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i : ok_cells) {
      const double d = (center(i) - p).squaredNorm();
      if (d < best) {
        best = d;
        current = i;
      }
    }
  }
  std::vector<Vec2> polyline{start ? Vec2(start->x, start->y) : center(current)};
  double length = 0.0;
  const double needed = (static_cast<double>(spec.steps) + 1.0) * spec.step_length;
  for (int leg = 0; leg < 400 && length < needed; ++leg) {
    const std::size_t goal = ok_cells[rng.below(ok_cells.size())];
    if (goal == current) continue;
    const auto path = shortest_path(current, goal);
    if (path.size() < 2) continue;
    // String-pull the cell path into straight visible runs.
    std::size_t anchor = 0;
    while (anchor + 1 < path.size()) {
      std::size_t far = anchor + 1;
      for (std::size_t j = path.size() - 1; j > anchor + 1; --j) {
        if (line_of_sight(path[anchor], path[j], center(path[anchor]), center(path[j]))) {
          far = j;
          break;
        }
      }
      const Vec2 next = center(path[far]);
      length += (next - polyline.back()).norm();
      polyline.push_back(next);
      anchor = far;
    }
    current = goal;
  }
  if (length < needed) throw InputError("gen_trajectory: could not build a long enough path");

  // Resample at fixed arc length.
  std::vector<Vec2> points{polyline.front()};
  double carry = 0.0;
  for (std::size_t i = 1; i < polyline.size() && points.size() <= spec.steps; ++i) {
    const Vec2 a = polyline[i - 1];
    const Vec2 b = polyline[i];
    const double seg = (b - a).norm();
    double s = spec.step_length - carry;
    while (s <= seg && points.size() <= spec.steps) {
      points.push_back(a + (s / seg) * (b - a));
      s += spec.step_length;
    }
    carry = seg - (s - spec.step_length);
  }

  SyntheticTrajectory out;
  std::vector<double> headings(points.size());
  for (std::size_t i = 1; i < points.size(); ++i) {
    const Vec2 d = points[i] - points[i - 1];
    headings[i] = wrap_two_pi(std::atan2(d.y(), d.x()));
  }
  headings[0] = start ? wrap_two_pi(start->theta) : headings[1];
  out.start = {points[0].x(), points[0].y(), headings[0], 0.0};
  Stream noise(seed, 0x0D0);
  for (std::size_t i = 1; i < points.size(); ++i) {
    out.truth.push_back({points[i].x(), points[i].y(), headings[i], 0.0});
    OdometryStep step;
    step.delta_forward = (points[i] - points[i - 1]).norm();
    step.delta_heading = wrap_pi(headings[i] - headings[i - 1]);
    if (spec.forward_noise > 0.0) step.delta_forward *= 1.0 + spec.forward_noise * noise.normal();
    if (spec.heading_noise > 0.0) step.delta_heading += spec.heading_noise * noise.normal();
    out.odometry.push_back(step);
  }
  return out;
}

}  // namespace floorloc
