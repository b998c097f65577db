// Copyright 2026 The btfuzz Authors.
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

#include "btfuzz/lane_map.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "btfuzz/error.hpp"

namespace btfuzz {

LaneMap::LaneMap(std::vector<Lane> lanes, std::vector<Obstacle> obstacles)
    : lanes_(std::move(lanes)), obstacles_(std::move(obstacles)) {
  std::set<std::string> ids;
  for (const auto& lane : lanes_) {
    if (!(lane.width > 0.0)) {
      throw Error(ErrorCode::kInvalidArgument, "lane " + lane.id + " has nonpositive width");
    }
    if (!ids.insert(lane.id).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate lane id " + lane.id);
    }
  }
  for (const auto& lane : lanes_) {
    if (lane.left) {
      const Lane* other = find_lane(*lane.left);
      if (!other || other->right != lane.id) {
        throw Error(ErrorCode::kInvalidArgument, "adjacency " + lane.id + " -> left " + *lane.left +
                                                     " is not mirrored");
      }
    }
    if (lane.right) {
      const Lane* other = find_lane(*lane.right);
      if (!other || other->left != lane.id) {
        throw Error(ErrorCode::kInvalidArgument, "adjacency " + lane.id + " -> right " +
                                                     *lane.right + " is not mirrored");
      }
    }
  }
  std::set<std::string> obstacle_ids;
  for (const auto& ob : obstacles_) {
    if (ob.polygon.size() < 3) {
      throw Error(ErrorCode::kInvalidArgument, "obstacle " + ob.id + " needs >= 3 vertices");
    }
    if (!obstacle_ids.insert(ob.id).second) {
      throw Error(ErrorCode::kInvalidArgument, "duplicate obstacle id " + ob.id);
    }
  }
}

const Lane* LaneMap::find_lane(const std::string& id) const {
  for (const auto& lane : lanes_) {
    if (lane.id == id) return &lane;
  }
  return nullptr;
}

const Obstacle* LaneMap::find_obstacle(const std::string& id) const {
  for (const auto& ob : obstacles_) {
    if (ob.id == id) return &ob;
  }
  return nullptr;
}

const Lane& LaneMap::lane(const std::string& id) const {
  const Lane* lane = find_lane(id);
  if (!lane) throw Error(ErrorCode::kDanglingReference, "unknown lane " + id);
  return *lane;
}

std::optional<LaneMatch> LaneMap::nearest_lane(Vec2 p) const {
  std::optional<LaneMatch> best;
  double best_abs = std::numeric_limits<double>::infinity();
  for (const auto& lane : lanes_) {
    const auto foot = lane.centerline.foot_of(p);
    // Points past either end are only matched when nothing else covers them.
    const bool covered = foot.s > 0.0 && foot.s < lane.centerline.length();
    const double score = std::abs(foot.d) + (covered ? 0.0 : 1e6);
    if (score < best_abs) {
      best_abs = score;
      best = LaneMatch{&lane, foot};
    }
  }
  return best;
}

bool LaneMap::on_road(Vec2 p) const {
  for (const auto& lane : lanes_) {
    const auto foot = lane.centerline.foot_of(p);
    if (foot.s <= 0.0 || foot.s >= lane.centerline.length()) continue;
    if (std::abs(foot.d) <= 0.5 * lane.width) return true;
  }
  return false;
}

}  // namespace btfuzz
