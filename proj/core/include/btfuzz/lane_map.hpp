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

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "btfuzz/frenet.hpp"

namespace btfuzz {

struct Lane {
  std::string id;
  ReferencePath centerline;
  double width = 3.5;
  std::optional<std::string> left;
  std::optional<std::string> right;
};

/// Static convex polygon (e.g. road construction). Vertices counter-clockwise.
struct Obstacle {
  std::string id;
  std::vector<Vec2> polygon;
};

struct LaneMatch {
  const Lane* lane = nullptr;
  ReferencePath::Foot foot;
};

class LaneMap {
 public:
  LaneMap() = default;
  /// Throws Error(kInvalidArgument) on nonpositive widths, duplicate ids,
  /// dangling or asymmetric adjacency.
  LaneMap(std::vector<Lane> lanes, std::vector<Obstacle> obstacles);

  const std::vector<Lane>& lanes() const { return lanes_; }
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }

  const Lane* find_lane(const std::string& id) const;
  const Obstacle* find_obstacle(const std::string& id) const;
  const Lane& lane(const std::string& id) const;

  /// Lane whose centerline is laterally closest to p among lanes whose
  /// arc-length range covers p; nullopt for an empty map.
  std::optional<LaneMatch> nearest_lane(Vec2 p) const;

  /// True if p lies within half a lane width of some lane centerline.
  bool on_road(Vec2 p) const;

 private:
  std::vector<Lane> lanes_;
  std::vector<Obstacle> obstacles_;
};

}  // namespace btfuzz
