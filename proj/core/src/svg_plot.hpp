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

#include <string>
#include <string_view>

namespace btfuzz::svg {

/// Minimal SVG writer; coordinates are in pixels with the origin top-left.
class Canvas {
 public:
  Canvas(double width, double height);

  void line(double x1, double y1, double x2, double y2, std::string_view stroke,
            double width = 1.0);
  void circle(double cx, double cy, double r, std::string_view fill, double opacity = 1.0);
  void rect(double x, double y, double w, double h, std::string_view fill,
            std::string_view stroke = "none");
  /// anchor: "start", "middle" or "end".
  void text(double x, double y, std::string_view content, double size = 11.0,
            std::string_view anchor = "start");

  std::string str() const;

 private:
  double width_;
  double height_;
  std::string body_;
};

/// Diverging blue-white-red ramp for values in [-1, 1].
std::string diverging(double value);

std::string number(double value);

}  // namespace btfuzz::svg
