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

#include "btfuzz/trajectory_io.hpp"

#include <charconv>
#include <map>
#include <sstream>

#include "btfuzz/error.hpp"
#include "btfuzz/json_io.hpp"

namespace btfuzz {

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

double parse_number(std::string_view field, std::size_t line) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  double v = 0.0;
  const auto res = std::from_chars(field.data(), field.data() + field.size(), v);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw Error(ErrorCode::kParseError,
                "line " + std::to_string(line) + ": bad number '" + std::string(field) + "'");
  }
  return v;
}

std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

}  // namespace

std::vector<AgentLog> parse_log_csv(std::string_view text) {
  std::vector<AgentLog> logs;
  std::map<std::string, std::size_t, std::less<>> index;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (line.rfind("id,t,x,y", 0) != 0) {
        throw Error(ErrorCode::kParseError, "expected header 'id,t,x,y,z'");
      }
      continue;
    }
    const auto cols = split_csv(line);
    if (cols.size() != 5 && cols.size() != 4) {
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": expected 5 columns");
    }
    const std::string id(cols[0]);
    TrajectoryPoint p;
    p.t = parse_number(cols[1], line_no);
    p.x = parse_number(cols[2], line_no);
    p.y = parse_number(cols[3], line_no);
    p.z = cols.size() == 5 ? parse_number(cols[4], line_no) : 0.0;
    auto it = index.find(id);
    if (it == index.end()) {
      it = index.emplace(id, logs.size()).first;
      logs.push_back({id, {}});
    }
    auto& pts = logs[it->second].points;
    if (!pts.empty() && !(p.t > pts.back().t)) {
      throw Error(ErrorCode::kParseError,
                  "line " + std::to_string(line_no) + ": timestamps must strictly increase");
    }
    pts.push_back(p);
  }
  if (!header_seen) throw Error(ErrorCode::kParseError, "empty log");
  return logs;
}

std::vector<AgentLog> read_log_csv(const std::filesystem::path& path) {
  return parse_log_csv(read_text_file(path));
}

std::string log_to_csv(const AgentLog& log) {
  std::string out = "id,t,x,y,z\n";
  for (const auto& p : log.points) {
    out += log.id;
    out += ',';
    out += format_double(p.t);
    out += ',';
    out += format_double(p.x);
    out += ',';
    out += format_double(p.y);
    out += ',';
    out += format_double(p.z);
    out += '\n';
  }
  return out;
}

std::string trace_agent_csv(const SimulationTrace& trace, const std::string& agent) {
  std::ostringstream out;
  out << "t,x,y,heading,speed,accel,lane\n";
  for (const auto& frame : trace.frames) {
    for (const auto& a : frame.agents) {
      if (a.id != agent) continue;
      out << format_double(frame.time) << ',' << format_double(a.x) << ',' << format_double(a.y)
          << ',' << format_double(a.heading) << ',' << format_double(a.speed) << ','
          << format_double(a.accel) << ',' << a.lane << '\n';
    }
  }
  return out.str();
}

}  // namespace btfuzz
