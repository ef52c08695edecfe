// Copyright 2026 The Waylift Authors
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

#include "waylift/csv.h"

#include <array>
#include <charconv>
#include <vector>

#include "waylift/error.h"

namespace waylift {
namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> SplitFields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(Trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

[[noreturn]] void ParseFailure(int line, const std::string& why) {
  throw Error(ErrorCode::kParse,
              "actions csv line " + std::to_string(line) + ": " + why);
}

double ParseNumber(std::string_view field, int line) {
  double value = 0.0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty()) {
    ParseFailure(line, "not a number: \"" + std::string(field) + "\"");
  }
  return value;
}

}  // namespace

void AppendDouble(std::string& out, double value) {
  std::array<char, 32> buf;
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  out.append(buf.data(), ptr);
}

std::string FormatDouble(double value) {
  std::string s;
  AppendDouble(s, value);
  return s;
}

RawActionSequence ParseActionsCsv(std::string_view text) {
  std::vector<double> values;
  int line_no = 0;
  bool header_seen = false;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    const std::string_view line = Trim(text.substr(pos, nl - pos));
    pos = nl + 1;
    ++line_no;
    if (line.empty()) continue;
    const auto fields = SplitFields(line);
    if (!header_seen) {
      if (fields.size() != 4 || fields[0] != "k" || fields[1] != "tau" ||
          fields[2] != "lat" || fields[3] != "brake") {
        ParseFailure(line_no, "expected header k,tau,lat,brake");
      }
      header_seen = true;
      continue;
    }
    if (fields.size() != 4) ParseFailure(line_no, "expected 4 columns");
    const double k = ParseNumber(fields[0], line_no);
    const auto expected = static_cast<double>(values.size() / kActionChannels);
    if (k != expected) {
      ParseFailure(line_no, "step index out of order, expected " +
                                std::to_string(values.size() / kActionChannels));
    }
    for (int c = 1; c <= 3; ++c) values.push_back(ParseNumber(fields[c], line_no));
  }
  if (!header_seen) ParseFailure(line_no, "missing header");
  if (values.empty()) ParseFailure(line_no, "no action rows");
  return RawActionSequence::FromFlat(values);
}

std::string ActionsToCsv(const RawActionSequence& actions) {
  std::string out = "k,tau,lat,brake\n";
  for (int k = 0; k < actions.steps(); ++k) {
    out += std::to_string(k);
    for (int c = 0; c < kActionChannels; ++c) {
      out += ',';
      AppendDouble(out, actions.at(k, c));
    }
    out += '\n';
  }
  return out;
}

std::string TrajectoryToCsv(const WaypointTrajectory& traj) {
  const bool with_heading = traj.headings.size() == traj.points.size() &&
                            !traj.headings.empty();
  std::string out = with_heading ? "k,x,y,theta\n" : "k,x,y\n";
  for (int k = 0; k < traj.size(); ++k) {
    out += std::to_string(k + 1);
    out += ',';
    AppendDouble(out, traj.points[k].x);
    out += ',';
    AppendDouble(out, traj.points[k].y);
    if (with_heading) {
      out += ',';
      AppendDouble(out, traj.headings[k]);
    }
    out += '\n';
  }
  return out;
}

}  // namespace waylift
