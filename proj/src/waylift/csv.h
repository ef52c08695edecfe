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

#ifndef WAYLIFT_CSV_H_
#define WAYLIFT_CSV_H_

#include <string>
#include <string_view>

#include "waylift/types.h"

namespace waylift {

// Shortest round-trip decimal form, '.' separator, independent of locale.
std::string FormatDouble(double value);
void AppendDouble(std::string& out, double value);

// Actions file: header "k,tau,lat,brake", one row per step with k = 0, 1, ...
// in order. Throws Error(kParse) naming the line on malformed input.
RawActionSequence ParseActionsCsv(std::string_view text);
std::string ActionsToCsv(const RawActionSequence& actions);

// Waypoint file: header "k,x,y" or "k,x,y,theta" when headings are present;
// k counts waypoints from 1.
std::string TrajectoryToCsv(const WaypointTrajectory& traj);

}  // namespace waylift

#endif  // WAYLIFT_CSV_H_
