// Copyright 2026 The agvtwin Authors
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

#ifndef AGVTWIN_FLOOR_MODEL_H_
#define AGVTWIN_FLOOR_MODEL_H_

#include <cstddef>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "agvtwin/zone.h"

namespace agvtwin {

// Raw occupancy of an n x m zone decomposition as read from a map file.
// Non-rectangular floors are described by their covering rectangle with
// the outside cells marked occupied.
struct OccupancyGrid {
  int n = 0;  // columns
  int m = 0;  // rows
  std::vector<bool> occupied;  // n * m flags, flattened index order
  std::set<ZoneId> stations;

  bool Contains(const ZoneId& zone) const {
    return zone.a >= 1 && zone.a <= n && zone.b >= 1 && zone.b <= m;
  }
  bool IsOccupied(const ZoneId& zone) const;

  friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;
};

// Parses the line-oriented map format: '.' free, '#' occupied, 'C' free
// charging station. Line 1 is row b = 1, character 1 is column a = 1. A
// single trailing newline and '\r' line endings are accepted.
//
// Throws Error with kEmptyMap, kRaggedRows or kIllegalCharacter.
OccupancyGrid ParseOccupancyGrid(std::string_view text);

// Inverse of ParseOccupancyGrid (one line per row, no trailing newline).
std::vector<std::string> FormatOccupancyRows(const OccupancyGrid& grid);

// The zone graph of the floor, stored as the dense (n*m) x (n*m) weight
// matrix H:
//
//   H[z][z'] = 1  when z, z' share a border line and both are free,
//   H[z][z]  = W  (the wait weight) when z is free,
//   0             otherwise; occupied zones have their whole row and
//                 column zeroed, diagonal included.
//
// Rows and columns follow the flattened index (b - 1) * n + (a - 1), i.e.
// Z11, Z21, ..., Zn1, Z12, ...
class FloorGraph {
 public:
  FloorGraph() = default;

  int n() const { return n_; }
  int m() const { return m_; }
  double wait_weight() const { return wait_weight_; }
  const std::set<ZoneId>& occupied() const { return occupied_; }
  std::size_t size() const { return static_cast<std::size_t>(n_) * m_; }

  bool Contains(const ZoneId& zone) const {
    return zone.a >= 1 && zone.a <= n_ && zone.b >= 1 && zone.b <= m_;
  }
  bool IsOccupied(const ZoneId& zone) const {
    return occupied_.contains(zone);
  }

  std::size_t IndexOf(const ZoneId& zone) const {
    return static_cast<std::size_t>(zone.b - 1) * n_ + (zone.a - 1);
  }
  ZoneId ZoneAt(std::size_t index) const {
    return {static_cast<int>(index % n_) + 1, static_cast<int>(index / n_) + 1};
  }

  double H(std::size_t row, std::size_t col) const {
    return weights_[row * size() + col];
  }
  double H(const ZoneId& from, const ZoneId& to) const {
    return H(IndexOf(from), IndexOf(to));
  }
  const std::vector<double>& matrix() const { return weights_; }

  friend bool operator==(const FloorGraph&, const FloorGraph&) = default;

 private:
  friend FloorGraph BuildGraph(const OccupancyGrid& grid, double wait_weight);
  friend FloorGraph MarkOccupied(FloorGraph graph, const ZoneId& zone);
  friend FloorGraph MarkFree(FloorGraph graph, const ZoneId& zone);

  void Set(std::size_t row, std::size_t col, double value) {
    weights_[row * size() + col] = value;
  }
  void RestoreZone(const ZoneId& zone);

  int n_ = 0;
  int m_ = 0;
  double wait_weight_ = 1.0;
  std::set<ZoneId> occupied_;
  std::vector<double> weights_;
};

// Builds H from the occupancy grid. Requires wait_weight >= 0.
FloorGraph BuildGraph(const OccupancyGrid& grid, double wait_weight = 1.0);

// Zeroes the row and column of `zone`. Idempotent. Throws kOutOfBounds.
FloorGraph MarkOccupied(FloorGraph graph, const ZoneId& zone);

// Returns `zone` to service; the result equals a rebuild from the updated
// occupancy set. Throws kOutOfBounds.
FloorGraph MarkFree(FloorGraph graph, const ZoneId& zone);

// Zones z' with H[zone][z'] = 1, in N, E, S, W order. Throws kOutOfBounds.
std::vector<ZoneId> Neighbors(const FloorGraph& graph, const ZoneId& zone);

// Debug export: one comma-separated matrix row per line.
void WriteMatrixCsv(const FloorGraph& graph, std::ostream& os);

}  // namespace agvtwin

#endif  // AGVTWIN_FLOOR_MODEL_H_
