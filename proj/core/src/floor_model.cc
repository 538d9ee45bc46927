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

#include "agvtwin/floor_model.h"

#include <sstream>
#include <utility>

#include "agvtwin/error.h"

namespace agvtwin {

namespace {

void CheckBounds(const FloorGraph& graph, const ZoneId& zone) {
  if (!graph.Contains(zone)) {
    throw Error(ErrorCode::kOutOfBounds,
                "zone " + ToString(zone) + " outside " +
                    std::to_string(graph.n()) + "x" +
                    std::to_string(graph.m()) + " floor");
  }
}

}  // namespace

bool OccupancyGrid::IsOccupied(const ZoneId& zone) const {
  return occupied[static_cast<std::size_t>(zone.b - 1) * n + (zone.a - 1)];
}

OccupancyGrid ParseOccupancyGrid(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  if (lines.empty() || lines.front().empty()) {
    throw Error(ErrorCode::kEmptyMap, "map has no cells");
  }

  OccupancyGrid grid;
  grid.n = static_cast<int>(lines.front().size());
  grid.m = static_cast<int>(lines.size());
  grid.occupied.assign(static_cast<std::size_t>(grid.n) * grid.m, false);
  for (int b = 1; b <= grid.m; ++b) {
    std::string_view line = lines[b - 1];
    if (static_cast<int>(line.size()) != grid.n) {
      throw Error(ErrorCode::kRaggedRows,
                  "line " + std::to_string(b) + " has " +
                      std::to_string(line.size()) + " cells, expected " +
                      std::to_string(grid.n));
    }
    for (int a = 1; a <= grid.n; ++a) {
      const char c = line[a - 1];
      const std::size_t index = static_cast<std::size_t>(b - 1) * grid.n + (a - 1);
      switch (c) {
        case '.':
          break;
        case '#':
          grid.occupied[index] = true;
          break;
        case 'C':
          grid.stations.insert({a, b});
          break;
        default:
          throw Error(ErrorCode::kIllegalCharacter,
                      std::string("illegal character '") + c + "' at line " +
                          std::to_string(b) + ", column " + std::to_string(a));
      }
    }
  }
  return grid;
}

std::vector<std::string> FormatOccupancyRows(const OccupancyGrid& grid) {
  std::vector<std::string> rows;
  rows.reserve(grid.m);
  for (int b = 1; b <= grid.m; ++b) {
    std::string row;
    for (int a = 1; a <= grid.n; ++a) {
      const ZoneId zone{a, b};
      if (grid.IsOccupied(zone)) {
        row += '#';
      } else if (grid.stations.contains(zone)) {
        row += 'C';
      } else {
        row += '.';
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

void FloorGraph::RestoreZone(const ZoneId& zone) {
  const std::size_t index = IndexOf(zone);
  Set(index, index, wait_weight_);
  for (Border border : kAllBorders) {
    const ZoneId other = Across(zone, border);
    if (!Contains(other) || IsOccupied(other)) continue;
    const std::size_t other_index = IndexOf(other);
    Set(index, other_index, 1.0);
    Set(other_index, index, 1.0);
  }
}

FloorGraph BuildGraph(const OccupancyGrid& grid, double wait_weight) {
  if (!(wait_weight >= 0.0)) {
    throw Error(ErrorCode::kValidationError, "wait weight must be >= 0");
  }
  FloorGraph graph;
  graph.n_ = grid.n;
  graph.m_ = grid.m;
  graph.wait_weight_ = wait_weight;
  graph.weights_.assign(graph.size() * graph.size(), 0.0);
  for (int b = 1; b <= grid.m; ++b) {
    for (int a = 1; a <= grid.n; ++a) graph.RestoreZone({a, b});
  }
  for (int b = 1; b <= grid.m; ++b) {
    for (int a = 1; a <= grid.n; ++a) {
      if (grid.IsOccupied({a, b})) graph = MarkOccupied(std::move(graph), {a, b});
    }
  }
  return graph;
}

FloorGraph MarkOccupied(FloorGraph graph, const ZoneId& zone) {
  CheckBounds(graph, zone);
  const std::size_t index = graph.IndexOf(zone);
  for (std::size_t k = 0; k < graph.size(); ++k) {
    graph.Set(index, k, 0.0);
    graph.Set(k, index, 0.0);
  }
  graph.occupied_.insert(zone);
  return graph;
}

FloorGraph MarkFree(FloorGraph graph, const ZoneId& zone) {
  CheckBounds(graph, zone);
  if (graph.occupied_.erase(zone) == 0) return graph;
  graph.RestoreZone(zone);
  return graph;
}

std::vector<ZoneId> Neighbors(const FloorGraph& graph, const ZoneId& zone) {
  CheckBounds(graph, zone);
  std::vector<ZoneId> result;
  for (Border border : kAllBorders) {
    const ZoneId other = Across(zone, border);
    if (graph.Contains(other) && graph.H(zone, other) == 1.0) {
      result.push_back(other);
    }
  }
  return result;
}

void WriteMatrixCsv(const FloorGraph& graph, std::ostream& os) {
  for (std::size_t row = 0; row < graph.size(); ++row) {
    for (std::size_t col = 0; col < graph.size(); ++col) {
      if (col > 0) os << ',';
      os << graph.H(row, col);
    }
    os << '\n';
  }
}

}  // namespace agvtwin
