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

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "agvtwin/error.h"
#include "testing/oracles.h"

namespace agvtwin {
namespace {

OccupancyGrid Free(int n, int m) { return {n, m, std::vector<bool>(n * m), {}}; }

ErrorCode CodeOf(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvariantViolation;
}

TEST(ParseOccupancyGrid, MapsCharacters) {
  const OccupancyGrid grid = ParseOccupancyGrid(".#\nC.");
  EXPECT_EQ(grid.n, 2);
  EXPECT_EQ(grid.m, 2);
  EXPECT_TRUE(grid.IsOccupied({2, 1}));
  EXPECT_FALSE(grid.IsOccupied({1, 2}));
  EXPECT_EQ(grid.stations, (std::set<ZoneId>{{1, 2}}));

  const OccupancyGrid tall = ParseOccupancyGrid("..\n.#\n..");
  EXPECT_EQ(tall.n, 2);
  EXPECT_EQ(tall.m, 3);
  EXPECT_TRUE(tall.IsOccupied({2, 2}));
  EXPECT_EQ(std::count(tall.occupied.begin(), tall.occupied.end(), true), 1);
}

TEST(ParseOccupancyGrid, Errors) {
  EXPECT_EQ(CodeOf([] { ParseOccupancyGrid(""); }), ErrorCode::kEmptyMap);
  EXPECT_EQ(CodeOf([] { ParseOccupancyGrid("..\n."); }), ErrorCode::kRaggedRows);
  EXPECT_EQ(CodeOf([] { ParseOccupancyGrid(".x"); }), ErrorCode::kIllegalCharacter);
}

TEST(ParseOccupancyGrid, FormatRoundTrip) {
  const OccupancyGrid grid = ParseOccupancyGrid("..#\nC..\n.#C");
  std::string text;
  for (const std::string& row : FormatOccupancyRows(grid)) text += row + "\n";
  EXPECT_EQ(ParseOccupancyGrid(text), grid);
}

TEST(BuildGraph, TwoByTwo) {
  const FloorGraph g = BuildGraph(Free(2, 2), 1.0);
  // Z11, Z21, Z12, Z22
  const std::vector<double> expected = {1, 1, 1, 0,  //
                                        1, 1, 0, 1,  //
                                        1, 0, 1, 1,  //
                                        0, 1, 1, 1};
  EXPECT_EQ(g.matrix(), expected);
}

TEST(BuildGraph, SingleZoneKeepsWaitWeight) {
  const FloorGraph g = BuildGraph(Free(1, 1), 5.0);
  EXPECT_EQ(g.matrix(), std::vector<double>{5.0});
}

TEST(BuildGraph, Degrees) {
  const FloorGraph g = BuildGraph(Free(3, 3));
  EXPECT_EQ(Neighbors(g, {2, 2}).size(), 4u);
  EXPECT_EQ(Neighbors(g, {1, 1}).size(), 2u);
  EXPECT_EQ(Neighbors(g, {3, 3}).size(), 2u);
}

TEST(BuildGraph, IndexOrder) {
  const FloorGraph g = BuildGraph(Free(3, 2));
  EXPECT_EQ(g.IndexOf({1, 1}), 0u);
  EXPECT_EQ(g.IndexOf({3, 1}), 2u);
  EXPECT_EQ(g.IndexOf({1, 2}), 3u);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.IndexOf(g.ZoneAt(i)), i);
}

TEST(BuildGraph, MatchesOracleExhaustively) {
  for (int n = 1; n <= 3; ++n) {
    for (int m = 1; m <= 3; ++m) {
      for (unsigned mask = 0; mask < (1u << (n * m)); ++mask) {
        OccupancyGrid grid = Free(n, m);
        for (int i = 0; i < n * m; ++i) grid.occupied[i] = (mask >> i) & 1u;
        ASSERT_EQ(BuildGraph(grid, 0.5).matrix(), testing::BruteForceAdjacency(grid, 0.5))
            << n << "x" << m << " mask " << mask;
      }
    }
  }
}

TEST(BuildGraph, MatchesOracleRandom) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 250; ++i) {
    const int n = std::uniform_int_distribution<int>(1, 8)(rng);
    const int m = std::uniform_int_distribution<int>(1, 8)(rng);
    const OccupancyGrid grid = testing::RandomGrid(rng, n, m, 0.3);
    ASSERT_EQ(BuildGraph(grid).matrix(), testing::BruteForceAdjacency(grid, 1.0));
  }
}

TEST(MarkOccupied, TwoByTwo) {
  const FloorGraph g = MarkOccupied(BuildGraph(Free(2, 2)), {1, 1});
  for (std::size_t j = 0; j < 4; ++j) {
    EXPECT_EQ(g.H(0, j), 0.0);
    EXPECT_EQ(g.H(j, 0), 0.0);
  }
  EXPECT_EQ(g.H({2, 1}, {2, 2}), 1.0);
  EXPECT_EQ(g.H({2, 2}, {1, 2}), 1.0);
  EXPECT_TRUE(g.IsOccupied({1, 1}));
}

TEST(MarkOccupied, IdempotentAndOneByTwo) {
  const FloorGraph once = MarkOccupied(BuildGraph(Free(1, 2), 3.0), {1, 1});
  EXPECT_EQ(once.matrix(), (std::vector<double>{0, 0, 0, 3.0}));
  EXPECT_EQ(MarkOccupied(once, {1, 1}), once);
}

TEST(MarkOccupied, OutOfBounds) {
  const FloorGraph g = BuildGraph(Free(2, 2));
  EXPECT_EQ(CodeOf([&] { MarkOccupied(g, {3, 1}); }), ErrorCode::kOutOfBounds);
  EXPECT_EQ(CodeOf([&] { MarkFree(g, {1, 0}); }), ErrorCode::kOutOfBounds);
  EXPECT_EQ(CodeOf([&] { Neighbors(g, {0, 1}); }), ErrorCode::kOutOfBounds);
}

TEST(MarkFree, RoundTripAndNoOp) {
  const FloorGraph g = BuildGraph(Free(3, 3));
  EXPECT_EQ(MarkFree(MarkOccupied(g, {2, 2}), {2, 2}), g);
  EXPECT_EQ(MarkFree(g, {1, 3}), g);
}

TEST(MarkFree, RestoresOnlyFreeNeighbours) {
  OccupancyGrid grid = Free(2, 2);
  FloorGraph g = MarkOccupied(MarkOccupied(BuildGraph(grid), {1, 1}), {2, 1});
  g = MarkFree(g, {1, 1});
  EXPECT_EQ(g.H({1, 1}, {1, 2}), 1.0);
  EXPECT_EQ(g.H({1, 1}, {2, 1}), 0.0);
  EXPECT_EQ(g.H({1, 1}, {1, 1}), 1.0);
}

TEST(MarkFree, RandomSequencesMatchRebuild) {
  std::mt19937_64 rng(11);
  for (int run = 0; run < 50; ++run) {
    OccupancyGrid grid = testing::RandomGrid(rng, 5, 4, 0.2);
    FloorGraph g = BuildGraph(grid, 2.0);
    for (int k = 0; k < 30; ++k) {
      const ZoneId z{std::uniform_int_distribution<int>(1, 5)(rng),
                     std::uniform_int_distribution<int>(1, 4)(rng)};
      const bool occupy = rng() % 2 == 0;
      g = occupy ? MarkOccupied(g, z) : MarkFree(g, z);
      grid.occupied[g.IndexOf(z)] = occupy;
      ASSERT_EQ(g.matrix(), testing::BruteForceAdjacency(grid, 2.0));
      for (std::size_t i = 0; i < g.size(); ++i) {
        int degree = 0;
        for (std::size_t j = 0; j < g.size(); ++j) {
          ASSERT_EQ(g.H(i, j), g.H(j, i));
          if (i != j && g.H(i, j) == 1.0) ++degree;
        }
        ASSERT_LE(degree, 4);
      }
    }
  }
}

TEST(Neighbors, Order) {
  const FloorGraph g = BuildGraph(Free(3, 3));
  EXPECT_EQ(Neighbors(g, {2, 2}),
            (std::vector<ZoneId>{{2, 1}, {3, 2}, {2, 3}, {1, 2}}));
  EXPECT_TRUE(Neighbors(MarkOccupied(g, {2, 2}), {2, 2}).empty());
  EXPECT_TRUE(Neighbors(BuildGraph(Free(1, 1)), {1, 1}).empty());
}

TEST(WriteMatrixCsv, Shape) {
  std::ostringstream os;
  WriteMatrixCsv(BuildGraph(Free(2, 1)), os);
  EXPECT_EQ(os.str(), "1,1\n1,1\n");
}

}  // namespace
}  // namespace agvtwin
