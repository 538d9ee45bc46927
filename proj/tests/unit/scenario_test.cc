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


#include "agvtwin/scenario.h"

#include <gtest/gtest.h>

#include "agvtwin/error.h"
#include "testing/oracles.h"

namespace agvtwin {
namespace {

constexpr const char* kMinimal = R"({
  "map": ["...", "...", "..."],
  "agvs": [{"id": 1, "start_zone": [1, 1]}],
  "missions": [{"id": 1, "agv": 1, "origin": [1, 1], "destination": [3, 3]}]
})";

std::string FieldOf(const std::string& text) {
  try {
    LoadScenario(text);
  } catch (const ValidationError& e) {
    return e.field() + ": " + e.what();
  } catch (const Error& e) {
    return std::string("error: ") + e.what();
  }
  return "accepted";
}

ErrorCode CodeOf(const std::string& text) {
  try {
    LoadScenario(text);
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "accepted";
  return ErrorCode::kInvariantViolation;
}

TEST(LoadScenario, Minimal) {
  const Scenario s = LoadScenario(kMinimal);
  EXPECT_EQ(s.grid.n, 3);
  EXPECT_EQ(s.agvs.size(), 1u);
  ASSERT_EQ(s.missions.size(), 1u);
  EXPECT_EQ(s.missions[0].destination, (ZoneId{3, 3}));
  EXPECT_EQ(s.config, TwinConfig{});
}

TEST(LoadScenario, DistinctStartZones) {
  const std::string text = R"({
    "map": ["..."],
    "agvs": [{"id": 1, "start_zone": [1, 1]}, {"id": 2, "start_zone": [1, 1]}],
    "missions": []
  })";
  EXPECT_EQ(CodeOf(text), ErrorCode::kValidationError);
  EXPECT_NE(FieldOf(text).find("start zones must be distinct"), std::string::npos);
}

TEST(LoadScenario, UnknownAgv) {
  const std::string text = R"({
    "map": ["..."],
    "agvs": [{"id": 1, "start_zone": [1, 1]}],
    "missions": [{"id": 1, "agv": 9, "origin": [1, 1], "destination": [3, 1]}]
  })";
  EXPECT_EQ(CodeOf(text), ErrorCode::kValidationError);
}

TEST(LoadScenario, ParseErrors) {
  EXPECT_EQ(CodeOf("{"), ErrorCode::kParseError);
  EXPECT_EQ(CodeOf(R"({"map": ["..."], "agvs": [], "missions": [], "bogus": 1})"),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf(R"({"map": ["..."], "agvs": [{"id": "x", "start_zone": [1,1]}],
                      "missions": []})"),
            ErrorCode::kParseError);
  EXPECT_EQ(CodeOf(R"({"map": [".x"], "agvs": [], "missions": []})"),
            ErrorCode::kIllegalCharacter);
}

TEST(LoadScenario, ValidationCases) {
  // Start zone on an obstacle.
  EXPECT_EQ(CodeOf(R"({"map": ["#."], "agvs": [{"id": 1, "start_zone": [1, 1]}],
                      "missions": []})"),
            ErrorCode::kValidationError);
  // Destination off the floor.
  EXPECT_EQ(CodeOf(R"({"map": [".."], "agvs": [{"id": 1, "start_zone": [1, 1]}],
                      "missions": [{"id": 1, "agv": 1, "origin": [1, 1],
                                    "destination": [3, 1]}]})"),
            ErrorCode::kValidationError);
  // Charging mission away from a station.
  EXPECT_EQ(CodeOf(R"({"map": ["C."], "agvs": [{"id": 1, "start_zone": [1, 1]}],
                      "missions": [{"id": 1, "agv": 1, "origin": [1, 1],
                                    "destination": [2, 1], "kind": "charging"}]})"),
            ErrorCode::kValidationError);
  // tau / tick_dt not an integer.
  EXPECT_EQ(CodeOf(R"({"map": [".."], "tick_dt": 0.3, "agvs": [], "missions": []})"),
            ErrorCode::kValidationError);
  // Broken origin chain.
  EXPECT_EQ(CodeOf(R"({"map": ["..."], "agvs": [{"id": 1, "start_zone": [1, 1]}],
                      "missions": [{"id": 1, "agv": 1, "origin": [2, 1],
                                    "destination": [3, 1]}]})"),
            ErrorCode::kValidationError);
}

TEST(SerializeScenario, RoundTrip) {
  const Scenario s = LoadScenario(kMinimal);
  EXPECT_EQ(LoadScenario(SerializeScenario(s).dump()), s);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const Scenario r = testing::RandomScenario(seed);
    ASSERT_NO_THROW(ValidateScenario(r)) << seed;
    ASSERT_EQ(LoadScenario(SerializeScenario(r).dump(2)), r) << seed;
  }
}

TEST(LoadScenarioFile, MapFileAndMissingFile) {
  const Scenario s = LoadScenarioFile(AGVTWIN_SCENARIO_DIR "/crossing.json");
  EXPECT_EQ(s.grid.n, 4);
  try {
    LoadScenarioFile(AGVTWIN_SCENARIO_DIR "/missing.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kIoError);
  }
}

}  // namespace
}  // namespace agvtwin
