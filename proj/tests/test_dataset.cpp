// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "behave/dataset.hpp"
#include "behave/error.hpp"
#include "behave/random.hpp"

namespace behave {
namespace {

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::IoError;
}

std::vector<TimestepRecord> parse(const std::string& text) {
  std::istringstream in(text);
  return parse_log(in, default_catalog());
}

const std::string kHeader = "game,session,frame,ts_ms,mouse_x,mouse_y";

TEST(ParseLog, HeaderOnlyGivesNoRecords) {
  EXPECT_TRUE(parse(kHeader + ",w,r\n").empty());
  EXPECT_TRUE(parse(kHeader + "\n").empty());
}

TEST(ParseLog, AliasesAreOredAndMissingColumnsZero) {
  const auto recs = parse(kHeader + ",lctrl,c,w\n"
                                    "g,s,0,0,10,20,1,0,0\n"
                                    "g,s,1,62,11,21,0,1,1\n"
                                    "g,s,2,125,12,22,0,0,0\n");
  ASSERT_EQ(recs.size(), 3u);
  const auto& c = default_catalog();
  const auto& keyed = c.keyed_positions();
  auto slot = [&](std::string_view id) {
    return static_cast<std::size_t>(std::find(keyed.begin(), keyed.end(), *c.find_id(id)) - keyed.begin());
  };
  EXPECT_EQ(recs[0].keys[slot("crouch")], 1);
  EXPECT_EQ(recs[1].keys[slot("crouch")], 1);
  EXPECT_EQ(recs[2].keys[slot("crouch")], 0);
  EXPECT_EQ(recs[1].keys[slot("w")], 1);
  EXPECT_EQ(recs[1].keys[slot("r")], 0);
  EXPECT_EQ(recs[1].mouse_x, 11);
  EXPECT_EQ(recs[2].timestamp_ms, 125);
}

TEST(ParseLog, Errors) {
  EXPECT_EQ(code_of([] { parse(kHeader + ",w\ng,s,0,0,1\n"); }), ErrorCode::MalformedRow);
  EXPECT_EQ(code_of([] { parse(kHeader + ",w\ng,s,x,0,1,1,0\n"); }), ErrorCode::MalformedRow);
  EXPECT_EQ(code_of([] { parse(kHeader + ",w\ng,s,0,0,1,1,2\n"); }), ErrorCode::MalformedRow);
  EXPECT_EQ(code_of([] { parse("frame,game\n"); }), ErrorCode::MalformedRow);
  EXPECT_EQ(code_of([] { parse(kHeader + ",teleport\n"); }), ErrorCode::UnknownAction);
  EXPECT_EQ(code_of([] { parse(kHeader + ",mouse_left\n"); }), ErrorCode::UnknownAction);
  EXPECT_EQ(code_of([] { parse(kHeader + ",w\ng,s,5,0,1,1,0\ng,s,4,1,1,1,0\n"); }), ErrorCode::NonMonotonicFrame);
}

TEST(ParseLog, FramesMayRestartInAnotherSession) {
  EXPECT_EQ(parse(kHeader + ",w\ng,s1,5,0,1,1,0\ng,s2,0,0,1,1,0\n").size(), 2u);
}

TEST(SerializeLog, RoundTripsRandomRecords) {
  Rng rng(11);
  const std::size_t keys = default_catalog().keyed_positions().size();
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<TimestepRecord> recs;
    std::int64_t frame = 0;
    for (int i = 0; i < 30; ++i) {
      TimestepRecord r;
      r.game_id = "game" + std::to_string(trial % 3);
      r.session_id = "s";
      frame += 1 + static_cast<std::int64_t>(rng.below(3));
      r.frame_index = frame;
      r.timestamp_ms = frame * 62;
      r.mouse_x = static_cast<int>(rng.below(1920));
      r.mouse_y = static_cast<int>(rng.below(1080));
      for (std::size_t k = 0; k < keys; ++k) r.keys.push_back(rng.bernoulli(0.3));
      recs.push_back(r);
    }
    std::ostringstream out;
    serialize_log(out, recs, default_catalog());
    EXPECT_EQ(parse(out.str()), recs);
  }
}

TimestepRecord rec(std::string session, std::int64_t frame, std::int64_t ts) {
  TimestepRecord r;
  r.game_id = "g";
  r.session_id = std::move(session);
  r.frame_index = frame;
  r.timestamp_ms = ts;
  return r;
}

TEST(DetectDiscontinuities, SplitsOnSessionFrameAndTimeGaps) {
  std::vector<TimestepRecord> recs = {rec("a", 0, 0),   rec("a", 1, 62),   rec("a", 2, 125),
                                      rec("a", 4, 187),                       // frame gap
                                      rec("a", 5, 250), rec("a", 6, 900),     // time gap 650 ms
                                      rec("b", 7, 962)};                      // session change
  const auto segs = detect_discontinuities(recs, 500);
  ASSERT_EQ(segs.size(), 4u);
  EXPECT_EQ(segs[0], (Segment{0, 3}));
  EXPECT_EQ(segs[1], (Segment{3, 5}));
  EXPECT_EQ(segs[2], (Segment{5, 6}));
  EXPECT_EQ(segs[3], (Segment{6, 7}));
  EXPECT_TRUE(detect_discontinuities({}, 500).empty());
}

TEST(DetectDiscontinuities, SegmentsCoverAllRecords) {
  Rng rng(5);
  std::vector<TimestepRecord> recs;
  std::int64_t frame = 0, ts = 0;
  for (int i = 0; i < 500; ++i) {
    frame += rng.bernoulli(0.05) ? 3 : 1;
    ts += rng.bernoulli(0.02) ? 900 : 62;
    recs.push_back(rec(rng.bernoulli(0.01) ? "x" : "y", frame, ts));
  }
  std::size_t covered = 0, expect_begin = 0;
  for (const auto& s : detect_discontinuities(recs, 500)) {
    EXPECT_EQ(s.begin, expect_begin);
    EXPECT_GT(s.size(), 0u);
    expect_begin = s.end;
    covered += s.size();
  }
  EXPECT_EQ(covered, recs.size());
}

TEST(Profiles, JsonRoundTrip) {
  GameProfile a;
  a.game_id = "csgo";
  a.mouse_mode = MouseMode::AutoCenter;
  a.delta_threshold_px = 20;
  a.center_epsilon_px = 3;
  a.action_overrides = {{"r", AnimationParams{2, 10, 4}}};
  GameProfile b;
  b.game_id = "minecraft";
  b.delta_threshold_px = 40;
  b.screen_width = 1280;
  b.screen_height = 720;
  b.screen_center = {640, 360};
  std::stringstream io;
  write_profiles(io, {a, b});
  const auto back = parse_profiles(io);
  ASSERT_EQ(back.size(), 2u);
  const auto& ca = back.at("csgo");
  EXPECT_EQ(ca.mouse_mode, MouseMode::AutoCenter);
  EXPECT_EQ(ca.center_epsilon_px, 3);
  ASSERT_EQ(ca.action_overrides.size(), 1u);
  EXPECT_EQ(ca.action_overrides[0].second, (AnimationParams{2, 10, 4}));
  EXPECT_EQ(back.at("minecraft").screen_center, (ScreenPoint{640, 360}));
  EXPECT_EQ(back.at("minecraft").delta_threshold_px, 40);
}

TEST(Profiles, ValidationRejectsBadValues) {
  GameProfile p;
  p.game_id = "x";
  p.delta_threshold_px = 0;
  EXPECT_THROW(p.validate(), Error);
  p.delta_threshold_px = 5;
  p.center_epsilon_px = 270;  // 1080 / 4
  EXPECT_THROW(p.validate(), Error);
  p.center_epsilon_px = 2;
  EXPECT_NO_THROW(p.validate());
}

TEST(GamePresets, PublishedThresholds) {
  std::map<std::string, GamePreset> by_id;
  for (const auto& p : known_game_presets()) by_id.emplace(p.game_id, p);
  EXPECT_EQ(by_id.size(), 27u);
  EXPECT_EQ(by_id.at("csgo").mouse_mode, MouseMode::AutoCenter);
  EXPECT_EQ(by_id.at("apexlegends").delta_threshold_px, 1);
  EXPECT_EQ(by_id.at("minecraft").delta_threshold_px, 40);
  EXPECT_EQ(by_id.at("pubg").mouse_mode, MouseMode::FreeForm);
}

}  // namespace
}  // namespace behave
