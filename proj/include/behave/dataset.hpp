// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "behave/catalog.hpp"

namespace behave {

/// One synchronized sample of a gameplay log.
struct TimestepRecord {
  std::string game_id;
  std::string session_id;
  std::int64_t frame_index = 0;
  std::int64_t timestamp_ms = 0;
  int mouse_x = 0;
  int mouse_y = 0;
  /// Pressed state per keyed label, indexed like ActionCatalog::keyed_positions().
  std::vector<std::uint8_t> keys;

  friend bool operator==(const TimestepRecord&, const TimestepRecord&) = default;
};

enum class MouseMode { AutoCenter, FreeForm };

struct ScreenPoint {
  int x = 0;
  int y = 0;
  friend bool operator==(const ScreenPoint&, const ScreenPoint&) = default;
};

struct GameProfile {
  std::string game_id;
  MouseMode mouse_mode = MouseMode::FreeForm;
  int delta_threshold_px = 20;
  int screen_width = 1920;
  int screen_height = 1080;
  ScreenPoint screen_center{960, 540};
  int center_epsilon_px = 2;
  std::vector<std::pair<std::string, AnimationParams>> action_overrides;

  /// Throws InvalidConfig when the invariants on thresholds and screen geometry fail.
  void validate() const;
  ActionCatalog effective_catalog(const ActionCatalog& base) const;
};

/// Known mouse recording metadata for common titles, keyed by a
/// lower-case short name (e.g. "pubg", "csgo").
struct GamePreset {
  std::string game_id;
  MouseMode mouse_mode;
  int delta_threshold_px;
};
const std::vector<GamePreset>& known_game_presets();

/// Half-open index range into a record sequence.
struct Segment {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end - begin; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

inline constexpr std::int64_t kDefaultMaxGapMs = 500;

/// Reads the CSV log format: header `game,session,frame,ts_ms,mouse_x,mouse_y,<action...>`
/// followed by one record per line. Action columns may name label ids or raw keys;
/// aliases of the same label are OR-ed.
std::vector<TimestepRecord> parse_log(std::istream& in, const ActionCatalog& catalog);
void serialize_log(std::ostream& out, const std::vector<TimestepRecord>& records,
                   const ActionCatalog& catalog);

/// Splits records into contiguous runs. A new segment starts on a change of
/// (game, session), a frame gap > 1, or a timestamp gap > max_gap_ms.
std::vector<Segment> detect_discontinuities(const std::vector<TimestepRecord>& records,
                                            std::int64_t max_gap_ms = kDefaultMaxGapMs);

/// Profiles config: JSON object with a "games" array (see README).
std::map<std::string, GameProfile> parse_profiles(std::istream& in);
void write_profiles(std::ostream& out, const std::vector<GameProfile>& profiles);

}  // namespace behave
