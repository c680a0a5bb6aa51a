// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "behave/catalog.hpp"
#include "behave/dataset.hpp"

namespace behave {

struct MouseDelta {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const MouseDelta&, const MouseDelta&) = default;
};

/// One flag per direction. Diagonals set two flags. Screen y grows downward.
struct PanFlags {
  bool left = false;
  bool right = false;
  bool up = false;
  bool down = false;
  friend bool operator==(const PanFlags&, const PanFlags&) = default;
};

struct CategoryFlags {
  bool panning = false;
  bool navigation = false;
  bool weapon = false;

  bool get(Category c) const noexcept;
  bool any() const noexcept { return panning || navigation || weapon; }
  friend bool operator==(const CategoryFlags&, const CategoryFlags&) = default;
};

/// Per-frame animation labels over the catalog, after pan discretization and
/// label propagation.
struct FrameLabels {
  std::int64_t frame_index = 0;
  std::vector<std::uint8_t> labels;
};

struct WindowSample {
  std::string sample_id;  // "<game>/<session>/<start_frame>"
  std::string game_id;
  std::string session_id;
  std::int64_t start_frame = 0;
  int window_size = 16;
  std::vector<std::uint8_t> actions;
  std::string caption;
  CategoryFlags categories;

  friend bool operator==(const WindowSample&, const WindowSample&) = default;
};

struct PipelineConfig {
  int window_size = 16;
  int stride = 8;
  std::int64_t max_gap_ms = kDefaultMaxGapMs;

  void validate() const;
};

/// First frame gets (0,0). In auto-center games any step that lands within
/// center_epsilon_px (per axis) of the screen center is a pointer reset and
/// reported as (0,0).
std::vector<MouseDelta> mouse_deltas(std::span<const TimestepRecord> segment,
                                     const GameProfile& profile);

PanFlags discretize_pan(int dx, int dy, int threshold_px);

/// Shift-and-span: every active input frame f labels frames
/// [f + delay, f + delay + length - 1], truncated to the series length.
std::vector<std::uint8_t> propagate_labels(std::span<const std::uint8_t> raw, int delay, int length);

std::vector<std::size_t> make_windows(std::size_t segment_length, std::size_t window_size = 16,
                                      std::size_t stride = 8);

/// Action a is on iff at least catalog[a].anim.cutoff frames of the slice carry it.
std::vector<std::uint8_t> collapse_window(std::span<const FrameLabels> window,
                                          const ActionCatalog& catalog);

/// Phrases of the active actions in catalog order, joined by ", "; "Idle" when none.
std::string semantic_action_mapper(std::span<const std::uint8_t> actions,
                                   const ActionCatalog& catalog);

CategoryFlags categorize(std::span<const std::uint8_t> actions, const ActionCatalog& catalog);

/// Frame labels for one contiguous segment.
std::vector<FrameLabels> label_frames(std::span<const TimestepRecord> segment,
                                      const GameProfile& profile, const ActionCatalog& catalog);

/// Full pipeline for records of a single game.
std::vector<WindowSample> run_pipeline(const std::vector<TimestepRecord>& records,
                                       const GameProfile& profile, const ActionCatalog& catalog,
                                       const PipelineConfig& config = {});

/// Splits records by game and runs the pipeline per game; games without a
/// profile raise MissingProfile. Output keeps first-appearance game order.
std::vector<WindowSample> run_pipeline_all(const std::vector<TimestepRecord>& records,
                                           const std::map<std::string, GameProfile>& profiles,
                                           const ActionCatalog& catalog,
                                           const PipelineConfig& config = {});

std::string window_sample_id(const std::string& game, const std::string& session,
                             std::int64_t start_frame);

/// Manifest: tab-separated, header line then one WindowSample per line with
/// fields sample_id, game, session, start_frame, window, actions, panning,
/// navigation, weapon, caption.
void write_manifest(std::ostream& out, const std::vector<WindowSample>& samples);
std::vector<WindowSample> read_manifest(std::istream& in);

struct CategoryFrequency {
  std::string game_id;
  std::size_t windows = 0;
  double panning = 0.0;
  double navigation = 0.0;
  double weapon = 0.0;
};

/// Fraction of windows with each behaviour flag, per game in first-appearance order.
std::vector<CategoryFrequency> category_frequencies(const std::vector<WindowSample>& samples);

}  // namespace behave
