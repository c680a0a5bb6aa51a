// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace behave {

enum class Device { MouseMove, MouseButton, Key };

enum class Category { Panning, Navigation, Weapon, None };

inline constexpr std::array<Category, 3> kBehaviourCategories = {
    Category::Panning, Category::Navigation, Category::Weapon};

std::string_view category_name(Category c) noexcept;
std::optional<Category> parse_category(std::string_view name) noexcept;

/// Animation timing for a label, in frames.
struct AnimationParams {
  int delay = 1;   // frames between the input and the first animated frame
  int length = 2;  // animated frames per input frame
  int cutoff = 2;  // animated frames a window needs before the label counts

  friend bool operator==(const AnimationParams&, const AnimationParams&) = default;
};

/// One action label. Several raw inputs may map to the same label (L.Ctrl and
/// C are both "crouch"); `raw_keys` lists them.
struct ActionEntry {
  std::string action_id;
  std::vector<std::string> raw_keys;
  Device device = Device::Key;
  std::string phrase;
  Category category = Category::None;
  AnimationParams anim;
};

/// Ordered set of action labels. Order is canonical: captions, action bit
/// vectors, and log columns all follow it.
class ActionCatalog {
 public:
  explicit ActionCatalog(std::vector<ActionEntry> entries, int window_size = 16);

  std::size_t size() const noexcept { return entries_.size(); }
  const std::vector<ActionEntry>& entries() const noexcept { return entries_; }
  const ActionEntry& operator[](std::size_t i) const { return entries_.at(i); }

  std::optional<std::size_t> find_id(std::string_view action_id) const noexcept;
  /// Resolves an action id or any of its raw-key aliases.
  std::optional<std::size_t> resolve_column(std::string_view name) const noexcept;
  std::optional<std::size_t> find_phrase(std::string_view phrase) const noexcept;
  const ActionEntry& lookup(std::string_view phrase_or_id) const;

  /// Catalog positions of the labels that come from button/key state (all but
  /// mouse moves), in catalog order. TimestepRecord::keys is indexed by these.
  const std::vector<std::size_t>& keyed_positions() const noexcept { return keyed_; }
  /// Catalog positions of the four mouse-move labels: left, right, up, down.
  const std::array<std::size_t, 4>& pan_positions() const noexcept { return pan_; }
  const std::vector<std::size_t>& category_positions(Category c) const;

  /// Copy with animation parameters replaced for the given action ids.
  ActionCatalog with_overrides(
      const std::vector<std::pair<std::string, AnimationParams>>& overrides) const;

 private:
  std::vector<ActionEntry> entries_;
  std::vector<std::size_t> keyed_;
  std::array<std::size_t, 4> pan_{};
  std::array<std::vector<std::size_t>, 4> by_category_;
  int window_size_;
};

/// The FPS catalog: 4 mouse moves, 2 mouse buttons, then keyboard labels.
/// 19 raw inputs collapse to 16 labels.
const ActionCatalog& default_catalog();

inline constexpr std::string_view kIdleCaption = "Idle";

}  // namespace behave
