// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#include "behave/catalog.hpp"

#include <set>

#include "behave/error.hpp"

namespace behave {

std::string_view category_name(Category c) noexcept {
  switch (c) {
    case Category::Panning: return "panning";
    case Category::Navigation: return "navigation";
    case Category::Weapon: return "weapon";
    case Category::None: return "none";
  }
  return "none";
}

std::optional<Category> parse_category(std::string_view name) noexcept {
  for (Category c : {Category::Panning, Category::Navigation, Category::Weapon, Category::None}) {
    if (category_name(c) == name) return c;
  }
  return std::nullopt;
}

ActionCatalog::ActionCatalog(std::vector<ActionEntry> entries, int window_size)
    : entries_(std::move(entries)), window_size_(window_size) {
  std::set<std::string> phrases;
  std::set<std::string> names;
  std::size_t pans = 0;
  for (std::size_t i = 0; i < entries_.size(); ++i) {
    ActionEntry& e = entries_[i];
    if (e.raw_keys.empty()) e.raw_keys.push_back(e.action_id);
    if (e.phrase.empty()) throw Error(ErrorCode::InvalidConfig, "empty phrase for " + e.action_id);
    if (!phrases.insert(e.phrase).second)
      throw Error(ErrorCode::InvalidConfig, "duplicate phrase '" + e.phrase + "'");
    if (!names.insert(e.action_id).second)
      throw Error(ErrorCode::InvalidConfig, "duplicate action id '" + e.action_id + "'");
    for (const auto& k : e.raw_keys) {
      if (k != e.action_id && !names.insert(k).second)
        throw Error(ErrorCode::InvalidConfig, "duplicate raw key '" + k + "'");
    }
    const AnimationParams& a = e.anim;
    if (a.delay < 1 || a.length < 1 || a.cutoff < 1 || a.cutoff > window_size_)
      throw Error(ErrorCode::InvalidConfig, "bad animation parameters for " + e.action_id);
    if (e.device == Device::MouseMove) {
      if (pans == pan_.size())
        throw Error(ErrorCode::InvalidConfig, "more than four mouse-move labels");
      pan_[pans++] = i;
    } else {
      keyed_.push_back(i);
    }
    by_category_[static_cast<std::size_t>(e.category)].push_back(i);
  }
  if (pans != pan_.size())
    throw Error(ErrorCode::InvalidConfig, "catalog needs exactly four mouse-move labels");
}

std::optional<std::size_t> ActionCatalog::find_id(std::string_view action_id) const noexcept {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].action_id == action_id) return i;
  return std::nullopt;
}

std::optional<std::size_t> ActionCatalog::resolve_column(std::string_view name) const noexcept {
  if (auto i = find_id(name)) return i;
  for (std::size_t i = 0; i < entries_.size(); ++i)
    for (const auto& k : entries_[i].raw_keys)
      if (k == name) return i;
  return std::nullopt;
}

std::optional<std::size_t> ActionCatalog::find_phrase(std::string_view phrase) const noexcept {
  for (std::size_t i = 0; i < entries_.size(); ++i)
    if (entries_[i].phrase == phrase) return i;
  return std::nullopt;
}

const ActionEntry& ActionCatalog::lookup(std::string_view phrase_or_id) const {
  if (auto i = find_phrase(phrase_or_id)) return entries_[*i];
  if (auto i = resolve_column(phrase_or_id)) return entries_[*i];
  throw Error(ErrorCode::UnknownAction, std::string(phrase_or_id));
}

const std::vector<std::size_t>& ActionCatalog::category_positions(Category c) const {
  return by_category_[static_cast<std::size_t>(c)];
}

ActionCatalog ActionCatalog::with_overrides(
    const std::vector<std::pair<std::string, AnimationParams>>& overrides) const {
  std::vector<ActionEntry> copy = entries_;
  for (const auto& [id, params] : overrides) {
    auto i = resolve_column(id);
    if (!i) throw Error(ErrorCode::UnknownAction, "override for unknown action '" + id + "'");
    copy[*i].anim = params;
  }
  return ActionCatalog(std::move(copy), window_size_);
}

namespace {

ActionEntry entry(std::string id, Device device, std::string phrase, Category category,
                  AnimationParams anim, std::vector<std::string> raw = {}) {
  return ActionEntry{std::move(id), std::move(raw), device, std::move(phrase), category, anim};
}

}  // namespace

const ActionCatalog& default_catalog() {
  static const ActionCatalog catalog = [] {
    const AnimationParams quick{1, 2, 2};
    using enum Device;
    using enum Category;
    std::vector<ActionEntry> e;
    e.push_back(entry("mouse_left", MouseMove, "Pan Left", Panning, quick));
    e.push_back(entry("mouse_right", MouseMove, "Pan Right", Panning, quick));
    e.push_back(entry("mouse_up", MouseMove, "Pan Up", Panning, quick));
    e.push_back(entry("mouse_down", MouseMove, "Pan Down", Panning, quick));
    e.push_back(entry("left_click", MouseButton, "Fire Gun", Weapon, quick));
    e.push_back(entry("right_click", MouseButton, "Aim Gun", Weapon, quick));
    e.push_back(entry("w", Key, "Move Forward", Navigation, quick));
    e.push_back(entry("a", Key, "Strafe Left", Navigation, quick));
    e.push_back(entry("s", Key, "Move Backward", Navigation, quick));
    e.push_back(entry("d", Key, "Strafe Right", Navigation, quick));
    e.push_back(entry("r", Key, "Reload Gun", Weapon, {3, 16, 6}));
    e.push_back(entry("space", Key, "Jump", Navigation, quick));
    e.push_back(entry("lshift", Key, "Sprint", Navigation, {1, 2, 6}));
    e.push_back(entry("crouch", Key, "Crouch", Navigation, quick, {"lctrl", "c"}));
    e.push_back(entry("change_gun", Key, "Change Gun", Weapon, {3, 8, 6}, {"1", "2", "3"}));
    e.push_back(entry("f", Key, "Interact", None, {3, 5, 3}));
    return ActionCatalog(std::move(e));
  }();
  return catalog;
}

}  // namespace behave
