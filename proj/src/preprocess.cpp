// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#include "behave/preprocess.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string_view>

#include "behave/error.hpp"

namespace behave {

bool CategoryFlags::get(Category c) const noexcept {
  switch (c) {
    case Category::Panning: return panning;
    case Category::Navigation: return navigation;
    case Category::Weapon: return weapon;
    case Category::None: return false;
  }
  return false;
}

void PipelineConfig::validate() const {
  if (window_size < 1) throw Error(ErrorCode::InvalidConfig, "window size must be >= 1");
  if (stride < 1 || stride > window_size)
    throw Error(ErrorCode::InvalidConfig, "stride must be in [1, window size]");
  if (max_gap_ms < 1) throw Error(ErrorCode::InvalidConfig, "max gap must be positive");
}

std::vector<MouseDelta> mouse_deltas(std::span<const TimestepRecord> segment,
                                     const GameProfile& profile) {
  std::vector<MouseDelta> out(segment.size());
  const auto near_center = [&](const TimestepRecord& r) {
    return std::abs(r.mouse_x - profile.screen_center.x) <= profile.center_epsilon_px &&
           std::abs(r.mouse_y - profile.screen_center.y) <= profile.center_epsilon_px;
  };
  for (std::size_t t = 1; t < segment.size(); ++t) {
    if (profile.mouse_mode == MouseMode::AutoCenter && near_center(segment[t])) continue;
    out[t] = {segment[t].mouse_x - segment[t - 1].mouse_x,
              segment[t].mouse_y - segment[t - 1].mouse_y};
  }
  return out;
}

PanFlags discretize_pan(int dx, int dy, int threshold_px) {
  return PanFlags{.left = dx <= -threshold_px,
                  .right = dx >= threshold_px,
                  .up = dy <= -threshold_px,
                  .down = dy >= threshold_px};
}

std::vector<std::uint8_t> propagate_labels(std::span<const std::uint8_t> raw, int delay, int length) {
  if (delay < 1 || length < 1)
    throw Error(ErrorCode::InvalidConfig, "propagation needs delay >= 1 and length >= 1");
  const std::size_t n = raw.size();
  std::vector<std::uint8_t> out(n, 0);
  for (std::size_t f = 0; f < n; ++f) {
    if (!raw[f]) continue;
    const std::size_t first = f + static_cast<std::size_t>(delay);
    const std::size_t last = std::min(n, first + static_cast<std::size_t>(length));
    for (std::size_t g = first; g < last; ++g) out[g] = 1;
  }
  return out;
}

std::vector<std::size_t> make_windows(std::size_t segment_length, std::size_t window_size,
                                      std::size_t stride) {
  if (window_size < 1 || stride < 1 || stride > window_size)
    throw Error(ErrorCode::InvalidConfig, "window size and stride must satisfy 1 <= stride <= size");
  std::vector<std::size_t> starts;
  for (std::size_t s = 0; s + window_size <= segment_length; s += stride) starts.push_back(s);
  return starts;
}

std::vector<std::uint8_t> collapse_window(std::span<const FrameLabels> window,
                                          const ActionCatalog& catalog) {
  std::vector<int> counts(catalog.size(), 0);
  for (const auto& frame : window) {
    if (frame.labels.size() != catalog.size())
      throw Error(ErrorCode::DimMismatch, "frame labels do not match the catalog size");
    for (std::size_t a = 0; a < counts.size(); ++a) counts[a] += frame.labels[a];
  }
  std::vector<std::uint8_t> actions(catalog.size(), 0);
  for (std::size_t a = 0; a < counts.size(); ++a)
    actions[a] = counts[a] >= catalog[a].anim.cutoff ? 1 : 0;
  return actions;
}

std::string semantic_action_mapper(std::span<const std::uint8_t> actions,
                                   const ActionCatalog& catalog) {
  if (actions.size() != catalog.size())
    throw Error(ErrorCode::DimMismatch, "action vector does not match the catalog size");
  std::string caption;
  for (std::size_t a = 0; a < actions.size(); ++a) {
    if (!actions[a]) continue;
    if (!caption.empty()) caption += ", ";
    caption += catalog[a].phrase;
  }
  return caption.empty() ? std::string(kIdleCaption) : caption;
}

CategoryFlags categorize(std::span<const std::uint8_t> actions, const ActionCatalog& catalog) {
  if (actions.size() != catalog.size())
    throw Error(ErrorCode::DimMismatch, "action vector does not match the catalog size");
  CategoryFlags flags;
  for (std::size_t a = 0; a < actions.size(); ++a) {
    if (!actions[a]) continue;
    switch (catalog[a].category) {
      case Category::Panning: flags.panning = true; break;
      case Category::Navigation: flags.navigation = true; break;
      case Category::Weapon: flags.weapon = true; break;
      case Category::None: break;
    }
  }
  return flags;
}

std::vector<FrameLabels> label_frames(std::span<const TimestepRecord> segment,
                                      const GameProfile& profile, const ActionCatalog& catalog) {
  const std::size_t n = segment.size();
  const auto& keyed = catalog.keyed_positions();
  const auto& pans = catalog.pan_positions();

  // raw[a][t] before propagation
  std::vector<std::vector<std::uint8_t>> raw(catalog.size(), std::vector<std::uint8_t>(n, 0));
  const auto deltas = mouse_deltas(segment, profile);
  for (std::size_t t = 0; t < n; ++t) {
    const PanFlags p = discretize_pan(deltas[t].dx, deltas[t].dy, profile.delta_threshold_px);
    raw[pans[0]][t] = p.left;
    raw[pans[1]][t] = p.right;
    raw[pans[2]][t] = p.up;
    raw[pans[3]][t] = p.down;
    const auto& keys = segment[t].keys;
    if (keys.size() != keyed.size())
      throw Error(ErrorCode::DimMismatch, "record keys do not match the catalog");
    for (std::size_t k = 0; k < keyed.size(); ++k) raw[keyed[k]][t] = keys[k];
  }

  std::vector<FrameLabels> frames(n);
  for (std::size_t t = 0; t < n; ++t) {
    frames[t].frame_index = segment[t].frame_index;
    frames[t].labels.assign(catalog.size(), 0);
  }
  for (std::size_t a = 0; a < catalog.size(); ++a) {
    const auto prop = propagate_labels(raw[a], catalog[a].anim.delay, catalog[a].anim.length);
    for (std::size_t t = 0; t < n; ++t) frames[t].labels[a] = prop[t];
  }
  return frames;
}

std::string window_sample_id(const std::string& game, const std::string& session,
                             std::int64_t start_frame) {
  return game + "/" + session + "/" + std::to_string(start_frame);
}

std::vector<WindowSample> run_pipeline(const std::vector<TimestepRecord>& records,
                                       const GameProfile& profile, const ActionCatalog& catalog,
                                       const PipelineConfig& config) {
  config.validate();
  profile.validate();
  const ActionCatalog effective = profile.effective_catalog(catalog);
  for (const auto& r : records) {
    if (r.game_id != profile.game_id)
      throw Error(ErrorCode::UnknownGame,
                  "record for '" + r.game_id + "' passed with profile '" + profile.game_id + "'");
    if (profile.mouse_mode == MouseMode::FreeForm &&
        (r.mouse_x < 0 || r.mouse_x >= profile.screen_width || r.mouse_y < 0 ||
         r.mouse_y >= profile.screen_height))
      throw Error(ErrorCode::MalformedRow, "mouse position outside the screen at frame " +
                                               std::to_string(r.frame_index));
  }

  std::vector<WindowSample> samples;
  for (const Segment& seg : detect_discontinuities(records, config.max_gap_ms)) {
    const std::span<const TimestepRecord> part(records.data() + seg.begin, seg.size());
    const auto frames = label_frames(part, profile, effective);
    for (std::size_t start : make_windows(frames.size(), static_cast<std::size_t>(config.window_size),
                                          static_cast<std::size_t>(config.stride))) {
      const std::span<const FrameLabels> slice(frames.data() + start,
                                               static_cast<std::size_t>(config.window_size));
      WindowSample w;
      w.game_id = part[start].game_id;
      w.session_id = part[start].session_id;
      w.start_frame = part[start].frame_index;
      w.sample_id = window_sample_id(w.game_id, w.session_id, w.start_frame);
      w.window_size = config.window_size;
      w.actions = collapse_window(slice, effective);
      w.caption = semantic_action_mapper(w.actions, effective);
      w.categories = categorize(w.actions, effective);
      samples.push_back(std::move(w));
    }
  }
  return samples;
}

std::vector<WindowSample> run_pipeline_all(const std::vector<TimestepRecord>& records,
                                           const std::map<std::string, GameProfile>& profiles,
                                           const ActionCatalog& catalog,
                                           const PipelineConfig& config) {
  std::vector<std::string> order;
  std::map<std::string, std::vector<TimestepRecord>> by_game;
  for (const auto& r : records) {
    auto [it, fresh] = by_game.try_emplace(r.game_id);
    if (fresh) order.push_back(r.game_id);
    it->second.push_back(r);
  }
  std::vector<WindowSample> out;
  for (const auto& game : order) {
    auto p = profiles.find(game);
    if (p == profiles.end()) throw Error(ErrorCode::MissingProfile, "no profile for game '" + game + "'");
    auto part = run_pipeline(by_game[game], p->second, catalog, config);
    out.insert(out.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  return out;
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find('\t', start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

constexpr std::string_view kManifestHeader =
    "sample_id\tgame\tsession\tstart_frame\twindow\tactions\tpanning\tnavigation\tweapon\tcaption";

bool parse_bit(std::string_view s, std::size_t line_no) {
  if (s == "1") return true;
  if (s == "0") return false;
  throw Error(ErrorCode::MalformedRow, "manifest line " + std::to_string(line_no) + ": bad flag");
}

}  // namespace

void write_manifest(std::ostream& out, const std::vector<WindowSample>& samples) {
  out << kManifestHeader << '\n';
  for (const auto& s : samples) {
    out << s.sample_id << '\t' << s.game_id << '\t' << s.session_id << '\t' << s.start_frame << '\t'
        << s.window_size << '\t';
    for (auto a : s.actions) out << (a ? '1' : '0');
    out << '\t' << int(s.categories.panning) << '\t' << int(s.categories.navigation) << '\t'
        << int(s.categories.weapon) << '\t' << s.caption << '\n';
  }
}

std::vector<WindowSample> read_manifest(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MalformedRow, "manifest is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kManifestHeader) throw Error(ErrorCode::MalformedRow, "unexpected manifest header");
  std::vector<WindowSample> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto f = split_tabs(line);
    if (f.size() != 10)
      throw Error(ErrorCode::MalformedRow, "manifest line " + std::to_string(line_no) + ": expected 10 fields");
    WindowSample s;
    s.sample_id = std::string(f[0]);
    s.game_id = std::string(f[1]);
    s.session_id = std::string(f[2]);
    auto parse = [&](std::string_view v, auto& dst) {
      auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), dst);
      if (ec != std::errc() || p != v.data() + v.size() || v.empty())
        throw Error(ErrorCode::MalformedRow, "manifest line " + std::to_string(line_no) + ": bad integer");
    };
    parse(f[3], s.start_frame);
    parse(f[4], s.window_size);
    for (char c : f[5]) {
      if (c != '0' && c != '1')
        throw Error(ErrorCode::MalformedRow, "manifest line " + std::to_string(line_no) + ": bad action bits");
      s.actions.push_back(c == '1');
    }
    s.categories = {parse_bit(f[6], line_no), parse_bit(f[7], line_no), parse_bit(f[8], line_no)};
    s.caption = std::string(f[9]);
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<CategoryFrequency> category_frequencies(const std::vector<WindowSample>& samples) {
  std::vector<CategoryFrequency> out;
  std::map<std::string, std::size_t> index;
  for (const auto& s : samples) {
    auto [it, fresh] = index.try_emplace(s.game_id, out.size());
    if (fresh) out.push_back(CategoryFrequency{s.game_id});
    auto& f = out[it->second];
    ++f.windows;
    f.panning += s.categories.panning;
    f.navigation += s.categories.navigation;
    f.weapon += s.categories.weapon;
  }
  for (auto& f : out) {
    f.panning /= static_cast<double>(f.windows);
    f.navigation /= static_cast<double>(f.windows);
    f.weapon /= static_cast<double>(f.windows);
  }
  return out;
}

}  // namespace behave
