// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#include "behave/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>
#include <string_view>

#include <json.hpp>

#include "behave/error.hpp"

namespace behave {

namespace {

constexpr std::array<std::string_view, 6> kFixedColumns = {"game",    "session", "frame",
                                                           "ts_ms",   "mouse_x", "mouse_y"};

std::vector<std::string_view> split(std::string_view line, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

template <typename Int>
Int parse_int(std::string_view field, std::size_t line_no, std::string_view column) {
  Int value{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (ec != std::errc() || ptr != end || field.empty())
    throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": bad " +
                                             std::string(column) + " '" + std::string(field) + "'");
  return value;
}

std::string_view chomp(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

std::string_view mouse_mode_name(MouseMode m) {
  return m == MouseMode::AutoCenter ? "auto_center" : "free_form";
}

MouseMode parse_mouse_mode(const std::string& s) {
  if (s == "auto_center" || s == "auto-center" || s == "autocenter") return MouseMode::AutoCenter;
  if (s == "free_form" || s == "free-form" || s == "freeform") return MouseMode::FreeForm;
  throw Error(ErrorCode::InvalidConfig, "unknown mouse_mode '" + s + "'");
}

}  // namespace

void GameProfile::validate() const {
  if (game_id.empty()) throw Error(ErrorCode::InvalidConfig, "profile without game_id");
  if (delta_threshold_px < 1)
    throw Error(ErrorCode::InvalidConfig, game_id + ": delta_threshold_px must be >= 1");
  if (screen_width < 1 || screen_height < 1)
    throw Error(ErrorCode::InvalidConfig, game_id + ": bad screen size");
  if (center_epsilon_px < 0 || 4 * center_epsilon_px >= std::min(screen_width, screen_height))
    throw Error(ErrorCode::InvalidConfig, game_id + ": center_epsilon_px out of range");
}

ActionCatalog GameProfile::effective_catalog(const ActionCatalog& base) const {
  if (action_overrides.empty()) return base;
  return base.with_overrides(action_overrides);
}

const std::vector<GamePreset>& known_game_presets() {
  using enum MouseMode;
  static const std::vector<GamePreset> presets = {
      {"pubg", FreeForm, 20},          {"payday3", FreeForm, 10},
      {"insurgency", FreeForm, 20},    {"callofduty", AutoCenter, 2},
      {"farcry5", AutoCenter, 2},      {"bioshock", FreeForm, 20},
      {"gta5", FreeForm, 20},          {"rainbowsix", FreeForm, 20},
      {"teamfortress2", AutoCenter, 2}, {"wolfenstein", FreeForm, 20},
      {"apexlegends", AutoCenter, 1},  {"atomicheart", FreeForm, 20},
      {"warhammer", AutoCenter, 2},    {"back4blood", FreeForm, 20},
      {"halo4", FreeForm, 20},         {"crysis2", FreeForm, 20},
      {"overwatch2", AutoCenter, 2},   {"deathloop", FreeForm, 20},
      {"valorant", FreeForm, 20},      {"generationzero", FreeForm, 20},
      {"polygon", FreeForm, 20},       {"titanfall2", AutoCenter, 2},
      {"destiny2", FreeForm, 10},      {"shatterline", FreeForm, 20},
      {"harshdoorstep", FreeForm, 20}, {"csgo", AutoCenter, 20},
      {"minecraft", FreeForm, 40},
  };
  return presets;
}

std::vector<TimestepRecord> parse_log(std::istream& in, const ActionCatalog& catalog) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::MalformedRow, "missing header line");
  const auto header = split(chomp(line), ',');
  if (header.size() < kFixedColumns.size() ||
      !std::equal(kFixedColumns.begin(), kFixedColumns.end(), header.begin()))
    throw Error(ErrorCode::MalformedRow, "header must start with game,session,frame,ts_ms,mouse_x,mouse_y");

  const auto& keyed = catalog.keyed_positions();
  // Column -> index into TimestepRecord::keys.
  std::vector<std::size_t> column_slot;
  for (std::size_t c = kFixedColumns.size(); c < header.size(); ++c) {
    auto pos = catalog.resolve_column(header[c]);
    if (!pos) throw Error(ErrorCode::UnknownAction, "column '" + std::string(header[c]) + "'");
    auto it = std::find(keyed.begin(), keyed.end(), *pos);
    if (it == keyed.end())
      throw Error(ErrorCode::UnknownAction,
                  "column '" + std::string(header[c]) + "' is derived from mouse coordinates");
    column_slot.push_back(static_cast<std::size_t>(it - keyed.begin()));
  }

  std::vector<TimestepRecord> records;
  std::map<std::pair<std::string, std::string>, std::int64_t> last_frame;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view row = chomp(line);
    if (row.empty()) continue;
    const auto fields = split(row, ',');
    if (fields.size() != header.size())
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": expected " +
                                               std::to_string(header.size()) + " fields, got " +
                                               std::to_string(fields.size()));
    TimestepRecord r;
    r.game_id = std::string(fields[0]);
    r.session_id = std::string(fields[1]);
    if (r.game_id.empty() || r.session_id.empty())
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": empty game/session");
    r.frame_index = parse_int<std::int64_t>(fields[2], line_no, "frame");
    r.timestamp_ms = parse_int<std::int64_t>(fields[3], line_no, "ts_ms");
    r.mouse_x = parse_int<int>(fields[4], line_no, "mouse_x");
    r.mouse_y = parse_int<int>(fields[5], line_no, "mouse_y");
    if (r.frame_index < 0 || r.timestamp_ms < 0)
      throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": negative frame or timestamp");
    r.keys.assign(keyed.size(), 0);
    for (std::size_t c = 0; c < column_slot.size(); ++c) {
      const std::string_view cell = fields[kFixedColumns.size() + c];
      if (cell == "1") {
        r.keys[column_slot[c]] = 1;
      } else if (cell != "0") {
        throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": action cell '" +
                                                 std::string(cell) + "' is not 0/1");
      }
    }
    auto [it, fresh] = last_frame.try_emplace({r.game_id, r.session_id}, r.frame_index);
    if (!fresh) {
      if (r.frame_index <= it->second)
        throw Error(ErrorCode::NonMonotonicFrame,
                    "line " + std::to_string(line_no) + ": frame " + std::to_string(r.frame_index) +
                        " after " + std::to_string(it->second) + " in " + r.game_id + "/" + r.session_id);
      it->second = r.frame_index;
    }
    records.push_back(std::move(r));
  }
  return records;
}

void serialize_log(std::ostream& out, const std::vector<TimestepRecord>& records,
                   const ActionCatalog& catalog) {
  out << "game,session,frame,ts_ms,mouse_x,mouse_y";
  for (std::size_t pos : catalog.keyed_positions()) out << ',' << catalog[pos].action_id;
  out << '\n';
  const std::size_t n_keys = catalog.keyed_positions().size();
  for (const auto& r : records) {
    if (r.keys.size() != n_keys)
      throw Error(ErrorCode::DimMismatch, "record has " + std::to_string(r.keys.size()) +
                                              " keys, catalog has " + std::to_string(n_keys));
    out << r.game_id << ',' << r.session_id << ',' << r.frame_index << ',' << r.timestamp_ms << ','
        << r.mouse_x << ',' << r.mouse_y;
    for (auto k : r.keys) out << ',' << (k ? '1' : '0');
    out << '\n';
  }
}

std::vector<Segment> detect_discontinuities(const std::vector<TimestepRecord>& records,
                                            std::int64_t max_gap_ms) {
  std::vector<Segment> segments;
  if (records.empty()) return segments;
  Segment current{0, 1};
  for (std::size_t i = 1; i < records.size(); ++i) {
    const auto& prev = records[i - 1];
    const auto& cur = records[i];
    const bool stream_change = cur.game_id != prev.game_id || cur.session_id != prev.session_id;
    const bool frame_gap = cur.frame_index - prev.frame_index != 1;
    const bool time_gap = cur.timestamp_ms - prev.timestamp_ms > max_gap_ms;
    if (stream_change || frame_gap || time_gap) {
      segments.push_back(current);
      current = Segment{i, i + 1};
    } else {
      current.end = i + 1;
    }
  }
  segments.push_back(current);
  return segments;
}

std::map<std::string, GameProfile> parse_profiles(std::istream& in) {
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("profiles: ") + e.what());
  }
  std::map<std::string, GameProfile> out;
  try {
    for (const auto& g : doc.at("games")) {
      GameProfile p;
      p.game_id = g.at("game_id").get<std::string>();
      p.mouse_mode = parse_mouse_mode(g.value("mouse_mode", std::string("free_form")));
      p.delta_threshold_px = g.value("delta_threshold_px", p.delta_threshold_px);
      if (g.contains("screen")) {
        p.screen_width = g["screen"].value("width", p.screen_width);
        p.screen_height = g["screen"].value("height", p.screen_height);
        p.screen_center = {p.screen_width / 2, p.screen_height / 2};
      }
      if (g.contains("center")) {
        p.screen_center.x = g["center"].value("x", p.screen_center.x);
        p.screen_center.y = g["center"].value("y", p.screen_center.y);
      }
      p.center_epsilon_px = g.value("center_epsilon_px", p.center_epsilon_px);
      if (g.contains("action_overrides")) {
        for (const auto& [id, o] : g["action_overrides"].items()) {
          AnimationParams a;
          a.delay = o.value("anim_delay", a.delay);
          a.length = o.value("anim_length", a.length);
          a.cutoff = o.value("cutoff", a.cutoff);
          p.action_overrides.emplace_back(id, a);
        }
      }
      p.validate();
      if (!out.emplace(p.game_id, p).second)
        throw Error(ErrorCode::InvalidConfig, "duplicate profile for '" + p.game_id + "'");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("profiles: ") + e.what());
  }
  return out;
}

void write_profiles(std::ostream& out, const std::vector<GameProfile>& profiles) {
  nlohmann::json games = nlohmann::json::array();
  for (const auto& p : profiles) {
    nlohmann::json g;
    g["game_id"] = p.game_id;
    g["mouse_mode"] = mouse_mode_name(p.mouse_mode);
    g["delta_threshold_px"] = p.delta_threshold_px;
    g["screen"] = {{"width", p.screen_width}, {"height", p.screen_height}};
    g["center"] = {{"x", p.screen_center.x}, {"y", p.screen_center.y}};
    g["center_epsilon_px"] = p.center_epsilon_px;
    if (!p.action_overrides.empty()) {
      nlohmann::json o;
      for (const auto& [id, a] : p.action_overrides)
        o[id] = {{"anim_delay", a.delay}, {"anim_length", a.length}, {"cutoff", a.cutoff}};
      g["action_overrides"] = o;
    }
    games.push_back(g);
  }
  out << nlohmann::json{{"games", games}}.dump(2) << '\n';
}

}  // namespace behave
