// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#include "behave/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include <Eigen/Dense>

#include "behave/error.hpp"
#include "behave/random.hpp"

namespace behave {

void SynthConfig::validate() const {
  if (games.empty() && n_games < 2) throw Error(ErrorCode::InvalidConfig, "need at least two games");
  if (frames_per_game < 2 * kSynthBlock) throw Error(ErrorCode::InvalidConfig, "too few frames per game");
  if (!(persistence >= 0.0 && persistence < 1.0)) throw Error(ErrorCode::InvalidConfig, "persistence must be in [0, 1)");
  if (!(extra_action >= 0.0 && extra_action <= 1.0)) throw Error(ErrorCode::InvalidConfig, "extra_action must be in [0, 1]");
  if (!(interact_rate >= 0.0 && interact_rate <= 1.0)) throw Error(ErrorCode::InvalidConfig, "interact_rate must be in [0, 1]");
  if (embedding_dim < 2) throw Error(ErrorCode::InvalidConfig, "embedding dim must be >= 2");
  if (style_dim < 1 || style_dim > embedding_dim) throw Error(ErrorCode::InvalidConfig, "style dim must be in [1, dim]");
  if (!(sigma_game >= 0.0) || !(sigma_noise >= 0.0) || !(sigma_scene >= 0.0)) throw Error(ErrorCode::InvalidConfig, "sigmas must be >= 0");
  for (const auto& g : games) {
    for (double f : {g.pan_freq, g.nav_freq, g.weapon_freq})
      if (g.action_rates.empty() && !(f > 0.0 && f < 1.0)) throw Error(ErrorCode::InvalidConfig, g.game_id + ": frequencies must be in (0, 1)");
    if (!(g.sensitivity > 0.0)) throw Error(ErrorCode::InvalidConfig, g.game_id + ": sensitivity must be positive");
    for (const auto& [id, rate] : g.action_rates)
      if (!(rate >= 0.0 && rate < 1.0)) throw Error(ErrorCode::InvalidConfig, g.game_id + ": rate for " + id);
  }
}

std::vector<GameStyle> resolve_styles(const SynthConfig& config) {
  if (!config.games.empty()) return config.games;
  Rng rng(combine_seed(config.seed, 0x57));
  std::vector<GameStyle> out;
  for (int g = 0; g < config.n_games; ++g) {
    GameStyle s;
    char name[32];
    std::snprintf(name, sizeof name, "synth%02d", g);
    s.game_id = name;
    s.mouse_mode = rng.bernoulli(0.5) ? MouseMode::AutoCenter : MouseMode::FreeForm;
    s.sensitivity = rng.uniform(0.5, 2.0);
    s.pan_freq = rng.uniform(0.45, 0.75);
    s.nav_freq = rng.uniform(0.45, 0.75);
    s.weapon_freq = rng.uniform(0.25, 0.5);
    out.push_back(std::move(s));
  }
  return out;
}

double block_rate_for_window_frequency(double f, double rho) {
  if (f <= 0.0) return 0.0;
  const auto window_freq = [rho](double q) { return 1.0 - (1.0 - q) * (rho + (1.0 - rho) * (1.0 - q)); };
  if (f >= window_freq(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    (window_freq(mid) < f ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

std::vector<std::pair<std::string, double>> csgo_like_action_rates() {
  return {{"w", 0.6983},          {"mouse_right", 0.4485}, {"d", 0.4367},     {"mouse_left", 0.4307},
          {"a", 0.4137},          {"left_click", 0.3019},  {"mouse_down", 0.1410}, {"mouse_up", 0.1295},
          {"s", 0.1082},          {"r", 0.0477},           {"space", 0.0220}, {"change_gun", 0.0158},
          {"crouch", 0.0078},     {"right_click", 0.0},    {"lshift", 0.0},   {"f", 0.0}};
}

namespace {

struct Choice {
  std::string id;
  double weight;
};

const std::vector<Choice>& pan_choices() {
  static const std::vector<Choice> c = {
      {"mouse_left", 0.48}, {"mouse_right", 0.48}, {"mouse_up", 0.02}, {"mouse_down", 0.02}};
  return c;
}
const std::vector<Choice>& nav_choices() {
  static const std::vector<Choice> c = {{"w", 0.85},      {"a", 0.05},       {"d", 0.05},      {"s", 0.04},
                                        {"space", 0.005}, {"lshift", 0.003}, {"crouch", 0.002}};
  return c;
}
const std::vector<Choice>& weapon_choices() {
  static const std::vector<Choice> c = {
      {"left_click", 0.90}, {"right_click", 0.08}, {"r", 0.015}, {"change_gun", 0.005}};
  return c;
}

std::size_t weighted_pick(const std::vector<Choice>& choices, Rng& rng) {
  double total = 0.0;
  for (const auto& c : choices) total += c.weight;
  double u = rng.uniform() * total;
  for (std::size_t i = 0; i < choices.size(); ++i) {
    u -= choices[i].weight;
    if (u < 0.0) return i;
  }
  return choices.size() - 1;
}

// Positions of pan actions in the catalog, -1 if absent.
struct PanIds {
  long left = -1, right = -1, up = -1, down = -1;
};

long position(const ActionCatalog& catalog, std::string_view id) {
  auto p = catalog.find_id(id);
  return p ? static_cast<long>(*p) : -1;
}

// Which catalog actions are active in each block.
std::vector<std::vector<std::uint8_t>> block_actions(const GameStyle& style, const SynthConfig& config,
                                                     const ActionCatalog& catalog, std::size_t blocks, Rng& rng) {
  std::vector<std::vector<std::uint8_t>> out(blocks, std::vector<std::uint8_t>(catalog.size(), 0));
  const double rho = config.persistence;
  const PanIds pan{position(catalog, "mouse_left"), position(catalog, "mouse_right"), position(catalog, "mouse_up"),
                   position(catalog, "mouse_down")};
  const auto resolve_conflicts = [&](std::vector<std::uint8_t>& act) {
    if (pan.left >= 0 && pan.right >= 0 && act[pan.left] && act[pan.right])
      act[rng.bernoulli(0.5) ? pan.left : pan.right] = 0;
    if (pan.up >= 0 && pan.down >= 0 && act[pan.up] && act[pan.down])
      act[rng.bernoulli(0.5) ? pan.up : pan.down] = 0;
  };

  if (!style.action_rates.empty()) {
    struct Chain {
      long pos;
      double q;
      bool on = false;
    };
    std::vector<Chain> chains;
    for (const auto& [id, rate] : style.action_rates) {
      const long p = position(catalog, id);
      if (p < 0) throw Error(ErrorCode::UnknownAction, "action rate for '" + id + "'");
      if (rate > 0.0) chains.push_back({p, block_rate_for_window_frequency(rate, rho)});
    }
    for (std::size_t k = 0; k < blocks; ++k) {
      for (auto& c : chains) {
        if (k == 0 || !rng.bernoulli(rho)) c.on = rng.bernoulli(c.q);
        if (c.on) out[k][static_cast<std::size_t>(c.pos)] = 1;
      }
      resolve_conflicts(out[k]);
    }
    return out;
  }

  struct CategoryChain {
    const std::vector<Choice>* choices;
    double q;
    std::vector<long> state;
  };
  std::vector<CategoryChain> chains = {{&pan_choices(), block_rate_for_window_frequency(style.pan_freq, rho), {}},
                                       {&nav_choices(), block_rate_for_window_frequency(style.nav_freq, rho), {}},
                                       {&weapon_choices(), block_rate_for_window_frequency(style.weapon_freq, rho), {}}};
  const long interact = position(catalog, "f");
  for (std::size_t k = 0; k < blocks; ++k) {
    for (auto& c : chains) {
      if (k == 0 || !rng.bernoulli(rho)) {
        c.state.clear();
        if (rng.bernoulli(c.q)) {
          c.state.push_back(position(catalog, (*c.choices)[weighted_pick(*c.choices, rng)].id));
          if (rng.bernoulli(config.extra_action))
            c.state.push_back(position(catalog, (*c.choices)[weighted_pick(*c.choices, rng)].id));
        }
      }
      for (long p : c.state)
        if (p >= 0) out[k][static_cast<std::size_t>(p)] = 1;
    }
    if (interact >= 0 && rng.bernoulli(config.interact_rate)) out[k][static_cast<std::size_t>(interact)] = 1;
    resolve_conflicts(out[k]);
  }
  return out;
}

int round_int(double v) { return static_cast<int>(std::lround(v)); }

}  // namespace

std::vector<SynthGame> generate_logs(const SynthConfig& config, const ActionCatalog& catalog) {
  config.validate();
  const auto styles = resolve_styles(config);
  std::vector<SynthGame> out;
  std::map<std::string, int> seen;
  for (const auto& style : styles) {
    if (seen[style.game_id]++ > 0) throw Error(ErrorCode::InvalidConfig, "duplicate game id " + style.game_id);
    SynthGame game;
    game.style = style;
    GameProfile& profile = game.profile;
    profile.game_id = style.game_id;
    profile.mouse_mode = style.mouse_mode;
    const double base = style.mouse_mode == MouseMode::AutoCenter ? 2.0 : 20.0;
    profile.delta_threshold_px = std::max(1, round_int(base * style.sensitivity));
    profile.validate();
    const int t = profile.delta_threshold_px;
    const int eps = profile.center_epsilon_px;
    const int jitter = (t - 1) / 2;
    const ScreenPoint center = profile.screen_center;

    Rng rng(combine_seed(config.seed, hash_bytes(style.game_id, 0)));
    const std::size_t blocks = (config.frames_per_game + kSynthBlock - 1) / kSynthBlock;
    const auto acts = block_actions(style, config, catalog, blocks, rng);
    const auto& keyed = catalog.keyed_positions();
    const auto& pans = catalog.pan_positions();

    // Frames within a block during which each keyed action is held: long
    // animations get a single press so their labels stay inside the block.
    std::vector<int> hold(keyed.size());
    for (std::size_t k = 0; k < keyed.size(); ++k) {
      const auto& anim = catalog[keyed[k]].anim;
      hold[k] = std::max(0, static_cast<int>(kSynthBlock) - anim.delay - anim.length);
    }

    int x = center.x, y = center.y;
    const int margin = 8;
    game.records.reserve(config.frames_per_game);
    for (std::size_t b = 0; b < blocks; ++b) {
      const auto& a = acts[b];
      int sx = (a[pans[1]] ? 1 : 0) - (a[pans[0]] ? 1 : 0);
      int sy = (a[pans[3]] ? 1 : 0) - (a[pans[2]] ? 1 : 0);
      const int floor_mag = 3 * eps + 1;
      const int mx = std::max(floor_mag, round_int(t * rng.uniform(1.5, 3.0)));
      const int my = std::max(floor_mag, round_int(t * rng.uniform(1.5, 3.0)));
      for (std::size_t o = 0; o < kSynthBlock; ++o) {
        const std::size_t frame = b * kSynthBlock + o;
        if (frame >= config.frames_per_game) break;
        TimestepRecord r;
        r.game_id = style.game_id;
        r.session_id = "s1";
        r.frame_index = static_cast<std::int64_t>(frame);
        r.timestamp_ms = static_cast<std::int64_t>((frame * 1000 + 8) / 16);
        r.keys.assign(keyed.size(), 0);
        for (std::size_t k = 0; k < keyed.size(); ++k)
          r.keys[k] = a[keyed[k]] && static_cast<int>(o) <= hold[k] ? 1 : 0;

        const bool moving = (sx != 0 || sy != 0) && o <= 5;
        const int jx = jitter > 0 ? static_cast<int>(rng.below(2 * jitter + 1)) - jitter : 0;
        const int jy = jitter > 0 ? static_cast<int>(rng.below(2 * jitter + 1)) - jitter : 0;
        if (style.mouse_mode == MouseMode::AutoCenter) {
          if (moving && o % 2 == 0) {
            x = center.x + sx * mx;
            y = center.y + sy * my;
          } else if (moving) {
            x = center.x;
            y = center.y;
          } else {
            x = center.x + jx;
            y = center.y + jy;
          }
        } else if (moving) {
          if (x + sx * mx < margin || x + sx * mx >= profile.screen_width - margin) sx = -sx;
          if (y + sy * my < margin || y + sy * my >= profile.screen_height - margin) sy = -sy;
          x += sx * mx;
          y += sy * my;
        } else {
          x = std::clamp(x + jx, 0, profile.screen_width - 1);
          y = std::clamp(y + jy, 0, profile.screen_height - 1);
        }
        r.mouse_x = x;
        r.mouse_y = y;
        game.records.push_back(std::move(r));
      }
    }
    out.push_back(std::move(game));
  }
  return out;
}

EmbeddingTable generate_foundation_embeddings(const std::vector<WindowSample>& windows, const SynthConfig& config,
                                              const ActionCatalog& catalog) {
  config.validate();
  const std::size_t dim = config.embedding_dim;
  const std::size_t n_act = catalog.size();

  Rng brng(combine_seed(config.behaviour_seed, 0xb));
  Eigen::MatrixXd behaviour(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(n_act));
  for (Eigen::Index c = 0; c < behaviour.cols(); ++c) {
    for (Eigen::Index r = 0; r < behaviour.rows(); ++r) behaviour(r, c) = brng.normal();
    behaviour.col(c).normalize();
  }
  Eigen::MatrixXd gauss(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(config.style_dim));
  for (Eigen::Index c = 0; c < gauss.cols(); ++c)
    for (Eigen::Index r = 0; r < gauss.rows(); ++r) gauss(r, c) = brng.normal();
  const Eigen::MatrixXd basis =
      Eigen::HouseholderQR<Eigen::MatrixXd>(gauss).householderQ() *
      Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(config.style_dim));

  // Game styles are unit directions in the style subspace. Each game keeps the
  // best of a few seeded candidates (largest distance to earlier games) so
  // no two games end up with nearly the same look.
  std::map<std::string, Eigen::VectorXd> offsets;
  std::vector<Eigen::VectorXd> chosen;
  for (const auto& style : resolve_styles(config)) {
    Rng grng(combine_seed(config.seed, hash_bytes(style.game_id, 0x9a)));
    Eigen::VectorXd best;
    double best_gap = -1.0;
    for (int c = 0; c < std::max(1, config.style_candidates); ++c) {
      Eigen::VectorXd xi(static_cast<Eigen::Index>(config.style_dim));
      for (Eigen::Index k = 0; k < xi.size(); ++k) xi(k) = grng.normal();
      if (xi.norm() == 0.0) continue;
      xi.normalize();
      double gap = std::numeric_limits<double>::infinity();
      for (const auto& prev : chosen) gap = std::min(gap, (xi - prev).norm());
      if (gap > best_gap) {
        best_gap = gap;
        best = xi;
      }
    }
    chosen.push_back(best);
    const Eigen::VectorXd u = config.sigma_game * (basis * best);
    offsets.emplace(style.game_id, u);
  }

  EmbeddingTable table;
  table.dim = dim;
  table.values.reserve(windows.size() * dim);
  const double noise_scale = config.sigma_noise / std::sqrt(static_cast<double>(dim));
  const double scene_scale = config.sigma_scene / std::sqrt(static_cast<double>(config.style_dim));
  for (const auto& w : windows) {
    auto it = offsets.find(w.game_id);
    if (it == offsets.end()) throw Error(ErrorCode::UnknownGame, "'" + w.game_id + "' is not in the config");
    if (w.actions.size() != n_act) throw Error(ErrorCode::DimMismatch, "window action vector does not match catalog");
    Eigen::VectorXd row = it->second;
    for (std::size_t a = 0; a < n_act; ++a)
      if (w.actions[a]) row += behaviour.col(static_cast<Eigen::Index>(a));
    Rng nrng(hash_bytes(w.sample_id, config.seed));
    if (config.sigma_scene > 0.0) {
      Eigen::VectorXd xi(static_cast<Eigen::Index>(config.style_dim));
      for (Eigen::Index k = 0; k < xi.size(); ++k) xi(k) = nrng.normal() * scene_scale;
      row += basis * xi;
    }
    for (Eigen::Index k = 0; k < row.size(); ++k) row(k) += noise_scale * nrng.normal();
    const double norm = row.norm();
    for (Eigen::Index k = 0; k < row.size(); ++k)
      table.values.push_back(norm > kNormEpsilon ? static_cast<float>(row(k) / norm) : 0.0f);
    table.ids.push_back(w.sample_id);
  }
  table.validate();
  return table;
}

}  // namespace behave
