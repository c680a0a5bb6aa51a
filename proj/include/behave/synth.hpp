// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "behave/catalog.hpp"
#include "behave/dataset.hpp"
#include "behave/embeddings.hpp"
#include "behave/preprocess.hpp"

namespace behave {

/// Visual and behavioural style of one synthetic game.
struct GameStyle {
  std::string game_id;
  MouseMode mouse_mode = MouseMode::FreeForm;
  double sensitivity = 1.0;  // scales mouse deltas and t(delta)
  double pan_freq = 0.8;     // target fraction of windows with each category
  double nav_freq = 0.8;
  double weapon_freq = 0.4;
  /// Optional per-action target window rates (action id -> rate). When set,
  /// every listed action runs its own chain and the category targets are unused.
  std::vector<std::pair<std::string, double>> action_rates;
};

struct SynthConfig {
  int n_games = 6;
  std::size_t frames_per_game = 4000;
  std::uint64_t seed = 0;
  /// Explicit styles; when empty, n_games styles are drawn from the seed.
  std::vector<GameStyle> games;

  double persistence = 0.7;      // chance a category keeps its state into the next block
  double extra_action = 0.2;     // chance of a second action within an active category
  double interact_rate = 0.03;   // per-block chance of the uncategorized action

  std::size_t embedding_dim = 64;
  std::size_t style_dim = 4;
  double sigma_game = 3.0;
  double sigma_noise = 0.5;
  /// Per-window variation inside the style subspace (scene, lighting, map),
  /// standard deviation of the offset norm scale.
  double sigma_scene = 1.0;
  /// Seeded candidates per game style; the one farthest from earlier games wins.
  int style_candidates = 16;
  std::uint64_t behaviour_seed = 1;

  void validate() const;
};

/// Frames per behaviour block (equal to the default window stride).
inline constexpr std::size_t kSynthBlock = 8;

std::vector<GameStyle> resolve_styles(const SynthConfig& config);

/// Per-block activation probability q giving window frequency f under
/// persistence rho: f = 1 - (1-q)(rho + (1-rho)(1-q)).
double block_rate_for_window_frequency(double f, double rho);

struct SynthGame {
  GameStyle style;
  GameProfile profile;
  std::vector<TimestepRecord> records;
};

std::vector<SynthGame> generate_logs(const SynthConfig& config, const ActionCatalog& catalog = default_catalog());

/// row = normalize(B b + u_g + noise): B has unit-norm Gaussian columns, u_g
/// lies in a shared style subspace with norm sigma_game, noise has per-entry
/// deviation sigma_noise / sqrt(dim).
EmbeddingTable generate_foundation_embeddings(const std::vector<WindowSample>& windows, const SynthConfig& config,
                                              const ActionCatalog& catalog = default_catalog());

/// Per-action window rates typical of a competitive tactical shooter.
std::vector<std::pair<std::string, double>> csgo_like_action_rates();

}  // namespace behave
