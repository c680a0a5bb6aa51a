// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "behave/error.hpp"
#include "behave/synth.hpp"

namespace behave {
namespace {

std::vector<WindowSample> windows_of(const SynthGame& g) { return run_pipeline(g.records, g.profile, default_catalog()); }

TEST(BlockRate, InvertsWindowFrequency) {
  for (double rho : {0.0, 0.5, 0.7, 0.9})
    for (double f : {0.05, 0.3, 0.6, 0.85, 0.99}) {
      const double q = block_rate_for_window_frequency(f, rho);
      EXPECT_NEAR(1.0 - (1.0 - q) * (rho + (1.0 - rho) * (1.0 - q)), f, 1e-9) << f << " " << rho;
    }
}

TEST(GenerateLogs, NavigationFrequencyTracksTarget) {
  SynthConfig c;
  c.n_games = 2;
  c.frames_per_game = 16008;  // 2000 windows
  c.games = {GameStyle{"nav", MouseMode::FreeForm, 1.0, 0.5, 0.85, 0.4, {}},
             GameStyle{"other", MouseMode::AutoCenter, 1.5, 0.3, 0.4, 0.6, {}}};
  const auto games = generate_logs(c);
  const auto freq = category_frequencies(windows_of(games[0]));
  ASSERT_EQ(freq.size(), 1u);
  EXPECT_GE(freq[0].windows, 2000u);
  EXPECT_GE(freq[0].navigation, 0.80);
  EXPECT_LE(freq[0].navigation, 0.90);
  EXPECT_NEAR(freq[0].panning, 0.5, 0.05);
  EXPECT_NEAR(freq[0].weapon, 0.4, 0.05);
  const auto f2 = category_frequencies(windows_of(games[1]));
  EXPECT_NEAR(f2[0].panning, 0.3, 0.05);
  EXPECT_NEAR(f2[0].navigation, 0.4, 0.05);
  EXPECT_NEAR(f2[0].weapon, 0.6, 0.05);
}

TEST(GenerateLogs, DeterministicAndDistinctGames) {
  SynthConfig c;
  c.n_games = 2;
  c.frames_per_game = 500;
  c.seed = 9;
  const auto a = generate_logs(c), b = generate_logs(c);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_EQ(a[0].records, b[0].records);
  EXPECT_EQ(a[1].records, b[1].records);
  EXPECT_NE(a[0].profile.game_id, a[1].profile.game_id);
  c.seed = 10;
  EXPECT_NE(generate_logs(c)[0].records, a[0].records);
}

TEST(GenerateLogs, AutoCenterGamesReset) {
  SynthConfig c;
  c.n_games = 2;
  c.frames_per_game = 800;
  c.games = {GameStyle{"ac", MouseMode::AutoCenter, 1.0, 0.6, 0.5, 0.4, {}},
             GameStyle{"ff", MouseMode::FreeForm, 1.0, 0.6, 0.5, 0.4, {}}};
  const auto games = generate_logs(c);
  const auto& p = games[0].profile;
  EXPECT_EQ(p.mouse_mode, MouseMode::AutoCenter);
  std::size_t resets = 0;
  for (std::size_t i = 1; i < games[0].records.size(); ++i) {
    const auto& r = games[0].records[i];
    const auto& prev = games[0].records[i - 1];
    if (r.mouse_x == p.screen_center.x && r.mouse_y == p.screen_center.y &&
        (prev.mouse_x != r.mouse_x || prev.mouse_y != r.mouse_y))
      ++resets;
  }
  EXPECT_GT(resets, 0u);
  for (const auto& r : games[1].records) {
    EXPECT_GE(r.mouse_x, 0);
    EXPECT_LT(r.mouse_x, games[1].profile.screen_width);
  }
  // Sensitivity scales the pan threshold.
  c.games[0].sensitivity = 2.0;
  EXPECT_GT(generate_logs(c)[0].profile.delta_threshold_px, p.delta_threshold_px);
}

TEST(GenerateLogs, CsgoLikeRatesFollowActions) {
  SynthConfig c;
  c.n_games = 2;
  c.frames_per_game = 8000;
  GameStyle s{"csgo_like", MouseMode::AutoCenter, 1.0, 0, 0, 0, csgo_like_action_rates()};
  c.games = {s, GameStyle{"x", MouseMode::FreeForm, 1.0, 0.5, 0.5, 0.5, {}}};
  const auto w = windows_of(generate_logs(c)[0]);
  std::vector<double> freq(default_catalog().size(), 0.0);
  for (const auto& x : w)
    for (std::size_t a = 0; a < freq.size(); ++a) freq[a] += x.actions[a];
  for (const auto& [id, rate] : csgo_like_action_rates()) {
    const double f = freq[*default_catalog().find_id(id)] / static_cast<double>(w.size());
    EXPECT_NEAR(f, rate, 0.06) << id;
  }
  EXPECT_EQ(freq[*default_catalog().find_id("right_click")], 0.0);
}

TEST(FoundationEmbeddings, NoGapNoNoiseDependsOnlyOnActions) {
  SynthConfig c;
  c.n_games = 2;
  c.frames_per_game = 600;
  c.sigma_game = 0.0;
  c.sigma_noise = 0.0;
  c.sigma_scene = 0.0;
  std::vector<WindowSample> all;
  for (const auto& g : generate_logs(c)) {
    const auto w = windows_of(g);
    all.insert(all.end(), w.begin(), w.end());
  }
  const auto t = generate_foundation_embeddings(all, c);
  ASSERT_EQ(t.rows(), all.size());
  EXPECT_EQ(t.ids.front(), all.front().sample_id);
  std::size_t cross_game_matches = 0;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j)
      if (all[i].actions == all[j].actions) {
        ASSERT_TRUE(std::equal(t.row(i).begin(), t.row(i).end(), t.row(j).begin()));
        cross_game_matches += all[i].game_id != all[j].game_id;
      }
  EXPECT_GT(cross_game_matches, 0u);
}

TEST(FoundationEmbeddings, UnitRowsAndGameOffsets) {
  SynthConfig c;
  c.n_games = 3;
  c.frames_per_game = 400;
  std::vector<WindowSample> all;
  const auto games = generate_logs(c);
  for (const auto& g : games) {
    const auto w = windows_of(g);
    all.insert(all.end(), w.begin(), w.end());
  }
  const auto t = generate_foundation_embeddings(all, c);
  EXPECT_EQ(t, generate_foundation_embeddings(all, c));
  for (std::size_t i = 0; i < t.rows(); ++i) {
    double n = 0;
    for (float v : t.row(i)) n += double(v) * v;
    EXPECT_NEAR(n, 1.0, 1e-5);
  }
  auto bad = all;
  bad[0].game_id = "nowhere";
  try {
    generate_foundation_embeddings(bad, c);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnknownGame);
  }
}

TEST(SynthConfig, Validation) {
  SynthConfig c;
  EXPECT_NO_THROW(c.validate());
  c.n_games = 1;
  EXPECT_THROW(c.validate(), Error);
  c.n_games = 2;
  c.sigma_noise = -1;
  EXPECT_THROW(c.validate(), Error);
  c.sigma_noise = 0.5;
  c.games = {GameStyle{"a", MouseMode::FreeForm, 1.0, 1.5, 0.5, 0.5, {}}, GameStyle{"b", MouseMode::FreeForm, 1.0, 0.5, 0.5, 0.5, {}}};
  EXPECT_THROW(c.validate(), Error);
}

}  // namespace
}  // namespace behave
