// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#include "fixtures.hpp"

#include <sstream>

namespace behave::fixture {

std::string log48_csv() {
  std::ostringstream out;
  out << "game,session,frame,ts_ms,mouse_x,mouse_y,w,lctrl,r,space,left_click,2\n";
  int x = 500;
  for (int f = 0; f < 48; ++f) {
    if (f >= 20 && f <= 22) x += 30;  // pan right
    if (f == 30) x += 7;              // below threshold
    const int w = f >= 2 && f <= 6;
    const int ctrl = f == 5;
    const int r = f == 10;
    const int space = f == 40;
    const int fire = f == 33 || f == 34;
    const int gun2 = f == 44;
    out << "fixture,s1," << f << ',' << (f * 1000 + 8) / 16 << ',' << x << ",400," << w << ',' << ctrl << ','
        << r << ',' << space << ',' << fire << ',' << gun2 << '\n';
  }
  return out.str();
}

GameProfile log48_profile() {
  GameProfile p;
  p.game_id = "fixture";
  p.mouse_mode = MouseMode::FreeForm;
  p.delta_threshold_px = 20;
  return p;
}

std::vector<LabelledPoint> four_points() {
  return {{0, 0.0, 0.0}, {0, 0.0, 1.0}, {1, 10.0, 0.0}, {1, 10.0, 1.0}};
}

}  // namespace behave::fixture
