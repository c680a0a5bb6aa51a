// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <vector>

#include "behave/dataset.hpp"

namespace behave::fixture {

/// 48-frame free-form log: Reload pressed at frame 10, W held 2..6, crouch via
/// its L.Ctrl alias at 5, a rightward pan at 20..22, fire at 33..34, jump at
/// 40, a '2' (Change Gun) press at 44, one sub-threshold mouse jitter.
std::string log48_csv();
GameProfile log48_profile();

/// The 4-point two-cluster silhouette fixture, rows of (label, x, y).
struct LabelledPoint {
  int label;
  double x, y;
};
std::vector<LabelledPoint> four_points();

}  // namespace behave::fixture
