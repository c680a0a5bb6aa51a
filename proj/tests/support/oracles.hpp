// Copyright 2026 The behave Authors
// SPDX-License-Identifier: Apache-2.0

// Independent reference implementations used as test oracles. They follow the
// definitions directly and favour obviousness over speed.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "behave/catalog.hpp"
#include "behave/dataset.hpp"
#include "behave/mlp.hpp"

namespace behave::oracle {

/// O(n^2) silhouette straight from the per-point formula.
double silhouette(const std::vector<std::vector<double>>& points, const std::vector<int>& labels);

struct ReferenceWindow {
  std::int64_t start_frame = 0;
  std::vector<std::uint8_t> bits;
  std::string caption;
  bool panning = false, navigation = false, weapon = false;
};

/// Reference preprocessing of one contiguous single-game segment.
std::vector<ReferenceWindow> preprocess(const std::vector<TimestepRecord>& records, const GameProfile& profile,
                                        const ActionCatalog& catalog, int window = 16, int stride = 8);

/// Per-frame label of one action, by scanning every earlier input frame.
std::vector<std::uint8_t> propagated(const std::vector<std::uint8_t>& raw, int delay, int length);

/// Loss used by the gradient check: scalar function of the projector output.
enum class CheckLoss { Cosine, Mse, Preference };

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::size_t params = 0;
};

/// Central differences (step h) of the alignment loss on one or two inputs
/// versus BasicProjector<double>::backward.
GradCheckResult gradient_check(const BasicProjector<double>& projector, std::span<const double> x,
                               std::span<const double> x_other, std::span<const double> caption, CheckLoss loss,
                               double margin, double h = 1e-5);

/// Relative error floor: |a-b| / max(|a|, |b|, kGradFloor).
inline constexpr double kGradFloor = 1e-6;

}  // namespace behave::oracle
